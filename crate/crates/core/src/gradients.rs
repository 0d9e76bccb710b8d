//! Priority directions: how the upper-triangle entries should move to lower
//! the indicator.
//!
//! Every direction returned here is a descent direction, `-∇ Kii`. The
//! *instant* priority vectors are analytic gradients; the *difference*
//! priority vectors replace each partial derivative by the forward quotient
//! `(Kii(A') - Kii(A)) / l`, where `A'` differs from `A` in a single upper
//! entry raised by `l`.

use crate::error::{Entry, Error, Result};
use crate::indicators::{kii, kii_additive, p_average, PExponent, DELTA_ZERO};
use crate::matrix::{
    triads_unchecked, upper_entries, upper_index, upper_len, AdditivePCMatrix,
    MultiplicativePCMatrix,
};

/// Smallest triad defect accepted by the analytic gradient when `p < 1`.
pub const DELTA_GRAD: f64 = 1e-9;

/// Vector indexed like the upper triangle of an order-`n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVector {
    n: usize,
    components: Vec<f64>,
}

impl DirectionVector {
    pub fn new(n: usize, components: Vec<f64>) -> Result<Self> {
        if components.len() != upper_len(n) {
            return Err(Error::DimensionMismatch {
                expected: upper_len(n),
                got: components.len(),
            });
        }
        Ok(DirectionVector { n, components })
    }

    pub fn zeros(n: usize) -> Self {
        DirectionVector {
            n,
            components: vec![0.0; upper_len(n)],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.components[upper_index(self.n, i, j)]
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn negated(&self) -> Self {
        DirectionVector {
            n: self.n,
            components: self.components.iter().map(|v| -v).collect(),
        }
    }

    /// `(label, component)` pairs in storage order.
    pub fn entries(&self) -> impl Iterator<Item = (Entry, f64)> + '_ {
        upper_entries(self.n).zip(self.components.iter().copied())
    }
}

/// Descent direction of `Kii_3` at the multiplicative triad
/// `(x, y, z) = (a_12, a_13, a_23)`.
///
/// With `u = ln y - ln x - ln z`: `sign(u) e^{-|u|} (1/x, -1/y, 1/z)`.
pub fn instant_pv3_mult(x: f64, y: f64, z: f64) -> Result<DirectionVector> {
    let u = y.ln() - x.ln() - z.ln();
    if u.abs() < DELTA_ZERO {
        return Err(Error::OnConsistentLocus);
    }
    let c = u.signum() * (-u.abs()).exp();
    Ok(DirectionVector {
        n: 3,
        components: vec![c / x, -c / y, c / z],
    })
}

/// Descent direction of `1 - e^{-|a + c - b|}` at the additive triad
/// `(a, b, c) = (b_12, b_13, b_23)`.
pub fn instant_pv3_add(a: f64, b: f64, c: f64) -> Result<DirectionVector> {
    let u = a + c - b;
    if u.abs() < DELTA_ZERO {
        return Err(Error::OnConsistentLocus);
    }
    let k = u.signum() * (-u.abs()).exp();
    Ok(DirectionVector {
        n: 3,
        components: vec![-k, k, -k],
    })
}

/// `∇ Kii_{n,p}` with respect to the additive coordinates `b_ij`.
fn additive_gradient(b: &AdditivePCMatrix, p: PExponent) -> Result<Vec<f64>> {
    let n = b.order();
    let p = match p {
        PExponent::Finite(p) if p != 1.0 => p,
        other => return Err(Error::NonSmoothExponent(other.to_string())),
    };
    let triads: Vec<_> = triads_unchecked(n).collect();
    let residuals: Vec<f64> = triads.iter().map(|&t| b.triad_residual(t)).collect();
    let defects: Vec<f64> = residuals.iter().map(|r| r.abs()).collect();
    if defects.iter().all(|&d| d < DELTA_ZERO) {
        return Err(Error::OnConsistentLocus);
    }
    if p < 1.0 {
        if let Some(i) = defects.iter().position(|&d| d < DELTA_GRAD) {
            return Err(Error::DegenerateDefect(triads[i]));
        }
    }
    let mean = p_average(&defects, PExponent::Finite(p))?;
    // dKii/dd_t = e^{-m} (1/N) (d_t / m)^{p-1}
    let scale = (-mean).exp() / triads.len() as f64;
    let mut grad = vec![0.0; upper_len(n)];
    for ((t, r), d) in triads.iter().zip(&residuals).zip(&defects) {
        let c = scale * (d / mean).powf(p - 1.0) * r.signum();
        let (ij, jk, ik) = t.slots(n);
        grad[ij] += c;
        grad[jk] += c;
        grad[ik] -= c;
    }
    Ok(grad)
}

/// Instant priority vector `-∇ Kii_{n,p}` in the multiplicative coordinates.
///
/// On 3×3 matrices every exponent gives the same indicator as `p = 1`, so
/// this falls back to [`instant_pv3_mult`]. For larger orders `p = 1` and
/// `p = ∞` are rejected: those indicators are not differentiable there.
pub fn instant_pv_np(m: &MultiplicativePCMatrix, p: PExponent) -> Result<DirectionVector> {
    let n = m.order();
    let a = m.upper();
    if n == 3 {
        return instant_pv3_mult(a[0], a[1], a[2]);
    }
    let grad = additive_gradient(&m.to_additive(), p)?;
    let components = grad.iter().zip(a).map(|(g, a)| -g / a).collect();
    Ok(DirectionVector { n, components })
}

/// Instant priority vector in the additive coordinates.
pub fn instant_pv_np_additive(b: &AdditivePCMatrix, p: PExponent) -> Result<DirectionVector> {
    let n = b.order();
    if n == 3 {
        let u = b.upper();
        return instant_pv3_add(u[0], u[1], u[2]);
    }
    let grad = additive_gradient(b, p)?;
    Ok(DirectionVector {
        n,
        components: grad.iter().map(|g| -g).collect(),
    })
}

fn check_increment(l: f64) -> Result<()> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "difference increment must be positive, got {l}"
        )));
    }
    Ok(())
}

/// Forward-difference gradient: component `(i,j)` is
/// `(Kii(A with a_ij + l) - Kii(A)) / l`.
pub fn difference_gradient(
    m: &MultiplicativePCMatrix,
    p: PExponent,
    l: f64,
) -> Result<DirectionVector> {
    check_increment(l)?;
    let n = m.order();
    let base = kii(m, p)?;
    let mut components = Vec::with_capacity(upper_len(n));
    let mut upper = m.upper().to_vec();
    for idx in 0..upper.len() {
        let saved = upper[idx];
        upper[idx] = saved + l;
        let shifted = MultiplicativePCMatrix::new_unchecked(n, upper.clone());
        components.push((kii(&shifted, p)? - base) / l);
        upper[idx] = saved;
    }
    Ok(DirectionVector { n, components })
}

/// Difference priority vector: the negated [`difference_gradient`].
pub fn difference_priority_vector(
    m: &MultiplicativePCMatrix,
    p: PExponent,
    l: f64,
) -> Result<DirectionVector> {
    difference_gradient(m, p, l).map(|g| g.negated())
}

/// Forward-difference gradient in the additive coordinates (`b_ij + l`).
pub fn difference_gradient_additive(
    b: &AdditivePCMatrix,
    p: PExponent,
    l: f64,
) -> Result<DirectionVector> {
    check_increment(l)?;
    let n = b.order();
    let base = kii_additive(b, p)?;
    let mut components = Vec::with_capacity(upper_len(n));
    let mut upper = b.upper().to_vec();
    for idx in 0..upper.len() {
        let saved = upper[idx];
        upper[idx] = saved + l;
        let shifted = AdditivePCMatrix::new_unchecked(n, upper.clone());
        components.push((kii_additive(&shifted, p)? - base) / l);
        upper[idx] = saved;
    }
    Ok(DirectionVector { n, components })
}

pub fn difference_priority_vector_additive(
    b: &AdditivePCMatrix,
    p: PExponent,
    l: f64,
) -> Result<DirectionVector> {
    difference_gradient_additive(b, p, l).map(|g| g.negated())
}
