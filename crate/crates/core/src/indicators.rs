//! Power means and the p-inconsistency indicator family `Kii_{n,p}`.
//!
//! `Kii_{n,p}(A) = 1 - exp(-M_p(d))`, where `d` collects the triad defects
//! `|ln a_ij + ln a_jk - ln a_ik|` over all `C(n,3)` triads and `M_p` is the
//! power mean with exponent `p`. `p = ∞` is Koczkodaj's index (maximum
//! defect); `p = 1` the arithmetic mean, `p = 2` the quadratic mean and
//! `p = -1` the harmonic mean.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{triads_unchecked, AdditivePCMatrix, MultiplicativePCMatrix};

/// Defects below this count as exactly zero for negative exponents.
pub const DELTA_ZERO: f64 = 1e-12;

/// Exponent of the power mean: a finite nonzero real, or `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p == 0.0 {
            return Err(Error::InvalidExponent("p = 0 is excluded".into()));
        }
        if p.is_nan() {
            return Err(Error::InvalidExponent("p is NaN".into()));
        }
        if p == f64::INFINITY {
            return Ok(PExponent::Infinity);
        }
        if !p.is_finite() {
            return Err(Error::InvalidExponent("p = -inf is not supported".into()));
        }
        Ok(PExponent::Finite(p))
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, PExponent::Finite(p) if *p < 0.0)
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "∞" => return Ok(PExponent::Infinity),
            _ => {}
        }
        let p: f64 = if let Some((num, den)) = t.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| bad_exponent(s))?;
            let den: f64 = den.trim().parse().map_err(|_| bad_exponent(s))?;
            num / den
        } else {
            t.parse().map_err(|_| bad_exponent(s))?
        };
        PExponent::finite(p)
    }
}

fn bad_exponent(s: &str) -> Error {
    Error::InvalidExponent(format!("cannot parse {s:?}, expected a number or `inf`"))
}

/// Power mean `((1/N) Σ x_i^p)^(1/p)`, or `max x_i` for `p = ∞`.
///
/// Falls back to rescaling by the max (or min for `p < 0`) when `x^p`
/// overflows or underflows.
pub fn p_average(xs: &[f64], p: PExponent) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = xs.iter().position(|&x| x < 0.0 || x.is_nan()) {
        return Err(Error::NegativeValue { index });
    }
    let max = xs.iter().copied().fold(0.0, f64::max);
    let p = match p {
        PExponent::Infinity => return Ok(max),
        PExponent::Finite(p) => p,
    };
    let len = xs.len() as f64;
    if p < 0.0 {
        if let Some(index) = xs.iter().position(|&x| x < DELTA_ZERO) {
            return Err(Error::ZeroWithNegativeExponent { index });
        }
    }
    if max == 0.0 {
        return Ok(0.0);
    }
    let s: f64 = xs.iter().map(|x| x.powf(p)).sum();
    let direct = (s / len).powf(1.0 / p);
    if s.is_finite() && s > 0.0 && direct.is_finite() && direct > 0.0 {
        return Ok(direct);
    }
    // x^p overflowed or underflowed: rescale by the dominant term
    let pivot = if p < 0.0 {
        xs.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        max
    };
    let s: f64 = xs.iter().map(|x| (x / pivot).powf(p)).sum();
    Ok(pivot * (s / len).powf(1.0 / p))
}

/// Koczkodaj's index of the triad `(x, y, z) = (a_ij, a_ik, a_jk)`,
/// as `1 - exp(-|ln(y / xz)|)`.
pub fn kii3(x: f64, y: f64, z: f64) -> f64 {
    let d = (y.ln() - x.ln() - z.ln()).abs();
    1.0 - (-d).exp()
}

/// `1 - min(y/xz, xz/y)`; same value as [`kii3`] computed from raw ratios.
pub fn kii3_ratio_form(x: f64, y: f64, z: f64) -> f64 {
    let r = y / (x * z);
    1.0 - r.min(1.0 / r)
}

pub(crate) fn indicator_from_mean(m: f64) -> f64 {
    1.0 - (-m).exp()
}

/// `Kii_{n,p}` on an additive matrix.
pub fn kii_additive(b: &AdditivePCMatrix, p: PExponent) -> Result<f64> {
    let defects = b.triad_defects();
    let m = p_average(&defects, p).map_err(|e| match e {
        Error::ZeroWithNegativeExponent { index } => Error::IndicatorUndefined {
            p: p.to_string(),
            triad: triads_unchecked(b.order()).nth(index).expect("triad index"),
        },
        other => other,
    })?;
    Ok(indicator_from_mean(m))
}

/// `Kii_{n,p}` on a multiplicative matrix. Defects are computed in log space.
pub fn kii(m: &MultiplicativePCMatrix, p: PExponent) -> Result<f64> {
    kii_additive(&m.to_additive(), p)
}
