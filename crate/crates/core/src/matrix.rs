//! Pairwise comparison matrices in multiplicative and additive form.
//!
//! Both forms store only the strict upper triangle, in row-major order:
//! `(1,2), (1,3), …, (1,n), (2,3), …, (n-1,n)`. The diagonal and the lower
//! triangle are implied (`a_ii = 1`, `a_ji = 1/a_ij`, resp. `b_ii = 0`,
//! `b_ji = -b_ij`), so no value can ever break reciprocity. All indices in
//! this module are 1-based, matching the usual matrix notation.

use std::fmt;

use crate::error::{Entry, Error, Result};

/// Relative tolerance for reciprocity and diagonal checks on full-grid input.
pub const RECIPROCITY_TOL: f64 = 1e-9;

/// Number of strict upper-triangle entries of an `n × n` matrix.
pub fn upper_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of `(i, j)` (1-based, `i < j`) in the row-major upper triangle.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

/// Inverse of [`upper_index`].
pub fn upper_entry(n: usize, idx: usize) -> Entry {
    let mut rest = idx;
    for i in 1..n {
        let row = n - i;
        if rest < row {
            return Entry(i, i + 1 + rest);
        }
        rest -= row;
    }
    panic!("upper index {idx} out of range for order {n}");
}

/// All upper-triangle labels of an order-`n` matrix, in storage order.
pub fn upper_entries(n: usize) -> impl Iterator<Item = Entry> {
    (1..n).flat_map(move |i| (i + 1..=n).map(move |j| Entry(i, j)))
}

fn check_order(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::OrderTooSmall(n));
    }
    Ok(())
}

fn check_len(n: usize, got: usize) -> Result<()> {
    let expected = upper_len(n);
    if got != expected {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn check_square(grid: &[Vec<f64>]) -> Result<usize> {
    let n = grid.len();
    check_order(n)?;
    for row in grid {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    Ok(n)
}

/// Index triple `i < j < k` (1-based) selecting a 3×3 principal submatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriadIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl TriadIndex {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        debug_assert!(1 <= i && i < j && j < k);
        TriadIndex { i, j, k }
    }

    /// Storage positions of the `(i,j)`, `(j,k)` and `(i,k)` entries.
    pub fn slots(&self, n: usize) -> (usize, usize, usize) {
        (
            upper_index(n, self.i, self.j),
            upper_index(n, self.j, self.k),
            upper_index(n, self.i, self.k),
        )
    }
}

impl fmt::Display for TriadIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

/// All `C(n,3)` triads in lexicographic order.
pub fn enumerate_triads(n: usize) -> Result<Vec<TriadIndex>> {
    check_order(n)?;
    let mut out = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                out.push(TriadIndex { i, j, k });
            }
        }
    }
    Ok(out)
}

/// Reciprocal positive matrix `A = (a_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativePCMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl MultiplicativePCMatrix {
    pub fn from_upper(n: usize, upper: Vec<f64>) -> Result<Self> {
        check_order(n)?;
        check_len(n, upper.len())?;
        for (e, &a) in upper_entries(n).zip(&upper) {
            if !a.is_finite() {
                return Err(Error::NonFiniteEntry(e));
            }
            if a <= 0.0 {
                return Err(Error::NonPositiveEntry(e));
            }
        }
        Ok(MultiplicativePCMatrix { n, upper })
    }

    /// Validates a full `n × n` grid and keeps its upper triangle.
    ///
    /// The lower triangle is only checked for reciprocity, never averaged in.
    pub fn from_grid(grid: &[Vec<f64>]) -> Result<Self> {
        let n = check_square(grid)?;
        for (r, row) in grid.iter().enumerate() {
            for (c, &a) in row.iter().enumerate() {
                if !a.is_finite() {
                    return Err(Error::NonFiniteEntry(Entry(r + 1, c + 1)));
                }
                if a <= 0.0 {
                    return Err(Error::NonPositiveEntry(Entry(r + 1, c + 1)));
                }
            }
        }
        for (i, row) in grid.iter().enumerate() {
            if (row[i] - 1.0).abs() > RECIPROCITY_TOL {
                return Err(Error::BadDiagonal(i + 1));
            }
        }
        let mut upper = Vec::with_capacity(upper_len(n));
        #[allow(clippy::needless_range_loop)] // reads both grid[i][j] and grid[j][i]
        for i in 0..n {
            for j in i + 1..n {
                let residual = grid[i][j] * grid[j][i] - 1.0;
                if residual.abs() > RECIPROCITY_TOL {
                    return Err(Error::ReciprocityViolation {
                        entry: Entry(i + 1, j + 1),
                        residual,
                    });
                }
                upper.push(grid[i][j]);
            }
        }
        Ok(MultiplicativePCMatrix { n, upper })
    }

    /// Consistent matrix `a_ij = w_i / w_j`.
    pub fn from_weights(w: &PriorityVector) -> Result<Self> {
        let n = w.len();
        check_order(n)?;
        let upper = upper_entries(n)
            .map(|Entry(i, j)| w.0[i - 1] / w.0[j - 1])
            .collect();
        Ok(MultiplicativePCMatrix { n, upper })
    }

    /// Caller guarantees order, length and positivity.
    pub(crate) fn new_unchecked(n: usize, upper: Vec<f64>) -> Self {
        debug_assert!(n >= 3 && upper.len() == upper_len(n));
        debug_assert!(upper.iter().all(|&a| a > 0.0));
        MultiplicativePCMatrix { n, upper }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn into_upper(self) -> Vec<f64> {
        self.upper
    }

    /// Full-matrix entry `a_ij`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Less => self.upper[upper_index(self.n, i, j)],
            std::cmp::Ordering::Greater => 1.0 / self.upper[upper_index(self.n, j, i)],
        }
    }

    pub fn to_grid(&self) -> Vec<Vec<f64>> {
        (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn to_additive(&self) -> AdditivePCMatrix {
        AdditivePCMatrix {
            n: self.n,
            upper: self.upper.iter().map(|a| a.ln()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        MultiplicativePCMatrix {
            n: self.n,
            upper: self.upper.iter().map(|a| 1.0 / a).collect(),
        }
    }

    /// Simultaneous row/column permutation: new index `r` takes old index `perm[r]`
    /// (both 0-based).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let upper = upper_entries(self.n)
            .map(|Entry(i, j)| self.get(perm[i - 1] + 1, perm[j - 1] + 1))
            .collect();
        MultiplicativePCMatrix { n: self.n, upper }
    }

    /// True iff every triad defect is at most `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let b = self.to_additive();
        triads_unchecked(self.n).all(|t| b.triad_defect(t) <= tol)
    }

    /// Geometric-mean priority vector, normalized to unit sum.
    ///
    /// Row means are taken in log space so large orders do not overflow.
    pub fn gmm_priority_vector(&self) -> PriorityVector {
        let b = self.to_additive();
        let n = self.n as f64;
        let raw: Vec<f64> = (1..=self.n)
            .map(|i| ((1..=self.n).map(|j| b.get(i, j)).sum::<f64>() / n).exp())
            .collect();
        PriorityVector(raw).normalized()
    }
}

/// Antisymmetric real matrix `B = (b_ij)`, the entrywise natural log of a
/// multiplicative matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditivePCMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl AdditivePCMatrix {
    pub fn from_upper(n: usize, upper: Vec<f64>) -> Result<Self> {
        check_order(n)?;
        check_len(n, upper.len())?;
        for (e, b) in upper_entries(n).zip(&upper) {
            if !b.is_finite() {
                return Err(Error::NonFiniteEntry(e));
            }
        }
        Ok(AdditivePCMatrix { n, upper })
    }

    /// Validates a full grid: zero diagonal and `b_ji = -b_ij` within
    /// [`RECIPROCITY_TOL`] (relative to `max(1, |b_ij|)`).
    pub fn from_grid(grid: &[Vec<f64>]) -> Result<Self> {
        let n = check_square(grid)?;
        for (r, row) in grid.iter().enumerate() {
            for (c, b) in row.iter().enumerate() {
                if !b.is_finite() {
                    return Err(Error::NonFiniteEntry(Entry(r + 1, c + 1)));
                }
            }
        }
        for (i, row) in grid.iter().enumerate() {
            if row[i].abs() > RECIPROCITY_TOL {
                return Err(Error::BadDiagonal(i + 1));
            }
        }
        let mut upper = Vec::with_capacity(upper_len(n));
        #[allow(clippy::needless_range_loop)] // reads both grid[i][j] and grid[j][i]
        for i in 0..n {
            for j in i + 1..n {
                let residual = grid[i][j] + grid[j][i];
                if residual.abs() > RECIPROCITY_TOL * grid[i][j].abs().max(1.0) {
                    return Err(Error::AntisymmetryViolation {
                        entry: Entry(i + 1, j + 1),
                        residual,
                    });
                }
                upper.push(grid[i][j]);
            }
        }
        Ok(AdditivePCMatrix { n, upper })
    }

    pub(crate) fn new_unchecked(n: usize, upper: Vec<f64>) -> Self {
        debug_assert!(n >= 3 && upper.len() == upper_len(n));
        AdditivePCMatrix { n, upper }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn into_upper(self) -> Vec<f64> {
        self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.upper[upper_index(self.n, i, j)],
            std::cmp::Ordering::Greater => -self.upper[upper_index(self.n, j, i)],
        }
    }

    pub fn to_grid(&self) -> Vec<Vec<f64>> {
        (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn to_multiplicative(&self) -> MultiplicativePCMatrix {
        MultiplicativePCMatrix {
            n: self.n,
            upper: self.upper.iter().map(|b| b.exp()).collect(),
        }
    }

    /// Signed cyclic sum `b_ij + b_jk - b_ik`.
    pub fn triad_residual(&self, t: TriadIndex) -> f64 {
        let (ij, jk, ik) = t.slots(self.n);
        self.upper[ij] + self.upper[jk] - self.upper[ik]
    }

    /// `|b_ij + b_jk - b_ik|`, zero iff the triad is consistent.
    pub fn triad_defect(&self, t: TriadIndex) -> f64 {
        self.triad_residual(t).abs()
    }

    /// Defects of all triads, in [`enumerate_triads`] order.
    pub fn triad_defects(&self) -> Vec<f64> {
        triads_unchecked(self.n)
            .map(|t| self.triad_defect(t))
            .collect()
    }
}

/// Triads of an already-validated order.
pub(crate) fn triads_unchecked(n: usize) -> impl Iterator<Item = TriadIndex> {
    (1..=n).flat_map(move |i| {
        (i + 1..=n).flat_map(move |j| (j + 1..=n).map(move |k| TriadIndex { i, j, k }))
    })
}

/// Positive weights `w`, meaningful up to a common positive scale.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityVector(Vec<f64>);

impl PriorityVector {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if let Some(i) = w.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::NonPositiveWeight(i + 1));
        }
        Ok(PriorityVector(w))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    /// Canonical representative with `Σ w_i = 1`.
    pub fn normalized(&self) -> Self {
        let s: f64 = self.0.iter().sum();
        PriorityVector(self.0.iter().map(|w| w / s).collect())
    }
}
