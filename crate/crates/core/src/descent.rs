//! Fixed-step consistencization.
//!
//! Starting from `A_0`, each iteration computes a priority direction `w_n`
//! at the current iterate and sets `A_{n+1} = A_n + h w_n`, either on the
//! multiplicative entries `a_ij` or on the additive entries `b_ij = ln a_ij`.
//! Every iterate is recorded; the result reports the iterate with the lowest
//! indicator value.

use std::fmt;
use std::str::FromStr;

use crate::error::{Entry, Error, Result};
use crate::gradients::{
    difference_priority_vector, difference_priority_vector_additive, instant_pv_np,
    instant_pv_np_additive, DirectionVector,
};
use crate::indicators::{kii, kii_additive, PExponent};
use crate::matrix::{upper_entry, AdditivePCMatrix, MultiplicativePCMatrix};

/// A running minimum must drop by more than this to count as progress.
pub const STALL_IMPROVEMENT: f64 = 1e-12;

/// Per-entry halvings tried before giving up on positivity.
pub const MAX_HALVINGS: u32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Multiplicative,
    Additive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientKind {
    Analytic,
    Difference,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Multiplicative => "multiplicative",
            Scheme::Additive => "additive",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "multiplicative" | "mult" | "m" => Ok(Scheme::Multiplicative),
            "additive" | "add" | "a" => Ok(Scheme::Additive),
            _ => Err(format!("unknown scheme {s:?}")),
        }
    }
}

impl fmt::Display for GradientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradientKind::Analytic => "analytic",
            GradientKind::Difference => "difference",
        })
    }
}

impl FromStr for GradientKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "analytic" => Ok(GradientKind::Analytic),
            "difference" => Ok(GradientKind::Difference),
            _ => Err(format!("unknown gradient kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentConfig {
    pub scheme: Scheme,
    pub gradient: GradientKind,
    pub p: PExponent,
    /// Step size.
    pub h: f64,
    /// Difference increment, used by [`GradientKind::Difference`].
    pub l: f64,
    /// Stop once the indicator drops below this value.
    pub eps: f64,
    pub max_iter: usize,
    /// Stop after this many iterations without progress of the running minimum.
    pub stall_window: usize,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            scheme: Scheme::Multiplicative,
            gradient: GradientKind::Difference,
            p: PExponent::Finite(1.0),
            h: 0.01,
            l: 0.001,
            eps: 1e-3,
            max_iter: 50_000,
            stall_window: 50,
        }
    }
}

impl DescentConfig {
    /// Checks the numeric fields, and that an analytic gradient exists for
    /// matrices of order `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("h", self.h)?;
        positive("l", self.l)?;
        positive("eps", self.eps)?;
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.stall_window == 0 {
            return Err(Error::InvalidConfig(
                "stall_window must be at least 1".into(),
            ));
        }
        if self.gradient == GradientKind::Analytic && n > 3 {
            match self.p {
                PExponent::Finite(p) if p != 1.0 => {}
                p => return Err(Error::NonSmoothExponent(p.to_string())),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub indicator: f64,
    /// Upper triangle in the scheme's own coordinates (`a_ij` or `b_ij`).
    pub upper: Vec<f64>,
    /// Norm of the direction taken from this iterate, if one was computed.
    pub direction_norm: Option<f64>,
}

/// A multiplicative step that had to be shortened to keep an entry positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampEvent {
    pub iter: usize,
    pub entry: Entry,
    pub halvings: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub clamps: Vec<ClampEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    Stalled,
    MaxIter,
    PositivityFailure,
    IndicatorUndefined,
}

impl StopReason {
    pub fn is_error(&self) -> bool {
        matches!(
            self,
            StopReason::PositivityFailure | StopReason::IndicatorUndefined
        )
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::Converged => "converged",
            StopReason::Stalled => "stalled",
            StopReason::MaxIter => "max_iter",
            StopReason::PositivityFailure => "positivity_failure",
            StopReason::IndicatorUndefined => "indicator_undefined",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentResult {
    pub scheme: Scheme,
    pub best_iter: usize,
    pub best_matrix: MultiplicativePCMatrix,
    pub best_indicator: f64,
    pub stop_reason: StopReason,
    /// Error that ended the run, for the error stop reasons.
    pub stop_error: Option<Error>,
    pub trace: IterationTrace,
}

impl DescentResult {
    pub fn best_record(&self) -> &IterationRecord {
        &self.trace.records[self.best_iter]
    }

    /// Best iterate in the scheme's own coordinates.
    pub fn best_upper(&self) -> &[f64] {
        &self.best_record().upper
    }
}

/// Entry in a single step that needed halving: `(storage index, halvings)`.
pub type Clamp = (usize, u32);

/// `a + h v` entrywise. An entry that would leave `(0, ∞)` gets its own step
/// halved until it stays positive.
pub fn step_multiplicative(
    m: &MultiplicativePCMatrix,
    v: &DirectionVector,
    h: f64,
) -> Result<(MultiplicativePCMatrix, Vec<Clamp>)> {
    let n = m.order();
    if v.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.order(),
        });
    }
    let mut clamps = Vec::new();
    let mut upper = Vec::with_capacity(m.upper().len());
    for (idx, (&a, &w)) in m.upper().iter().zip(v.components()).enumerate() {
        let mut step = h;
        let mut next = a + step * w;
        let mut halvings = 0;
        // also catches NaN
        while next <= 0.0 || next.is_nan() {
            if halvings == MAX_HALVINGS {
                return Err(Error::PositivityFailure(upper_entry(n, idx)));
            }
            step *= 0.5;
            halvings += 1;
            next = a + step * w;
        }
        if !next.is_finite() {
            return Err(Error::PositivityFailure(upper_entry(n, idx)));
        }
        if halvings > 0 {
            clamps.push((idx, halvings));
        }
        upper.push(next);
    }
    Ok((MultiplicativePCMatrix::new_unchecked(n, upper), clamps))
}

/// `b + h v` entrywise.
pub fn step_additive(b: &AdditivePCMatrix, v: &DirectionVector, h: f64) -> AdditivePCMatrix {
    assert_eq!(b.order(), v.order(), "direction order");
    let upper = b
        .upper()
        .iter()
        .zip(v.components())
        .map(|(x, w)| x + h * w)
        .collect();
    AdditivePCMatrix::new_unchecked(b.order(), upper)
}

enum State {
    Mult(MultiplicativePCMatrix),
    Add(AdditivePCMatrix),
}

impl State {
    fn indicator(&self, p: PExponent) -> Result<f64> {
        match self {
            State::Mult(m) => kii(m, p),
            State::Add(b) => kii_additive(b, p),
        }
    }

    fn direction(&self, cfg: &DescentConfig) -> Result<DirectionVector> {
        match (self, cfg.gradient) {
            (State::Mult(m), GradientKind::Analytic) => instant_pv_np(m, cfg.p),
            (State::Mult(m), GradientKind::Difference) => {
                difference_priority_vector(m, cfg.p, cfg.l)
            }
            (State::Add(b), GradientKind::Analytic) => instant_pv_np_additive(b, cfg.p),
            (State::Add(b), GradientKind::Difference) => {
                difference_priority_vector_additive(b, cfg.p, cfg.l)
            }
        }
    }

    fn upper(&self) -> &[f64] {
        match self {
            State::Mult(m) => m.upper(),
            State::Add(b) => b.upper(),
        }
    }
}

/// Runs the descent from `m0`.
///
/// Returns `Err` only for an invalid configuration or when the indicator is
/// undefined at `m0` itself. Failures during the run end it with the
/// matching [`StopReason`], and the best iterate so far is still reported.
pub fn run(m0: &MultiplicativePCMatrix, cfg: &DescentConfig) -> Result<DescentResult> {
    let state = match cfg.scheme {
        Scheme::Multiplicative => State::Mult(m0.clone()),
        Scheme::Additive => State::Add(m0.to_additive()),
    };
    run_from(state, cfg)
}

/// Same as [`run`], starting from an additive matrix.
pub fn run_additive(b0: &AdditivePCMatrix, cfg: &DescentConfig) -> Result<DescentResult> {
    let state = match cfg.scheme {
        Scheme::Multiplicative => State::Mult(b0.to_multiplicative()),
        Scheme::Additive => State::Add(b0.clone()),
    };
    run_from(state, cfg)
}

fn run_from(mut state: State, cfg: &DescentConfig) -> Result<DescentResult> {
    let n = match &state {
        State::Mult(m) => m.order(),
        State::Add(b) => b.order(),
    };
    cfg.validate(n)?;
    let first = state.indicator(cfg.p)?;

    let mut trace = IterationTrace::default();
    trace.records.push(IterationRecord {
        iter: 0,
        indicator: first,
        upper: state.upper().to_vec(),
        direction_norm: None,
    });
    let mut best_iter = 0;
    let mut best = first;
    // running minimum that resets the stall counter
    let mut progress_mark = first;
    let mut since_progress = 0;
    let mut stop_error = None;

    let stop_reason = if first < cfg.eps {
        StopReason::Converged
    } else {
        let mut reason = StopReason::MaxIter;
        for iter in 1..=cfg.max_iter {
            let dir = match state.direction(cfg) {
                Ok(d) => d,
                Err(e) => {
                    stop_error = Some(e);
                    reason = StopReason::IndicatorUndefined;
                    break;
                }
            };
            trace.records.last_mut().expect("record").direction_norm = Some(dir.norm());
            state = match &state {
                State::Mult(m) => match step_multiplicative(m, &dir, cfg.h) {
                    Ok((next, clamps)) => {
                        trace
                            .clamps
                            .extend(clamps.into_iter().map(|(idx, halvings)| ClampEvent {
                                iter,
                                entry: upper_entry(n, idx),
                                halvings,
                            }));
                        State::Mult(next)
                    }
                    Err(e) => {
                        stop_error = Some(e);
                        reason = StopReason::PositivityFailure;
                        break;
                    }
                },
                State::Add(b) => State::Add(step_additive(b, &dir, cfg.h)),
            };
            let value = match state.indicator(cfg.p) {
                Ok(v) => v,
                Err(e) => {
                    stop_error = Some(e);
                    reason = StopReason::IndicatorUndefined;
                    break;
                }
            };
            trace.records.push(IterationRecord {
                iter,
                indicator: value,
                upper: state.upper().to_vec(),
                direction_norm: None,
            });
            if value < best {
                best = value;
                best_iter = iter;
            }
            if value < progress_mark - STALL_IMPROVEMENT {
                progress_mark = value;
                since_progress = 0;
            } else {
                since_progress += 1;
            }
            if value < cfg.eps {
                reason = StopReason::Converged;
                break;
            }
            if since_progress >= cfg.stall_window {
                reason = StopReason::Stalled;
                break;
            }
        }
        reason
    };

    let best_upper = trace.records[best_iter].upper.clone();
    let best_matrix = match cfg.scheme {
        Scheme::Multiplicative => MultiplicativePCMatrix::new_unchecked(n, best_upper),
        Scheme::Additive => AdditivePCMatrix::new_unchecked(n, best_upper).to_multiplicative(),
    };
    Ok(DescentResult {
        scheme: cfg.scheme,
        best_iter,
        best_matrix,
        best_indicator: best,
        stop_reason,
        stop_error,
        trace,
    })
}
