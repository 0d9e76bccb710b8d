//! Inconsistency reduction for pairwise comparison (PC) matrices.
//!
//! - [`matrix`]: multiplicative and additive PC matrices, triads, weights.
//! - [`indicators`]: power means and the `Kii_{n,p}` indicator family.
//! - [`gradients`]: instant (analytic) and difference priority vectors.
//! - [`descent`]: fixed-step descent schemes with full iteration traces.
//! - [`io`]: matrix and trace file formats.
//! - [`repro`]: the built-in experiment suite behind `pcgrad repro`.
//! - [`cli`]: the `pcgrad` command line.

pub mod cli;
pub mod descent;
pub mod error;
pub mod gradients;
pub mod indicators;
pub mod io;
pub mod matrix;
pub mod repro;

pub use descent::{
    run, run_additive, DescentConfig, DescentResult, GradientKind, Scheme, StopReason,
};
pub use error::{Entry, Error, Result};
pub use gradients::DirectionVector;
pub use indicators::{kii, kii_additive, PExponent};
pub use matrix::{AdditivePCMatrix, MultiplicativePCMatrix, PriorityVector, TriadIndex};
