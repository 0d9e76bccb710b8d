//! `pcgrad` command line.
//!
//! Exit codes: 0 on success, 1 for unreadable input or bad flags, 2 when the
//! requested quantity is undefined at the input (or a descent stopped on an
//! error).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::descent::{run, run_additive, DescentConfig, GradientKind, Scheme};
use crate::error::Error;
use crate::gradients::{
    difference_gradient, difference_gradient_additive, instant_pv_np, instant_pv_np_additive,
};
use crate::indicators::{kii, kii_additive, PExponent};
use crate::io::{entry_columns, parse_matrix, write_trace, MatrixData};
use crate::repro::{published_runs, run_suite, summary_csv, summary_table};

#[derive(Debug, Parser)]
#[command(
    name = "pcgrad",
    version,
    about = "Inconsistency reduction for pairwise comparison matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the p-inconsistency indicator of a matrix.
    Evaluate {
        input: PathBuf,
        /// Exponent: a nonzero decimal, a fraction like 1/2, or `inf`.
        #[arg(long, allow_negative_numbers = true)]
        p: PExponent,
    },
    /// Print the gradient of the indicator, one upper-triangle entry per line.
    ///
    /// `analytic` prints the descent direction (instant priority vector);
    /// `difference` prints the forward-difference gradient.
    Gradient {
        input: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        p: PExponent,
        #[arg(long, default_value = "analytic")]
        kind: GradientKind,
        #[arg(long, default_value_t = 1e-6)]
        l: f64,
    },
    /// Run the descent and print the best iterate.
    Reduce {
        input: PathBuf,
        #[arg(long, default_value = "multiplicative")]
        scheme: Scheme,
        #[arg(long, default_value = "difference")]
        gradient: GradientKind,
        #[arg(long, allow_negative_numbers = true, default_value = "1")]
        p: PExponent,
        #[arg(long, default_value_t = DescentConfig::default().h)]
        h: f64,
        #[arg(long, default_value_t = DescentConfig::default().l)]
        l: f64,
        #[arg(long, default_value_t = DescentConfig::default().eps)]
        eps: f64,
        #[arg(long, default_value_t = DescentConfig::default().max_iter)]
        max_iter: usize,
        #[arg(long, default_value_t = DescentConfig::default().stall_window)]
        stall_window: usize,
        /// Write the full iteration trace here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rerun the built-in experiment suite and compare with the published tables.
    Repro {
        #[arg(long, default_value = "repro-out")]
        out_dir: PathBuf,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn undefined(e: Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn read_matrix(path: &Path) -> Result<MatrixData, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Runs the CLI with `args` (including the program name) and returns the
/// exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Evaluate { input, p } => {
            let data = read_matrix(&input)?;
            let value = match &data {
                MatrixData::Multiplicative(m) => kii(m, p),
                MatrixData::Additive(b) => kii_additive(b, p),
            }
            .map_err(Failure::undefined)?;
            writeln!(out, "{value:.6}").ok();
            Ok(0)
        }
        Command::Gradient { input, p, kind, l } => {
            let data = read_matrix(&input)?;
            if !(l > 0.0 && l.is_finite()) {
                return Err(Failure::usage(format!("--l must be positive, got {l}")));
            }
            let v = match (&data, kind) {
                (MatrixData::Multiplicative(m), GradientKind::Analytic) => instant_pv_np(m, p),
                (MatrixData::Multiplicative(m), GradientKind::Difference) => {
                    difference_gradient(m, p, l)
                }
                (MatrixData::Additive(b), GradientKind::Analytic) => instant_pv_np_additive(b, p),
                (MatrixData::Additive(b), GradientKind::Difference) => {
                    difference_gradient_additive(b, p, l)
                }
            }
            .map_err(Failure::undefined)?;
            for (e, c) in v.entries() {
                writeln!(out, "{e} {c:.6}").ok();
            }
            Ok(0)
        }
        Command::Reduce {
            input,
            scheme,
            gradient,
            p,
            h,
            l,
            eps,
            max_iter,
            stall_window,
            out: trace_path,
        } => {
            let data = read_matrix(&input)?;
            let cfg = DescentConfig {
                scheme,
                gradient,
                p,
                h,
                l,
                eps,
                max_iter,
                stall_window,
            };
            let result = match &data {
                MatrixData::Multiplicative(m) => run(m, &cfg),
                MatrixData::Additive(b) => run_additive(b, &cfg),
            }
            .map_err(|e| match e {
                Error::InvalidConfig(_) => Failure::usage(e.to_string()),
                other => Failure::undefined(other),
            })?;
            if let Some(path) = &trace_path {
                fs::write(path, write_trace(&result))
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            }
            writeln!(out, "stop_reason: {}", result.stop_reason).ok();
            writeln!(out, "best_iter: {}", result.best_iter).ok();
            writeln!(out, "best_indicator: {:.6}", result.best_indicator).ok();
            let labels = entry_columns(data.order(), scheme);
            for (label, v) in labels.iter().zip(result.best_upper()) {
                writeln!(out, "{label}: {v:.6}").ok();
            }
            if !result.trace.clamps.is_empty() {
                writeln!(out, "positivity clamps: {}", result.trace.clamps.len()).ok();
            }
            if let Some(e) = &result.stop_error {
                writeln!(out, "stopped by: {e}").ok();
            }
            Ok(if result.stop_reason.is_error() { 2 } else { 0 })
        }
        Command::Repro { out_dir } => {
            let io_err = |e: std::io::Error| Failure::usage(format!("{}: {e}", out_dir.display()));
            fs::create_dir_all(&out_dir).map_err(io_err)?;
            let runs = published_runs();
            let outcomes = run_suite(&runs);
            for (idx, o) in outcomes.iter().enumerate() {
                if let Ok(res) = &o.result {
                    let name = format!("{:02}_{}.csv", idx + 1, o.run.label());
                    fs::write(out_dir.join(name), write_trace(res)).map_err(io_err)?;
                }
            }
            fs::write(out_dir.join("summary.csv"), summary_csv(&outcomes)).map_err(io_err)?;
            write!(out, "{}", summary_table(&outcomes)).ok();
            Ok(0)
        }
    }
}
