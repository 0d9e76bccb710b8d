//! Built-in experiment suite: the sixteen published descent runs on the two
//! sample matrices, each paired with the reported best iteration and entries.
//!
//! All runs use forward-difference directions and otherwise default settings
//! from [`DescentConfig::default`].

use std::f64::consts::E;
use std::fmt::Write as _;
use std::thread;

use crate::descent::{run, DescentConfig, DescentResult, GradientKind, Scheme};
use crate::error::Error;
use crate::indicators::PExponent;
use crate::io::entry_columns;
use crate::matrix::{upper_index, MultiplicativePCMatrix};

/// `A` with upper triangle `(e^-2, e^3, e)`.
pub fn sample_triad_matrix() -> MultiplicativePCMatrix {
    MultiplicativePCMatrix::from_upper(3, vec![E.powi(-2), E.powi(3), E]).expect("valid")
}

/// The 4×4 extension of [`sample_triad_matrix`] with a fourth alternative
/// compared as equal to all others.
pub fn sample_square_matrix() -> MultiplicativePCMatrix {
    MultiplicativePCMatrix::from_upper(4, vec![E.powi(-2), E.powi(3), 1.0, E, 1.0, 1.0])
        .expect("valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublishedRun {
    /// Group label of the experiment, e.g. `"triad-mult"`.
    pub group: &'static str,
    pub order: usize,
    pub scheme: Scheme,
    pub p: PExponent,
    pub h: f64,
    pub l: f64,
    pub best_iter: usize,
    /// The reported count was exact rather than approximate.
    pub best_iter_exact: bool,
    /// Reported best entries as `(i, j, value)`, in the scheme's coordinates.
    pub entries: &'static [(usize, usize, f64)],
}

impl PublishedRun {
    pub fn start(&self) -> MultiplicativePCMatrix {
        match self.order {
            3 => sample_triad_matrix(),
            _ => sample_square_matrix(),
        }
    }

    pub fn config(&self) -> DescentConfig {
        DescentConfig {
            scheme: self.scheme,
            gradient: GradientKind::Difference,
            p: self.p,
            h: self.h,
            l: self.l,
            ..DescentConfig::default()
        }
    }

    pub fn label(&self) -> String {
        format!("{}_p{}_h{}_l{}", self.group, self.p, self.h, self.l)
    }
}

const fn run3(
    scheme: Scheme,
    h: f64,
    l: f64,
    best_iter: usize,
    entries: &'static [(usize, usize, f64)],
) -> PublishedRun {
    PublishedRun {
        group: match scheme {
            Scheme::Multiplicative => "triad-mult",
            Scheme::Additive => "triad-add",
        },
        order: 3,
        scheme,
        p: PExponent::Finite(1.0),
        h,
        l,
        best_iter,
        best_iter_exact: false,
        entries,
    }
}

const fn run4(
    group: &'static str,
    p: PExponent,
    h: f64,
    l: f64,
    best_iter: usize,
    best_iter_exact: bool,
    entries: &'static [(usize, usize, f64)],
) -> PublishedRun {
    PublishedRun {
        group,
        order: 4,
        scheme: Scheme::Multiplicative,
        p,
        h,
        l,
        best_iter,
        best_iter_exact,
        entries,
    }
}

macro_rules! square {
    ($a12:expr, $a13:expr, $a23:expr, $a14:expr, $a24:expr, $a34:expr) => {
        &[
            (1, 2, $a12),
            (1, 3, $a13),
            (2, 3, $a23),
            (1, 4, $a14),
            (2, 4, $a24),
            (3, 4, $a34),
        ]
    };
}

/// All published runs, in table order.
pub fn published_runs() -> Vec<PublishedRun> {
    use PExponent::{Finite, Infinity};
    use Scheme::{Additive, Multiplicative};
    vec![
        run3(
            Multiplicative,
            0.1,
            0.001,
            230,
            &[(1, 2, 4.045), (1, 3, 19.676), (2, 3, 4.867)],
        ),
        run3(
            Multiplicative,
            0.01,
            0.001,
            2300,
            &[(1, 2, 4.041), (1, 3, 19.675), (2, 3, 4.868)],
        ),
        run3(
            Multiplicative,
            0.001,
            0.0001,
            23000,
            &[(1, 2, 4.041), (1, 3, 19.675), (2, 3, 4.868)],
        ),
        run3(
            Additive,
            0.1,
            0.001,
            180,
            &[(1, 2, -0.714), (1, 3, 1.715), (2, 3, 2.285)],
        ),
        run3(
            Additive,
            0.01,
            0.001,
            1800,
            &[(1, 2, -0.952), (1, 3, 1.120), (2, 3, 2.047)],
        ),
        run3(
            Additive,
            0.001,
            0.0001,
            17800,
            &[(1, 2, -0.667), (1, 3, 1.667), (2, 3, 2.332)],
        ),
        run4(
            "square-max",
            Infinity,
            0.1,
            0.001,
            168,
            false,
            square!(2.517, 19.904, 3.696, 1.398, 1.0, 0.150),
        ),
        run4(
            "square-max",
            Infinity,
            0.01,
            0.001,
            3080,
            false,
            square!(3.865, 19.666, 4.812, 1.566, 0.415, 0.083),
        ),
        run4(
            "square-mean",
            Finite(1.0),
            0.1,
            0.001,
            280,
            false,
            square!(2.768, 19.855, 3.952, 1.544, 0.533, 0.138),
        ),
        run4(
            "square-mean",
            Finite(1.0),
            0.01,
            0.001,
            4700,
            false,
            square!(3.939, 19.669, 4.812, 1.112, 0.281, 0.057),
        ),
        run4(
            "square-quadratic",
            Finite(2.0),
            0.1,
            0.001,
            220,
            false,
            square!(2.459, 19.892, 3.757, 1.641, 0.524, 0.106),
        ),
        run4(
            "square-quadratic",
            Finite(2.0),
            0.01,
            0.001,
            3700,
            false,
            square!(3.571, 19.725, 4.573, 1.613, 0.422, 0.089),
        ),
        run4(
            "square-sqrt",
            Finite(0.5),
            0.01,
            0.001,
            280,
            true,
            square!(0.700, 20.074, 2.663, 0.926, 1.317, 0.506),
        ),
        run4(
            "square-sqrt",
            Finite(0.5),
            0.001,
            0.00001,
            2700,
            false,
            square!(0.713, 20.074, 2.662, 0.973, 1.360, 0.512),
        ),
        run4(
            "square-harmonic",
            Finite(-1.0),
            0.002,
            0.1,
            133,
            true,
            square!(0.228, 21.434, 2.678, 0.991, 2.370, 0.895),
        ),
        run4(
            "square-harmonic",
            Finite(-1.0),
            0.002,
            0.01,
            17,
            true,
            square!(0.144, 21.737, 2.713, 0.999, 2.654, 0.986),
        ),
    ]
}

#[derive(Debug, Clone)]
pub struct ReproOutcome {
    pub run: PublishedRun,
    pub result: Result<DescentResult, Error>,
}

impl ReproOutcome {
    /// Our best value for `(i, j)`, in the scheme's coordinates.
    pub fn entry(&self, i: usize, j: usize) -> Option<f64> {
        let r = self.result.as_ref().ok()?;
        Some(r.best_upper()[upper_index(self.run.order, i, j)])
    }

    /// `(i, j, ours, published, |ours - published|)` per reported entry.
    pub fn comparisons(&self) -> Vec<(usize, usize, f64, f64, f64)> {
        self.run
            .entries
            .iter()
            .filter_map(|&(i, j, published)| {
                self.entry(i, j)
                    .map(|ours| (i, j, ours, published, (ours - published).abs()))
            })
            .collect()
    }

    pub fn max_deviation(&self) -> Option<f64> {
        let c = self.comparisons();
        if c.is_empty() {
            return None;
        }
        Some(c.iter().map(|c| c.4).fold(0.0, f64::max))
    }
}

/// Runs every configuration concurrently; output order follows `runs`.
pub fn run_suite(runs: &[PublishedRun]) -> Vec<ReproOutcome> {
    thread::scope(|s| {
        let handles: Vec<_> = runs
            .iter()
            .map(|r| s.spawn(move || run(&r.start(), &r.config())))
            .collect();
        runs.iter()
            .zip(handles)
            .map(|(r, h)| ReproOutcome {
                run: r.clone(),
                result: h.join().expect("descent thread panicked"),
            })
            .collect()
    })
}

/// One CSV row per run. `entries` lists `label:ours:published:deviation`
/// separated by `;`.
pub fn summary_csv(outcomes: &[ReproOutcome]) -> String {
    let mut out = String::from(
        "group,scheme,p,h,l,stop_reason,best_iter,published_best_iter,best_indicator,max_deviation,entries\n",
    );
    for o in outcomes {
        let r = &o.run;
        let (stop, iter, ind) = match &o.result {
            Ok(res) => (
                res.stop_reason.to_string(),
                res.best_iter.to_string(),
                format!("{:.6}", res.best_indicator),
            ),
            Err(e) => (format!("error: {e}"), String::new(), String::new()),
        };
        let labels = entry_columns(r.order, r.scheme);
        let entries: Vec<String> = o
            .comparisons()
            .iter()
            .map(|&(i, j, ours, published, dev)| {
                let label = &labels[upper_index(r.order, i, j)];
                format!("{label}:{ours:.3}:{published:.3}:{dev:.3}")
            })
            .collect();
        let published_iter = if r.best_iter_exact {
            format!("={}", r.best_iter)
        } else {
            format!("~{}", r.best_iter)
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.group,
            r.scheme,
            r.p,
            r.h,
            r.l,
            stop,
            iter,
            published_iter,
            ind,
            o.max_deviation()
                .map(|d| format!("{d:.3}"))
                .unwrap_or_default(),
            entries.join(";")
        )
        .unwrap();
    }
    out
}

/// Human-readable version of [`summary_csv`].
pub fn summary_table(outcomes: &[ReproOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let r = &o.run;
        write!(
            out,
            "{:<17} {:<14} p={:<4} h={:<6} l={:<7}",
            r.group, r.scheme, r.p, r.h, r.l
        )
        .unwrap();
        match &o.result {
            Ok(res) => {
                let published = if r.best_iter_exact { "=" } else { "~" };
                writeln!(
                    out,
                    " best_iter={:<6} (published {published}{:<5}) {:<19} ii={:.6}",
                    res.best_iter, r.best_iter, res.stop_reason, res.best_indicator
                )
                .unwrap();
                let labels = entry_columns(r.order, r.scheme);
                for (i, j, ours, published, dev) in o.comparisons() {
                    writeln!(
                        out,
                        "    {:<6} {ours:>9.3}  published {published:>7.3}  |dev| {dev:.3}",
                        labels[upper_index(r.order, i, j)]
                    )
                    .unwrap();
                }
            }
            Err(e) => writeln!(out, " error: {e}").unwrap(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_layout() {
        let runs = published_runs();
        assert_eq!(runs.len(), 16);
        assert_eq!(runs.iter().filter(|r| r.order == 3).count(), 6);
        for r in &runs {
            assert_eq!(r.entries.len(), r.order * (r.order - 1) / 2);
            let cfg = r.config();
            assert!(cfg.validate(r.order).is_ok());
        }
        let labels: std::collections::HashSet<_> = runs.iter().map(|r| r.label()).collect();
        assert_eq!(labels.len(), runs.len());
    }

    #[test]
    fn published_values_for_square_max() {
        let runs = published_runs();
        let r = runs
            .iter()
            .find(|r| r.p == PExponent::Infinity && r.h == 0.1)
            .unwrap();
        let vals: Vec<f64> = r.entries.iter().map(|e| e.2).collect();
        assert_eq!(vals, vec![2.517, 19.904, 3.696, 1.398, 1.0, 0.150]);
        let r = runs
            .iter()
            .find(|r| r.p == PExponent::Finite(0.5) && r.h == 0.01)
            .unwrap();
        assert!(r.best_iter_exact);
        assert_eq!(r.best_iter, 280);
    }

    #[test]
    fn deviations_are_nonnegative() {
        let runs = &published_runs()[..1];
        let outcomes = run_suite(runs);
        for c in outcomes[0].comparisons() {
            assert!(c.4 >= 0.0);
        }
        let csv = summary_csv(&outcomes);
        assert_eq!(csv.lines().count(), 2);
    }
}
