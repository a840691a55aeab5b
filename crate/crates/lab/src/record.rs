//! Result rows and their CSV / JSON emission.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Suite;

pub const CSV_HEADER: &str = "experiment,statistic,l,k,n_samples,n_steps,distance,p_value,threshold,pass,seed,ms";

/// How a failing row is reported: exact identities and statistical
/// comparisons map to different exit codes; diagnostics never fail a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exact,
    Statistical,
    Diagnostic,
}

/// Direction of the threshold comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Bound {
    /// `distance <= threshold`.
    Max,
    /// `p_value >= threshold`.
    MinP,
    /// `distance >= threshold`.
    Min,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub experiment: Suite,
    pub statistic: String,
    pub l: Option<usize>,
    pub k: Option<usize>,
    pub n_samples: u64,
    pub n_steps: u64,
    pub distance: f64,
    pub p_value: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub seed: u64,
    /// Wall time of the comparison block that produced the row.
    pub ms: u64,
    pub kind: CheckKind,
}

impl ResultRecord {
    pub fn is_failure(&self) -> bool {
        !self.pass && self.kind != CheckKind::Diagnostic
    }

    /// One CSV line (no newline). `ms` is written as 0 unless `timings`, so
    /// that reruns are byte-identical.
    pub fn csv_line(&self, timings: bool) -> String {
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut s = String::new();
        write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment,
            self.statistic,
            opt(self.l),
            opt(self.k),
            self.n_samples,
            self.n_steps,
            num(self.distance),
            self.p_value.map(num).unwrap_or_default(),
            num(self.threshold),
            self.pass,
            self.seed,
            if timings { self.ms } else { 0 },
        )
        .unwrap();
        s
    }
}

/// Shortest round-trip decimal form.
fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn to_csv(records: &[ResultRecord], timings: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_line(timings));
        out.push('\n');
    }
    out
}

/// Row builder shared by the suites.
#[derive(Clone, Debug)]
pub(crate) struct RowContext {
    pub suite: Suite,
    pub seed: u64,
    pub n_samples: u64,
    pub n_steps: u64,
    pub ms: u64,
}

impl RowContext {
    pub fn new(suite: Suite, seed: u64) -> Self {
        Self {
            suite,
            seed,
            n_samples: 0,
            n_steps: 0,
            ms: 0,
        }
    }

    pub fn sizes(mut self, n_samples: u64, n_steps: u64) -> Self {
        self.n_samples = n_samples;
        self.n_steps = n_steps;
        self
    }

    pub fn time(mut self, ms: u64) -> Self {
        self.ms = ms;
        self
    }

    #[allow(clippy::too_many_arguments)]
    pub fn row(
        &self,
        kind: CheckKind,
        statistic: impl Into<String>,
        lk: (Option<usize>, Option<usize>),
        distance: f64,
        p_value: Option<f64>,
        threshold: f64,
        bound: Bound,
    ) -> ResultRecord {
        let pass = match bound {
            Bound::Max => distance <= threshold,
            Bound::Min => distance >= threshold,
            Bound::MinP => p_value.is_some_and(|p| p >= threshold),
        };
        ResultRecord {
            experiment: self.suite,
            statistic: statistic.into(),
            l: lk.0,
            k: lk.1,
            n_samples: self.n_samples,
            n_steps: self.n_steps,
            distance,
            p_value,
            threshold,
            pass,
            seed: self.seed,
            ms: self.ms,
            kind,
        }
    }

    /// Exact identity checked by counting mismatches.
    pub fn exact(&self, statistic: impl Into<String>, lk: (Option<usize>, Option<usize>), mismatches: u64) -> ResultRecord {
        self.row(CheckKind::Exact, statistic, lk, mismatches as f64, None, 0.0, Bound::Max)
    }

    /// Exact identity checked up to a floating-point residual.
    pub fn residual(
        &self,
        statistic: impl Into<String>,
        lk: (Option<usize>, Option<usize>),
        residual: f64,
        tolerance: f64,
    ) -> ResultRecord {
        // NaN residuals fail
        self.row(CheckKind::Exact, statistic, lk, residual, None, tolerance, Bound::Max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_format() {
        let ctx = RowContext::new(Suite::Theorem1, 7).sizes(100, 64).time(12);
        let r = ctx.row(CheckKind::Statistical, "ks", (Some(1), Some(2)), 0.125, Some(0.5), 0.001, Bound::MinP);
        assert!(r.pass);
        assert_eq!(r.csv_line(false), "theorem1,ks,1,2,100,64,0.125,0.5,0.001,true,7,0");
        assert_eq!(r.csv_line(true), "theorem1,ks,1,2,100,64,0.125,0.5,0.001,true,7,12");
        let e = ctx.exact("mismatch", (None, None), 2);
        assert!(!e.pass && e.is_failure());
        assert_eq!(e.csv_line(false), "theorem1,mismatch,,,100,64,2.0,,0.0,false,7,0");
        let nan = ctx.residual("r", (None, None), f64::NAN, 1e-10);
        assert!(!nan.pass);
        let csv = to_csv(&[r], false);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 2);
    }
}
