//! Property suites that check the duality and metric statements on random
//! bodies, with CSV and plain-text reporting.
//!
//! Every report row carries one primary value and the suite's pass rule is
//! always `value <= target + tolerance`, so a row can be rechecked on its
//! own. Trials run in parallel with seed `seed + trial`, and reports are
//! merged in trial order.

pub mod gen;
mod suites;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::error::GeometryError;
use crate::metric::default_resolution;
use crate::point::seeded_rng;

pub use suites::{
    suite_antitone_closure, suite_bilipschitz, suite_double_dual, suite_isometry, suite_metric_lemmas,
    suite_separation, suite_tightness, suite_union_closure, DILATION_SAMPLES, TIGHTNESS_GAMMAS, UNION_STEPS,
};

/// Suite names in the order `all` runs them.
pub const SUITES: [&str; 8] = [
    "isometry",
    "bilipschitz",
    "tightness",
    "double_dual",
    "antitone_closure",
    "metric_lemmas",
    "union_closure",
    "separation",
];

/// CSV header of [`write_csv`].
pub const CSV_HEADER: &str = "suite,trial_seed,dim,label,value,target,tolerance,error_bound,pass,ms";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown suite `{0}` (expected one of: {list}, all)", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot write report {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: String,
    pub trials: usize,
    /// Sphere dimension `n`.
    pub dim: usize,
    pub seed: u64,
    /// Overrides the suite's own tolerance when set.
    pub tolerance: Option<f64>,
    pub sampling_resolution: f64,
    pub output_path: Option<PathBuf>,
}

impl SuiteConfig {
    /// Defaults for `suite`: its standard trial count, `S^2`, seed 0 and the
    /// default sampling resolution.
    pub fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            trials: default_trials(suite),
            dim: 2,
            seed: 0,
            tolerance: None,
            sampling_resolution: default_resolution(),
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if !SUITES.contains(&self.suite.as_str()) {
            return Err(HarnessError::UnknownSuite(self.suite.clone()));
        }
        if self.trials < 1 {
            return Err(HarnessError::InvalidConfig("trials must be at least 1".into()));
        }
        if self.dim < 1 {
            return Err(HarnessError::InvalidConfig("dim must be at least 1".into()));
        }
        if !(self.sampling_resolution > 0.0 && self.sampling_resolution < 0.1) {
            return Err(HarnessError::InvalidConfig(format!(
                "sampling resolution {} outside (0, 0.1)",
                self.sampling_resolution
            )));
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(HarnessError::InvalidConfig(format!("tolerance {t} must be finite and >= 0")));
            }
        }
        Ok(())
    }

    pub(crate) fn tol_or(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// Trial count used when none is given.
pub fn default_trials(suite: &str) -> usize {
    match suite {
        "isometry" | "bilipschitz" => 500,
        "tightness" => 1,
        "double_dual" | "antitone_closure" => 200,
        "metric_lemmas" | "separation" => 100,
        "union_closure" => 50,
        _ => 1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    pub suite: String,
    pub trial_seed: u64,
    pub ambient_dim: usize,
    /// Named measurements; the first is the primary value checked against
    /// the target.
    pub measured: Vec<(String, f64)>,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub error_bound: Option<f64>,
    pub wall_time_ms: f64,
    /// Why the trial produced no measurement, if it did not.
    pub skipped: Option<String>,
}

impl PropertyReport {
    pub(crate) fn check(
        suite: &str,
        trial_seed: u64,
        ambient_dim: usize,
        measured: Vec<(&str, f64)>,
        target: f64,
        tolerance: f64,
        error_bound: Option<f64>,
    ) -> Self {
        let value = measured.first().map_or(f64::NAN, |m| m.1);
        Self {
            suite: suite.to_string(),
            trial_seed,
            ambient_dim,
            measured: measured.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            target,
            tolerance,
            pass: value <= target + tolerance,
            error_bound,
            wall_time_ms: 0.0,
            skipped: None,
        }
    }

    pub(crate) fn skipped(suite: &str, trial_seed: u64, ambient_dim: usize, reason: &GeometryError) -> Self {
        Self {
            suite: suite.to_string(),
            trial_seed,
            ambient_dim,
            measured: vec![("skipped".to_string(), f64::NAN)],
            target: 0.0,
            tolerance: 0.0,
            pass: false,
            error_bound: None,
            wall_time_ms: 0.0,
            skipped: Some(reason.to_string()),
        }
    }

    pub fn label(&self) -> &str {
        self.measured.first().map_or("", |m| m.0.as_str())
    }

    pub fn value(&self) -> f64 {
        self.measured.first().map_or(f64::NAN, |m| m.1)
    }

    /// Looks up a named measurement.
    pub fn get(&self, label: &str) -> Option<f64> {
        self.measured.iter().find(|m| m.0 == label).map(|m| m.1)
    }
}

/// Runs `trial(seed, rng)` for every trial index in parallel and returns the
/// reports in trial order, each stamped with its trial's wall time.
pub(crate) fn run_trials<F>(cfg: &SuiteConfig, trial: F) -> Vec<PropertyReport>
where
    F: Fn(u64, &mut ChaCha8Rng) -> Vec<PropertyReport> + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = cfg.seed.wrapping_add(i as u64);
            let mut rng = seeded_rng(seed);
            let start = Instant::now();
            let mut reports = trial(seed, &mut rng);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            for r in &mut reports {
                r.wall_time_ms = ms;
            }
            reports
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Dispatches on `cfg.suite`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<PropertyReport>, HarnessError> {
    cfg.validate()?;
    Ok(match cfg.suite.as_str() {
        "isometry" => suite_isometry(cfg),
        "bilipschitz" => suite_bilipschitz(cfg),
        "tightness" => suite_tightness(cfg),
        "double_dual" => suite_double_dual(cfg),
        "antitone_closure" => suite_antitone_closure(cfg),
        "metric_lemmas" => suite_metric_lemmas(cfg),
        "union_closure" => suite_union_closure(cfg),
        "separation" => suite_separation(cfg),
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    })
}

/// A suite passes when it produced at least one report and every report
/// passed; skipped trials count as failures.
pub fn suite_passed(reports: &[PropertyReport]) -> bool {
    !reports.is_empty() && reports.iter().all(|r| r.pass)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One CSV line per report (no trailing newline).
pub fn csv_row(r: &PropertyReport) -> String {
    let label = match &r.skipped {
        Some(reason) => format!("skipped: {reason}"),
        None => r.label().to_string(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{:.3}",
        csv_field(&r.suite),
        r.trial_seed,
        r.ambient_dim,
        csv_field(&label),
        r.value(),
        r.target,
        r.tolerance,
        r.error_bound.map(|e| e.to_string()).unwrap_or_default(),
        r.pass,
        r.wall_time_ms
    )
}

pub fn write_csv(path: &Path, reports: &[PropertyReport]) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.to_path_buf(), source };
    let mut out = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    for r in reports {
        writeln!(out, "{}", csv_row(r)).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Human-readable per-suite tally, in the order suites first appear.
pub fn summary(reports: &[PropertyReport]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for r in reports {
        if !names.contains(&r.suite.as_str()) {
            names.push(&r.suite);
        }
    }
    let mut s = String::new();
    for name in names {
        let rows: Vec<&PropertyReport> = reports.iter().filter(|r| r.suite == name).collect();
        let passed = rows.iter().filter(|r| r.pass).count();
        let skipped = rows.iter().filter(|r| r.skipped.is_some()).count();
        let worst = rows
            .iter()
            .filter(|r| r.skipped.is_none())
            .map(|r| r.value() - r.target)
            .fold(f64::NEG_INFINITY, f64::max);
        let sampled = rows.iter().filter(|r| r.error_bound.is_some()).count();
        let verdict = if rows.iter().all(|r| r.pass) { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{verdict} {name}: {passed}/{} passed, {skipped} skipped, {sampled} sampled, worst value-target {worst:e}",
            rows.len()
        );
    }
    s
}
