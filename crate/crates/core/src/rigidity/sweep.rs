use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{certify_tuple_with, CertifyOptions, Verdict};
use super::closure::generated_algebra_dimension;
use crate::error::{Error, Result};
use crate::linalg::{TolerancePolicy, TraceMode};
use crate::sample::{RngSpec, Sampler, Shape, GENERATOR};
use crate::scalar::{Backend, Scalar};

/// Largest `n` a sweep accepts.
pub const MAX_SWEEP_N: usize = 64;

/// Environment variable read when [`SweepConfig::threads`] is unset.
pub const THREADS_ENV: &str = "QRIGID_THREADS";

/// Which tuple lengths `d` to try for a given `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DPolicy {
    /// `2 ≤ d ≤ n² − 3`; empty for `n ≤ 2`.
    #[default]
    PaperRange,
    Fixed(Vec<usize>),
}

impl DPolicy {
    pub fn values(&self, n: usize) -> Vec<usize> {
        match self {
            DPolicy::PaperRange => (2..=(n * n).saturating_sub(3)).collect(),
            DPolicy::Fixed(ds) => ds.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub d_policy: DPolicy,
    pub trials: usize,
    pub rng: RngSpec,
    pub mode: TraceMode,
    pub tol: TolerancePolicy,
    pub shape: Shape,
    /// Worker threads; `None` reads [`THREADS_ENV`], then falls back to rayon's default.
    pub threads: Option<usize>,
    /// Cross-check every certified trial with the closure oracle.
    pub verify_closure: bool,
    /// Record wall-clock seconds per cell. Off by default so reports are reproducible.
    pub record_timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_values: (3..=8).collect(),
            d_policy: DPolicy::PaperRange,
            trials: 5,
            rng: RngSpec::default(),
            mode: TraceMode::Normalized,
            tol: TolerancePolicy::default(),
            shape: Shape::Generic,
            threads: None,
            verify_closure: true,
            record_timing: false,
        }
    }
}

/// Outcome of one sampled tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub stream: u64,
    pub verdict: Verdict,
    pub rank: usize,
    pub margin: Option<f64>,
    /// `n²` check by the closure oracle, when it ran.
    pub closure_dimension: Option<usize>,
    /// The sampled tuple had a singular Gram matrix.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    pub certified: usize,
    /// Smallest `σ_min/σ_max` seen (float backend).
    pub min_margin: Option<f64>,
    pub closure_checked: usize,
    pub closure_full: usize,
    /// RNG stream of each trial, in trial order.
    pub streams: Vec<u64>,
    pub seconds: Option<f64>,
}

impl CellReport {
    pub fn has_witness(&self) -> bool {
        self.certified > 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub generator: String,
    pub rng: RngSpec,
    pub backend: Backend,
    pub mode: TraceMode,
    pub shape: Shape,
    pub tolerance: TolerancePolicy,
    pub trials: usize,
    pub cells: Vec<CellReport>,
}

impl SweepReport {
    pub const CSV_HEADER: &'static str = "n,d,trials,certified,min_margin,seconds";

    /// Every cell has a certified witness; vacuously true for an empty grid.
    pub fn all_cells_certified(&self) -> bool {
        self.cells.iter().all(CellReport::has_witness)
    }

    pub fn total_trials(&self) -> usize {
        self.cells.iter().map(|c| c.trials).sum()
    }

    pub fn total_certified(&self) -> usize {
        self.cells.iter().map(|c| c.certified).sum()
    }

    /// Fraction of certified trials, or `1.0` when no trials ran.
    pub fn certified_fraction(&self) -> f64 {
        match self.total_trials() {
            0 => 1.0,
            t => self.total_certified() as f64 / t as f64,
        }
    }

    /// Every certified trial that was cross-checked generated the full algebra.
    pub fn closure_consistent(&self) -> bool {
        self.cells.iter().all(|c| c.closure_full == c.closure_checked)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            let margin = c.min_margin.map(|m| format!("{m:e}")).unwrap_or_default();
            let secs = c.seconds.map(|s| format!("{s:.6}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.n, c.d, c.trials, c.certified, margin, secs
            ));
        }
        out
    }
}

fn run_trial<S: Scalar>(cfg: &SweepConfig, n: usize, d: usize, t: usize) -> TrialOutcome {
    let spec = cfg.rng.derive(&[n as u64, d as u64, t as u64]);
    let tuple = Sampler::new(spec).tuple::<S>(n, d, cfg.shape);
    let opts = CertifyOptions {
        mode: cfg.mode,
        tol: cfg.tol,
        power_basis: None,
        closure_fallback: false,
    };
    match certify_tuple_with(&tuple, &opts) {
        Ok(cert) => {
            let closure_dimension = (cfg.verify_closure && cert.is_certified()).then(|| {
                generated_algebra_dimension(&[cert.degree.clone(), cert.second_degree.clone()], &cfg.tol)
                    .expect("two generators")
            });
            TrialOutcome {
                stream: spec.stream,
                verdict: cert.verdict,
                rank: cert.rank,
                margin: cert.margin(),
                closure_dimension,
                degenerate: false,
            }
        }
        Err(_) => TrialOutcome {
            stream: spec.stream,
            verdict: Verdict::Inconclusive,
            rank: 0,
            margin: None,
            closure_dimension: None,
            degenerate: true,
        },
    }
}

fn summarize(n: usize, d: usize, outcomes: &[TrialOutcome], seconds: Option<f64>) -> CellReport {
    let certified = outcomes.iter().filter(|o| o.verdict == Verdict::CertifiedRigid).count();
    let min_margin = outcomes.iter().filter_map(|o| o.margin).reduce(f64::min);
    let checked: Vec<usize> = outcomes.iter().filter_map(|o| o.closure_dimension).collect();
    CellReport {
        n,
        d,
        trials: outcomes.len(),
        certified,
        min_margin,
        closure_checked: checked.len(),
        closure_full: checked.iter().filter(|&&k| k == n * n).count(),
        streams: outcomes.iter().map(|o| o.stream).collect(),
        seconds,
    }
}

fn thread_count(cfg: &SweepConfig) -> Option<usize> {
    cfg.threads
        .or_else(|| std::env::var(THREADS_ENV).ok()?.trim().parse().ok())
        .filter(|&k| k > 0)
}

/// Monte Carlo certification over a grid of `(n, d)` cells.
///
/// Trial `t` of cell `(n, d)` samples from stream `rng.derive([n, d, t])`, so
/// the report depends only on the configuration, never on scheduling.
pub fn sweep<S: Scalar>(cfg: &SweepConfig) -> Result<SweepReport> {
    if let Some(&bad) = cfg.n_values.iter().find(|&&n| n == 0 || n > MAX_SWEEP_N) {
        return Err(Error::InvalidInput(format!("n = {bad} outside 1..={MAX_SWEEP_N}")));
    }
    if !cfg.tol.is_valid() {
        return Err(Error::InvalidInput("invalid tolerance policy".into()));
    }
    let cells: Vec<(usize, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| cfg.d_policy.values(n).into_iter().map(move |d| (n, d)))
        .collect();
    if let Some(&(n, d)) = cells.iter().find(|&&(n, d)| d == 0 || d >= n * n) {
        return Err(Error::InvalidInput(format!("d = {d} outside 1..{} for n = {n}", n * n)));
    }

    let run_cell = |&(n, d): &(usize, usize)| {
        let start = cfg.record_timing.then(Instant::now);
        let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial::<S>(cfg, n, d, t))
            .collect();
        summarize(n, d, &outcomes, start.map(|s| s.elapsed().as_secs_f64()))
    };
    let run_all = || -> Vec<CellReport> { cells.par_iter().map(run_cell).collect() };
    let reports = match thread_count(cfg) {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))?
            .install(run_all),
        None => run_all(),
    };

    Ok(SweepReport {
        schema: 1,
        generator: GENERATOR.to_string(),
        rng: cfg.rng,
        backend: S::BACKEND,
        mode: cfg.mode,
        shape: cfg.shape,
        tolerance: cfg.tol,
        trials: cfg.trials,
        cells: reports,
    })
}
