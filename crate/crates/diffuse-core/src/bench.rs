//! Benchmark harness comparing diffusion schedules against conventional
//! sweep baselines on the same linear fixed point.
//!
//! The portable cost measure is the column-touch count: one per diffusion
//! step, `n` per full-sweep iteration (every column is read once per
//! sweep). Wall times are medians over the requested repeats and are
//! machine dependent.

use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::schedule::SchedulerKind;
use crate::solver::{jacobi_baseline, power_iteration_linear, solve_linear, SolveConfig};
use crate::vector::DenseVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMethod {
    DiffusionGreedy,
    DiffusionCyclic,
    Power,
    Jacobi,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 4] = [
        BenchMethod::DiffusionGreedy,
        BenchMethod::DiffusionCyclic,
        BenchMethod::Power,
        BenchMethod::Jacobi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BenchMethod::DiffusionGreedy => "diffusion-greedy",
            BenchMethod::DiffusionCyclic => "diffusion-cyclic",
            BenchMethod::Power => "power",
            BenchMethod::Jacobi => "jacobi",
        }
    }
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "diffusion-greedy" => Ok(BenchMethod::DiffusionGreedy),
            "diffusion-cyclic" => Ok(BenchMethod::DiffusionCyclic),
            "power" => Ok(BenchMethod::Power),
            "jacobi" => Ok(BenchMethod::Jacobi),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub method: &'static str,
    /// Diffusion steps or sweep iterations, whichever the method counts.
    pub steps: u64,
    pub column_touches: u64,
    pub converged: bool,
    pub wall_median: Duration,
}

fn run_once(
    method: BenchMethod,
    m: &SparseMatrix,
    b: &DenseVector,
    eps: f64,
    max_steps: u64,
) -> Result<(u64, u64, bool)> {
    let n = m.dim() as u64;
    match method {
        BenchMethod::DiffusionGreedy | BenchMethod::DiffusionCyclic => {
            let scheduler = if method == BenchMethod::DiffusionGreedy {
                SchedulerKind::GreedyAbs
            } else {
                SchedulerKind::Cyclic
            };
            let cfg = SolveConfig {
                epsilon: eps,
                max_steps,
                scheduler,
                ..SolveConfig::default()
            };
            let report = solve_linear(m, b, &cfg)?;
            Ok((report.steps_used, report.steps_used, report.converged))
        }
        BenchMethod::Power => {
            let run = power_iteration_linear(m, b, eps, max_steps.max(1))?;
            Ok((run.iterations, run.iterations * n, run.converged))
        }
        BenchMethod::Jacobi => {
            let run = jacobi_baseline(m, b, eps, max_steps.max(1))?;
            Ok((run.iterations, run.iterations * n, run.converged))
        }
    }
}

/// Runs each method `repeats` times and reports counts plus the median wall
/// time. Counts are asserted identical across repeats; every run is
/// deterministic. With `parallel`, repeats run on separate threads over the
/// shared immutable matrix.
pub fn run_bench(
    m: &SparseMatrix,
    b: &DenseVector,
    eps: f64,
    max_steps: u64,
    methods: &[BenchMethod],
    repeats: usize,
    parallel: bool,
) -> Result<Vec<BenchRow>> {
    let repeats = repeats.max(1);
    let mut rows = Vec::with_capacity(methods.len());
    for &method in methods {
        let timed_run = || -> Result<(u64, u64, bool, Duration)> {
            let start = Instant::now();
            let (steps, touches, converged) = run_once(method, m, b, eps, max_steps)?;
            Ok((steps, touches, converged, start.elapsed()))
        };
        let mut results: Vec<(u64, u64, bool, Duration)> = if parallel {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..repeats).map(|_| scope.spawn(timed_run)).collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("bench thread panicked"))
                    .collect::<Result<Vec<_>>>()
            })?
        } else {
            (0..repeats)
                .map(|_| timed_run())
                .collect::<Result<Vec<_>>>()?
        };
        let (steps, touches, converged, _) = results[0];
        for r in &results {
            debug_assert_eq!((r.0, r.1, r.2), (steps, touches, converged));
        }
        results.sort_by_key(|r| r.3);
        let wall_median = results[results.len() / 2].3;
        rows.push(BenchRow {
            method: method.name(),
            steps,
            column_touches: touches,
            converged,
            wall_median,
        });
    }
    Ok(rows)
}
