//! Seeded random search for large valuations.
//!
//! Each trial draws one subspace per variable with an independent ChaCha
//! stream keyed by `(seed, trial)`, so trials can run in parallel and the
//! reported maximum and witness are a deterministic function of the inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::witness::{Trace, WitnessRecord};
use crate::error::Result;
use crate::formula::Formula;
use crate::subspace::{random_subspace_with, Tolerance};
use crate::valuation::{evaluate_checked, Environment};

/// Default number of trials for a single estimate.
pub const DEFAULT_ESTIMATE_TRIALS: usize = 2000;
/// Default number of trials for a tautology zero-test.
pub const DEFAULT_ZERO_TEST_TRIALS: usize = 10_000;
/// Redraws allowed per trial when the guard band rejects a sample.
pub const MAX_REDRAWS: usize = 32;

/// How the dimension of each variable's subspace is chosen per trial.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimsStrategy {
    /// Exhaustive for at most 3 variables and `n ≤ 6`, uniform otherwise.
    #[default]
    Auto,
    /// Cycle through all `(n+1)^k` dimension tuples.
    Exhaustive,
    /// Independent uniform dimensions in `0..=n`.
    Uniform,
    /// The same dimension tuple, in variable order, for every trial.
    Fixed(Vec<usize>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub max_found: usize,
    pub trials: usize,
    pub seed: u64,
    pub strategy: DimsStrategy,
    /// Samples discarded because a rank decision fell inside the guard band.
    pub rejected: usize,
    /// Trials that exhausted their redraws without a clean sample.
    pub abandoned: usize,
    /// Number of trials reaching each dimension, indexed by dimension.
    pub histogram: Vec<usize>,
    pub witness: WitnessRecord,
}

struct TrialResult {
    dim: Option<usize>,
    rejected: usize,
}

fn dims_for_trial(strategy: &DimsStrategy, k: usize, n: usize, trial: u64, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let exhaustive = match strategy {
        DimsStrategy::Auto => k <= 3 && n <= 6,
        DimsStrategy::Exhaustive => true,
        DimsStrategy::Uniform => false,
        DimsStrategy::Fixed(dims) => return dims.clone(),
    };
    if exhaustive {
        let base = (n + 1) as u64;
        let total = base.checked_pow(k as u32).unwrap_or(u64::MAX);
        let mut index = trial % total;
        (0..k)
            .map(|_| {
                let d = (index % base) as usize;
                index /= base;
                d
            })
            .collect()
    } else {
        (0..k).map(|_| rng.random_range(0..=n)).collect()
    }
}

fn draw(vars: &[String], dims: &[usize], n: usize, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<Environment> {
    let mut env = Environment::new(n);
    for (name, &d) in vars.iter().zip(dims) {
        env.bind(name, random_subspace_with(rng, n, d.min(n), tol))?;
    }
    Ok(env)
}

/// Run one trial; returns the clean environment (if any), its dimension and
/// the number of rejected draws.
fn run_trial(
    f: &Formula,
    vars: &[String],
    n: usize,
    strategy: &DimsStrategy,
    seed: u64,
    trial: u64,
    tol: &Tolerance,
) -> Result<(Option<(Environment, usize)>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let dims = dims_for_trial(strategy, vars.len(), n, trial, &mut rng);
    let mut rejected = 0;
    for _ in 0..=MAX_REDRAWS {
        let env = draw(vars, &dims, n, &mut rng, tol)?;
        let eval = evaluate_checked(f, &env, tol)?;
        if eval.clear {
            let dim = eval.value.dim();
            return Ok((Some((env, dim)), rejected));
        }
        rejected += 1;
    }
    Ok((None, rejected))
}

/// Randomized lower bound for the maximum of `dim Ξ(f)` over assignments in
/// `ℂ^n`, with a witness attaining the reported maximum.
pub fn estimate_dbar(
    f: &Formula,
    n: usize,
    trials: usize,
    strategy: &DimsStrategy,
    seed: u64,
    tol: &Tolerance,
) -> Result<SearchOutcome> {
    let vars = f.vars().into_vec();
    if let DimsStrategy::Fixed(dims) = strategy {
        if dims.len() != vars.len() || dims.iter().any(|&d| d > n) {
            return Err(crate::error::Error::InvalidArgument(format!(
                "fixed dimensions {dims:?} do not fit {} variables in C^{n}",
                vars.len()
            )));
        }
    }
    let trials = trials.max(1);
    let results: Vec<TrialResult> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            run_trial(f, &vars, n, strategy, seed, t, tol)
                .map(|(hit, rejected)| TrialResult { dim: hit.map(|(_, d)| d), rejected })
        })
        .collect::<Result<_>>()?;

    let mut histogram = vec![0usize; n + 1];
    let mut best: Option<(usize, u64)> = None;
    let (mut rejected, mut abandoned) = (0, 0);
    for (t, r) in results.iter().enumerate() {
        rejected += r.rejected;
        match r.dim {
            Some(d) => {
                histogram[d] += 1;
                if best.is_none_or(|(bd, _)| d > bd) {
                    best = Some((d, t as u64));
                }
            }
            None => abandoned += 1,
        }
    }

    let witness = match best {
        Some((dim, trial)) => {
            let (hit, _) = run_trial(f, &vars, n, strategy, seed, trial, tol)?;
            let (environment, achieved) = hit.expect("trial replays deterministically");
            debug_assert_eq!(achieved, dim);
            WitnessRecord {
                formula: f.clone(),
                ambient: n,
                environment,
                achieved,
                trace: Trace::Random { seed, trial },
            }
        }
        None => {
            // every trial was abandoned; fall back to the all-bottom assignment
            let environment = draw(&vars, &vec![0; vars.len()], n, &mut ChaCha8Rng::seed_from_u64(seed), tol)?;
            let achieved = evaluate_checked(f, &environment, tol)?.value.dim();
            WitnessRecord { formula: f.clone(), ambient: n, environment, achieved, trace: Trace::Random { seed, trial: 0 } }
        }
    };
    Ok(SearchOutcome {
        n,
        max_found: witness.achieved,
        trials,
        seed,
        strategy: strategy.clone(),
        rejected,
        abandoned,
        histogram,
        witness,
    })
}

/// Summary of a statistical check that a formula vanishes in `ℂ^n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroTest {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_dim_seen: usize,
    pub rejected: usize,
    pub abandoned: usize,
}

impl ZeroTest {
    pub fn passed(&self) -> bool {
        self.max_dim_seen == 0
    }
}

pub fn zero_test(f: &Formula, n: usize, trials: usize, seed: u64, tol: &Tolerance) -> Result<ZeroTest> {
    let out = estimate_dbar(f, n, trials, &DimsStrategy::Auto, seed, tol)?;
    Ok(ZeroTest {
        n,
        trials: out.trials,
        seed,
        max_dim_seen: out.max_found,
        rejected: out.rejected,
        abandoned: out.abandoned,
    })
}
