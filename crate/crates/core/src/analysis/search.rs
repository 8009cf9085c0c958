//! Search for states maximizing the number of negative PT eigenvalues.

use super::sweep::GridSpec;
use super::AnalysisError;
use crate::linalg::ComplexMatrix;
use crate::sampling::{complex_gaussian, ginibre_mixed, SeedSpec};
use crate::states::{BipartiteDims, DensityMatrix, Subsystem};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Ginibre draws cycling through every rank 1..=mn.
    Random,
    /// Discrete grid over the shifted-diagonal family weights.
    FamilyGrid,
    /// Family-grid warmup, then batch-synchronous Gaussian perturbation of
    /// the incumbent with shrinking step size.
    LocalRefine,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub dims: BipartiteDims,
    pub strategy: Strategy,
    pub best_count: usize,
    /// Negativity of the normalized best state (the tie-break objective).
    pub best_negativity: f64,
    /// Family weights of the best state; None for the random strategy.
    pub best_params: Option<Vec<f64>>,
    pub best_state: DensityMatrix,
    pub samples_evaluated: u64,
    pub seed: SeedSpec,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
struct Candidate {
    count: usize,
    negativity: f64,
    index: u64,
    params: Option<Vec<f64>>,
}

/// Total order for reductions: higher count, then higher negativity, then
/// earlier index. Associative and worker-count independent.
fn pick(a: Candidate, b: Candidate) -> Candidate {
    if b.count > a.count
        || (b.count == a.count && b.negativity > a.negativity)
        || (b.count == a.count && b.negativity == a.negativity && b.index < a.index)
    {
        b
    } else {
        a
    }
}

fn pick_opt(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(pick(x, y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Incumbent acceptance: strictly greater count, ties broken by strictly
/// larger negativity.
fn improves(challenger: &Candidate, incumbent: &Candidate) -> bool {
    challenger.count > incumbent.count
        || (challenger.count == incumbent.count && challenger.negativity > incumbent.negativity)
}

/// m (x) n generalization of the cyclic diagonal family: vector k (one per B
/// level) is |0,k> + sum_{i=1}^{m-1} w[k][i-1] |i, (i+k) mod n>, weights flat
/// row-major. Coincides with the square cyclic family at m = n.
fn build_shifted_diagonal(dims: BipartiteDims, weights: &[f64]) -> DensityMatrix {
    let (m, n) = (dims.m(), dims.n());
    debug_assert_eq!(weights.len(), n * (m - 1));
    let zero = Complex64::new(0.0, 0.0);
    let mut mat = ComplexMatrix::zeros(dims.total());
    let mut v = vec![zero; dims.total()];
    for k in 0..n {
        v.fill(zero);
        v[dims.joint(0, k)] = Complex64::new(1.0, 0.0);
        for i in 1..m {
            v[dims.joint(i, (i + k) % n)] = Complex64::new(weights[k * (m - 1) + i - 1], 0.0);
        }
        mat.add_scaled_outer(&v, 1.0);
    }
    DensityMatrix::new_unchecked(mat, dims)
}

fn family_param_count(dims: BipartiteDims) -> usize {
    dims.n() * (dims.m() - 1)
}

fn family_levels(dims: BipartiteDims) -> Vec<f64> {
    if dims.m() == 3 && dims.n() == 3 {
        vec![0.0, 0.25, 0.5, 0.75, 1.0]
    } else {
        vec![0.2, 0.4, 0.6, 0.8, 1.0]
    }
}

fn family_candidate(
    dims: BipartiteDims,
    index: u64,
    params: Vec<f64>,
) -> Result<Candidate, AnalysisError> {
    let rho = build_shifted_diagonal(dims, &params);
    let spec = rho.pt_spectrum(Subsystem::A)?;
    Ok(Candidate {
        count: spec.neg_count,
        negativity: spec.negativity / rho.trace(),
        index,
        params: Some(params),
    })
}

fn random_candidate(
    dims: BipartiteDims,
    index: u64,
    seed: SeedSpec,
) -> Result<Candidate, AnalysisError> {
    let rank = 1 + (index as usize % dims.total());
    let rho = ginibre_mixed(dims, rank, seed.offset(index))?;
    let spec = rho.pt_spectrum(Subsystem::A)?;
    Ok(Candidate {
        count: spec.neg_count,
        negativity: spec.negativity,
        index,
        params: None,
    })
}

fn best_over_random(
    dims: BipartiteDims,
    budget: u64,
    seed: SeedSpec,
) -> Result<Candidate, AnalysisError> {
    let best = (0..budget)
        .into_par_iter()
        .map(|t| random_candidate(dims, t, seed).map(Some))
        .try_reduce(|| None, |a, b| Ok(pick_opt(a, b)))?;
    Ok(best.expect("budget >= 1"))
}

fn best_over_grid(
    dims: BipartiteDims,
    budget: u64,
    seed: SeedSpec,
) -> Result<(Candidate, u64), AnalysisError> {
    let grid = GridSpec {
        axes: vec![family_levels(dims); family_param_count(dims)],
        subsample: None,
    };
    let cardinality = grid.cardinality();
    let (evals, best) = if cardinality <= budget {
        let best = (0..cardinality)
            .into_par_iter()
            .map(|t| family_candidate(dims, t, grid.decode(t)).map(Some))
            .try_reduce(|| None, |a, b| Ok(pick_opt(a, b)))?;
        (cardinality, best)
    } else {
        let best = (0..budget)
            .into_par_iter()
            .map(|t| family_candidate(dims, t, grid.draw(seed.offset(t))).map(Some))
            .try_reduce(|| None, |a, b| Ok(pick_opt(a, b)))?;
        (budget, best)
    };
    Ok((best.expect("budget >= 1"), evals))
}

const REFINE_BATCH: u64 = 64;
const REFINE_STEP0: f64 = 0.3;
const REFINE_STEP_DECAY: f64 = 0.997;

fn refine(
    dims: BipartiteDims,
    incumbent: Candidate,
    budget: u64,
    evaluated_already: u64,
    seed: SeedSpec,
) -> Result<(Candidate, u64), AnalysisError> {
    let mut incumbent = incumbent;
    let mut spent = 0u64;
    let mut batch_no = 0u32;
    while spent < budget {
        let batch = REFINE_BATCH.min(budget - spent);
        let sigma = REFINE_STEP0 * REFINE_STEP_DECAY.powi(batch_no as i32);
        let base = incumbent
            .params
            .clone()
            .expect("refine incumbents carry params");
        let best = (0..batch)
            .into_par_iter()
            .map(|j| {
                let p = spent + j;
                let mut rng = seed.offset(evaluated_already + p).rng();
                let proposal: Vec<f64> = base
                    .iter()
                    .map(|w| {
                        let step = complex_gaussian(&mut rng).re * std::f64::consts::SQRT_2;
                        w + sigma * step
                    })
                    .collect();
                family_candidate(dims, p, proposal).map(Some)
            })
            .try_reduce(|| None, |a, b| Ok(pick_opt(a, b)))?
            .expect("batch >= 1");
        if improves(&best, &incumbent) {
            incumbent = best;
        }
        spent += batch;
        batch_no += 1;
    }
    Ok((incumbent, spent))
}

fn rebuild_state(
    dims: BipartiteDims,
    strategy: Strategy,
    cand: &Candidate,
    seed: SeedSpec,
) -> Result<DensityMatrix, AnalysisError> {
    match &cand.params {
        Some(p) => Ok(build_shifted_diagonal(dims, p)),
        None => {
            debug_assert_eq!(strategy, Strategy::Random);
            let rank = 1 + (cand.index as usize % dims.total());
            Ok(ginibre_mixed(dims, rank, seed.offset(cand.index))?)
        }
    }
}

/// Run the chosen strategy for `budget` evaluations and return the best state
/// found under the (count, negativity) objective. The result is a pure
/// function of (dims, strategy, budget, seed) for any worker count.
pub fn search_max_neg(
    dims: BipartiteDims,
    strategy: Strategy,
    budget: u64,
    seed: SeedSpec,
) -> Result<SearchResult, AnalysisError> {
    if budget < 1 {
        return Err(AnalysisError::EmptyBudget);
    }
    let start = Instant::now();
    let (best, evaluated) = match strategy {
        Strategy::Random => (best_over_random(dims, budget, seed)?, budget),
        Strategy::FamilyGrid => best_over_grid(dims, budget, seed)?,
        Strategy::LocalRefine => {
            let warmup = (budget / 4).max(1);
            let (incumbent, warmup_evals) = best_over_grid(dims, warmup, seed)?;
            let rest = budget - warmup_evals.min(budget);
            let (best, spent) = refine(dims, incumbent, rest, warmup_evals, seed)?;
            (best, warmup_evals + spent)
        }
    };
    let best_state = rebuild_state(dims, strategy, &best, seed)?;
    Ok(SearchResult {
        dims,
        strategy,
        best_count: best.count,
        best_negativity: best.negativity,
        best_params: best.params,
        best_state,
        samples_evaluated: evaluated,
        seed,
        elapsed: start.elapsed(),
    })
}
