//! The offline comparator optimum `min_{y in L^T_D} sum_t f_t(y_t)`.
//!
//! [`solve_offline`] runs projected subgradient on `X^T` with steps `c / sqrt(k)`, projecting
//! onto the weighted path-length ball after every step ([`tv::project_path_ball`]). It stops
//! when the gradient mapping `|y_k - y_{k+1}| / alpha_k` certifies the objective to within
//! `tolerance` (the mapping norm times the diameter of `X^T`), otherwise at the iteration cap
//! with the best iterate flagged as unconverged.
//!
//! [`grid_oracle`] is an exhaustive check for `d <= 2`, `T <= 4`.

pub mod grid;
pub mod tv;

pub use grid::{grid_oracle, grid_tolerance};
pub use tv::{project_path_ball, ProjectionTolerances};

use crate::budget::DynamicsBudget;
use crate::domain::DomainSpec;
use crate::loss::LossFunction;
use crate::sequence::ComparatorSequence;
use crate::vector::{dist, is_finite};
use crate::{Error, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMethod {
    ProjectedSubgradient,
    GridSearch,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Defaults to `max(50 T, 1000)`.
    pub max_iters: Option<usize>,
    /// `c` in `alpha_k = c / sqrt(k)`; defaults to `sqrt(R / G)`.
    pub step_scale: Option<f64>,
    /// Certified objective accuracy at which the solver stops.
    pub tolerance: f64,
    pub projection: ProjectionTolerances,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            max_iters: None,
            step_scale: None,
            tolerance: 1e-9,
            projection: ProjectionTolerances::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution<S> {
    pub comparator: ComparatorSequence<S>,
    /// `sum_t f_t(y_t)`, re-evaluated on `comparator`.
    pub objective: S,
    pub method: OracleMethod,
    /// Solver iterations, or grid sequences visited.
    pub iterations: usize,
    /// Constraint violation: path-length excess plus the largest domain residual.
    pub residual: S,
    pub converged: bool,
    /// Best-objective decrease over the last 100 iterations.
    pub decrease_per_100: Option<S>,
}

fn objective<S: Scalar>(losses: &[LossFunction<S>], flat: &[S], dimension: usize) -> S {
    flat.chunks_exact(dimension).zip(losses).map(|(y, f)| f.value(y)).sum()
}

pub fn solve_offline<S: Scalar>(
    losses: &[LossFunction<S>],
    domain: &DomainSpec<S>,
    budget: &DynamicsBudget<S>,
    config: &OracleConfig,
) -> Result<OracleSolution<S>> {
    let horizon = losses.len();
    if horizon == 0 {
        return Err(Error::EmptyComparator);
    }
    let d = domain.dimension();
    let beta = budget.beta();
    let d_beta = budget.d_beta();
    let scale = match config.step_scale {
        Some(c) if c > 0.0 && c.is_finite() => S::lit(c),
        Some(c) => return Err(Error::NonpositiveStep(c)),
        None => (domain.diameter_sq_bound() / domain.subgrad_sq_bound()).sqrt(),
    };
    let cap = config.max_iters.unwrap_or((50 * horizon).max(1000));
    // diameter of X^T
    let diameter = (domain.diameter_sq_bound() * S::from_count(horizon)).sqrt();
    let tolerance = S::lit(config.tolerance);

    let mut y: Vec<S> = domain.center().iter().copied().cycle().take(horizon * d).collect();
    let mut value = objective(losses, &y, d);
    let mut best = y.clone();
    let mut best_value = value;
    let mut history: Vec<S> = Vec::with_capacity(cap.min(1 << 20) + 1);
    history.push(best_value);
    let mut converged = false;
    let mut iterations = 0;
    let mut z = vec![S::zero(); horizon * d];
    for k in 1..=cap {
        iterations = k;
        let alpha = scale / S::from_count(k).sqrt();
        for (t, f) in losses.iter().enumerate() {
            let row = &y[t * d..(t + 1) * d];
            let g = f.full_subgradient(row);
            if g.len() != d || !is_finite(&g) {
                return Err(Error::BadOracle(format!("subgradient at round {} is {g:?}", t + 1)));
            }
            for j in 0..d {
                z[t * d + j] = row[j] - alpha * g[j];
            }
        }
        let next = project_path_ball(&z, domain, beta, d_beta, &config.projection)?.points;
        let mapping = dist(&next, &y) / alpha;
        y = next;
        value = objective(losses, &y, d);
        if value < best_value {
            best_value = value;
            best.clone_from(&y);
        }
        history.push(best_value);
        if mapping * diameter <= tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("offline solver unconverged after {cap} iterations");
    }
    let decrease_per_100 = (history.len() > 100).then(|| history[history.len() - 101] - history[history.len() - 1]);
    let comparator = ComparatorSequence::from_flat(d, best, beta)?;
    let residual = (comparator.weighted_path_length() - d_beta).max(S::zero())
        + comparator.points().map(|p| domain.residual(p)).fold(S::zero(), S::max);
    let objective = comparator.points().zip(losses).map(|(p, f)| f.value(p)).sum();
    Ok(OracleSolution {
        comparator,
        objective,
        method: OracleMethod::ProjectedSubgradient,
        iterations,
        residual,
        converged,
        decrease_per_100,
    })
}
