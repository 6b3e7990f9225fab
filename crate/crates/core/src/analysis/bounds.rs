//! Closed-form regret bounds.

use crate::budget::DynamicsBudget;
use crate::pog::Schedule;
use crate::{Error, Result, Scalar};

/// Upper bound for a run of `horizon` rounds with a non-increasing schedule `eta_t` against
/// any comparator whose weighted path length is at most `D_beta`:
///
/// `sqrt(R) max_t (1 / (eta_t t^beta)) D_beta + R / (2 eta_T) + (G / 2) sum_t eta_t + H(x_1) - H(x_{T+1})`.
///
/// The max runs over `t = 1..T-1` (the rounds that carry a path increment); with `T = 1` it is empty.
pub fn theorem2_bound<S: Scalar>(
    schedule: &Schedule<S>,
    horizon: usize,
    budget: &DynamicsBudget<S>,
    diameter_sq: S,
    subgrad_sq: S,
    h_first: S,
    h_last: S,
) -> S {
    let beta = budget.beta();
    let mut worst = S::zero();
    let mut eta_sum = S::zero();
    for t in 1..=horizon {
        let eta = schedule.eta(t);
        eta_sum += eta;
        if t < horizon {
            let tf = S::from_count(t);
            worst = worst.max(S::one() / (eta * tf.powf(beta)));
        }
    }
    let eta_last = schedule.eta(horizon.max(1));
    diameter_sq.sqrt() * worst * budget.d_beta()
        + diameter_sq / (S::two() * eta_last)
        + subgrad_sq * S::half() * eta_sum
        + h_first
        - h_last
}

fn check_gamma<S: Scalar>(gamma: S, beta: S) -> Result<()> {
    if !(beta >= S::zero() && gamma >= beta && gamma < S::one()) {
        return Err(Error::InvalidExponent(format!(
            "need 0 <= beta <= gamma < 1, got beta = {beta}, gamma = {gamma}"
        )));
    }
    Ok(())
}

/// `sqrt((2 G sqrt(R) D_beta T^{1-beta} + G R T) / (1 - gamma)) + H(x_1) - H(x_{T+1})`.
///
/// What the tuned schedule actually guarantees: it dominates [`theorem2_bound`] evaluated at
/// [`crate::schedule_corollary1`] for every `beta <= gamma < 1`.
pub fn corollary1_bound<S: Scalar>(
    gamma: S,
    budget: &DynamicsBudget<S>,
    diameter_sq: S,
    subgrad_sq: S,
    horizon: usize,
    h_diff: S,
) -> Result<S> {
    check_gamma(gamma, budget.beta())?;
    let t = S::from_count(horizon);
    let one = S::one();
    let path = S::two() * subgrad_sq * diameter_sq.sqrt() * budget.d_beta() * t.powf(one - budget.beta());
    Ok(((path + subgrad_sq * diameter_sq * t) / (one - gamma)).sqrt() + h_diff)
}

/// The commonly quoted simplification
/// `sqrt(2 G sqrt(R) D_beta T^{1-beta} / (1 - gamma)) + sqrt(G R T / (4 (1 - gamma))) + H(x_1) - H(x_{T+1})`.
///
/// Its second term is half of what the optimized step size yields, so it is not implied by
/// [`theorem2_bound`]; it is kept to compare measured regret against.
pub fn corollary1_display<S: Scalar>(
    gamma: S,
    budget: &DynamicsBudget<S>,
    diameter_sq: S,
    subgrad_sq: S,
    horizon: usize,
    h_diff: S,
) -> Result<S> {
    check_gamma(gamma, budget.beta())?;
    let t = S::from_count(horizon);
    let one = S::one();
    let path = S::two() * subgrad_sq * diameter_sq.sqrt() * budget.d_beta() * t.powf(one - budget.beta());
    let stat = subgrad_sq * diameter_sq * t / (S::lit(4.0) * (one - gamma));
    Ok((path / (one - gamma)).sqrt() + stat.sqrt() + h_diff)
}

/// Minimax lower bound `sqrt(D_beta T^{1-beta}) + sqrt(T)`, up to a universal constant.
pub fn theorem1_bound<S: Scalar>(budget: &DynamicsBudget<S>, horizon: usize) -> S {
    let t = S::from_count(horizon);
    (budget.d_beta() * t.powf(S::one() - budget.beta())).sqrt() + t.sqrt()
}

/// Path-length budget at `beta = 0` covering every comparator with at most `M` shifts: `M sqrt(R)`.
pub fn shift_to_path_budget<S: Scalar>(shifts: usize, diameter_sq: S) -> S {
    S::from_count(shifts) * diameter_sq.sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesBound<S> {
    pub gamma: S,
    pub horizon: usize,
    /// `sum_{t <= T} t^{-gamma}`
    pub partial_sum: S,
    /// `T^{1-gamma} / (1 - gamma)`
    pub bound: S,
}

impl<S: Scalar> SeriesBound<S> {
    pub fn holds(&self) -> bool {
        self.partial_sum <= self.bound + S::lit(1e-12)
    }
}

pub fn series_bound_check<S: Scalar>(gamma: S, horizon: usize) -> Result<SeriesBound<S>> {
    if !(gamma >= S::zero() && gamma < S::one()) {
        return Err(Error::InvalidExponent(format!("gamma = {gamma} must lie in [0, 1)")));
    }
    let partial_sum = (1..=horizon).map(|t| S::from_count(t).powf(-gamma)).sum();
    let bound = S::from_count(horizon).powf(S::one() - gamma) / (S::one() - gamma);
    Ok(SeriesBound {
        gamma,
        horizon,
        partial_sum,
        bound,
    })
}
