//! Seeded random problem instances: convex loss sequences, feasible comparators and
//! piecewise-stationary sequences with known per-segment minimisers.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::DomainSpec;
use crate::loss::{ConvexLoss, Linear, LossFunction, Quadratic, Sum};
use crate::metrics::weighted_path_length_flat;
use crate::prox::Regularizer;
use crate::vector::norm;
use crate::{Result, Scalar};

#[derive(Clone, Debug)]
pub struct RandomInstance<S: Scalar> {
    pub domain: DomainSpec<S>,
    pub regularizer: Regularizer<S>,
    pub losses: Vec<LossFunction<S>>,
}

/// A ball or box in dimension 1..=4, `T` in `horizons`, and losses
/// `F_t(x) = <a_t, x> + (c_t / 2) |x - m_t|^2` with `m_t` in the domain, so that `G` can be
/// set to `max_t (|a_t| + c_t sqrt(R))^2`. `H` is zero or an L1 penalty.
pub fn random_instance<S: Scalar>(seed: u64, horizons: std::ops::RangeInclusive<usize>) -> Result<RandomInstance<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dimension = rng.gen_range(1..=4);
    let horizon = rng.gen_range(horizons);
    let domain = if rng.gen_bool(0.5) {
        let center: Vec<S> = (0..dimension).map(|_| S::lit(rng.gen_range(-1.0..1.0))).collect();
        DomainSpec::ball(center, S::lit(rng.gen_range(0.5..2.0)), S::one())?
    } else {
        let lower: Vec<f64> = (0..dimension).map(|_| rng.gen_range(-2.0..0.0)).collect();
        let upper: Vec<S> = lower.iter().map(|l| S::lit(l + rng.gen_range(0.5..2.5))).collect();
        DomainSpec::boxed(lower.into_iter().map(S::lit).collect(), upper, S::one())?
    };
    let regularizer = if rng.gen_bool(0.5) {
        Regularizer::zero()
    } else {
        Regularizer::l1(S::lit(rng.gen_range(0.0..0.5)))?
    };
    let diameter = domain.diameter_sq_bound().sqrt();
    let mut worst = S::zero();
    let mut losses = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let a: Vec<S> = (0..dimension).map(|_| S::lit(rng.gen_range(-1.0..1.0))).collect();
        let curvature = if rng.gen_bool(0.5) {
            S::lit(rng.gen_range(0.0..1.0))
        } else {
            S::zero()
        };
        let center = domain.sample(&mut rng);
        worst = worst.max(norm(&a) + curvature * diameter);
        let parts: Vec<Arc<dyn ConvexLoss<S>>> = vec![
            Arc::new(Linear { coef: a }),
            Arc::new(Quadratic {
                linear: vec![S::zero(); dimension],
                curvature,
                center,
            }),
        ];
        losses.push(LossFunction::new(Arc::new(Sum { parts }), regularizer));
    }
    let domain = domain.with_subgrad_sq_bound((worst * worst).max(S::lit(1e-12)))?;
    Ok(RandomInstance {
        domain,
        regularizer,
        losses,
    })
}

/// A random sequence in `X^T`, flat row-major: constant, a few random shifts, a projected random
/// walk, or independent draws.
pub fn random_comparator<S: Scalar, R: Rng + ?Sized>(domain: &DomainSpec<S>, horizon: usize, rng: &mut R) -> Vec<S> {
    let d = domain.dimension();
    let mut out = Vec::with_capacity(horizon * d);
    match rng.gen_range(0..4) {
        0 => {
            let p = domain.sample(rng);
            for _ in 0..horizon {
                out.extend_from_slice(&p);
            }
        }
        1 => {
            let shifts = rng.gen_range(1..=4usize);
            let mut p = domain.sample(rng);
            for _ in 0..horizon {
                if rng.gen_range(0..horizon) < shifts {
                    p = domain.sample(rng);
                }
                out.extend_from_slice(&p);
            }
        }
        2 => {
            let step = S::lit(rng.gen_range(0.01..0.3)) * domain.diameter_sq_bound().sqrt();
            let mut p = domain.sample(rng);
            for _ in 0..horizon {
                out.extend_from_slice(&p);
                for v in p.iter_mut() {
                    *v += step * S::lit(rng.gen_range(-1.0..1.0));
                }
                domain.project_in_place(&mut p);
            }
        }
        _ => {
            for _ in 0..horizon {
                out.extend(domain.sample(rng));
            }
        }
    }
    out
}

/// Pulls a sequence in `X^T` towards its projected mean until its weighted path length is at most `d_beta`.
pub fn shrink_to_budget<S: Scalar>(points: &mut [S], domain: &DomainSpec<S>, beta: S, d_beta: S) -> Result<()> {
    let d = domain.dimension();
    let length = weighted_path_length_flat(points, d, beta)?;
    if length <= d_beta {
        return Ok(());
    }
    let n = points.len() / d;
    let mut center = vec![S::zero(); d];
    for row in points.chunks_exact(d) {
        crate::vector::axpy(S::one(), row, &mut center);
    }
    center.iter_mut().for_each(|c| *c /= S::from_count(n));
    domain.project_in_place(&mut center);
    // a hair inside the budget so rounding cannot push it over
    let theta = d_beta / length * (S::one() - S::lit(1e-12));
    for row in points.chunks_exact_mut(d) {
        for (v, &c) in row.iter_mut().zip(&center) {
            *v = c + theta * (*v - c);
        }
    }
    Ok(())
}

/// Piecewise-stationary quadratic losses `f_t(x) = |x - m_t|^2 / 2 + H(x)`, with `m_t`
/// scattered around a target that moves at `M` random times.
#[derive(Clone, Debug)]
pub struct ShiftInstance<S: Scalar> {
    pub domain: DomainSpec<S>,
    pub losses: Vec<LossFunction<S>>,
    /// 0-based rounds at which a new segment starts (excluding round 0).
    pub shift_times: Vec<usize>,
    /// Per-segment minimiser of the quadratic part over the domain, repeated over the segment.
    pub comparator: Vec<S>,
}

/// [`shifting_instance_on`] the unit ball with `H = 0`.
pub fn shifting_instance<S: Scalar>(
    dimension: usize,
    horizon: usize,
    shifts: usize,
    seed: u64,
) -> Result<ShiftInstance<S>> {
    let domain = DomainSpec::unit_ball(dimension, S::one())?;
    shifting_instance_on(domain, Regularizer::zero(), horizon, shifts, seed)
}

/// `G` is set to the squared diameter, since `|x - m| <= diam X` for `x, m` in `X`; the
/// regularizer's own subgradients are not part of `G`.
pub fn shifting_instance_on<S: Scalar>(
    domain: DomainSpec<S>,
    regularizer: Regularizer<S>,
    horizon: usize,
    shifts: usize,
    seed: u64,
) -> Result<ShiftInstance<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dimension = domain.dimension();
    let diameter_sq = domain.exact_diameter_sq();
    let domain = domain.with_subgrad_sq_bound(diameter_sq)?;
    let spread = domain.exact_diameter_sq().sqrt() * S::lit(0.25);
    let mut starts: Vec<usize> = (1..horizon).collect();
    starts.shuffle(&mut rng);
    let mut shift_times = starts[..shifts.min(horizon.saturating_sub(1))].to_vec();
    shift_times.sort_unstable();

    let mut bounds = vec![0];
    bounds.extend_from_slice(&shift_times);
    bounds.push(horizon);
    let mut losses = Vec::with_capacity(horizon);
    let mut comparator = Vec::with_capacity(horizon * dimension);
    for w in bounds.windows(2) {
        let target = domain.sample(&mut rng);
        let mut mean = vec![S::zero(); dimension];
        for _ in w[0]..w[1] {
            let mut m: Vec<S> = target
                .iter()
                .map(|&c| c + spread * S::lit(rng.gen_range(-1.0..1.0)))
                .collect();
            domain.project_in_place(&mut m);
            crate::vector::axpy(S::one(), &m, &mut mean);
            losses.push(LossFunction::new(
                Arc::new(Quadratic {
                    linear: vec![S::zero(); dimension],
                    curvature: S::one(),
                    center: m,
                }),
                regularizer,
            ));
        }
        let len = S::from_count(w[1] - w[0]);
        mean.iter_mut().for_each(|v| *v /= len);
        domain.project_in_place(&mut mean);
        for _ in w[0]..w[1] {
            comparator.extend_from_slice(&mean);
        }
    }
    Ok(ShiftInstance {
        domain,
        losses,
        shift_times,
        comparator,
    })
}
