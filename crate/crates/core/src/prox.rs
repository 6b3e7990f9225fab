//! Proximal operators constrained to the feasible set.
//!
//! `prox(x', eta) = argmin_{x in X} H(x) + |x - x'|^2 / (2 eta)`.
//! For an L1 regularizer on a ball, thresholding followed by projection is not the constrained
//! minimizer, so the radial multiplier of the ball constraint is found by bisection instead.

use crate::domain::{DomainKind, DomainSpec};
use crate::vector::{dist, norm_l1, soft_threshold};
use crate::{Error, Result, Scalar};

/// Absolute tolerance on the radial multiplier in the L1-on-ball prox.
pub const RADIAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegularizerKind<S> {
    Zero,
    L1 {
        weight: S,
    },
    /// Indicator of the feasible set. `H` is only defined on `X`, where it vanishes.
    IndicatorOfDomain,
}

/// The regularizer `H` shared by every round's loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Regularizer<S> {
    kind: RegularizerKind<S>,
}

impl<S: Scalar> Default for Regularizer<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Regularizer<S> {
    pub fn zero() -> Self {
        Self {
            kind: RegularizerKind::Zero,
        }
    }

    pub fn l1(weight: S) -> Result<Self> {
        if !(weight >= S::zero()) || !weight.is_finite() {
            return Err(Error::InvalidArgument(format!("L1 weight must be >= 0, got {weight}")));
        }
        Ok(Self {
            kind: RegularizerKind::L1 { weight },
        })
    }

    pub fn indicator() -> Self {
        Self {
            kind: RegularizerKind::IndicatorOfDomain,
        }
    }

    pub fn kind(&self) -> RegularizerKind<S> {
        self.kind
    }

    /// `H(x)` for `x` in the domain.
    pub fn value(&self, x: &[S]) -> S {
        match self.kind {
            RegularizerKind::Zero | RegularizerKind::IndicatorOfDomain => S::zero(),
            RegularizerKind::L1 { weight } => weight * norm_l1(x),
        }
    }

    /// An element of `dH(x)` relative to the interior of the domain (zero at kinks).
    pub fn subgradient(&self, x: &[S]) -> Vec<S> {
        match self.kind {
            RegularizerKind::Zero | RegularizerKind::IndicatorOfDomain => vec![S::zero(); x.len()],
            RegularizerKind::L1 { weight } => x
                .iter()
                .map(|&v| {
                    if v > S::zero() {
                        weight
                    } else if v < S::zero() {
                        -weight
                    } else {
                        S::zero()
                    }
                })
                .collect(),
        }
    }

    /// Largest Lipschitz constant of `H` on `R^d` in the Euclidean norm.
    pub fn lipschitz(&self, dimension: usize) -> S {
        match self.kind {
            RegularizerKind::Zero | RegularizerKind::IndicatorOfDomain => S::zero(),
            RegularizerKind::L1 { weight } => weight * S::from_count(dimension).sqrt(),
        }
    }
}

pub fn project<S: Scalar>(domain: &DomainSpec<S>, z: &[S]) -> Vec<S> {
    domain.project(z)
}

pub fn prox<S: Scalar>(reg: &Regularizer<S>, domain: &DomainSpec<S>, x_prime: &[S], eta: S) -> Result<Vec<S>> {
    if !(eta > S::zero()) {
        return Err(Error::NonpositiveStep(eta.to_f64_lossy()));
    }
    if x_prime.len() != domain.dimension() {
        return Err(Error::DimensionMismatch {
            expected: domain.dimension(),
            got: x_prime.len(),
        });
    }
    if !crate::vector::is_finite(x_prime) {
        return Err(Error::InvalidArgument("prox input is not finite".into()));
    }
    let weight = match reg.kind {
        RegularizerKind::Zero | RegularizerKind::IndicatorOfDomain => return Ok(domain.project(x_prime)),
        RegularizerKind::L1 { weight } => weight,
    };
    let threshold = eta * weight;
    match domain.kind() {
        // separable: the 1-d constrained minimizer is the clamped soft-threshold
        DomainKind::Box { lower, upper } => Ok(x_prime
            .iter()
            .zip(lower)
            .zip(upper)
            .map(|((&x, &l), &u)| soft_threshold(x, threshold).max(l).min(u))
            .collect()),
        DomainKind::EuclideanBall { center, radius } => Ok(l1_ball_prox(x_prime, threshold, center, *radius)),
    }
}

/// Minimizer of `tau |x|_1 + |x - a|^2 / 2` over `|x - c| <= r`.
///
/// With multiplier `mu >= 0` for the ball, the minimizer is
/// `S_{tau rho}(rho a + (1 - rho) c)` where `rho = 1 / (1 + mu)`; the distance to `c` is
/// nondecreasing in `rho`, so the active `rho` is found by bisection on `[0, 1]`.
fn l1_ball_prox<S: Scalar>(a: &[S], tau: S, center: &[S], radius: S) -> Vec<S> {
    let candidate = |rho: S| -> Vec<S> {
        a.iter()
            .zip(center)
            .map(|(&ai, &ci)| soft_threshold(rho * ai + (S::one() - rho) * ci, tau * rho))
            .collect()
    };
    let free = candidate(S::one());
    if dist(&free, center) <= radius {
        return free;
    }
    let (mut lo, mut hi) = (S::zero(), S::one());
    let tol = S::lit(RADIAL_TOL);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * S::half();
        if mid <= lo || mid >= hi {
            break;
        }
        if dist(&candidate(mid), center) > radius {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut x = candidate(lo);
    // lo is on the feasible side; absorb rounding in the distance computation
    let d = dist(&x, center);
    if d > radius {
        let s = radius / d;
        for (xi, &ci) in x.iter_mut().zip(center) {
            *xi = ci + (*xi - ci) * s;
        }
    }
    x
}
