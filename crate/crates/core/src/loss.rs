//! Composite losses `f_t = F_t + H`.

use std::fmt::Debug;
use std::sync::Arc;

use rand::Rng;

use crate::domain::DomainSpec;
use crate::prox::Regularizer;
use crate::vector::{dot, norm_sq, sub};
use crate::{Error, Result, Scalar};

/// Value and subgradient oracle for the convex part `F_t`. Implementations must be pure.
pub trait ConvexLoss<S: Scalar>: Debug + Send + Sync {
    fn value(&self, x: &[S]) -> S;
    /// Some element of `dF(x)`.
    fn subgradient(&self, x: &[S]) -> Vec<S>;
}

/// `<coef, x>`
#[derive(Clone, Debug, PartialEq)]
pub struct Linear<S> {
    pub coef: Vec<S>,
}

impl<S: Scalar> ConvexLoss<S> for Linear<S> {
    fn value(&self, x: &[S]) -> S {
        dot(&self.coef, x)
    }

    fn subgradient(&self, _x: &[S]) -> Vec<S> {
        self.coef.clone()
    }
}

/// `<linear, x> + (curvature / 2) |x - center|^2`
#[derive(Clone, Debug, PartialEq)]
pub struct Quadratic<S> {
    pub linear: Vec<S>,
    pub curvature: S,
    pub center: Vec<S>,
}

impl<S: Scalar> ConvexLoss<S> for Quadratic<S> {
    fn value(&self, x: &[S]) -> S {
        dot(&self.linear, x) + self.curvature * S::half() * crate::vector::dist_sq(x, &self.center)
    }

    fn subgradient(&self, x: &[S]) -> Vec<S> {
        x.iter()
            .zip(&self.center)
            .zip(&self.linear)
            .map(|((&xi, &ci), &li)| li + self.curvature * (xi - ci))
            .collect()
    }
}

/// `weight * |x - center|_1`, zero subgradient on kinks.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsoluteDeviation<S> {
    pub weight: S,
    pub center: Vec<S>,
}

impl<S: Scalar> ConvexLoss<S> for AbsoluteDeviation<S> {
    fn value(&self, x: &[S]) -> S {
        self.weight * crate::vector::norm_l1(&sub(x, &self.center))
    }

    fn subgradient(&self, x: &[S]) -> Vec<S> {
        x.iter()
            .zip(&self.center)
            .map(|(&xi, &ci)| {
                if xi > ci {
                    self.weight
                } else if xi < ci {
                    -self.weight
                } else {
                    S::zero()
                }
            })
            .collect()
    }
}

/// Identically zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroLoss {
    pub dimension: usize,
}

impl<S: Scalar> ConvexLoss<S> for ZeroLoss {
    fn value(&self, _x: &[S]) -> S {
        S::zero()
    }

    fn subgradient(&self, x: &[S]) -> Vec<S> {
        vec![S::zero(); x.len()]
    }
}

/// Nonnegative combination of convex parts.
#[derive(Clone, Debug)]
pub struct Sum<S: Scalar> {
    pub parts: Vec<Arc<dyn ConvexLoss<S>>>,
}

impl<S: Scalar> ConvexLoss<S> for Sum<S> {
    fn value(&self, x: &[S]) -> S {
        self.parts.iter().map(|p| p.value(x)).sum()
    }

    fn subgradient(&self, x: &[S]) -> Vec<S> {
        let mut g = vec![S::zero(); x.len()];
        for p in &self.parts {
            crate::vector::axpy(S::one(), &p.subgradient(x), &mut g);
        }
        g
    }
}

/// One round's loss: the convex part `F_t` plus the shared regularizer `H`.
#[derive(Clone, Debug)]
pub struct LossFunction<S: Scalar> {
    smooth: Arc<dyn ConvexLoss<S>>,
    regularizer: Regularizer<S>,
}

impl<S: Scalar> LossFunction<S> {
    pub fn new(smooth: Arc<dyn ConvexLoss<S>>, regularizer: Regularizer<S>) -> Self {
        Self { smooth, regularizer }
    }

    pub fn linear(coef: Vec<S>, regularizer: Regularizer<S>) -> Self {
        Self::new(Arc::new(Linear { coef }), regularizer)
    }

    pub fn zero(dimension: usize) -> Self {
        Self::new(Arc::new(ZeroLoss { dimension }), Regularizer::zero())
    }

    /// `f_t(x) = F_t(x) + H(x)`
    pub fn value(&self, x: &[S]) -> S {
        self.smooth.value(x) + self.regularizer.value(x)
    }

    /// `F_t(x)`
    pub fn smooth_value(&self, x: &[S]) -> S {
        self.smooth.value(x)
    }

    /// `G_t(x)`
    pub fn subgradient(&self, x: &[S]) -> Vec<S> {
        self.smooth.subgradient(x)
    }

    /// An element of `d(F_t + H)(x)`.
    pub fn full_subgradient(&self, x: &[S]) -> Vec<S> {
        let mut g = self.smooth.subgradient(x);
        crate::vector::axpy(S::one(), &self.regularizer.subgradient(x), &mut g);
        g
    }

    pub fn regularizer(&self) -> &Regularizer<S> {
        &self.regularizer
    }

    pub fn smooth_part(&self) -> &Arc<dyn ConvexLoss<S>> {
        &self.smooth
    }

    /// Samples the domain and checks `|G_t(x)|^2 <= G`. Returns the largest squared norm seen.
    pub fn check_subgradient_bound<R: Rng + ?Sized>(
        &self,
        domain: &DomainSpec<S>,
        samples: usize,
        rng: &mut R,
    ) -> Result<S> {
        let bound = domain.subgrad_sq_bound() * (S::one() + S::lit(1e-9));
        let mut worst = S::zero();
        for _ in 0..samples {
            let x = domain.sample(rng);
            let g = norm_sq(&self.subgradient(&x));
            if !g.is_finite() || g > bound {
                return Err(Error::AssumptionViolated(format!(
                    "|G_t(x)|^2 = {g} exceeds G = {} at {x:?}",
                    domain.subgrad_sq_bound()
                )));
            }
            worst = worst.max(g);
        }
        Ok(worst)
    }

    /// Samples pairs and checks the subgradient inequality `F(y) >= F(x) + <G(x), y - x>`.
    pub fn check_convexity<R: Rng + ?Sized>(&self, domain: &DomainSpec<S>, pairs: usize, rng: &mut R) -> Result<()> {
        for _ in 0..pairs {
            let x = domain.sample(rng);
            let y = domain.sample(rng);
            let fx = self.smooth.value(&x);
            let fy = self.smooth.value(&y);
            let lin = fx + dot(&self.smooth.subgradient(&x), &sub(&y, &x));
            let slack = S::lit(1e-9) * (S::one() + fx.abs() + fy.abs());
            if fy < lin - slack {
                return Err(Error::AssumptionViolated(format!(
                    "subgradient inequality fails: F(y) = {fy} < {lin}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[derive(Debug)]
    struct Concave;

    impl ConvexLoss<f64> for Concave {
        fn value(&self, x: &[f64]) -> f64 {
            -x[0] * x[0]
        }
        fn subgradient(&self, x: &[f64]) -> Vec<f64> {
            vec![-2.0 * x[0]]
        }
    }

    #[test]
    fn composite_value_adds_regularizer() {
        let f = LossFunction::linear(vec![1.0, -2.0], Regularizer::l1(0.5).unwrap());
        assert_eq!(f.value(&[1.0, 1.0]), -1.0 + 1.0);
        assert_eq!(f.smooth_value(&[1.0, 1.0]), -1.0);
        assert_eq!(f.subgradient(&[3.0, 3.0]), vec![1.0, -2.0]);
        assert_eq!(f.full_subgradient(&[3.0, -3.0]), vec![1.5, -2.5]);
    }

    #[test]
    fn quadratic_and_abs_oracles() {
        let q = Quadratic {
            linear: vec![1.0],
            curvature: 2.0,
            center: vec![0.5],
        };
        assert_eq!(q.value(&[1.5]), 1.5 + 1.0);
        assert_eq!(q.subgradient(&[1.5]), vec![3.0]);
        let a = AbsoluteDeviation {
            weight: 2.0,
            center: vec![0.0, 1.0],
        };
        assert_eq!(a.value(&[-1.0, 1.0]), 2.0);
        assert_eq!(a.subgradient(&[0.0, 2.0]), vec![0.0, 2.0]);
    }

    #[test]
    fn sampled_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let domain = DomainSpec::unit_ball(2, 2.0).unwrap();
        let ok = LossFunction::linear(vec![1.0, 1.0], Regularizer::zero());
        assert!(ok.check_subgradient_bound(&domain, 100, &mut rng).unwrap() <= 2.0);
        ok.check_convexity(&domain, 100, &mut rng).unwrap();
        let big = LossFunction::linear(vec![2.0, 0.0], Regularizer::zero());
        assert!(big.check_subgradient_bound(&domain, 10, &mut rng).is_err());
        let concave = LossFunction::new(Arc::new(Concave), Regularizer::zero());
        let line = DomainSpec::cube(1, -1.0, 1.0, 1.0).unwrap();
        assert!(concave.check_convexity(&line, 200, &mut rng).is_err());
    }
}
