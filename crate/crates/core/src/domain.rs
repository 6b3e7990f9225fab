//! Feasible sets with exact Euclidean projections.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::vector::{dist, norm};
use crate::{Error, Result, Scalar};

/// Membership residual accepted by [`DomainSpec::contains`] (for `f64`).
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// `MEMBERSHIP_TOL`, widened to a few ulps for lower-precision scalars.
pub fn membership_tol<S: Scalar>() -> S {
    S::lit(MEMBERSHIP_TOL).max(S::epsilon() * S::lit(16.0))
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind<S> {
    EuclideanBall { center: Vec<S>, radius: S },
    Box { lower: Vec<S>, upper: Vec<S> },
}

/// A convex compact set `X` together with the declared squared-diameter bound `R` and
/// squared-subgradient bound `G` that feed the learning-rate schedules.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec<S> {
    kind: DomainKind<S>,
    dimension: usize,
    diameter_sq_bound: S,
    subgrad_sq_bound: S,
}

impl<S: Scalar> DomainSpec<S> {
    /// Ball with `R` set to the exact squared diameter `4 r^2`.
    pub fn ball(center: Vec<S>, radius: S, subgrad_sq_bound: S) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidDomain("dimension must be at least 1".into()));
        }
        if !(radius > S::zero()) || !radius.is_finite() {
            return Err(Error::InvalidDomain(format!("radius must be positive, got {radius}")));
        }
        if !crate::vector::is_finite(&center) {
            return Err(Error::InvalidDomain("non-finite center".into()));
        }
        let dimension = center.len();
        let spec = Self {
            kind: DomainKind::EuclideanBall { center, radius },
            dimension,
            diameter_sq_bound: S::lit(4.0) * radius * radius,
            subgrad_sq_bound,
        };
        spec.check_subgrad_bound()?;
        Ok(spec)
    }

    /// Unit ball centred at the origin, the domain of the Rademacher lower-bound game.
    pub fn unit_ball(dimension: usize, subgrad_sq_bound: S) -> Result<Self> {
        Self::ball(vec![S::zero(); dimension], S::one(), subgrad_sq_bound)
    }

    pub fn boxed(lower: Vec<S>, upper: Vec<S>, subgrad_sq_bound: S) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidDomain("dimension must be at least 1".into()));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(&l, &u)| !(l <= u) || !l.is_finite() || !u.is_finite())
        {
            return Err(Error::InvalidDomain("box needs finite lower <= upper".into()));
        }
        let diameter_sq: S = lower.iter().zip(&upper).map(|(&l, &u)| (u - l) * (u - l)).sum();
        if !(diameter_sq > S::zero()) {
            return Err(Error::InvalidDomain("box is a single point".into()));
        }
        let dimension = lower.len();
        let spec = Self {
            kind: DomainKind::Box { lower, upper },
            dimension,
            diameter_sq_bound: diameter_sq,
            subgrad_sq_bound,
        };
        spec.check_subgrad_bound()?;
        Ok(spec)
    }

    /// `[lower, upper]^dimension`
    pub fn cube(dimension: usize, lower: S, upper: S, subgrad_sq_bound: S) -> Result<Self> {
        Self::boxed(vec![lower; dimension], vec![upper; dimension], subgrad_sq_bound)
    }

    /// Replaces the declared `R`. It may be loose but never smaller than the true squared diameter.
    pub fn with_diameter_sq_bound(mut self, bound: S) -> Result<Self> {
        let exact = self.exact_diameter_sq();
        if !(bound >= exact * (S::one() - S::lit(1e-12))) || !bound.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "declared R = {bound} is below the squared diameter {exact}"
            )));
        }
        self.diameter_sq_bound = bound;
        Ok(self)
    }

    pub fn with_subgrad_sq_bound(mut self, bound: S) -> Result<Self> {
        self.subgrad_sq_bound = bound;
        self.check_subgrad_bound()?;
        Ok(self)
    }

    fn check_subgrad_bound(&self) -> Result<()> {
        if !(self.subgrad_sq_bound > S::zero()) || !self.subgrad_sq_bound.is_finite() {
            return Err(Error::InvalidDomain(format!(
                "G must be positive and finite, got {}",
                self.subgrad_sq_bound
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> &DomainKind<S> {
        &self.kind
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `R`
    pub fn diameter_sq_bound(&self) -> S {
        self.diameter_sq_bound
    }

    /// `G`
    pub fn subgrad_sq_bound(&self) -> S {
        self.subgrad_sq_bound
    }

    pub fn exact_diameter_sq(&self) -> S {
        match &self.kind {
            DomainKind::EuclideanBall { radius, .. } => S::lit(4.0) * *radius * *radius,
            DomainKind::Box { lower, upper } => lower.iter().zip(upper).map(|(&l, &u)| (u - l) * (u - l)).sum(),
        }
    }

    /// Ball centre or box midpoint; the default starting decision.
    pub fn center(&self) -> Vec<S> {
        match &self.kind {
            DomainKind::EuclideanBall { center, .. } => center.clone(),
            DomainKind::Box { lower, upper } => lower.iter().zip(upper).map(|(&l, &u)| (l + u) * S::half()).collect(),
        }
    }

    pub fn project(&self, z: &[S]) -> Vec<S> {
        let mut out = z.to_vec();
        self.project_in_place(&mut out);
        out
    }

    pub fn project_in_place(&self, z: &mut [S]) {
        debug_assert_eq!(z.len(), self.dimension);
        match &self.kind {
            DomainKind::EuclideanBall { center, radius } => {
                let d = dist(z, center);
                if d > *radius {
                    let scale = *radius / d;
                    for (zi, &ci) in z.iter_mut().zip(center) {
                        *zi = ci + (*zi - ci) * scale;
                    }
                }
            }
            DomainKind::Box { lower, upper } => {
                for ((zi, &l), &u) in z.iter_mut().zip(lower).zip(upper) {
                    *zi = zi.max(l).min(u);
                }
            }
        }
    }

    /// Euclidean distance from `x` to the set.
    pub fn residual(&self, x: &[S]) -> S {
        match &self.kind {
            DomainKind::EuclideanBall { center, radius } => (dist(x, center) - *radius).max(S::zero()),
            DomainKind::Box { lower, upper } => x
                .iter()
                .zip(lower)
                .zip(upper)
                .map(|((&xi, &l), &u)| {
                    let e = (l - xi).max(xi - u).max(S::zero());
                    e * e
                })
                .sum::<S>()
                .sqrt(),
        }
    }

    pub fn contains_tol(&self, x: &[S], tol: S) -> bool {
        x.len() == self.dimension && x.iter().all(|v| v.is_finite()) && self.residual(x) <= tol
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.contains_tol(x, membership_tol())
    }

    /// Uniform sample from the set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<S> {
        match &self.kind {
            DomainKind::EuclideanBall { center, radius } => {
                let dir: Vec<f64> = (0..self.dimension).map(|_| rng.sample(StandardNormal)).collect();
                let n = norm(&dir);
                let u: f64 = rng.gen::<f64>().powf(1.0 / self.dimension as f64);
                let r = radius.to_f64_lossy();
                center
                    .iter()
                    .zip(&dir)
                    .map(|(&c, &g)| c + S::lit(if n > 0.0 { g / n * u * r } else { 0.0 }))
                    .collect()
            }
            DomainKind::Box { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(&l, &u)| l + (u - l) * S::lit(rng.gen::<f64>()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn interior_point_is_fixed() {
        let d = DomainSpec::unit_ball(2, 1.0).unwrap();
        assert_eq!(d.project(&[0.3, 0.4]), vec![0.3, 0.4]);
    }

    #[test]
    fn ball_projection_scales_radially() {
        let d = DomainSpec::unit_ball(2, 1.0).unwrap();
        let p = d.project(&[3.0, 4.0]);
        assert_abs_diff_eq!(p[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(norm(&p), 1.0, epsilon = 1e-15);
        // colinear with the input
        assert_abs_diff_eq!(p[0] * 4.0 - p[1] * 3.0, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn box_projection_clamps() {
        let d = DomainSpec::cube(2, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(d.project(&[-1.0, 2.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn declared_bounds() {
        let d = DomainSpec::unit_ball(3, 2.0).unwrap();
        assert_eq!(d.diameter_sq_bound(), 4.0);
        let b = DomainSpec::cube(2, -1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.diameter_sq_bound(), 8.0);
        assert!(b.clone().with_diameter_sq_bound(7.0).is_err());
        assert_eq!(b.with_diameter_sq_bound(9.0).unwrap().diameter_sq_bound(), 9.0);
        assert!(DomainSpec::unit_ball(0, 1.0).is_err());
        assert!(DomainSpec::unit_ball(1, 0.0).is_err());
        assert!(DomainSpec::ball(vec![0.0], -1.0, 1.0).is_err());
        assert!(DomainSpec::cube(1, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn centers() {
        let b = DomainSpec::boxed(vec![0.0, -2.0], vec![1.0, 2.0], 1.0).unwrap();
        assert_eq!(b.center(), vec![0.5, 0.0]);
    }

    #[test]
    fn f32_projection() {
        let d = DomainSpec::<f32>::unit_ball(2, 1.0).unwrap();
        let p = d.project(&[3.0, 4.0]);
        assert!((p[0] - 0.6).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn projection_idempotent_and_within_diameter(
            z in prop::collection::vec(-10.0f64..10.0, 3),
            w in prop::collection::vec(-10.0f64..10.0, 3),
            use_ball in any::<bool>(),
        ) {
            let d = if use_ball {
                DomainSpec::ball(vec![0.5, -0.5, 1.0], 2.0, 1.0).unwrap()
            } else {
                DomainSpec::boxed(vec![-1.0, 0.0, -3.0], vec![1.0, 2.0, -1.0], 1.0).unwrap()
            };
            let p = d.project(&z);
            let pp = d.project(&p);
            for (a, b) in p.iter().zip(&pp) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            prop_assert!(d.contains(&p));
            let q = d.project(&w);
            prop_assert!(crate::vector::dist_sq(&p, &q) <= d.diameter_sq_bound() * (1.0 + 1e-12));
        }
    }
}
