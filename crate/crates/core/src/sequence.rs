//! Decision and comparator sequences, stored row-major (`horizon x dimension`).
//!
//! Rounds are 1-indexed in the math and 0-indexed in storage: row `i` holds round `i + 1`.

use crate::budget::{DynamicsBudget, ShiftBudget};
use crate::domain::DomainSpec;
use crate::metrics::{shift_count_flat, weighted_path_length_flat};
use crate::{Error, Result, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<S> {
    dimension: usize,
    decisions: Vec<S>,
    losses: Vec<S>,
    final_decision: Option<Vec<S>>,
}

impl<S: Scalar> Trajectory<S> {
    pub fn new(dimension: usize, decisions: Vec<S>, losses: Vec<S>, final_decision: Option<Vec<S>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if decisions.len() != losses.len() * dimension {
            return Err(Error::LengthMismatch {
                what: "decisions",
                got: decisions.len() / dimension,
                expected: losses.len(),
            });
        }
        Ok(Self {
            dimension,
            decisions,
            losses,
            final_decision,
        })
    }

    pub fn horizon(&self) -> usize {
        self.losses.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `x_{i+1}`
    pub fn decision(&self, i: usize) -> &[S] {
        &self.decisions[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn decisions(&self) -> impl ExactSizeIterator<Item = &[S]> + '_ {
        self.decisions.chunks_exact(self.dimension)
    }

    pub fn decisions_flat(&self) -> &[S] {
        &self.decisions
    }

    /// `f_t(x_t)` as suffered online.
    pub fn losses(&self) -> &[S] {
        &self.losses
    }

    pub fn cumulative_loss(&self) -> S {
        self.losses.iter().copied().sum()
    }

    /// `x_{T+1}`, the point returned after the last update.
    pub fn final_decision(&self) -> Option<&[S]> {
        self.final_decision.as_deref()
    }

    /// Every decision lies in `X` up to the membership tolerance.
    pub fn check_feasible(&self, domain: &DomainSpec<S>) -> Result<()> {
        for (i, x) in self.decisions().enumerate() {
            if !domain.contains(x) {
                return Err(Error::Infeasible(format!("decision {} lies outside the domain", i + 1)));
            }
        }
        Ok(())
    }
}

/// Reference sequence `{y_t}` with its weighted path length and shift count.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparatorSequence<S> {
    dimension: usize,
    points: Vec<S>,
    beta: S,
    weighted_path_length: S,
    shift_count: usize,
}

impl<S: Scalar> ComparatorSequence<S> {
    /// `points` is row-major; the path length is weighted by `t^beta`.
    pub fn from_flat(dimension: usize, points: Vec<S>, beta: S) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if !points.len().is_multiple_of(dimension) {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: points.len() % dimension,
            });
        }
        let weighted_path_length = weighted_path_length_flat(&points, dimension, beta)?;
        let shift_count = shift_count_flat(&points, dimension);
        Ok(Self {
            dimension,
            points,
            beta,
            weighted_path_length,
            shift_count,
        })
    }

    pub fn from_points<P: AsRef<[S]>>(points: &[P], beta: S) -> Result<Self> {
        let dimension = points.first().ok_or(Error::EmptyComparator)?.as_ref().len();
        let mut flat = Vec::with_capacity(points.len() * dimension);
        for p in points {
            if p.as_ref().len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: p.as_ref().len(),
                });
            }
            flat.extend_from_slice(p.as_ref());
        }
        Self::from_flat(dimension, flat, beta)
    }

    /// The same point for every round.
    pub fn constant(point: &[S], horizon: usize, beta: S) -> Result<Self> {
        let mut flat = Vec::with_capacity(point.len() * horizon);
        for _ in 0..horizon {
            flat.extend_from_slice(point);
        }
        Self::from_flat(point.len(), flat, beta)
    }

    pub fn horizon(&self) -> usize {
        self.points.len() / self.dimension
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn point(&self, i: usize) -> &[S] {
        &self.points[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[S]> + '_ {
        self.points.chunks_exact(self.dimension)
    }

    pub fn points_flat(&self) -> &[S] {
        &self.points
    }

    pub fn weighted_path_length(&self) -> S {
        self.weighted_path_length
    }

    pub fn shift_count(&self) -> usize {
        self.shift_count
    }

    /// Recomputes the path length and compares with the stored value.
    pub fn verify(&self) -> bool {
        match weighted_path_length_flat(&self.points, self.dimension, self.beta) {
            Ok(v) => (v - self.weighted_path_length).abs() <= S::lit(1e-9) * (S::one() + v.abs()),
            Err(_) => false,
        }
    }

    pub fn in_domain(&self, domain: &DomainSpec<S>, tol: S) -> bool {
        self.points().all(|y| domain.contains_tol(y, tol))
    }

    /// Membership in `L^T_{D_beta}` intersected with `X^T`.
    pub fn check_feasible(&self, domain: &DomainSpec<S>, budget: &DynamicsBudget<S>) -> Result<()> {
        if !self.in_domain(domain, crate::domain::membership_tol()) {
            return Err(Error::Infeasible("comparator leaves the domain".into()));
        }
        let length = if self.beta == budget.beta() {
            self.weighted_path_length
        } else {
            weighted_path_length_flat(&self.points, self.dimension, budget.beta())?
        };
        if !budget.allows(length) {
            return Err(Error::Infeasible(format!(
                "weighted path length {length} exceeds D_beta = {}",
                budget.d_beta()
            )));
        }
        Ok(())
    }

    pub fn check_shift_feasible(&self, shifts: ShiftBudget) -> Result<()> {
        if self.shift_count > shifts.m() {
            return Err(Error::Infeasible(format!(
                "comparator shifts {} times, budget M = {}",
                self.shift_count,
                shifts.m()
            )));
        }
        Ok(())
    }
}
