//! Exhaustive search over a lattice restriction of `X^T`, for tiny instances.

use crate::budget::DynamicsBudget;
use crate::domain::{DomainKind, DomainSpec};
use crate::loss::LossFunction;
use crate::sequence::ComparatorSequence;
use crate::vector::{dist, norm};
use crate::{Error, Result, Scalar};

use super::{OracleMethod, OracleSolution};

pub const GRID_MAX_DIMENSION: usize = 2;
pub const GRID_MAX_HORIZON: usize = 4;
/// Upper limit on `(grid points)^T`.
pub const GRID_MAX_SEQUENCES: f64 = 2e9;

/// Lattice points `lower + k h` in the domain's bounding box that lie in the domain.
pub fn grid_points<S: Scalar>(domain: &DomainSpec<S>, resolution: S) -> Result<Vec<Vec<S>>> {
    if !(resolution > S::zero()) || !resolution.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let d = domain.dimension();
    if d > GRID_MAX_DIMENSION {
        return Err(Error::GridOutOfRange(format!("dimension {d} > {GRID_MAX_DIMENSION}")));
    }
    let (lower, upper): (Vec<S>, Vec<S>) = match domain.kind() {
        DomainKind::Box { lower, upper } => (lower.clone(), upper.clone()),
        DomainKind::EuclideanBall { center, radius } => (
            center.iter().map(|&c| c - *radius).collect(),
            center.iter().map(|&c| c + *radius).collect(),
        ),
    };
    let axes: Vec<Vec<S>> = lower
        .iter()
        .zip(&upper)
        .map(|(&l, &u)| {
            let steps = ((u - l) / resolution + S::lit(1e-9)).floor().to_f64_lossy() as usize;
            (0..=steps).map(|k| l + S::from_count(k) * resolution).collect()
        })
        .collect();
    let mut points: Vec<Vec<S>> = vec![vec![]];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let tol = S::lit(1e-12).max(S::epsilon() * S::lit(16.0));
    points.retain(|p| domain.contains_tol(p, tol));
    Ok(points)
}

/// Exact minimum of `sum_t f_t(y_t)` over grid sequences within the budget (branch and bound).
pub fn grid_oracle<S: Scalar>(
    losses: &[LossFunction<S>],
    domain: &DomainSpec<S>,
    budget: &DynamicsBudget<S>,
    resolution: S,
) -> Result<OracleSolution<S>> {
    let horizon = losses.len();
    if horizon == 0 {
        return Err(Error::EmptyComparator);
    }
    if horizon > GRID_MAX_HORIZON {
        return Err(Error::GridOutOfRange(format!("horizon {horizon} > {GRID_MAX_HORIZON}")));
    }
    let points = grid_points(domain, resolution)?;
    if points.is_empty() {
        return Err(Error::GridOutOfRange("no grid point inside the domain".into()));
    }
    let sequences = (points.len() as f64).powi(horizon as i32);
    if sequences > GRID_MAX_SEQUENCES {
        return Err(Error::GridOutOfRange(format!(
            "{} points over {horizon} rounds is {sequences:e} sequences",
            points.len()
        )));
    }
    let table: Vec<Vec<S>> = losses
        .iter()
        .map(|f| points.iter().map(|p| f.value(p)).collect())
        .collect();
    let mut rest = vec![S::zero(); horizon + 1];
    for t in (0..horizon).rev() {
        let best = table[t].iter().copied().fold(S::infinity(), S::min);
        rest[t] = rest[t + 1] + best;
    }
    let weights: Vec<S> = (1..horizon).map(|t| S::from_count(t).powf(budget.beta())).collect();

    let mut search = Search {
        points: &points,
        table: &table,
        rest: &rest,
        weights: &weights,
        budget,
        current: Vec::with_capacity(horizon),
        best_value: S::infinity(),
        best: Vec::new(),
        visited: 0,
    };
    search.descend(S::zero(), S::zero());
    if search.best.is_empty() {
        return Err(Error::Infeasible("no grid sequence satisfies the budget".into()));
    }
    let flat: Vec<S> = search.best.iter().flat_map(|&i| points[i].iter().copied()).collect();
    let visited = search.visited;
    let comparator = ComparatorSequence::from_flat(domain.dimension(), flat, budget.beta())?;
    let objective = comparator.points().zip(losses).map(|(y, f)| f.value(y)).sum();
    let residual = (comparator.weighted_path_length() - budget.d_beta()).max(S::zero());
    Ok(OracleSolution {
        comparator,
        objective,
        method: OracleMethod::GridSearch,
        iterations: visited,
        residual,
        converged: true,
        decrease_per_100: None,
    })
}

struct Search<'a, S: Scalar> {
    points: &'a [Vec<S>],
    table: &'a [Vec<S>],
    rest: &'a [S],
    weights: &'a [S],
    budget: &'a DynamicsBudget<S>,
    current: Vec<usize>,
    best_value: S,
    best: Vec<usize>,
    visited: usize,
}

impl<S: Scalar> Search<'_, S> {
    fn descend(&mut self, value: S, length: S) {
        let t = self.current.len();
        if t == self.table.len() {
            self.visited += 1;
            if value < self.best_value {
                self.best_value = value;
                self.best = self.current.clone();
            }
            return;
        }
        for i in 0..self.points.len() {
            let v = value + self.table[t][i];
            if v + self.rest[t + 1] >= self.best_value {
                continue;
            }
            let l = match self.current.last() {
                Some(&j) => length + self.weights[t - 1] * dist(&self.points[j], &self.points[i]),
                None => length,
            };
            if !self.budget.allows(l) {
                continue;
            }
            self.current.push(i);
            self.descend(v, l);
            self.current.pop();
        }
    }
}

/// `2 h sum_t L_t`, with `L_t` the largest subgradient norm of `f_t` over the grid.
pub fn grid_tolerance<S: Scalar>(losses: &[LossFunction<S>], domain: &DomainSpec<S>, resolution: S) -> Result<S> {
    let points = grid_points(domain, resolution)?;
    let lipschitz: S = losses
        .iter()
        .map(|f| {
            points
                .iter()
                .map(|p| norm(&f.full_subgradient(p)))
                .fold(S::zero(), S::max)
        })
        .sum();
    Ok(S::two() * resolution * lipschitz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::Regularizer;

    #[test]
    fn linear_three_round_instance() {
        let domain = DomainSpec::<f64>::unit_ball(1, 1.0).unwrap();
        let budget = DynamicsBudget::new(0.0, 1.0).unwrap();
        let losses: Vec<_> = [1.0, -1.0, 1.0]
            .iter()
            .map(|&v| LossFunction::linear(vec![v], Regularizer::zero()))
            .collect();
        let sol = grid_oracle(&losses, &domain, &budget, 0.01).unwrap();
        // min of y1 - y2 + y3 over |y2 - y1| + |y3 - y2| <= 1, e.g. (-1, -0.5, -1)
        let mut brute = f64::INFINITY;
        for a in -100..=100 {
            for b in -100..=100 {
                for c in -100..=100 {
                    let (y1, y2, y3) = (a as f64 / 100.0, b as f64 / 100.0, c as f64 / 100.0);
                    if (y2 - y1).abs() + (y3 - y2).abs() <= 1.0 + 1e-12 {
                        brute = brute.min(y1 - y2 + y3);
                    }
                }
            }
        }
        assert!((sol.objective - brute).abs() < 1e-12, "{} vs {brute}", sol.objective);
        assert!((sol.objective + 1.5).abs() < 1e-9);
        assert!(sol.comparator.weighted_path_length() <= 1.0 + 1e-9);
    }

    #[test]
    fn zero_losses_and_single_round() {
        let domain = DomainSpec::<f64>::cube(2, -1.0, 1.0, 1.0).unwrap();
        let budget = DynamicsBudget::new(0.0, 0.5).unwrap();
        let zero = vec![LossFunction::zero(2); 3];
        assert_eq!(grid_oracle(&zero, &domain, &budget, 0.5).unwrap().objective, 0.0);
        let one = vec![LossFunction::linear(vec![1.0, -2.0], Regularizer::zero())];
        let sol = grid_oracle(&one, &domain, &budget, 0.5).unwrap();
        assert_eq!(sol.objective, -3.0);
        assert_eq!(sol.comparator.point(0), &[-1.0, 1.0]);
    }

    #[test]
    fn out_of_range() {
        let budget = DynamicsBudget::new(0.0, 1.0).unwrap();
        let d3 = DomainSpec::<f64>::cube(3, -1.0, 1.0, 1.0).unwrap();
        let err = grid_oracle(&vec![LossFunction::zero(3); 2], &d3, &budget, 0.5).unwrap_err();
        assert!(err.to_string().starts_with("grid oracle out of range"));
        let d1 = DomainSpec::<f64>::cube(1, -1.0, 1.0, 1.0).unwrap();
        assert!(grid_oracle(&vec![LossFunction::zero(1); 5], &d1, &budget, 0.5).is_err());
        let d2 = DomainSpec::<f64>::cube(2, -1.0, 1.0, 1.0).unwrap();
        assert!(grid_oracle(&vec![LossFunction::zero(2); 4], &d2, &budget, 0.01).is_err());
    }

    #[test]
    fn ball_grid_filters_corners() {
        let domain = DomainSpec::<f64>::unit_ball(2, 1.0).unwrap();
        let pts = grid_points(&domain, 0.5).unwrap();
        assert!(pts.iter().all(|p| norm(p) <= 1.0 + 1e-12));
        assert_eq!(pts.len(), 13);
    }
}
