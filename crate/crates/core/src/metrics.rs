//! Regret metrics and path-length functionals.

use crate::budget::ShiftBudget;
use crate::loss::LossFunction;
use crate::sequence::{ComparatorSequence, Trajectory};
use crate::vector::dist;
use crate::{Error, Result, Scalar};

/// `sum_{t=1}^{T-1} t^beta |y_{t+1} - y_t|`
pub fn weighted_path_length<S: Scalar, P: AsRef<[S]>>(points: &[P], beta: S) -> Result<S> {
    if points.is_empty() {
        return Err(Error::EmptyComparator);
    }
    Ok(points
        .windows(2)
        .enumerate()
        .map(|(i, w)| S::from_count(i + 1).powf(beta) * dist(w[0].as_ref(), w[1].as_ref()))
        .sum())
}

pub(crate) fn weighted_path_length_flat<S: Scalar>(points: &[S], dimension: usize, beta: S) -> Result<S> {
    if points.is_empty() {
        return Err(Error::EmptyComparator);
    }
    let rows: Vec<&[S]> = points.chunks_exact(dimension).collect();
    weighted_path_length(&rows, beta)
}

pub(crate) fn shift_count_flat<S: Scalar>(points: &[S], dimension: usize) -> usize {
    let rows: Vec<&[S]> = points.chunks_exact(dimension).collect();
    rows.windows(2).filter(|w| w[0] != w[1]).count()
}

fn check_lengths<S: Scalar>(
    traj: &Trajectory<S>,
    comparator: &ComparatorSequence<S>,
    losses: &[LossFunction<S>],
) -> Result<()> {
    let t = traj.horizon();
    if comparator.horizon() != t {
        return Err(Error::LengthMismatch {
            what: "comparator",
            got: comparator.horizon(),
            expected: t,
        });
    }
    if losses.len() != t {
        return Err(Error::LengthMismatch {
            what: "losses",
            got: losses.len(),
            expected: t,
        });
    }
    if comparator.dimension() != traj.dimension() {
        return Err(Error::DimensionMismatch {
            expected: traj.dimension(),
            got: comparator.dimension(),
        });
    }
    Ok(())
}

/// `sum_t f_t(x_t) - sum_t f_t(y_t)`, with the learner's losses re-evaluated from the decisions.
///
/// Against a particular feasible comparator this lower-bounds the dynamic regret; against the
/// offline optimum it equals it.
pub fn dynamic_regret<S: Scalar>(
    traj: &Trajectory<S>,
    comparator: &ComparatorSequence<S>,
    losses: &[LossFunction<S>],
) -> Result<S> {
    check_lengths(traj, comparator, losses)?;
    Ok(traj
        .decisions()
        .zip(comparator.points())
        .zip(losses)
        .map(|((x, y), f)| f.value(x) - f.value(y))
        .sum())
}

/// Regret against a comparator that may shift at most `M` times.
pub fn shifting_regret<S: Scalar>(
    traj: &Trajectory<S>,
    comparator: &ComparatorSequence<S>,
    losses: &[LossFunction<S>],
    shifts: ShiftBudget,
) -> Result<S> {
    comparator.check_shift_feasible(shifts)?;
    dynamic_regret(traj, comparator, losses)
}

/// Regret against one fixed point.
pub fn static_regret<S: Scalar>(traj: &Trajectory<S>, point: &[S], losses: &[LossFunction<S>]) -> Result<S> {
    let comparator = ComparatorSequence::constant(point, traj.horizon().max(1), S::zero())?;
    if traj.horizon() == 0 {
        return Err(Error::EmptyComparator);
    }
    dynamic_regret(traj, &comparator, losses)
}

/// Parameters a report was evaluated at.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportParameters<S> {
    pub horizon: usize,
    pub beta: S,
    pub d_beta: S,
    pub diameter_sq_bound: S,
    pub subgrad_sq_bound: S,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegretReport<S> {
    pub static_regret: Option<S>,
    pub dynamic_regret: Option<S>,
    pub shifting_regret: Option<S>,
    pub theory_upper: S,
    pub theory_lower: S,
    pub parameters: ReportParameters<S>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{AbsoluteDeviation, ConvexLoss};
    use crate::prox::Regularizer;
    use std::sync::Arc;

    /// Second, index-driven evaluation of the weighted path length.
    #[allow(clippy::needless_range_loop)]
    fn path_length_loop(points: &[Vec<f64>], beta: f64) -> f64 {
        let mut total = 0.0;
        let mut t = 1usize;
        while t < points.len() {
            let mut sq = 0.0;
            for k in 0..points[t].len() {
                sq += (points[t][k] - points[t - 1][k]).powi(2);
            }
            total += (t as f64).powf(beta) * sq.sqrt();
            t += 1;
        }
        total
    }

    #[test]
    fn path_length_examples() {
        let c = vec![vec![0.3, -0.2]; 5];
        assert_eq!(weighted_path_length(&c, 0.7).unwrap(), 0.0);
        let y = vec![vec![0.0], vec![1.0], vec![3.0]];
        assert_eq!(weighted_path_length(&y, 0.0).unwrap(), 3.0);
        let oracle = path_length_loop(&y, 1.0);
        assert_eq!(oracle, 5.0);
        assert_eq!(weighted_path_length(&y, 1.0).unwrap(), oracle);
        assert_eq!(weighted_path_length(&[vec![2.0]], 0.5).unwrap(), 0.0);
        let empty: Vec<Vec<f64>> = vec![];
        assert_eq!(
            weighted_path_length(&empty, 0.0).unwrap_err().to_string(),
            "empty comparator"
        );
    }

    fn abs_losses(t: usize) -> Vec<LossFunction<f64>> {
        (0..t)
            .map(|_| {
                let f: Arc<dyn ConvexLoss<f64>> = Arc::new(AbsoluteDeviation {
                    weight: 1.0,
                    center: vec![0.0],
                });
                LossFunction::new(f, Regularizer::zero())
            })
            .collect()
    }

    fn traj(xs: &[f64], losses: &[LossFunction<f64>]) -> Trajectory<f64> {
        let l = xs.iter().zip(losses).map(|(&x, f)| f.value(&[x])).collect();
        Trajectory::new(1, xs.to_vec(), l, None).unwrap()
    }

    #[test]
    fn dynamic_regret_examples() {
        let losses = abs_losses(2);
        let x = traj(&[1.0, 1.0], &losses);
        let y = ComparatorSequence::from_flat(1, vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(dynamic_regret(&x, &y, &losses).unwrap(), 2.0);
        let same = ComparatorSequence::from_flat(1, vec![1.0, 1.0], 0.0).unwrap();
        assert_eq!(dynamic_regret(&x, &same, &losses).unwrap(), 0.0);
        let zeros = vec![LossFunction::zero(1), LossFunction::zero(1)];
        assert_eq!(dynamic_regret(&traj(&[0.4, -0.9], &zeros), &y, &zeros).unwrap(), 0.0);
        let short = ComparatorSequence::from_flat(1, vec![0.0], 0.0).unwrap();
        assert!(matches!(
            dynamic_regret(&x, &short, &losses),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn shifting_regret_examples() {
        let lin: Vec<LossFunction<f64>> = (0..2)
            .map(|_| LossFunction::linear(vec![1.0], Regularizer::zero()))
            .collect();
        let x = traj(&[1.0, 1.0], &lin);
        let y = ComparatorSequence::from_flat(1, vec![-1.0, -1.0], 0.0).unwrap();
        assert_eq!(y.shift_count(), 0);
        assert_eq!(shifting_regret(&x, &y, &lin, ShiftBudget::new(0)).unwrap(), 4.0);
        assert_eq!(static_regret(&x, &[-1.0], &lin).unwrap(), 4.0);

        let jump = ComparatorSequence::from_flat(1, vec![0.0, 0.0, 0.5, 0.5], 0.0).unwrap();
        assert_eq!(jump.shift_count(), 1);
        let lin4: Vec<LossFunction<f64>> = (0..4)
            .map(|_| LossFunction::linear(vec![1.0], Regularizer::zero()))
            .collect();
        let x4 = traj(&[0.0; 4], &lin4);
        assert!(shifting_regret(&x4, &jump, &lin4, ShiftBudget::new(0)).is_err());
        assert_eq!(shifting_regret(&x4, &jump, &lin4, ShiftBudget::new(1)).unwrap(), -1.0);
    }

    #[test]
    fn monotone_in_beta() {
        let y: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![((i * 7) % 5) as f64 * 0.1, (i % 3) as f64 * 0.2])
            .collect();
        let mut prev = 0.0;
        for k in 0..10 {
            let v = weighted_path_length(&y, k as f64 / 10.0).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
