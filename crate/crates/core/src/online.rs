//! The online protocol: the learner commits to `x_t` before the stream reveals `f_t`.

use crate::loss::LossFunction;
use crate::sequence::Trajectory;
use crate::{Error, Result, Scalar};

pub trait Learner<S: Scalar> {
    fn dimension(&self) -> usize;
    fn predict(&mut self) -> Vec<S>;
    fn observe(&mut self, loss: &LossFunction<S>) -> Result<()>;
    /// Decision after the last update (`x_{T+1}`), if the learner tracks one.
    fn final_decision(&self) -> Option<Vec<S>> {
        None
    }
}

pub trait LossStream<S: Scalar> {
    fn horizon(&self) -> usize;
    /// Reveals round `round`'s loss (1-based) once the learner has committed to `prediction`.
    fn reveal(&mut self, round: usize, prediction: &[S]) -> Result<LossFunction<S>>;
}

/// A precomputed, oblivious loss sequence.
#[derive(Clone, Copy, Debug)]
pub struct FixedLosses<'a, S: Scalar>(pub &'a [LossFunction<S>]);

impl<S: Scalar> LossStream<S> for FixedLosses<'_, S> {
    fn horizon(&self) -> usize {
        self.0.len()
    }

    fn reveal(&mut self, round: usize, _prediction: &[S]) -> Result<LossFunction<S>> {
        self.0
            .get(round - 1)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("round {round} beyond horizon")))
    }
}

/// Plays the protocol for the stream's horizon and records `f_t(x_t)`.
pub fn run_online<S: Scalar, L: Learner<S> + ?Sized, F: LossStream<S> + ?Sized>(
    learner: &mut L,
    stream: &mut F,
) -> Result<Trajectory<S>> {
    let horizon = stream.horizon();
    let dimension = learner.dimension();
    let mut decisions = Vec::with_capacity(horizon * dimension);
    let mut losses = Vec::with_capacity(horizon);
    for round in 1..=horizon {
        let x = learner.predict();
        if x.len() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: x.len(),
            });
        }
        let f = stream.reveal(round, &x)?;
        losses.push(f.value(&x));
        decisions.extend_from_slice(&x);
        learner.observe(&f)?;
    }
    Trajectory::new(dimension, decisions, losses, learner.final_decision())
}

/// Always plays the same point.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedLearner<S> {
    point: Vec<S>,
}

impl<S: Scalar> FixedLearner<S> {
    pub fn new(point: Vec<S>) -> Self {
        Self { point }
    }

    /// The play-zero learner of the lower-bound game.
    pub fn zero(dimension: usize) -> Self {
        Self::new(vec![S::zero(); dimension])
    }
}

impl<S: Scalar> Learner<S> for FixedLearner<S> {
    fn dimension(&self) -> usize {
        self.point.len()
    }

    fn predict(&mut self) -> Vec<S> {
        self.point.clone()
    }

    fn observe(&mut self, _loss: &LossFunction<S>) -> Result<()> {
        Ok(())
    }

    fn final_decision(&self) -> Option<Vec<S>> {
        Some(self.point.clone())
    }
}
