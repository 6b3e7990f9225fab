//! The Rademacher game on the unit ball and its explicit block comparator.
//!
//! The adversary draws `v_t` uniformly from `{-1, +1}^d`, obliviously to the learner, and
//! plays the linear loss `f_t(x) = <-v_t, x>`. Regret against `y_1..y_T` is then
//! `sum_t <v_t, y_t> - sum_t <v_t, x_t>`, and a learner that always plays the centre has
//! regret equal to the comparator's gain `sum_t <v_t, y_t>`.
//!
//! The comparator splits the first `T1 = floor(T/2)` rounds into `N = ceil(D_beta / T1^beta)`
//! blocks (clamped to `[1, T1]`) of length `floor(T1 / N)`; the last block absorbs the rest of
//! the horizon. On block `i` it plays `u_i = s_i / (2 |s_i|)` with `s_i` the block's sign sum.
//! It switches at most `N - 1` times, each time at a round `<= T1`, by a distance `<= 1`, so
//! its weighted path length is at most `(N - 1) T1^beta <= D_beta`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::bounds::{theorem1_bound, theorem2_bound};
use crate::budget::DynamicsBudget;
use crate::domain::DomainSpec;
use crate::loss::LossFunction;
use crate::metrics::{dynamic_regret, RegretReport, ReportParameters};
use crate::online::{run_online, Learner, LossStream};
use crate::pog::schedule_corollary1;
use crate::prox::Regularizer;
use crate::sequence::ComparatorSequence;
use crate::vector::{dot, norm};
use crate::{Error, Result, Scalar};

/// `len` independent signs from a ChaCha8 stream; entry `k` is bit `k % 64` of the `k / 64`-th word.
pub fn rademacher_signs<S: Scalar>(seed: u64, len: usize) -> Vec<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let word = rng.next_u64();
        let take = (len - out.len()).min(64);
        out.extend((0..take).map(|b| if word >> b & 1 == 1 { S::one() } else { -S::one() }));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RademacherGame<S> {
    dimension: usize,
    horizon: usize,
    budget: DynamicsBudget<S>,
    /// Row-major `T x d`.
    signs: Vec<S>,
}

impl<S: Scalar> RademacherGame<S> {
    pub fn new(dimension: usize, horizon: usize, budget: DynamicsBudget<S>, seed: u64) -> Result<Self> {
        if dimension == 0 || horizon == 0 {
            return Err(Error::InvalidArgument("dimension and horizon must be positive".into()));
        }
        Ok(Self {
            dimension,
            horizon,
            budget,
            signs: rademacher_signs(seed, dimension * horizon),
        })
    }

    /// A game with a prescribed loss sequence (entries need not be signs).
    pub fn from_vectors(dimension: usize, vectors: Vec<S>, budget: DynamicsBudget<S>) -> Result<Self> {
        if dimension == 0 || vectors.is_empty() || !vectors.len().is_multiple_of(dimension) {
            return Err(Error::InvalidArgument(format!(
                "{} entries do not form rows of length {dimension}",
                vectors.len()
            )));
        }
        Ok(Self {
            dimension,
            horizon: vectors.len() / dimension,
            budget,
            signs: vectors,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn budget(&self) -> &DynamicsBudget<S> {
        &self.budget
    }

    /// `v_t` for round `t` (1-based).
    pub fn vector(&self, round: usize) -> &[S] {
        let i = round - 1;
        &self.signs[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn vectors_flat(&self) -> &[S] {
        &self.signs
    }

    /// The unit ball with `R = 4` and `G = d`.
    pub fn domain(&self) -> DomainSpec<S> {
        DomainSpec::unit_ball(self.dimension, S::from_count(self.dimension)).expect("positive dimension")
    }

    /// `f_t(x) = <-v_t, x>`
    pub fn loss(&self, round: usize) -> LossFunction<S> {
        LossFunction::linear(self.vector(round).iter().map(|&v| -v).collect(), Regularizer::zero())
    }

    pub fn losses(&self) -> Vec<LossFunction<S>> {
        (1..=self.horizon).map(|t| self.loss(t)).collect()
    }

    pub fn stream(&self) -> GameStream<'_, S> {
        GameStream { game: self }
    }
}

/// Reveals the game's losses without looking at the learner's predictions.
#[derive(Clone, Copy, Debug)]
pub struct GameStream<'a, S> {
    game: &'a RademacherGame<S>,
}

impl<S: Scalar> LossStream<S> for GameStream<'_, S> {
    fn horizon(&self) -> usize {
        self.game.horizon
    }

    fn reveal(&mut self, round: usize, _prediction: &[S]) -> Result<LossFunction<S>> {
        if round == 0 || round > self.game.horizon {
            return Err(Error::InvalidArgument(format!("round {round} beyond horizon")));
        }
        Ok(self.game.loss(round))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockComparatorPlan<S> {
    /// `T1 = floor(T/2)`
    pub first_half: usize,
    /// Half-open round ranges (0-based); the last one ends at `T`.
    pub blocks: Vec<(usize, usize)>,
    /// `u_i`, one per block.
    pub values: Vec<Vec<S>>,
    /// `s_i`, one per block.
    pub block_sums: Vec<Vec<S>>,
    /// The requested block count `ceil(D_beta / T1^beta)` exceeded `T1`.
    pub clamped: bool,
}

impl<S: Scalar> BlockComparatorPlan<S> {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

pub fn block_plan<S: Scalar>(game: &RademacherGame<S>) -> BlockComparatorPlan<S> {
    let t = game.horizon;
    let d = game.dimension;
    let first_half = t / 2;
    let d_beta = game.budget.d_beta();
    let mut clamped = false;
    let n = if first_half == 0 || d_beta == S::zero() {
        1
    } else {
        let raw = (d_beta / S::from_count(first_half).powf(game.budget.beta())).ceil();
        let raw = raw.to_f64_lossy();
        if raw > first_half as f64 {
            clamped = true;
            log::warn!("requested {raw} blocks, clamped to T1 = {first_half}");
            first_half
        } else {
            (raw as usize).max(1)
        }
    };
    let len = if n == 1 { t } else { first_half / n };
    let mut blocks = Vec::with_capacity(n);
    for i in 0..n {
        let start = i * len;
        let end = if i + 1 == n { t } else { start + len };
        blocks.push((start, end));
    }
    let mut values = Vec::with_capacity(n);
    let mut block_sums = Vec::with_capacity(n);
    for &(start, end) in &blocks {
        let mut s = vec![S::zero(); d];
        for row in game.signs[start * d..end * d].chunks_exact(d) {
            for (acc, &v) in s.iter_mut().zip(row) {
                *acc += v;
            }
        }
        let len = norm(&s);
        let u = if len > S::zero() {
            s.iter().map(|&x| x * S::half() / len).collect()
        } else {
            vec![S::zero(); d]
        };
        values.push(u);
        block_sums.push(s);
    }
    BlockComparatorPlan {
        first_half,
        blocks,
        values,
        block_sums,
        clamped,
    }
}

/// The block comparator, at the game's `beta`.
pub fn build_comparator<S: Scalar>(game: &RademacherGame<S>) -> Result<ComparatorSequence<S>> {
    let plan = block_plan(game);
    comparator_from_plan(game, &plan)
}

fn comparator_from_plan<S: Scalar>(
    game: &RademacherGame<S>,
    plan: &BlockComparatorPlan<S>,
) -> Result<ComparatorSequence<S>> {
    let mut points = Vec::with_capacity(game.horizon * game.dimension);
    for (&(start, end), u) in plan.blocks.iter().zip(&plan.values) {
        for _ in start..end {
            points.extend_from_slice(u);
        }
    }
    ComparatorSequence::from_flat(game.dimension, points, game.budget.beta())
}

/// `sum_t <v_t, y_t>` for the block comparator, evaluated as `(1/2) sum_i |s_i|`.
pub fn comparator_gain<S: Scalar>(game: &RademacherGame<S>) -> S {
    block_plan(game).block_sums.iter().map(|s| norm(s) * S::half()).sum()
}

/// `sum_t <v_t, y_t>` evaluated round by round.
pub fn comparator_gain_direct<S: Scalar>(game: &RademacherGame<S>, comparator: &ComparatorSequence<S>) -> S {
    (1..=game.horizon)
        .map(|t| dot(game.vector(t), comparator.point(t - 1)))
        .sum()
}

/// Runs the learner on the game and reports its regret against the block comparator.
///
/// `theory_upper` is the tuned-schedule bound (`gamma = beta`, `R = 4`, `G = d`, `H = 0`),
/// `theory_lower` is `sqrt(D_beta T^{1-beta}) + sqrt(T)`.
pub fn play_game<S: Scalar, L: Learner<S> + ?Sized>(
    game: &RademacherGame<S>,
    learner: &mut L,
) -> Result<RegretReport<S>> {
    if learner.dimension() != game.dimension {
        return Err(Error::DimensionMismatch {
            expected: game.dimension,
            got: learner.dimension(),
        });
    }
    let traj = run_online(learner, &mut game.stream())?;
    let comparator = build_comparator(game)?;
    let losses = game.losses();
    let regret = dynamic_regret(&traj, &comparator, &losses)?;
    let beta = game.budget.beta();
    let diameter_sq = S::lit(4.0);
    let subgrad_sq = S::from_count(game.dimension);
    let schedule = schedule_corollary1(beta, beta, game.budget.d_beta(), diameter_sq, subgrad_sq, game.horizon)?;
    Ok(RegretReport {
        static_regret: None,
        dynamic_regret: Some(regret),
        shifting_regret: None,
        theory_upper: theorem2_bound(
            &schedule,
            game.horizon,
            &game.budget,
            diameter_sq,
            subgrad_sq,
            S::zero(),
            S::zero(),
        ),
        theory_lower: theorem1_bound(&game.budget, game.horizon),
        parameters: ReportParameters {
            horizon: game.horizon,
            beta,
            d_beta: game.budget.d_beta(),
            diameter_sq_bound: diameter_sq,
            subgrad_sq_bound: subgrad_sq,
            dimension: game.dimension,
        },
    })
}
