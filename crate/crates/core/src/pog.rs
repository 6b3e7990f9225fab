//! Proximal online gradient and its learning-rate schedules.
//!
//! Each round plays `x_t`, observes `f_t = F_t + H`, queries `G_t(x_t)` and moves to
//! `x_{t+1} = prox_{H, eta_t}(x_t - eta_t G_t(x_t))`. With `H = 0` this is projected online
//! gradient descent.

use crate::domain::DomainSpec;
use crate::loss::LossFunction;
use crate::online::{run_online, Learner, LossStream};
use crate::prox::{prox, Regularizer};
use crate::sequence::Trajectory;
use crate::vector::{is_finite, norm_sq};
use crate::{Error, Result, Scalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScheduleKind<S> {
    Constant {
        eta: S,
    },
    /// Tuned to a dynamics budget `(beta, D_beta)`.
    Corollary1 {
        gamma: S,
        beta: S,
        d_beta: S,
        diameter_sq: S,
        subgrad_sq: S,
        horizon: usize,
    },
    /// Tuned to a shift budget `M`.
    Corollary2 {
        gamma: S,
        shifts: usize,
        diameter_sq: S,
        subgrad_sq: S,
        horizon: usize,
    },
}

/// `eta_t = scale * t^{-gamma}`; positive and non-increasing in `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schedule<S> {
    kind: ScheduleKind<S>,
    gamma: S,
    scale: S,
}

fn check_common<S: Scalar>(gamma: S, diameter_sq: S, subgrad_sq: S, horizon: usize) -> Result<()> {
    if !(gamma >= S::zero() && gamma < S::one()) {
        return Err(Error::InvalidExponent(format!("gamma = {gamma} must lie in [0, 1)")));
    }
    if !(diameter_sq > S::zero() && subgrad_sq > S::zero()) {
        return Err(Error::InvalidArgument("R and G must be positive".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    Ok(())
}

impl<S: Scalar> Schedule<S> {
    pub fn constant(eta: S) -> Result<Self> {
        if !(eta > S::zero()) || !eta.is_finite() {
            return Err(Error::NonpositiveStep(eta.to_f64_lossy()));
        }
        Ok(Self {
            kind: ScheduleKind::Constant { eta },
            gamma: S::zero(),
            scale: eta,
        })
    }

    pub fn kind(&self) -> ScheduleKind<S> {
        self.kind
    }

    pub fn gamma(&self) -> S {
        self.gamma
    }

    /// `eta_1`
    pub fn scale(&self) -> S {
        self.scale
    }

    pub fn horizon(&self) -> Option<usize> {
        match self.kind {
            ScheduleKind::Constant { .. } => None,
            ScheduleKind::Corollary1 { horizon, .. } | ScheduleKind::Corollary2 { horizon, .. } => Some(horizon),
        }
    }

    /// `eta_t` for round `t >= 1`.
    pub fn eta(&self, t: usize) -> S {
        debug_assert!(t >= 1);
        if self.gamma == S::zero() {
            self.scale
        } else {
            self.scale * S::from_count(t).powf(-self.gamma)
        }
    }

    pub fn etas(&self, horizon: usize) -> Vec<S> {
        (1..=horizon).map(|t| self.eta(t)).collect()
    }
}

/// `eta_t = t^{-gamma} sqrt((1 - gamma)(2 sqrt(R) T^{2 gamma - beta - 1} D_beta + R T^{2 gamma - 1}) / G)`
pub fn schedule_corollary1<S: Scalar>(
    gamma: S,
    beta: S,
    d_beta: S,
    diameter_sq: S,
    subgrad_sq: S,
    horizon: usize,
) -> Result<Schedule<S>> {
    check_common(gamma, diameter_sq, subgrad_sq, horizon)?;
    if !(beta >= S::zero() && beta < S::one()) || gamma < beta {
        return Err(Error::InvalidExponent(format!(
            "need 0 <= beta <= gamma < 1, got beta = {beta}, gamma = {gamma}"
        )));
    }
    if !(d_beta >= S::zero()) {
        return Err(Error::InvalidBudget(format!("D_beta = {d_beta} must be >= 0")));
    }
    let t = S::from_count(horizon);
    let one = S::one();
    let two = S::two();
    let inner =
        two * diameter_sq.sqrt() * t.powf(two * gamma - beta - one) * d_beta + diameter_sq * t.powf(two * gamma - one);
    let scale = ((one - gamma) * inner / subgrad_sq).sqrt();
    Ok(Schedule {
        kind: ScheduleKind::Corollary1 {
            gamma,
            beta,
            d_beta,
            diameter_sq,
            subgrad_sq,
            horizon,
        },
        gamma,
        scale,
    })
}

/// `eta_t = t^{-gamma} sqrt((1 - gamma)(2 R T^{2 gamma - 1} M + R T^{2 gamma - 1}) / G)`
pub fn schedule_corollary2<S: Scalar>(
    gamma: S,
    shifts: usize,
    diameter_sq: S,
    subgrad_sq: S,
    horizon: usize,
) -> Result<Schedule<S>> {
    check_common(gamma, diameter_sq, subgrad_sq, horizon)?;
    let t = S::from_count(horizon);
    let one = S::one();
    let two = S::two();
    let m = S::from_count(shifts);
    let inner = two * diameter_sq * t.powf(two * gamma - one) * m + diameter_sq * t.powf(two * gamma - one);
    let scale = ((one - gamma) * inner / subgrad_sq).sqrt();
    Ok(Schedule {
        kind: ScheduleKind::Corollary2 {
            gamma,
            shifts,
            diameter_sq,
            subgrad_sq,
            horizon,
        },
        gamma,
        scale,
    })
}

/// One update: `prox_{H, eta}(x_t - eta G_t(x_t))`.
pub fn pog_step<S: Scalar>(x_t: &[S], loss: &LossFunction<S>, eta: S, domain: &DomainSpec<S>) -> Result<Vec<S>> {
    let g = loss.subgradient(x_t);
    pog_step_with_subgradient(x_t, &g, loss.regularizer(), eta, domain)
}

fn pog_step_with_subgradient<S: Scalar>(
    x_t: &[S],
    g: &[S],
    reg: &Regularizer<S>,
    eta: S,
    domain: &DomainSpec<S>,
) -> Result<Vec<S>> {
    if !(eta > S::zero()) {
        return Err(Error::NonpositiveStep(eta.to_f64_lossy()));
    }
    if g.len() != x_t.len() {
        return Err(Error::BadOracle(format!(
            "subgradient has {} entries, expected {}",
            g.len(),
            x_t.len()
        )));
    }
    if !is_finite(g) {
        return Err(Error::BadOracle("subgradient is not finite".into()));
    }
    let shifted: Vec<S> = x_t.iter().zip(g).map(|(&x, &gi)| x - eta * gi).collect();
    prox(reg, domain, &shifted, eta)
}

/// Per-round quantities kept for the analysis checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PogStep<S> {
    pub eta: S,
    /// `|G_t(x_t)|^2`
    pub subgrad_sq_norm: S,
}

/// POG as an online learner.
#[derive(Clone, Debug)]
pub struct Pog<S: Scalar> {
    domain: DomainSpec<S>,
    schedule: Schedule<S>,
    x: Vec<S>,
    round: usize,
    trace: Vec<PogStep<S>>,
}

impl<S: Scalar> Pog<S> {
    /// Starts at the domain centre.
    pub fn new(domain: DomainSpec<S>, schedule: Schedule<S>) -> Self {
        let x = domain.center();
        Self {
            domain,
            schedule,
            x,
            round: 0,
            trace: Vec::new(),
        }
    }

    pub fn with_start(domain: DomainSpec<S>, schedule: Schedule<S>, x_1: Vec<S>) -> Result<Self> {
        if x_1.len() != domain.dimension() {
            return Err(Error::DimensionMismatch {
                expected: domain.dimension(),
                got: x_1.len(),
            });
        }
        if !domain.contains(&x_1) {
            return Err(Error::Infeasible("x_1 lies outside the domain".into()));
        }
        Ok(Self {
            x: x_1,
            ..Self::new(domain, schedule)
        })
    }

    pub fn trace(&self) -> &[PogStep<S>] {
        &self.trace
    }

    pub fn current(&self) -> &[S] {
        &self.x
    }
}

impl<S: Scalar> Learner<S> for Pog<S> {
    fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    fn predict(&mut self) -> Vec<S> {
        self.x.clone()
    }

    fn observe(&mut self, loss: &LossFunction<S>) -> Result<()> {
        self.round += 1;
        let eta = self.schedule.eta(self.round);
        let g = loss.subgradient(&self.x);
        let next = pog_step_with_subgradient(&self.x, &g, loss.regularizer(), eta, &self.domain)?;
        self.trace.push(PogStep {
            eta,
            subgrad_sq_norm: norm_sq(&g),
        });
        self.x = next;
        Ok(())
    }

    fn final_decision(&self) -> Option<Vec<S>> {
        Some(self.x.clone())
    }
}

pub fn run_pog<S: Scalar, F: LossStream<S> + ?Sized>(
    losses: &mut F,
    schedule: &Schedule<S>,
    domain: &DomainSpec<S>,
    x_1: Vec<S>,
) -> Result<Trajectory<S>> {
    run_pog_traced(losses, schedule, domain, x_1).map(|(t, _)| t)
}

/// Like [`run_pog`], also returning each round's step size and subgradient norm.
pub fn run_pog_traced<S: Scalar, F: LossStream<S> + ?Sized>(
    losses: &mut F,
    schedule: &Schedule<S>,
    domain: &DomainSpec<S>,
    x_1: Vec<S>,
) -> Result<(Trajectory<S>, Vec<PogStep<S>>)> {
    let mut learner = Pog::with_start(domain.clone(), *schedule, x_1)?;
    let traj = run_online(&mut learner, losses)?;
    Ok((traj, learner.trace))
}
