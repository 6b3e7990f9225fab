use crate::{Error, Result, Scalar};

/// `(beta, D_beta)`: comparator sequences with `sum_t t^beta |y_{t+1} - y_t| <= D_beta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicsBudget<S> {
    beta: S,
    d_beta: S,
}

impl<S: Scalar> DynamicsBudget<S> {
    pub fn new(beta: S, d_beta: S) -> Result<Self> {
        if !(beta >= S::zero() && beta < S::one()) {
            return Err(Error::InvalidExponent(format!("beta = {beta} must lie in [0, 1)")));
        }
        if !(d_beta >= S::zero()) || !d_beta.is_finite() {
            return Err(Error::InvalidBudget(format!(
                "D_beta = {d_beta} must be finite and >= 0"
            )));
        }
        Ok(Self { beta, d_beta })
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn d_beta(&self) -> S {
        self.d_beta
    }

    /// Relative slack accepted when checking membership.
    pub fn allows(&self, weighted_path_length: S) -> bool {
        weighted_path_length <= self.d_beta * (S::one() + S::lit(1e-9)) + S::lit(1e-9)
    }
}

/// `M`: comparator sequences that change value at most `M` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftBudget {
    m: usize,
}

impl ShiftBudget {
    pub fn new(m: usize) -> Self {
        Self { m }
    }

    /// Pairs the budget with a horizon, which requires `M <= T - 1`.
    pub fn for_horizon(m: usize, horizon: usize) -> Result<Self> {
        if horizon == 0 || m > horizon - 1 {
            return Err(Error::InvalidBudget(format!("M = {m} exceeds T - 1 for T = {horizon}")));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> usize {
        self.m
    }
}
