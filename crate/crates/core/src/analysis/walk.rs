//! `E|S_T|` for the simple symmetric random walk `S_T = sum_t v_t`, `v_t = +-1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;

use crate::stats::MeanSe;
use crate::{Error, Result};

/// Largest horizon handled by [`walk_expectation_enumeration`].
pub const ENUMERATION_MAX_T: u64 = 24;
/// Above this horizon the closed form switches to log-gamma.
pub const EXACT_CLOSED_FORM_MAX_T: u64 = 60;
const LITERAL_ENUMERATION_MAX_T: u64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkMethod {
    ClosedForm,
    Enumeration,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkExpectation {
    pub horizon: u64,
    pub value: f64,
    pub method: WalkMethod,
}

/// `E|S_{2J}| = (2J / 4^J) C(2J, J)`, exact integer arithmetic up to `T = 60`, log-gamma above.
pub fn walk_expectation_closed_form(horizon: u64) -> Result<WalkExpectation> {
    if horizon < 2 || !horizon.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "closed form needs an even horizon >= 2, got {horizon}; odd horizons satisfy E|S_T| >= sqrt(T/2) - 1"
        )));
    }
    let value = if horizon <= EXACT_CLOSED_FORM_MAX_T {
        let numerator = horizon as u128 * binomial_u128(horizon, horizon / 2);
        numerator as f64 / 2f64.powi(horizon as i32)
    } else {
        let t = horizon as f64;
        let half = t / 2.0;
        (t.ln() + ln_gamma(t + 1.0) - 2.0 * ln_gamma(half + 1.0) - t * std::f64::consts::LN_2).exp()
    };
    Ok(WalkExpectation {
        horizon,
        value,
        method: WalkMethod::ClosedForm,
    })
}

/// `sum_m C(T, m) |2m - T| / 2^T`; literal enumeration of sign patterns up to `T = 20`,
/// binomial weights up to `T = 24`.
pub fn walk_expectation_enumeration(horizon: u64) -> Result<WalkExpectation> {
    if horizon > ENUMERATION_MAX_T {
        return Err(Error::InvalidArgument(format!(
            "enumeration supports T <= {ENUMERATION_MAX_T}, got {horizon}"
        )));
    }
    let total: u64 = if horizon <= LITERAL_ENUMERATION_MAX_T {
        (0u64..1 << horizon)
            .map(|pattern| (2 * pattern.count_ones() as i64 - horizon as i64).unsigned_abs())
            .sum()
    } else {
        (0..=horizon)
            .map(|m| binomial_u128(horizon, m) as u64 * (2 * m as i64 - horizon as i64).unsigned_abs())
            .sum()
    };
    Ok(WalkExpectation {
        horizon,
        value: total as f64 / 2f64.powi(horizon as i32),
        method: WalkMethod::Enumeration,
    })
}

/// Exact rational `E|S_T|` for any horizon.
pub fn walk_expectation_exact(horizon: u64) -> BigRational {
    let mut binom = BigInt::one();
    let mut total = BigInt::zero();
    for m in 0..=horizon {
        if m > 0 {
            binom = binom * BigInt::from(horizon - m + 1) / BigInt::from(m);
        }
        let distance = (2 * m as i64 - horizon as i64).unsigned_abs();
        total += &binom * BigInt::from(distance);
    }
    BigRational::new(total, BigInt::one() << horizon as usize)
}

/// Any horizon: closed form for even `T`, exact binomial sum for odd `T`.
pub fn walk_expectation(horizon: u64) -> f64 {
    if horizon == 0 {
        return 0.0;
    }
    if horizon.is_multiple_of(2) {
        walk_expectation_closed_form(horizon)
            .map(|w| w.value)
            .unwrap_or(f64::NAN)
    } else {
        walk_expectation_exact(horizon).to_f64().unwrap_or(f64::NAN)
    }
}

/// `C(2n, n) / 4^n`, as a running product of `(2k - 1) / 2k`.
pub fn central_binomial_ratio(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (2 * k - 1) as f64 / (2 * k) as f64)
}

fn binomial_u128(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Monte-Carlo estimate of `E|sum_t v_t|_1` for `d`-dimensional Rademacher vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L1WalkReport {
    pub dimension: usize,
    pub horizon: u64,
    pub replicates: usize,
    pub estimate: MeanSe,
    /// `d E|S_T|`
    pub exact: f64,
    /// `d (sqrt(T/2) - 1)`
    pub floor: f64,
    /// `mean >= floor - 3 SE`
    pub ok: bool,
}

pub fn l1_walk_lower_bound_check(
    dimension: usize,
    horizon: u64,
    num_seeds: usize,
    base_seed: u64,
) -> Result<L1WalkReport> {
    if num_seeds < 1000 {
        return Err(Error::InvalidArgument(format!(
            "need at least 1000 seeds, got {num_seeds}"
        )));
    }
    if dimension == 0 || horizon == 0 {
        return Err(Error::InvalidArgument("dimension and horizon must be positive".into()));
    }
    let samples: Vec<f64> = (0..num_seeds as u64)
        .map(|k| {
            let signs: Vec<f64> =
                crate::adversary::rademacher_signs(base_seed.wrapping_add(k), dimension * horizon as usize);
            let mut sums = vec![0.0; dimension];
            for row in signs.chunks_exact(dimension) {
                for (s, v) in sums.iter_mut().zip(row) {
                    *s += v;
                }
            }
            sums.iter().map(|s| s.abs()).sum()
        })
        .collect();
    let estimate = MeanSe::from_samples(&samples);
    let d = dimension as f64;
    let floor = d * ((horizon as f64 / 2.0).sqrt() - 1.0);
    Ok(L1WalkReport {
        dimension,
        horizon,
        replicates: num_seeds,
        estimate,
        exact: d * walk_expectation(horizon),
        floor,
        ok: estimate.mean >= floor - 3.0 * estimate.std_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Literal average over all 2^T sign vectors, written independently of the module.
    fn brute(t: u32) -> f64 {
        let mut acc = 0.0;
        for pattern in 0u32..(1 << t) {
            let mut s = 0i32;
            for k in 0..t {
                s += if pattern >> k & 1 == 1 { 1 } else { -1 };
            }
            acc += s.abs() as f64;
        }
        acc / (1u64 << t) as f64
    }

    #[test]
    fn small_horizons() {
        assert_eq!(brute(2), 1.0);
        assert_eq!(brute(4), 1.5);
        assert_eq!(brute(3), 1.5);
        assert_eq!(walk_expectation_closed_form(2).unwrap().value, 1.0);
        assert_eq!(walk_expectation_closed_form(4).unwrap().value, 1.5);
        assert_eq!(walk_expectation_enumeration(2).unwrap().value, 1.0);
        assert_eq!(walk_expectation_enumeration(4).unwrap().value, 1.5);
        assert_eq!(walk_expectation_enumeration(3).unwrap().value, 1.5);
        // lemma floor sqrt(T/2) is tight at T = 2
        assert_eq!(walk_expectation_closed_form(2).unwrap().value, (2.0f64 / 2.0).sqrt());
    }

    #[test]
    fn errors() {
        assert!(walk_expectation_closed_form(3).is_err());
        assert!(walk_expectation_closed_form(0).is_err());
        assert!(walk_expectation_enumeration(25).is_err());
        assert!(l1_walk_lower_bound_check(1, 10, 999, 0).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for t in 1..=16 {
            assert_eq!(walk_expectation_enumeration(t as u64).unwrap().value, brute(t));
        }
    }

    #[test]
    fn closed_form_against_exact_rationals() {
        for t in (2..=60).step_by(2) {
            let exact = walk_expectation_exact(t).to_f64().unwrap();
            assert_relative_eq!(
                walk_expectation_closed_form(t).unwrap().value,
                exact,
                max_relative = 1e-15
            );
        }
        // log-gamma route: relative error budget 1e-10
        for t in (62..=400).step_by(2) {
            let exact = walk_expectation_exact(t).to_f64().unwrap();
            assert_relative_eq!(
                walk_expectation_closed_form(t).unwrap().value,
                exact,
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn hundred_step_value() {
        let v = walk_expectation_closed_form(100).unwrap().value;
        assert!((v - 7.9589).abs() < 1e-4, "{v}");
        let exact = walk_expectation_exact(100).to_f64().unwrap();
        assert_relative_eq!(v, exact, max_relative = 1e-10);
    }

    #[test]
    fn central_binomial() {
        assert_eq!(central_binomial_ratio(1), 0.5);
        assert_eq!(central_binomial_ratio(2), 6.0 / 16.0);
        let exact = walk_expectation_exact(40).to_f64().unwrap();
        // E|S_{2J}| = 2J * C(2J, J) / 4^J
        assert_relative_eq!(40.0 * central_binomial_ratio(20), exact, max_relative = 1e-13);
    }

    #[test]
    fn l1_walk_small_cases_are_exact_in_expectation() {
        let r = l1_walk_lower_bound_check(1, 2, 4000, 11).unwrap();
        assert_eq!(r.exact, 1.0);
        assert!((r.estimate.mean - 1.0).abs() <= 4.0 * r.estimate.std_err);
        let r = l1_walk_lower_bound_check(3, 2, 4000, 12).unwrap();
        assert_eq!(r.exact, 3.0);
        assert!((r.estimate.mean - 3.0).abs() <= 4.0 * r.estimate.std_err);
        assert!(r.ok);
    }
}
