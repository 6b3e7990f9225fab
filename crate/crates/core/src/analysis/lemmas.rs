//! Numerical checks of the inequalities behind the regret bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bounds::{series_bound_check, shift_to_path_budget};
use super::walk::{
    central_binomial_ratio, walk_expectation_closed_form, walk_expectation_enumeration, ENUMERATION_MAX_T,
};
use crate::domain::DomainSpec;
use crate::loss::LossFunction;
use crate::metrics::weighted_path_length;
use crate::vector::{dist, dist_sq, norm_sq};
use crate::Scalar;

/// Slack on the per-step proximal inequality.
pub const STEP_INEQUALITY_TOL: f64 = 1e-7;
/// Slack on the telescoped distance inequality.
pub const RECURSIVE_BOUND_TOL: f64 = 1e-6;
/// Agreement between the walk closed form and enumeration.
pub const WALK_AGREEMENT_TOL: f64 = 1e-12;

/// One inequality `lhs <= rhs` (or an equality with `|lhs - rhs| <= tol` for agreement checks).
#[derive(Clone, Debug, PartialEq)]
pub struct LemmaCheck {
    pub name: String,
    pub inputs: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl LemmaCheck {
    fn le(name: &str, inputs: String, lhs: f64, rhs: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            inputs,
            lhs,
            rhs,
            ok: lhs <= rhs + tol,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LemmaSuiteReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaSuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &LemmaCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn count(&self, name: &str) -> usize {
        self.checks.iter().filter(|c| c.name == name).count()
    }
}

/// `F_t(x_t) + H(x_{t+1}) - F_t(y) - H(y) <= (|y - x_t|^2 - |y - x_{t+1}|^2) / (2 eta) + (eta / 2) |G_t(x_t)|^2`.
pub fn step_inequality_check<S: Scalar>(
    x_t: &[S],
    x_next: &[S],
    y: &[S],
    loss: &LossFunction<S>,
    eta: S,
) -> LemmaCheck {
    let reg = loss.regularizer();
    let lhs = loss.smooth_value(x_t) + reg.value(x_next) - loss.smooth_value(y) - reg.value(y);
    let g = norm_sq(&loss.subgradient(x_t));
    let rhs = (dist_sq(y, x_t) - dist_sq(y, x_next)) / (S::two() * eta) + eta * S::half() * g;
    LemmaCheck::le(
        "step-inequality",
        format!("eta={eta}"),
        lhs.to_f64_lossy(),
        rhs.to_f64_lossy(),
        STEP_INEQUALITY_TOL,
    )
}

/// `sum_t (|y_t - x_t|^2 - |y_t - x_{t+1}|^2) / eta_t <= 2 sqrt(R) sum_{t<T} |y_{t+1} - y_t| / eta_t + R / eta_T`
/// for a non-increasing schedule. `decisions` holds `x_1..x_{T+1}`, `comparator` holds `y_1..y_T`.
pub fn recursive_bound_check<S: Scalar, P: AsRef<[S]>, Q: AsRef<[S]>>(
    decisions: &[P],
    comparator: &[Q],
    etas: &[S],
    diameter_sq: S,
) -> LemmaCheck {
    let horizon = comparator.len();
    assert_eq!(decisions.len(), horizon + 1, "need x_1..x_{{T+1}}");
    assert_eq!(etas.len(), horizon);
    let mut lhs = S::zero();
    let mut path = S::zero();
    for t in 0..horizon {
        let y = comparator[t].as_ref();
        lhs += (dist_sq(y, decisions[t].as_ref()) - dist_sq(y, decisions[t + 1].as_ref())) / etas[t];
        if t + 1 < horizon {
            path += dist(comparator[t + 1].as_ref(), y) / etas[t];
        }
    }
    let rhs = S::two() * diameter_sq.sqrt() * path + diameter_sq / etas[horizon - 1];
    LemmaCheck::le(
        "recursive-bound",
        format!("T={horizon}"),
        lhs.to_f64_lossy(),
        rhs.to_f64_lossy(),
        RECURSIVE_BOUND_TOL,
    )
}

/// The fixed grid of scalar inequalities:
///
/// * closed-form and enumerated `E|S_T|` agree for even `T <= 24`;
/// * `E|S_T| >= sqrt(T/2)` for even `T` in `[2, 1000]`, and `>= sqrt(T/2) - 1` for odd `T` up to 23;
/// * `C(2n, n) / 4^n >= 1 / (2 sqrt(n))` for `n <= 500`;
/// * `sum_{t<=T} t^{-gamma} <= T^{1-gamma} / (1 - gamma)` on `gamma = 0, 0.1, .., 0.9`, `T <= 10^4`
///   (one row per `gamma`, holding the tightest `T`);
/// * random `M`-shift sequences in a ball have path length at most `M sqrt(R)`.
pub fn run_lemma_suite() -> LemmaSuiteReport {
    let mut checks = Vec::new();

    for t in (2..=ENUMERATION_MAX_T).step_by(2) {
        let closed = walk_expectation_closed_form(t).map(|w| w.value).unwrap_or(f64::NAN);
        let enumerated = walk_expectation_enumeration(t).map(|w| w.value).unwrap_or(f64::NAN);
        checks.push(LemmaCheck {
            name: "walk-agreement".into(),
            inputs: format!("T={t}"),
            lhs: closed,
            rhs: enumerated,
            ok: (closed - enumerated).abs() <= WALK_AGREEMENT_TOL,
        });
    }

    for t in (2..=1000u64).step_by(2) {
        let value = walk_expectation_closed_form(t).map(|w| w.value).unwrap_or(f64::NAN);
        checks.push(LemmaCheck::le(
            "walk-even",
            format!("T={t}"),
            (t as f64 / 2.0).sqrt(),
            value,
            0.0,
        ));
    }

    for t in (3..ENUMERATION_MAX_T).step_by(2) {
        let value = walk_expectation_enumeration(t).map(|w| w.value).unwrap_or(f64::NAN);
        checks.push(LemmaCheck::le(
            "walk-odd",
            format!("T={t}"),
            (t as f64 / 2.0).sqrt() - 1.0,
            value,
            0.0,
        ));
    }

    for n in 1..=500u64 {
        let ratio = central_binomial_ratio(n);
        checks.push(LemmaCheck::le(
            "central-binomial",
            format!("n={n}"),
            1.0 / (2.0 * (n as f64).sqrt()),
            ratio,
            0.0,
        ));
    }

    for k in 0..10 {
        let gamma = k as f64 / 10.0;
        let mut sum = 0.0;
        let mut tightest: Option<(usize, f64, f64)> = None;
        for t in 1..=10_000usize {
            sum += (t as f64).powf(-gamma);
            let bound = (t as f64).powf(1.0 - gamma) / (1.0 - gamma);
            if tightest.is_none_or(|(_, l, r)| sum - bound > l - r) {
                tightest = Some((t, sum, bound));
            }
        }
        let (t, lhs, rhs) = tightest.expect("non-empty grid");
        debug_assert!(series_bound_check(gamma, t)
            .map(|s| (s.partial_sum - lhs).abs() < 1e-9)
            .unwrap_or(false));
        checks.push(LemmaCheck::le(
            "series",
            format!("gamma={gamma} T={t}"),
            lhs,
            rhs,
            1e-12,
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..1000 {
        let dimension = 1 + trial % 3;
        let horizon = 2 + rng.gen_range(0..40);
        let shifts = rng.gen_range(0..horizon);
        let radius = rng.gen_range(0.1..3.0);
        let domain = match DomainSpec::ball(vec![0.0; dimension], radius, 1.0) {
            Ok(d) => d,
            Err(_) => continue,
        };
        let mut times: Vec<usize> = (1..horizon).collect();
        for i in 0..shifts {
            let j = rng.gen_range(i..times.len());
            times.swap(i, j);
        }
        let mut cuts = times[..shifts].to_vec();
        cuts.sort_unstable();
        let mut points = Vec::with_capacity(horizon);
        let mut current = domain.sample(&mut rng);
        for t in 0..horizon {
            if cuts.binary_search(&t).is_ok() {
                current = domain.sample(&mut rng);
            }
            points.push(current.clone());
        }
        let length = weighted_path_length(&points, 0.0).unwrap_or(f64::NAN);
        checks.push(LemmaCheck::le(
            "shift-reduction",
            format!("d={dimension} T={horizon} M={shifts}"),
            length,
            shift_to_path_budget(shifts, domain.diameter_sq_bound()),
            1e-12,
        ));
    }

    LemmaSuiteReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pog::{pog_step, schedule_corollary1};
    use crate::prox::Regularizer;

    #[test]
    fn suite_passes() {
        let report = run_lemma_suite();
        let failures: Vec<_> = report.failures().collect();
        assert!(failures.is_empty(), "{failures:?}");
        assert_eq!(report.count("walk-agreement"), 12);
        assert_eq!(report.count("walk-even"), 500);
        assert_eq!(report.count("series"), 10);
    }

    #[test]
    fn step_inequality_along_a_run() {
        let domain = DomainSpec::unit_ball(2, 2.0).unwrap();
        let s = schedule_corollary1(0.0, 0.0, 1.0, 4.0, 2.0, 20).unwrap();
        let mut x = vec![0.0, 0.0];
        for t in 1..=20 {
            let f = LossFunction::linear(
                vec![1.0, if t % 2 == 0 { -1.0 } else { 1.0 }],
                Regularizer::l1(0.2).unwrap(),
            );
            let next = pog_step(&x, &f, s.eta(t), &domain).unwrap();
            for y in [[0.5, 0.5], [-0.7, 0.1], [0.0, -1.0]] {
                assert!(step_inequality_check(&x, &next, &y, &f, s.eta(t)).ok);
            }
            x = next;
        }
    }

    #[test]
    fn recursive_bound_detects_violation() {
        // a jump of size 2 with zero comparator movement breaks the inequality when R is understated
        let xs = [vec![1.0], vec![-1.0], vec![-1.0]];
        let ys = [vec![-1.0], vec![-1.0]];
        assert!(recursive_bound_check(&xs, &ys, &[1.0, 1.0], 4.0).ok);
        assert!(!recursive_bound_check(&xs, &ys, &[1.0, 1.0], 1.0).ok);
    }
}
