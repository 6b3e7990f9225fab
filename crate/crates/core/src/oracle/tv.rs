//! Weighted total-variation proximal maps and projection onto the path-length ball
//! `{y in X^T : sum_t t^beta |y_{t+1} - y_t| <= D}`.

use std::collections::VecDeque;

use crate::domain::DomainSpec;
use crate::metrics::weighted_path_length_flat;
use crate::vector::{dist_sq, norm};
use crate::{Error, Result, Scalar};

#[derive(Clone, Copy, Debug)]
struct Knot<S> {
    x: S,
    da: S,
    db: S,
}

/// `argmin_y (1/2) |y - z|^2 + sum_k lambdas[k] |y_{k+1} - y_k|` for scalar sequences.
///
/// Dynamic programming over the piecewise-linear derivative of the forward messages; linear
/// time up to deque operations.
pub fn weighted_tv_prox<S: Scalar>(z: &[S], lambdas: &[S]) -> Vec<S> {
    let n = z.len();
    if n <= 1 {
        return z.to_vec();
    }
    assert_eq!(lambdas.len(), n - 1, "one weight per consecutive pair");
    let mut knots: VecDeque<Knot<S>> = VecDeque::with_capacity(2 * n);
    let mut tm = vec![S::zero(); n - 1];
    let mut tp = vec![S::zero(); n - 1];
    // derivative of the current message is (la x + lb) left of every knot and (ra x + rb) right of them
    let (mut la, mut lb) = (S::one(), -z[0]);
    let (mut ra, mut rb) = (S::one(), -z[0]);
    for k in 0..n - 1 {
        let lam = lambdas[k];
        let (mut a, mut b) = (la, lb);
        while let Some(front) = knots.front() {
            if a * front.x + b <= -lam {
                a += front.da;
                b += front.db;
                knots.pop_front();
            } else {
                break;
            }
        }
        let lo = (-lam - b) / a;
        knots.push_front(Knot {
            x: lo,
            da: a,
            db: b + lam,
        });
        tm[k] = lo;

        // the knot at `lo` is the front one and never lies right of `hi`
        let (mut a, mut b) = (ra, rb);
        while knots.len() > 1 {
            let back = knots.back().expect("non-empty");
            if a * back.x + b > lam {
                a -= back.da;
                b -= back.db;
                knots.pop_back();
            } else {
                break;
            }
        }
        let hi = (lam - b) / a;
        knots.push_back(Knot {
            x: hi,
            da: -a,
            db: lam - b,
        });
        tp[k] = hi;

        la = S::one();
        lb = -lam - z[k + 1];
        ra = S::one();
        rb = lam - z[k + 1];
    }
    let (mut a, mut b) = (la, lb);
    while let Some(front) = knots.front() {
        if a * front.x + b <= S::zero() {
            a += front.da;
            b += front.db;
            knots.pop_front();
        } else {
            break;
        }
    }
    let mut y = vec![S::zero(); n];
    y[n - 1] = -b / a;
    for k in (0..n - 1).rev() {
        y[k] = y[k + 1].max(tm[k]).min(tp[k]);
    }
    y
}

/// `argmin_y (1/2) |y - z|^2 + sum_k lambdas[k] |y_{k+1} - y_k|` for `d`-dimensional sequences
/// (group penalty, Euclidean norm per increment), by FISTA on the dual. Stops once the duality
/// gap falls below `gap_tol`.
pub fn group_tv_prox<S: Scalar>(z: &[S], dimension: usize, lambdas: &[S], gap_tol: S, max_iters: usize) -> Vec<S> {
    let n = z.len() / dimension;
    if n <= 1 {
        return z.to_vec();
    }
    assert_eq!(lambdas.len(), n - 1);
    let m = (n - 1) * dimension;
    let primal = |u: &[S]| {
        let mut y = z.to_vec();
        apply_dt_sub(u, dimension, &mut y);
        y
    };
    let mut u = vec![S::zero(); m];
    let mut v = u.clone();
    let mut t = S::one();
    let quarter = S::lit(0.25);
    for iter in 0..max_iters {
        let y = primal(&v);
        let mut next = v.clone();
        for k in 0..n - 1 {
            for j in 0..dimension {
                next[k * dimension + j] += quarter * (y[(k + 1) * dimension + j] - y[k * dimension + j]);
            }
            let block = &mut next[k * dimension..(k + 1) * dimension];
            let len = norm(block);
            if len > lambdas[k] {
                let s = lambdas[k] / len;
                block.iter_mut().for_each(|b| *b *= s);
            }
        }
        let t_next = (S::one() + (S::one() + S::lit(4.0) * t * t).sqrt()) * S::half();
        let momentum = (t - S::one()) / t_next;
        for i in 0..m {
            v[i] = next[i] + momentum * (next[i] - u[i]);
        }
        u = next;
        t = t_next;
        if iter % 10 == 9 {
            // P(y) - g(u) = sum_k lambda_k |dy_k| - <dy_k, u_k>
            let y = primal(&u);
            let mut gap = S::zero();
            for k in 0..n - 1 {
                let mut inner = S::zero();
                let mut sq = S::zero();
                for j in 0..dimension {
                    let dy = y[(k + 1) * dimension + j] - y[k * dimension + j];
                    inner += dy * u[k * dimension + j];
                    sq += dy * dy;
                }
                gap += lambdas[k] * sq.sqrt() - inner;
            }
            if gap <= gap_tol {
                break;
            }
        }
    }
    primal(&u)
}

/// Projection of increments `p` (rows of length `d`) onto `{q : sum_k w_k |q_k| <= radius}`.
pub fn project_weighted_group_l1<S: Scalar>(p: &mut [S], dimension: usize, weights: &[S], radius: S) {
    let norms: Vec<S> = p.chunks_exact(dimension).map(norm).collect();
    let total: S = norms.iter().zip(weights).map(|(&a, &w)| a * w).sum();
    if total <= radius {
        return;
    }
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&i, &j| {
        (norms[j] / weights[j])
            .partial_cmp(&(norms[i] / weights[i]))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut wa = S::zero();
    let mut ww = S::zero();
    let mut lam = S::zero();
    for (k, &i) in order.iter().enumerate() {
        wa += weights[i] * norms[i];
        ww += weights[i] * weights[i];
        lam = (wa - radius) / ww;
        let next_ratio = order.get(k + 1).map_or(S::zero(), |&j| norms[j] / weights[j]);
        if lam >= next_ratio {
            break;
        }
    }
    let lam = lam.max(S::zero());
    for ((row, &a), &w) in p.chunks_exact_mut(dimension).zip(&norms).zip(weights) {
        let keep = if a > S::zero() {
            (a - lam * w).max(S::zero()) / a
        } else {
            S::zero()
        };
        row.iter_mut().for_each(|v| *v *= keep);
    }
}

/// `y -= D^T u`, where `(D y)_k = y_{k+1} - y_k`.
fn apply_dt_sub<S: Scalar>(u: &[S], dimension: usize, y: &mut [S]) {
    for (k, block) in u.chunks_exact(dimension).enumerate() {
        for j in 0..dimension {
            y[k * dimension + j] += block[j];
            y[(k + 1) * dimension + j] -= block[j];
        }
    }
}

/// `t^beta` for `t = 1..T-1`.
pub fn path_weights<S: Scalar>(horizon: usize, beta: S) -> Vec<S> {
    (1..horizon).map(|t| S::from_count(t).powf(beta)).collect()
}

/// Smallest multiplier for which the unconstrained weighted-TV prox is constant:
/// `max_k |sum_{s <= k} (z_s - mean z)| / w_k`.
fn multiplier_ceiling<S: Scalar>(z: &[S], dimension: usize, weights: &[S]) -> S {
    let n = z.len() / dimension;
    let mut mean = vec![S::zero(); dimension];
    for row in z.chunks_exact(dimension) {
        crate::vector::axpy(S::one(), row, &mut mean);
    }
    mean.iter_mut().for_each(|m| *m /= S::from_count(n));
    let mut acc = vec![S::zero(); dimension];
    let mut worst = S::zero();
    for k in 0..n - 1 {
        for j in 0..dimension {
            acc[j] += z[k * dimension + j] - mean[j];
        }
        worst = worst.max(norm(&acc) / weights[k]);
    }
    worst
}

/// Accuracy knobs for [`project_path_ball`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionTolerances {
    /// Relative bracket width at which the multiplier search stops.
    pub multiplier: f64,
    /// Relative slack `(D - TV) / max(1, D)` at which the multiplier search stops.
    pub tightness: f64,
    pub max_root_iters: usize,
    /// Relative primal and dual residual at which the `d > 1` ADMM iteration stops.
    pub inner_gap: f64,
    pub inner_iters: usize,
}

impl Default for ProjectionTolerances {
    fn default() -> Self {
        Self {
            multiplier: 1e-8,
            tightness: 1e-12,
            max_root_iters: 200,
            inner_gap: 1e-13,
            inner_iters: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathBallProjection<S> {
    pub points: Vec<S>,
    /// Multiplier on the path-length constraint (zero when it is inactive).
    pub multiplier: S,
    pub path_length: S,
}

/// Euclidean projection of the flat `T x d` sequence `z` onto `X^T` intersected with the
/// weighted path-length ball of radius `d_beta`.
pub fn project_path_ball<S: Scalar>(
    z: &[S],
    domain: &DomainSpec<S>,
    beta: S,
    d_beta: S,
    tol: &ProjectionTolerances,
) -> Result<PathBallProjection<S>> {
    let dimension = domain.dimension();
    if z.is_empty() || !z.len().is_multiple_of(dimension) {
        return Err(Error::LengthMismatch {
            what: "flat sequence",
            got: z.len(),
            expected: dimension * (z.len() / dimension).max(1),
        });
    }
    let n = z.len() / dimension;
    let mut boxed = z.to_vec();
    for row in boxed.chunks_exact_mut(dimension) {
        domain.project_in_place(row);
    }
    let length = weighted_path_length_flat(&boxed, dimension, beta)?;
    if length <= d_beta {
        return Ok(PathBallProjection {
            points: boxed,
            multiplier: S::zero(),
            path_length: length,
        });
    }
    if d_beta == S::zero() || n == 1 {
        let mut mean = vec![S::zero(); dimension];
        for row in z.chunks_exact(dimension) {
            crate::vector::axpy(S::one(), row, &mut mean);
        }
        mean.iter_mut().for_each(|m| *m /= S::from_count(n));
        domain.project_in_place(&mut mean);
        return Ok(PathBallProjection {
            points: mean.iter().copied().cycle().take(n * dimension).collect(),
            multiplier: S::infinity(),
            path_length: S::zero(),
        });
    }
    let weights = path_weights(n, beta);
    if dimension == 1 {
        let eval = |lam: S| {
            let lambdas: Vec<S> = weights.iter().map(|&w| w * lam).collect();
            let mut y = weighted_tv_prox(z, &lambdas);
            for v in y.iter_mut() {
                domain.project_in_place(std::slice::from_mut(v));
            }
            y
        };
        let ceiling = multiplier_ceiling(z, 1, &weights);
        let (points, multiplier) = multiplier_search(eval, ceiling, &weights, 1, d_beta, tol)?;
        let path_length = weighted_path_length_flat(&points, 1, beta)?;
        return Ok(PathBallProjection {
            points,
            multiplier,
            path_length,
        });
    }
    project_group(z, domain, beta, d_beta, &weights, tol)
}

/// Root of the non-increasing map `lam -> TV(y(lam)) - D` by the Illinois variant of false
/// position on `[0, ceiling]`; returns the feasible end of the final bracket.
fn multiplier_search<S: Scalar, F: Fn(S) -> Vec<S>>(
    eval: F,
    ceiling: S,
    weights: &[S],
    dimension: usize,
    d_beta: S,
    tol: &ProjectionTolerances,
) -> Result<(Vec<S>, S)> {
    let tv = |y: &[S]| -> S {
        y.chunks_exact(dimension)
            .collect::<Vec<_>>()
            .windows(2)
            .zip(weights)
            .map(|(w, &wt)| wt * crate::vector::dist(w[0], w[1]))
            .sum()
    };
    let mut lo = S::zero();
    let mut f_lo = tv(&eval(lo)) - d_beta;
    // the ceiling gives a constant sequence; widen it slightly to absorb rounding
    let mut hi = ceiling * (S::one() + S::lit(1e-12)) + S::min_positive_value();
    let mut y_hi = eval(hi);
    let mut f_hi = tv(&y_hi) - d_beta;
    let mut widen = 0;
    while f_hi > S::zero() {
        widen += 1;
        if widen > 60 {
            return Err(Error::Infeasible(
                "path-length multiplier search failed to bracket".into(),
            ));
        }
        hi *= S::two();
        y_hi = eval(hi);
        f_hi = tv(&y_hi) - d_beta;
    }
    if f_lo <= S::zero() {
        return Ok((eval(lo), lo));
    }
    let tight = S::lit(tol.tightness) * d_beta.max(S::one());
    let mut side = 0i8;
    for _ in 0..tol.max_root_iters {
        if -f_hi <= tight || hi - lo <= S::lit(tol.multiplier) * hi * S::lit(1e-4) {
            break;
        }
        let mut lam = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        if !(lam > lo && lam < hi) {
            lam = (lo + hi) * S::half();
        }
        let y = eval(lam);
        let f = tv(&y) - d_beta;
        if f <= S::zero() {
            hi = lam;
            y_hi = y;
            f_hi = f;
            if side == 1 {
                f_lo *= S::half();
            }
            side = 1;
        } else {
            lo = lam;
            f_lo = f;
            if side == -1 {
                f_hi *= S::half();
            }
            side = -1;
        }
    }
    Ok((y_hi, hi))
}

/// ADMM for `min (1/2)|y - z|^2` subject to `y = x`, `x in X^T`, `D y = p` and `p` in the weighted
/// group-L1 ball of radius `D`. The `y`-step is a tridiagonal solve with the path Laplacian. The
/// domain iterate `x` is returned after a pull towards a constant point of `X` that absorbs the
/// remaining path-length violation.
fn project_group<S: Scalar>(
    z: &[S],
    domain: &DomainSpec<S>,
    beta: S,
    d_beta: S,
    weights: &[S],
    tol: &ProjectionTolerances,
) -> Result<PathBallProjection<S>> {
    let dimension = domain.dimension();
    let len = z.len();
    let n = len / dimension;
    let m = (n - 1) * dimension;
    let rho = S::one();
    // Thomas factorisation of (1 + rho) I + rho L, L the path Laplacian
    let off = -rho;
    let mut c_prime = vec![S::zero(); n];
    let mut denom = vec![S::zero(); n];
    for t in 0..n {
        let degree = if t == 0 || t == n - 1 { S::one() } else { S::two() };
        let diag = S::one() + rho + rho * degree;
        denom[t] = if t == 0 { diag } else { diag - off * c_prime[t - 1] };
        c_prime[t] = off / denom[t];
    }
    let solve = |rhs: &mut [S]| {
        for j in 0..dimension {
            rhs[j] /= denom[0];
            for t in 1..n {
                let prev = rhs[(t - 1) * dimension + j];
                rhs[t * dimension + j] = (rhs[t * dimension + j] - off * prev) / denom[t];
            }
            for t in (0..n - 1).rev() {
                let next = rhs[(t + 1) * dimension + j];
                rhs[t * dimension + j] -= c_prime[t] * next;
            }
        }
    };
    let diff = |y: &[S], out: &mut [S]| {
        for i in 0..m {
            out[i] = y[i + dimension] - y[i];
        }
    };

    let mut x = z.to_vec();
    for row in x.chunks_exact_mut(dimension) {
        domain.project_in_place(row);
    }
    let mut p = vec![S::zero(); m];
    diff(&x, &mut p);
    project_weighted_group_l1(&mut p, dimension, weights, d_beta);
    let mut a = vec![S::zero(); len];
    let mut b = vec![S::zero(); m];
    let mut y = vec![S::zero(); len];
    let mut dy = vec![S::zero(); m];
    let mut q = vec![S::zero(); m];
    let stop = S::lit(tol.inner_gap) * (S::one() + norm(z));
    for _ in 0..tol.inner_iters {
        for i in 0..m {
            q[i] = p[i] - b[i];
        }
        for i in 0..len {
            y[i] = z[i] + rho * (x[i] - a[i]);
        }
        // y += rho D^T q
        let mut shifted = y.clone();
        apply_dt_sub(&q, dimension, &mut shifted);
        for i in 0..len {
            let dtq = y[i] - shifted[i];
            y[i] += rho * dtq;
        }
        solve(&mut y);

        let mut x_next: Vec<S> = y.iter().zip(&a).map(|(&yi, &ai)| yi + ai).collect();
        for row in x_next.chunks_exact_mut(dimension) {
            domain.project_in_place(row);
        }
        diff(&y, &mut dy);
        let mut p_next: Vec<S> = dy.iter().zip(&b).map(|(&v, &bi)| v + bi).collect();
        project_weighted_group_l1(&mut p_next, dimension, weights, d_beta);

        let mut primal = S::zero();
        for i in 0..len {
            let r = y[i] - x_next[i];
            a[i] += r;
            primal += r * r;
        }
        for i in 0..m {
            let r = dy[i] - p_next[i];
            b[i] += r;
            primal += r * r;
        }
        let dual = rho * (dist_sq(&x_next, &x) + dist_sq(&p_next, &p)).sqrt();
        x = x_next;
        p = p_next;
        if primal.sqrt() <= stop && dual <= stop {
            break;
        }
    }
    let mut center = vec![S::zero(); dimension];
    for row in x.chunks_exact(dimension) {
        crate::vector::axpy(S::one(), row, &mut center);
    }
    center.iter_mut().for_each(|c| *c /= S::from_count(n));
    domain.project_in_place(&mut center);
    let length = weighted_path_length_flat(&x, dimension, beta)?;
    if length > d_beta {
        let theta = d_beta / length;
        for row in x.chunks_exact_mut(dimension) {
            for (v, &c) in row.iter_mut().zip(&center) {
                *v = c + theta * (*v - c);
            }
        }
    }
    let path_length = weighted_path_length_flat(&x, dimension, beta)?;
    Ok(PathBallProjection {
        points: x,
        multiplier: S::nan(),
        path_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tv_objective(y: &[f64], z: &[f64], lambdas: &[f64]) -> f64 {
        0.5 * dist_sq(y, z)
            + y.windows(2)
                .zip(lambdas)
                .map(|(w, l)| l * (w[1] - w[0]).abs())
                .sum::<f64>()
    }

    /// Plain projected gradient on the dual, written independently of the DP.
    fn dual_gradient_prox(z: &[f64], lambdas: &[f64], iters: usize) -> Vec<f64> {
        let n = z.len();
        let mut u = vec![0.0; n - 1];
        let primal = |u: &[f64]| {
            let mut y = z.to_vec();
            for k in 0..n - 1 {
                y[k] += u[k];
                y[k + 1] -= u[k];
            }
            y
        };
        for _ in 0..iters {
            let y = primal(&u);
            for k in 0..n - 1 {
                u[k] = (u[k] + 0.25 * (y[k + 1] - y[k])).clamp(-lambdas[k], lambdas[k]);
            }
        }
        primal(&u)
    }

    #[test]
    fn two_points_closed_form() {
        // mean 0.5, half-gap 1.5 exceeds lambda = 1, so the pair moves together by 1
        let y = weighted_tv_prox(&[-1.0, 2.0], &[1.0]);
        assert_eq!(y, vec![0.0, 1.0]);
        let y = weighted_tv_prox(&[-1.0, 2.0], &[5.0]);
        assert_eq!(y, vec![0.5, 0.5]);
        assert_eq!(weighted_tv_prox(&[3.0], &[]), vec![3.0]);
    }

    #[test]
    fn zero_weights_are_identity() {
        let z = [1.0, -2.0, 0.5, 4.0];
        assert_eq!(weighted_tv_prox(&z, &[0.0; 3]), z.to_vec());
    }

    proptest! {
        #[test]
        fn dp_matches_dual_solver(
            z in prop::collection::vec(-5.0f64..5.0, 2..9),
            scale in 0.0f64..3.0,
            beta in 0.0f64..0.9,
        ) {
            let lambdas: Vec<f64> = (1..z.len()).map(|t| scale * (t as f64).powf(beta)).collect();
            let fast = weighted_tv_prox(&z, &lambdas);
            let slow = dual_gradient_prox(&z, &lambdas, 20_000);
            let f_fast = tv_objective(&fast, &z, &lambdas);
            let f_slow = tv_objective(&slow, &z, &lambdas);
            prop_assert!(f_fast <= f_slow + 1e-9, "{f_fast} > {f_slow}");
            prop_assert!(dist_sq(&fast, &slow).sqrt() <= 1e-4);
            let group = group_tv_prox(&z, 1, &lambdas, 1e-14, 50_000);
            prop_assert!(dist_sq(&fast, &group).sqrt() <= 1e-5);
        }

        #[test]
        fn projection_is_feasible_and_beats_random_feasible_points(
            z in prop::collection::vec(-3.0f64..3.0, 2..8),
            d_beta in 0.0f64..4.0,
            beta in 0.0f64..0.9,
            seed in any::<u64>(),
        ) {
            let domain = DomainSpec::<f64>::cube(1, -1.0, 1.0, 1.0).unwrap();
            let p = project_path_ball(&z, &domain, beta, d_beta, &ProjectionTolerances::default()).unwrap();
            prop_assert!(p.path_length <= d_beta + 1e-9);
            prop_assert!(p.points.iter().all(|v: &f64| v.abs() <= 1.0));
            let best = dist_sq(&p.points, &z);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..200 {
                // random feasible point: shrink a random sequence towards a constant
                let mut y: Vec<f64> = (0..z.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let len = weighted_path_length_flat(&y, 1, beta).unwrap();
                if len > d_beta {
                    let c = y[0];
                    let th = d_beta / len;
                    y.iter_mut().for_each(|v| *v = c + th * (*v - c));
                }
                prop_assert!(best <= dist_sq(&y, &z) + 1e-9);
            }
        }
    }

    #[test]
    fn clamp_route_agrees_with_dual_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let domain = DomainSpec::<f64>::cube(1, -1.0, 1.0, 1.0).unwrap();
        let tol = ProjectionTolerances::default();
        for _ in 0..30 {
            let n = rng.gen_range(2..7);
            let z: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let d = rng.gen_range(0.1..3.0);
            let beta = rng.gen_range(0.0..0.8);
            let exact = project_path_ball(&z, &domain, beta, d, &tol).unwrap();
            let weights = path_weights(n, beta);
            let generic = project_group(&z, &domain, beta, d, &weights, &tol).unwrap();
            assert!(
                dist_sq(&exact.points, &generic.points).sqrt() <= 1e-5,
                "{:?} vs {:?}",
                exact.points,
                generic.points
            );
        }
    }

    #[test]
    fn group_l1_projection_hits_the_radius() {
        let mut p: Vec<f64> = vec![3.0, 4.0, 0.0, 1.0, -2.0, 0.0];
        let w = [1.0f64, 2.0, 0.5];
        project_weighted_group_l1(&mut p, 2, &w, 2.0);
        let total: f64 = p
            .chunks(2)
            .zip(&w)
            .map(|(r, w)| w * (r[0] * r[0] + r[1] * r[1]).sqrt())
            .sum();
        assert!((total - 2.0).abs() < 1e-12);
        // directions are kept
        assert!((p[0] * 4.0 - p[1] * 3.0).abs() < 1e-12);
        let mut inside = vec![0.1, 0.0];
        project_weighted_group_l1(&mut inside, 2, &[1.0], 1.0);
        assert_eq!(inside, vec![0.1, 0.0]);
    }

    #[test]
    fn two_dimensional_projection() {
        let domain = DomainSpec::<f64>::unit_ball(2, 1.0).unwrap();
        let z = vec![2.0, 0.0, -2.0, 0.0, 0.0, 2.0];
        let p = project_path_ball(&z, &domain, 0.0, 1.0, &ProjectionTolerances::default()).unwrap();
        assert!(p.path_length <= 1.0 + 1e-9);
        assert!(p.points.chunks(2).all(|r| norm(r) <= 1.0 + 1e-9));
        // first-order optimality against a handful of feasible points
        let best = dist_sq(&p.points, &z);
        for cand in [
            vec![0.0; 6],
            vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.5],
            vec![0.3, 0.1, -0.2, 0.1, 0.0, 0.3],
        ] {
            if weighted_path_length_flat(&cand, 2, 0.0).unwrap() <= 1.0 {
                assert!(best <= dist_sq(&cand, &z) + 1e-9);
            }
        }
    }

    #[test]
    fn zero_budget_projects_the_mean() {
        let domain = DomainSpec::<f64>::cube(1, -1.0, 1.0, 1.0).unwrap();
        let p = project_path_ball(&[3.0, 1.0, -1.0], &domain, 0.0, 0.0, &ProjectionTolerances::default()).unwrap();
        assert_eq!(p.points, vec![1.0, 1.0, 1.0]);
        let p = project_path_ball(&[0.2, 0.4], &domain, 0.0, 0.0, &ProjectionTolerances::default()).unwrap();
        assert!((p.points[0] - 0.3).abs() < 1e-15 && p.points[0] == p.points[1]);
    }
}
