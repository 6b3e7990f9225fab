//! Dense vector helpers over plain slices.

use crate::Scalar;

#[inline]
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm_sq<S: Scalar>(a: &[S]) -> S {
    dot(a, a)
}

#[inline]
pub fn norm<S: Scalar>(a: &[S]) -> S {
    norm_sq(a).sqrt()
}

#[inline]
pub fn norm_l1<S: Scalar>(a: &[S]) -> S {
    a.iter().fold(S::zero(), |acc, &x| acc + x.abs())
}

#[inline]
pub fn dist_sq<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

#[inline]
pub fn dist<S: Scalar>(a: &[S], b: &[S]) -> S {
    dist_sq(a, b).sqrt()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

/// `y += alpha * x`
#[inline]
pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn is_finite<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_finite())
}

pub fn soft_threshold<S: Scalar>(x: S, threshold: S) -> S {
    if x > threshold {
        x - threshold
    } else if x < -threshold {
        x + threshold
    } else {
        S::zero()
    }
}
