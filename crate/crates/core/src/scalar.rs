//! Scalar abstractions.
//!
//! Everything that only needs field arithmetic (the PQRS algebra, path sums,
//! first-passage recursions) is written against [`Field`], so it runs on exact
//! rationals as well as on `f32`/`f64`. Code that needs transcendental
//! functions is written against [`Real`].

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Any ordered field we can build from primitive values: `f32`, `f64`,
/// `num_rational::BigRational`, ...
pub trait Field: Num + Clone + PartialOrd + Debug + FromPrimitive {}

impl<T> Field for T where T: Num + Clone + PartialOrd + Debug + FromPrimitive {}

/// Floating point scalars: `f32` or `f64`.
pub trait Real: Field + Float + FloatConst + ToPrimitive + Send + Sync + 'static {}

impl<T> Real for T where T: Field + Float + FloatConst + ToPrimitive + Send + Sync + 'static {}

/// Converts an `f64` literal into `T`.
///
/// Panics only if `T` cannot represent finite `f64` values at all, which does
/// not happen for the scalar types this crate is used with.
#[inline]
pub fn lit<T: FromPrimitive>(x: f64) -> T {
    T::from_f64(x).expect("scalar type cannot represent an f64 literal")
}

#[inline]
pub(crate) fn from_u64<T: FromPrimitive>(x: u64) -> T {
    T::from_u64(x).expect("scalar type cannot represent an integer")
}

#[inline]
pub(crate) fn from_i64<T: FromPrimitive>(x: i64) -> T {
    T::from_i64(x).expect("scalar type cannot represent an integer")
}

/// `|x| <= tol` using only ordered-field operations.
pub(crate) fn within<T: Field>(x: &T, tol: &T) -> bool {
    let neg = T::zero() - tol.clone();
    *x <= *tol && *x >= neg
}

/// Binomial coefficient `C(n, k)` by the multiplicative recurrence, evaluated
/// in `T`. Exact for rationals; for floats it stays finite far past the point
/// where factorials overflow.
pub fn binomial<T: Field>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        acc = acc * from_u64::<T>(n - i) / from_u64::<T>(i + 1);
    }
    acc
}

/// NaN test for scalars without `is_nan`; exact types never compare unequal
/// to themselves.
#[allow(clippy::eq_op)]
pub(crate) fn is_nan<T: PartialEq>(x: &T) -> bool {
    x != x
}

/// `ln(sum(exp(xs)))` without overflow. Returns `-inf` for an empty slice.
pub(crate) fn log_sum_exp<T: Real>(xs: &[T]) -> T {
    let max = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() || !max.is_finite() {
        return max;
    }
    let sum = xs.iter().fold(T::zero(), |acc, &x| acc + (x - max).exp());
    max + sum.ln()
}
