use crate::error::{Error, Result};
use crate::scalar::{from_u64, lit, Real};

/// Largest argument accepted by [`bessel_i`].
pub const BESSEL_MAX_ARG: f64 = 50.0;

/// Modified Bessel function of the first kind `I_nu(z)` for `nu` in `{0, 1}`,
/// from the power series `sum_j (z/2)^(nu + 2j) / (j! (nu + j)!)`.
///
/// Summation stops once a term drops below `1e-17` of the partial sum. All
/// terms are positive, so there is no cancellation.
pub fn bessel_i<T: Real>(nu: u32, z: T) -> Result<T> {
    if nu > 1 {
        return Err(Error::Domain(format!("order {nu} not supported, expected 0 or 1")));
    }
    if z.is_nan() || z < T::zero() {
        return Err(Error::Domain(format!("argument {z:?} must be nonnegative")));
    }
    if z > lit(BESSEL_MAX_ARG) {
        return Err(Error::Overflow(z.to_f64().unwrap_or(f64::INFINITY)));
    }
    let half = z / lit(2.0);
    let q = half * half;
    let mut term = if nu == 0 { T::one() } else { half };
    let mut sum = term;
    let eps: T = lit(1e-17);
    let mut j = 0u64;
    while term > eps * sum {
        j += 1;
        term = term * q / (from_u64::<T>(j) * from_u64::<T>(j + u64::from(nu)));
        sum = sum + term;
    }
    Ok(sum)
}
