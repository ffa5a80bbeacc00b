//! Terminating Gauss hypergeometric sums.

use crate::error::{Error, Result};
use crate::scalar::{from_i64, from_u64, log_sum_exp, Field, Real};

/// `2F1(-K, -M; c; z)` for nonnegative integers `K`, `M`, passed as the
/// nonpositive parameters `neg_k = -K`, `neg_m = -M`.
///
/// The series stops after `min(K, M)` terms. Terms are generated by the
/// ratio `t[g+1] / t[g] = (g - K)(g - M) z / ((c + g)(g + 1))`.
pub fn hyp2f1_terminating<T: Field>(neg_k: i64, neg_m: i64, c: u32, z: T) -> Result<T> {
    if neg_k > 0 || neg_m > 0 {
        return Err(Error::Domain(format!(
            "2F1 numerator parameters ({neg_k}, {neg_m}) must be nonpositive integers"
        )));
    }
    if c == 0 {
        return Err(Error::Domain("2F1 denominator parameter must be positive".into()));
    }
    let len = neg_k.unsigned_abs().min(neg_m.unsigned_abs());
    let mut term = T::one();
    let mut sum = T::one();
    for g in 0..len {
        let gi = g as i64;
        let num = from_i64::<T>((gi + neg_k) * (gi + neg_m));
        let den = from_u64::<T>((u64::from(c) + g) * (g + 1));
        term = term * num * z.clone() / den;
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// Natural logs of the two sums `F1`, `F2` attached to an interior lattice
/// point with `k` left steps out of `n`:
///
/// ```text
/// F_i = 2F1(-(k-1), -(n-k-1); i; z),  i = 1, 2
/// ```
///
/// computed with log-sum-exp so that huge `z^g` binomial products and tiny
/// probability prefactors can be combined afterwards without overflow.
/// Requires `z > 0`, `1 <= k <= n - 1`.
pub(crate) fn ln_cluster_sums<T: Real>(n: u64, k: u64, ln_z: T) -> (T, T) {
    debug_assert!(k >= 1 && k < n);
    let (u, v) = (k - 1, n - k - 1);
    let len = u.min(v);
    let mut ln_f1 = Vec::with_capacity(len as usize + 1);
    let mut ln_f2 = Vec::with_capacity(len as usize + 1);
    // F1 term: C(u, g) C(v, g) z^g ; F2 term additionally divided by (g + 1).
    // ln C(u, g) C(v, g) is built one ratio at a time with a compensated sum;
    // the running total reaches thousands for large n.
    let (mut sum, mut carry) = (T::zero(), T::zero());
    for g in 0..=len {
        if g > 0 {
            let (gg, top_u, top_v) = (from_u64::<T>(g), from_u64::<T>(u - g + 1), from_u64::<T>(v - g + 1));
            let step = (top_u * top_v / (gg * gg)).ln();
            let next = sum + step;
            carry = carry + if sum.abs() >= step.abs() { (sum - next) + step } else { (step - next) + sum };
            sum = next;
        }
        let t = sum + carry + from_u64::<T>(g) * ln_z;
        ln_f1.push(t);
        ln_f2.push(t - from_u64::<T>(g + 1).ln());
    }
    (log_sum_exp(&ln_f1), log_sum_exp(&ln_f2))
}
