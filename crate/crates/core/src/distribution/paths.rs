//! Path sums `Xi(l, m)`: the sum of all products of `l` factors `P` and `m`
//! factors `Q`, in every order.

use crate::error::{Error, Result};
use crate::pqrs::{basis_power, Basis, PqrsMatrix, RawMatrix2, WalkParameters};
use crate::scalar::{binomial, from_u64, Field};

/// Largest `l + m` accepted by the enumeration oracles.
pub const ENUMERATION_BUDGET: u64 = 22;

/// Numbers of left (`l`) and right (`m`) steps of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathCount {
    pub l: u64,
    pub m: u64,
}

impl PathCount {
    pub fn new(l: u64, m: u64) -> Self {
        Self { l, m }
    }

    /// The lattice point reached after `n` steps at position `k`, if any.
    pub fn at(n: u64, k: i64) -> Option<Self> {
        let n_i = n as i64;
        if k.abs() > n_i || (n_i + k) % 2 != 0 {
            return None;
        }
        let m = ((n_i + k) / 2) as u64;
        Some(Self { l: n - m, m })
    }

    pub fn time(&self) -> u64 {
        self.l + self.m
    }

    /// Position `m - l`.
    pub fn position(&self) -> i64 {
        self.m as i64 - self.l as i64
    }
}

/// Closed form for `Xi(l, m)` in the PQRS basis.
///
/// For `l, m >= 1`
///
/// ```text
/// Xi(l, m) = a^l d^m  sum_{g=1}^{min(l,m)} (bc/ad)^g C(l-1, g-1) C(m-1, g-1)
///            * [ (l-g)/(a g) P + (m-g)/(d g) Q + R/c + S/b ]
/// ```
///
/// and `Xi(l, 0) = a^(l-1) P`, `Xi(0, m) = d^(m-1) Q`. The sum over `g` runs
/// over the number of `P`-to-`Q` alternations; every path with the same
/// alternation count contributes the same monomial.
pub fn xi<T: Field>(pc: PathCount, params: WalkParameters<T>) -> Result<PqrsMatrix<T>> {
    let PathCount { l, m } = pc;
    match (l, m) {
        (0, 0) => Err(Error::InvalidParameter("Xi(0, 0) is not a path sum".into())),
        (l, 0) => Ok(basis_power(Basis::P, l, params)),
        (0, m) => Ok(basis_power(Basis::Q, m, params)),
        (l, m) => {
            if !params.is_nondegenerate() {
                return Err(Error::DegenerateParameters);
            }
            let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
            let ratio = params.cluster_ratio();
            let prefactor = num_traits::pow(a.clone(), l as usize) * num_traits::pow(d.clone(), m as usize);
            let mut coeffs = [T::zero(), T::zero(), T::zero(), T::zero()];
            let mut ratio_pow = T::one();
            for g in 1..=l.min(m) {
                ratio_pow = ratio_pow * ratio.clone();
                let weight = prefactor.clone()
                    * ratio_pow.clone()
                    * binomial::<T>(l - 1, g - 1)
                    * binomial::<T>(m - 1, g - 1);
                let gamma = from_u64::<T>(g);
                let terms = [
                    from_u64::<T>(l - g) / (a.clone() * gamma.clone()),
                    from_u64::<T>(m - g) / (d.clone() * gamma),
                    T::one() / c.clone(),
                    T::one() / b.clone(),
                ];
                for (slot, t) in coeffs.iter_mut().zip(terms) {
                    *slot = slot.clone() + weight.clone() * t;
                }
            }
            let [cp, cq, cr, cs] = coeffs;
            Ok(PqrsMatrix::new(cp, cq, cr, cs, params))
        }
    }
}

/// `Xi(l, m)` as a raw matrix: the sum of the products of every arrangement
/// of `l` `P`s and `m` `Q`s. Exponential in `l + m`.
pub fn xi_raw_bruteforce<T: Field>(pc: PathCount, params: &WalkParameters<T>) -> Result<RawMatrix2<T>> {
    let n = pc.time();
    if n > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "path length",
            requested: n,
            limit: ENUMERATION_BUDGET,
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("Xi(0, 0) is not a path sum".into()));
    }
    let p = PqrsMatrix::basis(Basis::P, params.clone()).compose();
    let q = PqrsMatrix::basis(Basis::Q, params.clone()).compose();
    let mut total = RawMatrix2::zero();
    // Bit i of the mask set means factor i (from the left) is Q.
    for mask in masks_with_popcount(n as u32, pc.m as u32) {
        let mut prod = RawMatrix2::identity();
        for i in 0..n {
            let factor = if mask >> i & 1 == 1 { q.clone() } else { p.clone() };
            prod = prod * factor;
        }
        total = total + prod;
    }
    Ok(total)
}

/// [`xi_raw_bruteforce`] decomposed in the PQRS basis; the reference the
/// closed form is checked against.
pub fn xi_bruteforce<T: Field>(pc: PathCount, params: WalkParameters<T>) -> Result<PqrsMatrix<T>> {
    let total = xi_raw_bruteforce(pc, &params)?;
    PqrsMatrix::decompose(&total, params)
}

/// All `n`-bit masks with exactly `ones` bits set, in increasing order
/// (Gosper's hack).
fn masks_with_popcount(n: u32, ones: u32) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let first = if ones == 0 { 0u64 } else { (1u64 << ones) - 1 };
    let mut next = Some(first).filter(|&f| f < limit);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            Some(succ).filter(|&s| s < limit)
        };
        Some(cur as u32)
    })
}
