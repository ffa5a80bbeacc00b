//! Probability mass function of the walk position after `n` steps.

use crate::error::{Error, Result};
use crate::pqrs::{Basis, PqrsMatrix, RawMatrix2, WalkParameters};
use crate::scalar::{from_u64, lit, within, Field, Real};

use super::hypergeometric::ln_cluster_sums;
use super::paths::ENUMERATION_BUDGET;

/// Initial chirality `phi = (alpha, beta)`: the probabilities that the step
/// preceding time zero was to the left (`alpha`) or to the right (`beta`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialDistribution<T> {
    alpha: T,
    beta: T,
}

impl<T: Field> InitialDistribution<T> {
    /// `phi = (alpha, 1 - alpha)`.
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha:?} must lie in [0, 1]"
            )));
        }
        let beta = T::one() - alpha.clone();
        Ok(Self { alpha, beta })
    }

    /// `phi = (alpha, beta)`, requiring both nonnegative with unit sum to 1e-12.
    pub fn from_pair(alpha: T, beta: T) -> Result<Self> {
        let excess = alpha.clone() + beta.clone() - T::one();
        if !(alpha >= T::zero() && beta >= T::zero()) || !within(&excess, &lit(1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "({alpha:?}, {beta:?}) is not a probability vector"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha.clone()
    }

    pub fn beta(&self) -> T {
        self.beta.clone()
    }

    pub fn as_vector(&self) -> [T; 2] {
        [self.alpha.clone(), self.beta.clone()]
    }
}

/// How a [`Distribution`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfMethod {
    /// Closed form over the lattice (hypergeometric cluster sums).
    ClosedForm,
    /// Direct iteration of the chirality-resolved one-step recursion.
    Evolution,
    /// Sum over all `2^n` step sequences.
    Enumeration,
}

/// Law of `X_n` on `{-n, -n+2, ..., n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    n: u64,
    /// `probs[m]` is `P(X_n = 2m - n)`, i.e. indexed by the number of right steps.
    probs: Vec<T>,
    method: PmfMethod,
}

impl<T: Field> Distribution<T> {
    pub(crate) fn from_right_steps(n: u64, probs: Vec<T>, method: PmfMethod) -> Self {
        debug_assert_eq!(probs.len() as u64, n + 1);
        Self { n, probs, method }
    }

    pub fn time(&self) -> u64 {
        self.n
    }

    pub fn method(&self) -> PmfMethod {
        self.method
    }

    /// `P(X_n = k)`; zero off the lattice.
    pub fn prob(&self, k: i64) -> T {
        let n = self.n as i64;
        if k.abs() > n || (n + k) % 2 != 0 {
            return T::zero();
        }
        self.probs[((n + k) / 2) as usize].clone()
    }

    /// `(position, probability)` pairs in increasing position.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        let n = self.n as i64;
        self.probs
            .iter()
            .enumerate()
            .map(move |(m, p)| (2 * m as i64 - n, p.clone()))
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> {
        let n = self.n as i64;
        (0..=n).map(move |m| 2 * m - n)
    }

    pub fn total(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |acc, p| acc + p)
    }

    /// Probabilities indexed by the number of right steps.
    pub fn right_step_probs(&self) -> &[T] {
        &self.probs
    }
}

impl<T: Real> Distribution<T> {
    /// `E[g(X_n)]`.
    pub fn expect(&self, g: impl Fn(T) -> T) -> T {
        self.iter()
            .fold(T::zero(), |acc, (k, p)| acc + p * g(T::from(k).unwrap()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let n = self.n.max(other.n) as i64;
        (-n..=n)
            .map(|k| (self.prob(k) - other.prob(k)).abs())
            .fold(T::zero(), T::max)
    }
}

/// Cancellation factor above which the closed form is abandoned for the
/// direct recursion (roughly six lost digits).
const CANCELLATION_LIMIT: f64 = 1e6;

/// Exact law of `X_n` started at the origin with chirality `phi`.
///
/// Interior lattice points come from the closed form in terms of the cluster
/// sums `F1`, `F2`; the two extremes are `a^(n-1)(a alpha + b beta)` at `-n`
/// and `d^(n-1)(c alpha + d beta)` at `n`. Log-space weights keep the large-`n`
/// prefactors `a^(k-2) d^(n-k-2)` from underflowing. When `ad - bc = 0`,
/// `abcd` underflows, or `ad < bc` causes heavy cancellation, the chirality
/// recursion is iterated instead.
pub fn distribution<T: Real>(
    n: u64,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<Distribution<T>> {
    if n == 0 {
        return Err(Error::InvalidTime(n));
    }
    if !params.has_pqrs_basis() || !params.is_nondegenerate() {
        return distribution_by_evolution(n, params, phi);
    }
    match closed_form(n, &params, &phi) {
        Some(d) => Ok(d),
        None => distribution_by_evolution(n, params, phi),
    }
}

/// Per-lattice-point weights for the interior of the support.
///
/// For `1 <= k <= n/2` (number of left steps on the positive side) the point
/// `n - 2k` carries `a^(k-2) d^(n-k-2) F_i` and its mirror `-(n - 2k)` carries
/// `a^(n-k-2) d^(k-2) F_i`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct InteriorWeight<T> {
    pub k: u64,
    pub plus: [T; 2],
    pub minus: [T; 2],
}

pub(crate) fn interior_weights<T: Real>(n: u64, params: &WalkParameters<T>) -> Vec<InteriorWeight<T>> {
    if n < 2 {
        return Vec::new();
    }
    let (ln_a, ln_d) = (params.a().ln(), params.d().ln());
    let ln_z = params.cluster_ratio().ln();
    (1..=n / 2)
        .map(|k| {
            let few = from_u64::<T>(k) - lit(2.0);
            let many = from_u64::<T>(n - k) - lit(2.0);
            let ln_plus = few * ln_a + many * ln_d;
            let ln_minus = many * ln_a + few * ln_d;
            let (ln_f1, ln_f2) = ln_cluster_sums(n, k, ln_z);
            InteriorWeight {
                k,
                plus: [(ln_plus + ln_f1).exp(), (ln_plus + ln_f2).exp()],
                minus: [(ln_minus + ln_f1).exp(), (ln_minus + ln_f2).exp()],
            }
        })
        .collect()
}

/// Extreme masses `(P(X_n = -n), P(X_n = n))`.
pub(crate) fn extremes<T: Real>(n: u64, params: &WalkParameters<T>, phi: &InitialDistribution<T>) -> (T, T) {
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let (al, be) = (phi.alpha(), phi.beta());
    let e = i32::try_from(n - 1).expect("time index fits in i32");
    let left = a.powi(e) * (a * al + b * be);
    let right = d.powi(e) * (c * al + d * be);
    (left, right)
}

/// Interior probabilities `P(X_n = n - 2k)` and `P(X_n = -(n - 2k))`, each
/// split into its `F2` part and its `F1` part so callers can assess
/// cancellation.
pub(crate) struct InteriorTerms<T> {
    pub plus: [T; 2],
    pub minus: [T; 2],
}

impl<T: Real> InteriorTerms<T> {
    pub fn plus_value(&self) -> T {
        self.plus[0] + self.plus[1]
    }

    pub fn minus_value(&self) -> T {
        self.minus[0] + self.minus[1]
    }
}

pub(crate) fn interior_terms<T: Real>(
    n: u64,
    w: &InteriorWeight<T>,
    params: &WalkParameters<T>,
    phi: &InitialDistribution<T>,
) -> InteriorTerms<T> {
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let (al, be) = (phi.alpha(), phi.beta());
    let k = from_u64::<T>(w.k);
    let nk = from_u64::<T>(n - w.k);
    let bc = b * c;
    let plus = (d * k + c * nk) * a * al + (b * k + a * nk) * d * be;
    let minus = (c * k + d * nk) * a * al + (a * k + b * nk) * d * be;
    let f1 = (a * c * al + b * d * be) * params.delta();
    InteriorTerms {
        plus: [bc * plus * w.plus[1], f1 * w.plus[0]],
        minus: [bc * minus * w.minus[1], f1 * w.minus[0]],
    }
}

fn closed_form<T: Real>(
    n: u64,
    params: &WalkParameters<T>,
    phi: &InitialDistribution<T>,
) -> Option<Distribution<T>> {
    let mut probs = vec![T::zero(); n as usize + 1];
    let (left, right) = extremes(n, params, phi);
    probs[0] = left;
    probs[n as usize] = right;
    let limit: T = lit(CANCELLATION_LIMIT);
    for w in interior_weights(n, params) {
        let t = interior_terms(n, &w, params, phi);
        let (plus, minus) = (t.plus_value(), t.minus_value());
        for (value, [f2_part, f1_part]) in [(plus, t.plus), (minus, t.minus)] {
            let scale = f2_part.abs() + f1_part.abs();
            let bound = limit * value.abs().max(T::min_positive_value());
            if !scale.is_finite() || bound.is_nan() || scale > bound {
                return None;
            }
        }
        // Position n - 2k has m = n - k right steps; -(n - 2k) has m = k.
        probs[(n - w.k) as usize] = plus;
        probs[w.k as usize] = minus;
    }
    Some(Distribution::from_right_steps(n, probs, PmfMethod::ClosedForm))
}

/// Iterates `psi_k(t+1) = P psi_(k+1)(t) + Q psi_(k-1)(t)` on chirality-resolved
/// vectors and returns them at time `n`, indexed by right-step count.
///
/// The starting vector is `psi_0(0) = phi`; the `L` component at time `t` is
/// the probability of being at that site having just stepped left.
pub fn evolve_chirality<T: Field>(
    n: u64,
    params: &WalkParameters<T>,
    phi: &InitialDistribution<T>,
) -> Vec<[T; 2]> {
    let p = PqrsMatrix::basis(Basis::P, params.clone()).compose();
    let q = PqrsMatrix::basis(Basis::Q, params.clone()).compose();
    let mut state = vec![phi.as_vector()];
    for t in 0..n as usize {
        // At time t the vector index is the right-step count m in 0..=t.
        let mut next = vec![[T::zero(), T::zero()]; t + 2];
        for (m, v) in state.iter().enumerate() {
            // Step left keeps m, step right increments it.
            let [l0, l1] = p.apply(v);
            let [r0, r1] = q.apply(v);
            next[m] = [next[m][0].clone() + l0, next[m][1].clone() + l1];
            next[m + 1] = [next[m + 1][0].clone() + r0, next[m + 1][1].clone() + r1];
        }
        state = next;
    }
    state
}

/// Law of `X_n` from the one-step recursion; exact, `O(n^2)`.
pub fn distribution_by_evolution<T: Field>(
    n: u64,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<Distribution<T>> {
    if n == 0 {
        return Err(Error::InvalidTime(n));
    }
    let probs = evolve_chirality(n, &params, &phi)
        .into_iter()
        .map(|[l, r]| l + r)
        .collect();
    Ok(Distribution::from_right_steps(n, probs, PmfMethod::Evolution))
}

/// Law of `X_n` as `1ᵀ Xi(l, m) phi`, summing the raw matrix products of all
/// `2^n` step sequences. Reference implementation for small `n`.
pub fn probability_bruteforce<T: Field>(
    n: u64,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<Distribution<T>> {
    if n == 0 {
        return Err(Error::InvalidTime(n));
    }
    if n > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "path length",
            requested: n,
            limit: ENUMERATION_BUDGET,
        });
    }
    let p = PqrsMatrix::basis(Basis::P, params.clone()).compose();
    let q = PqrsMatrix::basis(Basis::Q, params).compose();
    let mut probs = vec![T::zero(); n as usize + 1];
    descend(&p, &q, phi.as_vector(), 0, n, &mut probs);
    Ok(Distribution::from_right_steps(n, probs, PmfMethod::Enumeration))
}

/// Depth-first walk over step sequences; `rights` counts `Q` factors so far.
fn descend<T: Field>(
    p: &RawMatrix2<T>,
    q: &RawMatrix2<T>,
    v: [T; 2],
    rights: usize,
    remaining: u64,
    probs: &mut [T],
) {
    if remaining == 0 {
        let [x, y] = v;
        probs[rights] = probs[rights].clone() + x + y;
        return;
    }
    descend(p, q, p.apply(&v), rights, remaining - 1, probs);
    descend(p, q, q.apply(&v), rights + 1, remaining - 1, probs);
}
