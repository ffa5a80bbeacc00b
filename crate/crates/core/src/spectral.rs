//! Characteristic function, integer moments and reflection symmetry of `X_n`.
//!
//! Both the characteristic function and the moments pair each interior
//! lattice point `n - 2k` with its mirror `-(n - 2k)`: the even part
//! `P(n-2k) + P(-(n-2k))` multiplies `cos((n-2k) xi)` and the even powers, the
//! odd part `P(n-2k) - P(-(n-2k))` multiplies `sin((n-2k) xi)` and the odd
//! powers. The two sides carry the prefactors `a^(k-2) d^(n-k-2)` and
//! `a^(n-k-2) d^(k-2)`, which agree only when `a = d`; each part is therefore
//! assembled from the two sides' cluster-sum terms rather than from a shared
//! prefactor.

use num_complex::Complex;

use crate::distribution::{
    distribution, extremes, interior_terms, interior_weights, InitialDistribution,
};
use crate::error::{Error, Result};
use crate::pqrs::WalkParameters;
use crate::scalar::{from_u64, lit, Real};

/// A characteristic function value at angle `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicFunctionSample<T> {
    pub xi: T,
    pub value: Complex<T>,
}

/// Even and odd parts of the mirrored pair at distance `n - 2k`.
struct MirrorPair<T> {
    distance: T,
    even: T,
    odd: T,
}

/// Mirror pairs for `k = 1 ..= [(n-1)/2]`, plus the centre mass `P(X_n = 0)`
/// when `n` is even.
fn mirror_pairs<T: Real>(
    n: u64,
    params: &WalkParameters<T>,
    phi: &InitialDistribution<T>,
) -> (Vec<MirrorPair<T>>, T) {
    let mut pairs = Vec::new();
    let mut centre = T::zero();
    for w in interior_weights(n, params) {
        let t = interior_terms(n, &w, params, phi);
        if 2 * w.k == n {
            // n = 2k: both sides describe the single point 0.
            centre = t.plus_value();
            continue;
        }
        pairs.push(MirrorPair {
            distance: from_u64::<T>(n - 2 * w.k),
            even: t.plus_value() + t.minus_value(),
            odd: (t.plus[0] - t.minus[0]) + (t.plus[1] - t.minus[1]),
        });
    }
    (pairs, centre)
}

fn require_closed_form<T: Real>(n: u64, params: &WalkParameters<T>) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidTime(n));
    }
    if !params.is_nondegenerate() {
        return Err(Error::DegenerateParameters);
    }
    Ok(())
}

/// `E[exp(i xi X_n)]` in closed form.
pub fn char_fn<T: Real>(
    n: u64,
    xi: T,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<Complex<T>> {
    require_closed_form(n, &params)?;
    let (left, right) = extremes(n, &params, &phi);
    let nn = from_u64::<T>(n);
    let mut re = (left + right) * (nn * xi).cos();
    let mut im = (right - left) * (nn * xi).sin();
    let (pairs, centre) = mirror_pairs(n, &params, &phi);
    for pair in &pairs {
        re = re + pair.even * (pair.distance * xi).cos();
        im = im + pair.odd * (pair.distance * xi).sin();
    }
    Ok(Complex::new(re + centre, im))
}

/// Characteristic function on `points` equally spaced angles over `[-pi, pi]`.
pub fn char_fn_grid<T: Real>(
    n: u64,
    points: usize,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<Vec<CharacteristicFunctionSample<T>>> {
    if points < 2 {
        return Err(Error::InvalidParameter("need at least two grid points".into()));
    }
    let last = from_u64::<T>(points as u64 - 1);
    (0..points)
        .map(|j| {
            // (2j/(points-1) - 1) pi hits 0 exactly at the midpoint.
            let xi = (lit::<T>(2.0) * from_u64::<T>(j as u64) / last - T::one()) * T::PI();
            char_fn(n, xi, params, phi).map(|value| CharacteristicFunctionSample { xi, value })
        })
        .collect()
}

/// `E[X_n^m]`, `m >= 1`, from the parity-split closed forms.
pub fn moment<T: Real>(
    n: u64,
    m: u32,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<T> {
    require_closed_form(n, &params)?;
    if m == 0 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    let power = i32::try_from(m).map_err(|_| Error::InvalidParameter("moment order too large".into()))?;
    let (left, right) = extremes(n, &params, &phi);
    let nn = from_u64::<T>(n);
    let (pairs, _centre) = mirror_pairs(n, &params, &phi);
    let odd = m % 2 == 1;
    let edge = if odd { right - left } else { right + left };
    let mut total = edge * nn.powi(power);
    for pair in &pairs {
        let part = if odd { pair.odd } else { pair.even };
        total = total + part * pair.distance.powi(power);
    }
    Ok(total)
}

/// Closed-form symmetry predicate for `a = d`: symmetric for every `n` iff
/// `a = d = 1/2`, or `a = d` with `phi = (1/2, 1/2)`. Walks with `a != d` are
/// reported asymmetric.
pub fn symmetry_predicate<T: Real>(params: &WalkParameters<T>, phi: &InitialDistribution<T>) -> bool {
    let half: T = lit(0.5);
    if params.a() != params.d() {
        return false;
    }
    params.a() == half || (phi.alpha() == half && phi.beta() == half)
}

/// Checks `P(X_n = k) = P(X_n = -k)` within `1e-10` for every `n <= horizon`.
pub fn is_symmetric<T: Real>(
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
    horizon: u64,
) -> Result<bool> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let tol: T = lit(1e-10);
    for n in 1..=horizon {
        let dist = distribution(n, params, phi)?;
        let probs = dist.right_step_probs();
        let mirrored = probs.iter().zip(probs.iter().rev());
        if mirrored.into_iter().any(|(p, q)| (*p - *q).abs() > tol) {
            return Ok(false);
        }
    }
    Ok(true)
}
