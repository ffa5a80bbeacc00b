//! Scaling limits of the walk.
//!
//! * Diffusive: for `a = d` fixed, `X_n / sqrt(n)` tends to a centred normal
//!   law with variance `a / (1 - a)`, whatever the initial chirality.
//! * Ballistic: with `a = d = a_n = 1 - theta/n`, `X_n / n` tends to a law with
//!   atoms `e^(-theta) alpha` at `-1` and `e^(-theta) beta` at `+1` and density
//!
//!   ```text
//!   f(x) = theta e^(-theta) / 2 * [ I0(theta s) + I1(theta s) / s ],  s = sqrt(1 - x^2)
//!   ```
//!
//!   on `(-1, 1)`.

mod bessel;
mod quadrature;

pub use bessel::{bessel_i, BESSEL_MAX_ARG};
pub use quadrature::adaptive_simpson;

use crate::distribution::{distribution, hyp2f1_terminating, InitialDistribution};
use crate::error::{Error, Result};
use crate::pqrs::WalkParameters;
use crate::scalar::{from_u64, lit, Real};

fn check_theta<T: Real>(theta: T) -> Result<()> {
    if theta > T::zero() && theta < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("theta = {theta:?} must lie in (0, 1)")))
    }
}

/// Density of the absolutely continuous part of the ballistic limit.
pub fn mixed_limit_density<T: Real>(x: T, theta: T) -> Result<T> {
    check_theta(theta)?;
    if x.is_nan() || x.abs() >= T::one() {
        return Err(Error::Domain(format!("x = {x:?} must lie in (-1, 1)")));
    }
    let s = (T::one() - x * x).sqrt();
    let i0 = bessel_i(0, theta * s)?;
    let i1 = bessel_i(1, theta * s)?;
    Ok(theta * (-theta).exp() / lit(2.0) * (i0 + i1 / s))
}

/// `f(sin t) cos t`, the density after `x = sin t`. The `1/s` singularity of
/// the `I1` term cancels against `cos t`, leaving a smooth integrand on
/// `[-pi/2, pi/2]`.
fn density_in_angle<T: Real>(t: T, theta: T) -> T {
    let s = t.cos().max(T::zero());
    let i0 = bessel_i(0, theta * s).expect("argument below one");
    let i1 = bessel_i(1, theta * s).expect("argument below one");
    theta * (-theta).exp() / lit(2.0) * (i0 * s + i1)
}

const QUAD_TOL: f64 = 1e-14;

/// Ballistic limit law: two atoms plus the Bessel density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixedLimitLaw<T> {
    theta: T,
    phi: InitialDistribution<T>,
}

impl<T: Real> MixedLimitLaw<T> {
    pub fn new(theta: T, phi: InitialDistribution<T>) -> Result<Self> {
        check_theta(theta)?;
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    /// Mass `e^(-theta) alpha` at `-1`.
    pub fn atom_minus1(&self) -> T {
        (-self.theta).exp() * self.phi.alpha()
    }

    /// Mass `e^(-theta) beta` at `+1`.
    pub fn atom_plus1(&self) -> T {
        (-self.theta).exp() * self.phi.beta()
    }

    pub fn density(&self, x: T) -> Result<T> {
        mixed_limit_density(x, self.theta)
    }

    /// `∫_{-1}^{1} f`, by adaptive quadrature.
    pub fn continuous_mass(&self) -> T {
        self.continuous_mass_below(T::one())
    }

    fn continuous_mass_below(&self, x: T) -> T {
        let lo = -T::FRAC_PI_2();
        let hi = x.max(-T::one()).min(T::one()).asin();
        if hi <= lo {
            return T::zero();
        }
        let theta = self.theta;
        adaptive_simpson(|t| density_in_angle(t, theta), lo, hi, lit(QUAD_TOL))
    }

    /// Atoms plus continuous mass; equals one up to quadrature error.
    pub fn total_mass(&self) -> T {
        self.atom_minus1() + self.atom_plus1() + self.continuous_mass()
    }

    /// `P(Z <= x)`.
    pub fn cdf(&self, x: T) -> T {
        if x < -T::one() {
            T::zero()
        } else if x >= T::one() {
            T::one()
        } else {
            self.atom_minus1() + self.continuous_mass_below(x)
        }
    }
}

/// Walk with `a = d = 1 - theta / n`.
pub fn ballistic_walk<T: Real>(theta: T, n: u64) -> Result<WalkParameters<T>> {
    check_theta(theta)?;
    if n == 0 {
        return Err(Error::InvalidTime(n));
    }
    WalkParameters::symmetric(T::one() - theta / from_u64(n))
}

/// One grid point of a CDF comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfPoint<T> {
    pub x: T,
    pub exact: T,
    pub limit: T,
}

/// Exact CDF of `X_n / n` under `a_n = 1 - theta/n` beside the mixed limit CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfComparison<T> {
    pub n: u64,
    pub points: Vec<CdfPoint<T>>,
    pub sup_gap: T,
}

/// Compares CDFs on `grid_points` equally spaced points of `[-1, 1]`.
pub fn ballistic_cdf_gap<T: Real>(
    theta: T,
    phi: InitialDistribution<T>,
    n: u64,
    grid_points: usize,
) -> Result<CdfComparison<T>> {
    if grid_points < 2 {
        return Err(Error::InvalidParameter("need at least two grid points".into()));
    }
    let law = MixedLimitLaw::new(theta, phi)?;
    let exact = distribution(n, ballistic_walk(theta, n)?, phi)?;
    let nn = from_u64::<T>(n);
    let last = from_u64::<T>(grid_points as u64 - 1);
    let mut points = Vec::with_capacity(grid_points);
    let mut sup_gap = T::zero();
    for j in 0..grid_points {
        let x = lit::<T>(2.0) * from_u64::<T>(j as u64) / last - T::one();
        // Lattice points k / n <= x, with slack for rounding in x * n.
        let cutoff = x * nn + lit(1e-9);
        let exact_cdf = exact
            .iter()
            .filter(|(k, _)| T::from(*k).unwrap() <= cutoff)
            .fold(T::zero(), |acc, (_, p)| acc + p);
        let limit = law.cdf(x);
        sup_gap = sup_gap.max((exact_cdf - limit).abs());
        points.push(CdfPoint { x, exact: exact_cdf, limit });
    }
    Ok(CdfComparison { n, points, sup_gap })
}

/// Finite-`n` cluster sums beside their `n -> infinity` limits.
///
/// With `a_n = 1 - theta/n`, `z = (1 - a_n)^2 / a_n^2` and `k = round(x n)`:
///
/// ```text
/// 2F1(-(k-1), -(n-k-1); 1; z) -> I0(2 theta sqrt(x(1-x)))
/// 2F1(-(k-1), -(n-k-1); 2; z) -> I1(2 theta sqrt(x(1-x))) / (theta sqrt(x(1-x)))
/// ```
///
/// The `printed_*` fields evaluate the same limits with `sqrt(1 - x^2)` in the
/// Bessel argument, a variant that appears in some statements of this result;
/// they are reported only so the two readings can be compared numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterLimitCheck<T> {
    pub k: u64,
    pub z: T,
    pub finite_f1: T,
    pub limit_f1: T,
    pub finite_f2: T,
    pub limit_f2: T,
    pub printed_limit_f1: T,
    pub printed_limit_f2: T,
}

impl<T: Real> ClusterLimitCheck<T> {
    pub fn gap_f1(&self) -> T {
        (self.finite_f1 - self.limit_f1).abs()
    }

    pub fn gap_f2(&self) -> T {
        (self.finite_f2 - self.limit_f2).abs()
    }
}

pub fn lemma8_asymptotic_check<T: Real>(theta: T, x: T, n: u64) -> Result<ClusterLimitCheck<T>> {
    check_theta(theta)?;
    if !(x > T::zero() && x < lit(0.5)) {
        return Err(Error::Domain(format!("x = {x:?} must lie in (0, 1/2)")));
    }
    let k = (x * from_u64(n)).round().to_u64().unwrap_or(0);
    if k < 1 || k + 1 > n {
        return Err(Error::Domain(format!("k = round(x n) = {k} must satisfy 1 <= k <= n - 1")));
    }
    let a_n = T::one() - theta / from_u64(n);
    let z = ((T::one() - a_n) / a_n).powi(2);
    let (neg_k, neg_m) = (1 - k as i64, 1 - (n - k) as i64);
    let finite_f1 = hyp2f1_terminating(neg_k, neg_m, 1, z)?;
    let finite_f2 = hyp2f1_terminating(neg_k, neg_m, 2, z)?;
    let root = (x * (T::one() - x)).sqrt();
    let printed_root = (T::one() - x * x).sqrt();
    let two_theta = lit::<T>(2.0) * theta;
    Ok(ClusterLimitCheck {
        k,
        z,
        finite_f1,
        limit_f1: bessel_i(0, two_theta * root)?,
        finite_f2,
        limit_f2: bessel_i(1, two_theta * root)? / (theta * root),
        printed_limit_f1: bessel_i(0, two_theta * printed_root)?,
        printed_limit_f2: bessel_i(1, two_theta * printed_root)? / (theta * root),
    })
}

/// Variance `a / (1 - a)` of the diffusive limit; requires `a = d`.
pub fn diffusive_variance<T: Real>(params: &WalkParameters<T>) -> Result<T> {
    if params.a() != params.d() {
        return Err(Error::NotApplicable(
            "diffusive variance a/(1-a) needs a = d".into(),
        ));
    }
    Ok(params.a() / params.c())
}
