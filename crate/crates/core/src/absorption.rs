//! Absorption at the origin for walks on `{0, 1, ..., N}` (barriers at `0`
//! and `N`) or on `{0, 1, ...}` (barrier at `0` only).
//!
//! The probability of hitting `0` first, started at site `k` with chirality
//! `phi`, is `alpha h(k, L) + beta h(k, R)` where `h` solves the first-step
//! equations of the absorbing chain on (site, chirality):
//!
//! ```text
//! h(k, L) = a h(k-1, L) + c h(k+1, R)
//! h(k, R) = b h(k-1, L) + d h(k+1, R)        1 <= k <= N-1
//! h(0, .) = 1,  h(N, .) = 0
//! ```
//!
//! That block-tridiagonal system is solved exactly for any `0 < a, d < 1`;
//! the `a = d` closed form and the first-passage path sums serve as checks.

use crate::distribution::InitialDistribution;
use crate::error::{Error, Result};
use crate::pqrs::{Basis, PqrsMatrix, WalkParameters};
use crate::scalar::{from_u64, is_nan, Field, Real};

/// Absorbing barriers: `0` and `N`, or `0` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySpec {
    Finite(usize),
    Infinite,
}

impl BoundarySpec {
    pub fn finite(n_sites: usize) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidParameter(format!(
                "upper barrier N = {n_sites} must be at least 2"
            )));
        }
        Ok(Self::Finite(n_sites))
    }

    fn check_start(&self, k: usize) -> Result<()> {
        match *self {
            BoundarySpec::Finite(n) if n < 2 => Err(Error::InvalidParameter(format!(
                "upper barrier N = {n} must be at least 2"
            ))),
            BoundarySpec::Finite(n) if k > n => Err(Error::InvalidParameter(format!(
                "start k = {k} lies beyond the barrier N = {n}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Which route produced an absorption probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsorptionMethod {
    ClosedForm,
    LinearSystem,
    TruncatedPaths,
}

impl AbsorptionMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            AbsorptionMethod::ClosedForm => "closed_form",
            AbsorptionMethod::LinearSystem => "linear_system",
            AbsorptionMethod::TruncatedPaths => "truncated_paths",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionResult<T> {
    pub boundary: BoundarySpec,
    pub start: usize,
    pub phi: InitialDistribution<T>,
    pub prob_hit_0: T,
    pub method: AbsorptionMethod,
    /// Independent reference value, when one was computed alongside.
    pub benchmark: Option<T>,
}

fn boundary_value<T: Field>(boundary: BoundarySpec, k: usize) -> Option<T> {
    match boundary {
        _ if k == 0 => Some(T::one()),
        BoundarySpec::Finite(n) if k == n => Some(T::zero()),
        _ => None,
    }
}

/// Two-barrier absorption probability for `a = d`:
///
/// ```text
/// ((1-a)(N-k) + (2a-1) alpha) / ((1-a) N + 2a - 1)
/// ```
///
/// which is `1 - k/N` at `a = 1/2`.
pub fn absorb_closed_form<T: Field>(
    n_sites: usize,
    k: usize,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
) -> Result<AbsorptionResult<T>> {
    let boundary = BoundarySpec::finite(n_sites)?;
    boundary.check_start(k)?;
    if params.a() != params.d() {
        return Err(Error::NotApplicable("two-barrier closed form needs a = d".into()));
    }
    let prob_hit_0 = boundary_value(boundary, k).unwrap_or_else(|| {
        let a = params.a();
        let c = params.c();
        let two_a_minus_1 = a.clone() + a - T::one();
        let num = c.clone() * from_u64::<T>((n_sites - k) as u64) + two_a_minus_1.clone() * phi.alpha();
        let den = c * from_u64::<T>(n_sites as u64) + two_a_minus_1;
        num / den
    });
    Ok(AbsorptionResult {
        boundary,
        start: k,
        phi,
        prob_hit_0,
        method: AbsorptionMethod::ClosedForm,
        benchmark: None,
    })
}

/// `[h(k, L), h(k, R)]` for every site `k = 0 ..= N`.
///
/// Block Thomas elimination: writing `u_k = M_k u_(k+1) + g_k`, with
/// `u_0 = (1, 1)`, each step inverts one 2x2 matrix. `O(N)`.
pub fn absorption_profile<T: Field>(n_sites: usize, params: &WalkParameters<T>) -> Result<Vec<[T; 2]>> {
    BoundarySpec::finite(n_sites)?;
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let zero = || T::zero();
    // M_k = [[m00, m01], [m10, m11]], g_k = [g0, g1]; only the L column of A
    // is nonzero, so A M_(k-1) and A g_(k-1) involve only the first rows.
    let mut ms: Vec<[T; 4]> = Vec::with_capacity(n_sites);
    let mut gs: Vec<[T; 2]> = Vec::with_capacity(n_sites);
    ms.push([zero(), zero(), zero(), zero()]);
    gs.push([T::one(), T::one()]);
    for k in 1..n_sites {
        let [pm00, pm01, _, _] = ms[k - 1].clone();
        let pg0 = gs[k - 1][0].clone();
        // G = I - A M_(k-1) with A = [[a, 0], [b, 0]].
        let g00 = T::one() - a.clone() * pm00.clone();
        let g01 = zero() - a.clone() * pm01.clone();
        let g10 = zero() - b.clone() * pm00;
        let g11 = T::one() - b.clone() * pm01;
        let det = g00.clone() * g11.clone() - g01.clone() * g10.clone();
        if det.is_zero() || is_nan(&det) {
            return Err(Error::SingularSystem(k));
        }
        // G^-1 = [[g11, -g01], [-g10, g00]] / det
        let inv = [
            g11 / det.clone(),
            (zero() - g01) / det.clone(),
            (zero() - g10) / det.clone(),
            g00 / det,
        ];
        // M_k = G^-1 C, C = [[0, c], [0, d]]
        let m01 = inv[0].clone() * c.clone() + inv[1].clone() * d.clone();
        let m11 = inv[2].clone() * c.clone() + inv[3].clone() * d.clone();
        ms.push([zero(), m01, zero(), m11]);
        // g_k = G^-1 A g_(k-1), A g = [a g0, b g0]
        let (ag0, ag1) = (a.clone() * pg0.clone(), b.clone() * pg0);
        gs.push([
            inv[0].clone() * ag0.clone() + inv[1].clone() * ag1.clone(),
            inv[2].clone() * ag0 + inv[3].clone() * ag1,
        ]);
    }
    let mut h = vec![[zero(), zero()]; n_sites + 1];
    h[0] = [T::one(), T::one()];
    for k in (1..n_sites).rev() {
        let next = h[k + 1].clone();
        let m = &ms[k];
        h[k] = [
            m[0].clone() * next[0].clone() + m[1].clone() * next[1].clone() + gs[k][0].clone(),
            m[2].clone() * next[0].clone() + m[3].clone() * next[1].clone() + gs[k][1].clone(),
        ];
    }
    Ok(h)
}

/// Two-barrier absorption probability for any `0 < a, d < 1`.
pub fn absorb_linear_system<T: Field>(
    n_sites: usize,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
    k: usize,
) -> Result<AbsorptionResult<T>> {
    let boundary = BoundarySpec::finite(n_sites)?;
    boundary.check_start(k)?;
    let prob_hit_0 = match boundary_value(boundary, k) {
        Some(v) => v,
        None => {
            let h = absorption_profile(n_sites, &params)?;
            let [hl, hr] = h[k].clone();
            phi.alpha() * hl + phi.beta() * hr
        }
    };
    Ok(AbsorptionResult {
        boundary,
        start: k,
        phi,
        prob_hit_0,
        method: AbsorptionMethod::LinearSystem,
        benchmark: None,
    })
}

/// Values of the first-passage generating functions at `z = 1`,
/// `(p~_k(1), r~_k(1))`, recovered from the linear system through
/// `h(k, L) = a p~ + c r~`, `h(k, R) = b p~ + d r~`. Needs `ad - bc != 0`.
pub fn generating_functions_at_one<T: Field>(
    n_sites: usize,
    params: &WalkParameters<T>,
    k: usize,
) -> Result<(T, T)> {
    params.require_basis()?;
    BoundarySpec::finite(n_sites)?.check_start(k)?;
    let h = absorption_profile(n_sites, params)?;
    let [hl, hr] = h[k].clone();
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let delta = params.delta();
    let p = (d * hl.clone() - c * hr.clone()) / delta.clone();
    let r = (a * hr - b * hl) / delta;
    Ok((p, r))
}

/// Roots of `d lambda^2 - (Delta z + 1/z) lambda + a = 0`, the spatial
/// recurrence shared by the generating functions:
///
/// ```text
/// lambda(+/-) = (Delta z^2 + 1 -/+ sqrt(Delta^2 z^4 - 2(ad + bc) z^2 + 1)) / (2 d z)
/// ```
pub fn lambda_roots<T: Real>(params: &WalkParameters<T>, z: T) -> (T, T) {
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let delta = params.delta();
    let z2 = z * z;
    let disc = (delta * delta * z2 * z2 - (T::one() + T::one()) * (a * d + b * c) * z2 + T::one())
        .max(T::zero())
        .sqrt();
    let two_dz = (d + d) * z;
    ((delta * z2 + T::one() - disc) / two_dz, (delta * z2 + T::one() + disc) / two_dz)
}

/// One-barrier hitting probability from the bounded solution of the spatial
/// recurrence at `z = 1`, whose roots are `1` and `a/d`.
///
/// For `d <= a` the walk drifts left or is recurrent and hits `0` surely.
/// For `d > a`, `h(k, L) = (a/d)^k` and `h(k, R) = (b/c)(a/d)^(k-1)`.
pub fn infinite_closed_form<T: Real>(params: &WalkParameters<T>, phi: &InitialDistribution<T>, k: usize) -> T {
    if k == 0 || params.d() <= params.a() {
        return T::one();
    }
    let ratio = params.a() / params.d();
    let e = i32::try_from(k).unwrap_or(i32::MAX);
    phi.alpha() * ratio.powi(e) + phi.beta() * params.b() / params.c() * ratio.powi(e - 1)
}

/// Upper barrier at which the doubling schedule gives up.
pub const INFINITE_MAX_SITES: usize = 1_000_000;

/// One-barrier absorption probability.
///
/// For `a = d` the walk is recurrent and the answer is `1`. Otherwise the
/// two-barrier solution is computed for `N = 8, 16, 32, ...` (skipping
/// `N <= k`) until two successive doublings change it by less than
/// `tolerance`; the closed form from [`infinite_closed_form`] is attached as
/// a benchmark.
pub fn absorb_infinite<T: Real>(
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
    k: usize,
    tolerance: T,
) -> Result<AbsorptionResult<T>> {
    let closed = |prob_hit_0| AbsorptionResult {
        boundary: BoundarySpec::Infinite,
        start: k,
        phi,
        prob_hit_0,
        method: AbsorptionMethod::ClosedForm,
        benchmark: None,
    };
    if k == 0 || params.a() == params.d() {
        return Ok(closed(T::one()));
    }
    let mut n_sites = 8usize;
    while n_sites <= k {
        n_sites *= 2;
    }
    let mut previous = absorb_linear_system(n_sites, params, phi, k)?.prob_hit_0;
    let mut agreements = 0;
    let mut iterations = 0u32;
    let mut last_change = T::infinity();
    while agreements < 2 {
        n_sites *= 2;
        iterations += 1;
        if n_sites > INFINITE_MAX_SITES {
            return Err(Error::NonConvergence {
                iterations,
                last_change: last_change.to_f64().unwrap_or(f64::NAN),
            });
        }
        let current = absorb_linear_system(n_sites, params, phi, k)?.prob_hit_0;
        last_change = (current - previous).abs();
        agreements = if last_change < tolerance { agreements + 1 } else { 0 };
        previous = current;
    }
    Ok(AbsorptionResult {
        boundary: BoundarySpec::Infinite,
        start: k,
        phi,
        prob_hit_0: previous,
        method: AbsorptionMethod::LinearSystem,
        benchmark: Some(infinite_closed_form(&params, &phi, k)),
    })
}

/// Picks the closed form when it applies and the linear system otherwise.
pub fn absorb<T: Real>(
    boundary: BoundarySpec,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
    k: usize,
    tolerance: T,
) -> Result<AbsorptionResult<T>> {
    match boundary {
        BoundarySpec::Finite(n) if params.a() == params.d() => absorb_closed_form(n, k, params, phi),
        BoundarySpec::Finite(n) => absorb_linear_system(n, params, phi, k),
        BoundarySpec::Infinite => absorb_infinite(params, phi, k, tolerance),
    }
}

/// Largest `sites * horizon` accepted by the path dynamic program.
pub const PATH_BUDGET: u64 = 400_000_000;

/// First-passage probabilities up to a horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPaths<T> {
    /// `first_passage[n]`: probability of first reaching `0` at time `n`
    /// without touching `N` before.
    pub first_passage: Vec<T>,
    /// Sum of `first_passage`; a lower bound on the absorption probability.
    pub lower_bound: T,
    /// Probability still strictly between the barriers at the horizon; an
    /// upper bound on the absorption mass beyond it.
    pub unabsorbed: T,
}

impl<T: Field> TruncatedPaths<T> {
    pub fn into_result(self, boundary: BoundarySpec, start: usize, phi: InitialDistribution<T>) -> AbsorptionResult<T> {
        AbsorptionResult {
            boundary,
            start,
            phi,
            prob_hit_0: self.lower_bound,
            method: AbsorptionMethod::TruncatedPaths,
            benchmark: None,
        }
    }
}

fn effective_sites(boundary: BoundarySpec, k: usize, horizon: usize) -> usize {
    match boundary {
        BoundarySpec::Finite(n) => n,
        // Nothing travels further than k + horizon, so a barrier beyond that
        // is never touched.
        BoundarySpec::Infinite => k + horizon + 2,
    }
}

/// Propagates mass over (site, chirality) for `horizon` steps, collecting
/// what reaches `0`.
pub fn absorb_truncated_paths<T: Field>(
    boundary: BoundarySpec,
    params: WalkParameters<T>,
    phi: InitialDistribution<T>,
    k: usize,
    horizon: usize,
) -> Result<TruncatedPaths<T>> {
    boundary.check_start(k)?;
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be at least 1".into()));
    }
    let sites = effective_sites(boundary, k, horizon);
    let work = sites as u64 * horizon as u64;
    if work > PATH_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "sites x horizon",
            requested: work,
            limit: PATH_BUDGET,
        });
    }
    let mut first_passage = vec![T::zero(); horizon + 1];
    if let Some(v) = boundary_value::<T>(boundary, k) {
        first_passage[0] = v.clone();
        return Ok(TruncatedPaths {
            first_passage,
            lower_bound: v,
            unabsorbed: T::zero(),
        });
    }
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let zero = || [T::zero(), T::zero()];
    let mut mass = vec![zero(); sites + 1];
    mass[k] = phi.as_vector();
    for slot in first_passage.iter_mut().skip(1) {
        let mut next = vec![zero(); sites + 1];
        for s in 1..sites {
            let [l, r] = mass[s].clone();
            if l.is_zero() && r.is_zero() {
                continue;
            }
            let left = a.clone() * l.clone() + b.clone() * r.clone();
            let right = c.clone() * l + d.clone() * r;
            next[s - 1][0] = next[s - 1][0].clone() + left;
            next[s + 1][1] = next[s + 1][1].clone() + right;
        }
        let [l0, r0] = std::mem::replace(&mut next[0], zero());
        *slot = l0 + r0;
        next[sites] = zero();
        mass = next;
    }
    let lower_bound = first_passage.iter().cloned().fold(T::zero(), |acc, p| acc + p);
    let unabsorbed = mass
        .into_iter()
        .fold(T::zero(), |acc, [l, r]| acc + l + r);
    Ok(TruncatedPaths {
        first_passage,
        lower_bound,
        unabsorbed,
    })
}

/// Largest series order accepted by [`gf_series_check`].
pub const MAX_SERIES_ORDER: usize = 64;

/// Coefficients of the first-passage generating functions
/// `p~_k(z) = sum_n p_k(n) z^n` and `r~_k(z) = sum_n r_k(n) z^n`, the `P`- and
/// `R`-coordinates of the first-passage path sum `Xi_k(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstPassageSeries<T> {
    pub p: Vec<T>,
    pub r: Vec<T>,
}

impl<T: Field> FirstPassageSeries<T> {
    /// `P_k(n; phi) = (a alpha + b beta) p_k(n) + (c alpha + d beta) r_k(n)`
    /// for `n >= 1`; the `n = 0` entry is the trivial mass at a start on `0`.
    pub fn probabilities(&self, params: &WalkParameters<T>, phi: &InitialDistribution<T>, k: usize) -> Vec<T> {
        let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
        let left = a * phi.alpha() + b * phi.beta();
        let right = c * phi.alpha() + d * phi.beta();
        self.p
            .iter()
            .zip(&self.r)
            .enumerate()
            .map(|(n, (p, r))| {
                if n == 0 {
                    if k == 0 { T::one() } else { T::zero() }
                } else {
                    left.clone() * p.clone() + right.clone() * r.clone()
                }
            })
            .collect()
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_SERIES_ORDER {
        return Err(Error::BudgetExceeded {
            what: "series order",
            requested: order as u64,
            limit: MAX_SERIES_ORDER as u64,
        });
    }
    Ok(())
}

/// Expands `p~_k`, `r~_k` to `z^order` from
///
/// ```text
/// p_k(n) = a p_(k-1)(n-1) + c r_(k-1)(n-1)
/// r_k(n) = b p_(k+1)(n-1) + d r_(k+1)(n-1)
/// ```
///
/// with `(p_0(0), r_0(0)) = (d, -b) / (ad - bc)` (the identity's `P`, `R`
/// coordinates) and both barriers zero for `n >= 1`.
pub fn gf_series_check<T: Field>(
    boundary: BoundarySpec,
    params: WalkParameters<T>,
    k: usize,
    order: usize,
) -> Result<FirstPassageSeries<T>> {
    params.require_basis()?;
    boundary.check_start(k)?;
    check_order(order)?;
    let sites = effective_sites(boundary, k, order);
    let (a, b, c, d) = (params.a(), params.b(), params.c(), params.d());
    let delta = params.delta();
    let mut p = vec![T::zero(); sites + 1];
    let mut r = vec![T::zero(); sites + 1];
    p[0] = d.clone() / delta.clone();
    r[0] = (T::zero() - b.clone()) / delta;
    let mut series = FirstPassageSeries {
        p: vec![p[k].clone()],
        r: vec![r[k].clone()],
    };
    for _ in 1..=order {
        let mut np = vec![T::zero(); sites + 1];
        let mut nr = vec![T::zero(); sites + 1];
        for s in 1..sites {
            np[s] = a.clone() * p[s - 1].clone() + c.clone() * r[s - 1].clone();
            nr[s] = b.clone() * p[s + 1].clone() + d.clone() * r[s + 1].clone();
        }
        p = np;
        r = nr;
        series.p.push(p[k].clone());
        series.r.push(r[k].clone());
    }
    Ok(series)
}

/// Full first-passage path sums `Xi_k(n)`, `n = 0 ..= order`, through the
/// PQRS product table: `Xi_k(n) = Xi_(k-1)(n-1) P + Xi_(k+1)(n-1) Q`,
/// `Xi_0(0) = I`.
pub fn first_passage_matrices<T: Field>(
    boundary: BoundarySpec,
    params: WalkParameters<T>,
    k: usize,
    order: usize,
) -> Result<Vec<PqrsMatrix<T>>> {
    boundary.check_start(k)?;
    check_order(order)?;
    let sites = effective_sites(boundary, k, order);
    let zero = PqrsMatrix::zero(params.clone());
    let p = PqrsMatrix::basis(Basis::P, params.clone());
    let q = PqrsMatrix::basis(Basis::Q, params.clone());
    let mut xi = vec![zero.clone(); sites + 1];
    xi[0] = PqrsMatrix::identity(params)?;
    let mut out = vec![xi[k].clone()];
    for _ in 1..=order {
        let mut next = vec![zero.clone(); sites + 1];
        for s in 1..sites {
            let via_left = xi[s - 1].multiply(&p)?;
            let via_right = xi[s + 1].multiply(&q)?;
            next[s] = via_left.try_add(&via_right)?;
        }
        xi = next;
        out.push(xi[k].clone());
    }
    Ok(out)
}
