use crate::scalar::{lit, Real};

/// Adaptive Simpson integration of `f` over `[lo, hi]` to absolute tolerance
/// `tol`, with Richardson correction on accepted panels.
pub fn adaptive_simpson<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, tol: T) -> T {
    let mid = (lo + hi) / lit(2.0);
    let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
    let whole = simpson(lo, hi, flo, fmid, fhi);
    refine(&f, lo, hi, flo, fmid, fhi, whole, tol, 48)
}

fn simpson<T: Real>(lo: T, hi: T, flo: T, fmid: T, fhi: T) -> T {
    (hi - lo) / lit(6.0) * (flo + lit::<T>(4.0) * fmid + fhi)
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Real>(
    f: &impl Fn(T) -> T,
    lo: T,
    hi: T,
    flo: T,
    fmid: T,
    fhi: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let mid = (lo + hi) / lit(2.0);
    let (lm, rm) = ((lo + mid) / lit(2.0), (mid + hi) / lit(2.0));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(lo, mid, flo, flm, fmid);
    let right = simpson(mid, hi, fmid, frm, fhi);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= lit::<T>(15.0) * tol {
        return left + right + delta / lit(15.0);
    }
    let half_tol = tol / lit(2.0);
    refine(f, lo, mid, flo, flm, fmid, left, half_tol, depth - 1)
        + refine(f, mid, hi, fmid, frm, fhi, right, half_tol, depth - 1)
}
