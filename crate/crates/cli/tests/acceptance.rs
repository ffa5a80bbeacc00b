//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p crw-cli --test acceptance`.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crw::absorption::{
    absorb_closed_form, absorb_infinite, absorb_linear_system, absorb_truncated_paths, first_passage_matrices,
    gf_series_check, BoundarySpec,
};
use crw::distribution::{distribution, probability_bruteforce, xi, xi_bruteforce, xi_raw_bruteforce, PathCount};
use crw::limits::{ballistic_cdf_gap, ballistic_walk, mixed_limit_density, MixedLimitLaw};
use crw::montecarlo::{binomial_band_check, multinomial_band_check, simulate_absorption, simulate_walk};
use crw::pqrs::{Basis, PqrsMatrix};
use crw::spectral::{char_fn, is_symmetric, moment, symmetry_predicate};
use crw::{Complex, Matrix2, Phi, Simulation, Walk};

type Outcome = Result<String, String>;

const GRID3: [f64; 3] = [0.2, 0.5, 0.8];
const ALPHA3: [f64; 3] = [0.0, 0.5, 1.0];

fn walk(a: f64, d: f64) -> Walk {
    Walk::new(a, d).unwrap()
}

fn phi(alpha: f64) -> Phi {
    Phi::new(alpha).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn matrix_gap(x: &Matrix2, y: &Matrix2) -> f64 {
    [(x.x - y.x), (x.y - y.y), (x.z - y.z), (x.w - y.w)]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

fn pqrs_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let mut worst = 0.0f64;
    let mut triples = 0;
    while triples < 1000 {
        let (a, d) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let w = walk(a, d);
        if w.delta().abs() <= 1e-3 {
            continue;
        }
        triples += 1;
        let m = Matrix2::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let back = PqrsMatrix::decompose(&m, w).map_err(|e| e.to_string())?.compose();
        worst = worst.max(matrix_gap(&back, &m));
        for u in Basis::ALL {
            for v in Basis::ALL {
                let (bu, bv) = (PqrsMatrix::basis(u, w), PqrsMatrix::basis(v, w));
                let table = bu.multiply(&bv).map_err(|e| e.to_string())?.compose();
                let raw = bu.compose() * bv.compose();
                ensure(table == raw, || format!("{u:?}{v:?} at a={a} d={d}: {table:?} != {raw:?}"))?;
            }
        }
    }
    ensure(worst <= 1e-12, || format!("round-trip error {worst:.3e}"))?;
    Ok(format!("1000 triples, worst round trip {worst:.2e}, 16000 products exact"))
}

fn path_sums() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for a in GRID3 {
        for d in GRID3 {
            let w = walk(a, d);
            for l in 1..=11u64 {
                for m in 1..=(12 - l) {
                    let pc = PathCount::new(l, m);
                    let closed = xi(pc, w).map_err(|e| e.to_string())?;
                    let gap = if w.delta().abs() > 1e-3 {
                        let brute = xi_bruteforce(pc, w).map_err(|e| e.to_string())?;
                        closed
                            .coefficients()
                            .iter()
                            .zip(brute.coefficients())
                            .fold(0.0f64, |g, (x, y)| g.max((x - y).abs()))
                    } else {
                        // a + d = 1 has no basis (and rounding can leave a tiny
                        // spurious Delta): compare the matrices themselves.
                        let raw = xi_raw_bruteforce(pc, &w).map_err(|e| e.to_string())?;
                        matrix_gap(&closed.compose(), &raw)
                    };
                    ensure(gap <= 1e-12, || format!("a={a} d={d} l={l} m={m}: gap {gap:.3e}"))?;
                    worst = worst.max(gap);
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} (l, m, a, d) cases, worst {worst:.2e}"))
}

fn exact_law() -> Outcome {
    let mut worst = 0.0f64;
    for a in GRID3 {
        for d in GRID3 {
            for alpha in ALPHA3 {
                for n in 1..=14 {
                    let exact = distribution(n, walk(a, d), phi(alpha)).map_err(|e| e.to_string())?;
                    let brute = probability_bruteforce(n, walk(a, d), phi(alpha)).map_err(|e| e.to_string())?;
                    let gap = exact.max_abs_diff(&brute);
                    ensure(gap <= 1e-12, || format!("a={a} d={d} alpha={alpha} n={n}: gap {gap:.3e}"))?;
                    worst = worst.max(gap);
                }
            }
        }
    }
    Ok(format!("27 walks x n <= 14, worst {worst:.2e}"))
}

fn spectral() -> Outcome {
    let (mut cf_worst, mut moment_worst) = (0.0f64, 0.0f64);
    for a in GRID3 {
        for d in GRID3 {
            for alpha in ALPHA3 {
                let (w, f) = (walk(a, d), phi(alpha));
                for n in 1..=20 {
                    let dist = distribution(n, w, f).map_err(|e| e.to_string())?;
                    for j in 0..=16 {
                        let t = -PI + 2.0 * PI * j as f64 / 16.0;
                        let direct = dist
                            .iter()
                            .fold(Complex::new(0.0, 0.0), |s, (k, p)| s + Complex::from_polar(p, t * k as f64));
                        let cf = char_fn(n, t, w, f).map_err(|e| e.to_string())?;
                        let gap = (cf - direct).norm();
                        ensure(gap <= 1e-9, || format!("cf a={a} d={d} alpha={alpha} n={n} xi={t}: {gap:.3e}"))?;
                        cf_worst = cf_worst.max(gap);
                    }
                    for m in 1..=4 {
                        let direct = dist.expect(|x| x.powi(m as i32));
                        // Odd moments can vanish; measure them against E|X|^m.
                        let scale = dist.expect(|x| x.abs().powi(m as i32));
                        let got = moment(n, m, w, f).map_err(|e| e.to_string())?;
                        let rel = (got - direct).abs() / scale;
                        ensure(rel <= 1e-8, || format!("moment a={a} d={d} alpha={alpha} n={n} m={m}: {rel:.3e}"))?;
                        moment_worst = moment_worst.max(rel);
                    }
                }
            }
        }
    }
    Ok(format!("cf worst {cf_worst:.2e}, moments worst relative {moment_worst:.2e}"))
}

fn symmetry() -> Outcome {
    let values = [0.1, 0.3, 0.5, 0.7, 0.9];
    let alphas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let (mut diagonal_true, mut diagonal_false) = (0, 0);
    for a in values {
        for d in values {
            for alpha in alphas {
                let (w, f) = (walk(a, d), phi(alpha));
                let predicted = symmetry_predicate(&w, &f);
                let observed = is_symmetric(w, f, 20).map_err(|e| e.to_string())?;
                ensure(predicted == observed, || {
                    format!("a={a} d={d} alpha={alpha}: predicate {predicted}, horizon check {observed}")
                })?;
                if a == d {
                    if observed {
                        diagonal_true += 1;
                    } else {
                        diagonal_false += 1;
                    }
                }
            }
        }
    }
    ensure(diagonal_true > 0 && diagonal_false > 0, || "a = d exercised only one direction".into())?;
    Ok(format!("125 points agree; at a = d {diagonal_true} symmetric, {diagonal_false} not"))
}

fn diffusive_scaling() -> Outcome {
    let n = 4000u64;
    let w = Walk::symmetric(0.6).unwrap();
    let mut report = Vec::new();
    for (i, alpha) in ALPHA3.into_iter().enumerate() {
        let exact = moment(n, 2, w, phi(alpha)).map_err(|e| e.to_string())? / n as f64;
        ensure((exact - 1.5).abs() <= 0.015, || format!("exact alpha={alpha}: {exact}"))?;
        let config = Simulation::walk(w, phi(alpha), n, 100_000, 600 + i as u64);
        let stats = simulate_walk(&config).map_err(|e| e.to_string())?;
        let s = stats.n_samples as f64;
        let second = stats.variance * (s - 1.0) / s + stats.mean * stats.mean;
        let mc = second / n as f64;
        ensure((mc - 1.5).abs() <= 0.075, || format!("Monte Carlo alpha={alpha}: {mc}"))?;
        report.push(format!("alpha={alpha}: {exact:.4}/{mc:.4}"));
    }
    Ok(format!("E[X^2]/n exact/MC {}", report.join(", ")))
}

fn ballistic_limit() -> Outcome {
    let theta = 0.5;
    let mut gaps = Vec::new();
    for n in [500u64, 1000, 2000] {
        let cmp = ballistic_cdf_gap(theta, phi(0.5), n, 401).map_err(|e| e.to_string())?;
        gaps.push(cmp.sup_gap);
    }
    ensure(gaps.windows(2).all(|g| g[1] < g[0]), || format!("sup gaps not decreasing: {gaps:?}"))?;
    ensure(gaps[2] < 2e-2, || format!("sup gap at n=2000: {}", gaps[2]))?;

    let n = 2000u64;
    let w = ballistic_walk(theta, n).map_err(|e| e.to_string())?;
    let exact = distribution(n, w, phi(1.0)).map_err(|e| e.to_string())?;
    let formula = w.a().powi(n as i32 - 1) * w.a();
    let atom = exact.prob(-(n as i64));
    ensure((atom - formula).abs() <= 1e-12 * formula, || format!("atom {atom} vs {formula}"))?;
    let law = MixedLimitLaw::new(theta, phi(1.0)).map_err(|e| e.to_string())?;
    let atom_gap = (atom - (-theta).exp()).abs() / (-theta).exp();
    ensure((law.atom_minus1() - (-theta).exp()).abs() < 1e-15, || "limit atom".into())?;
    ensure(atom_gap < 1e-2, || format!("atom relative gap {atom_gap:.3e}"))?;

    let mut mass_worst = 0.0f64;
    for theta in [0.1, 0.3, 0.6, 0.9] {
        let law = MixedLimitLaw::new(theta, phi(0.5)).map_err(|e| e.to_string())?;
        mass_worst = mass_worst.max((law.total_mass() - 1.0).abs());
        // Independent midpoint rule in x = sin t.
        let m = 20_000;
        let h = PI / m as f64;
        let mut integral = 0.0;
        for j in 0..m {
            let t = -PI / 2.0 + (j as f64 + 0.5) * h;
            integral += mixed_limit_density(t.sin(), theta).map_err(|e| e.to_string())? * t.cos() * h;
        }
        mass_worst = mass_worst.max(((-theta).exp() + integral - 1.0).abs());
    }
    ensure(mass_worst <= 1e-8, || format!("mass identity off by {mass_worst:.3e}"))?;
    Ok(format!(
        "sup gaps {:.2e} > {:.2e} > {:.2e}, atom gap {atom_gap:.2e}, mass identity {mass_worst:.2e}",
        gaps[0], gaps[1], gaps[2]
    ))
}

/// Two-barrier hitting probability of `0` for `a = d`, written out directly.
fn symmetric_ruin(a: f64, n_sites: usize, k: usize, alpha: f64) -> f64 {
    let (big_n, k) = (n_sites as f64, k as f64);
    ((1.0 - a) * (big_n - k) + (2.0 * a - 1.0) * alpha) / ((1.0 - a) * big_n + 2.0 * a - 1.0)
}

fn absorption() -> Outcome {
    let mut worst = 0.0f64;
    for a in [0.3, 0.5, 0.7, 0.9] {
        let w = Walk::symmetric(a).unwrap();
        for n_sites in 3..=12 {
            for k in 1..n_sites {
                for alpha in ALPHA3 {
                    let linear = absorb_linear_system(n_sites, w, phi(alpha), k).map_err(|e| e.to_string())?;
                    let closed = absorb_closed_form(n_sites, k, w, phi(alpha)).map_err(|e| e.to_string())?;
                    let direct = symmetric_ruin(a, n_sites, k, alpha);
                    let gap = (linear.prob_hit_0 - closed.prob_hit_0)
                        .abs()
                        .max((closed.prob_hit_0 - direct).abs());
                    ensure(gap <= 1e-10, || format!("a={a} N={n_sites} k={k} alpha={alpha}: {gap:.3e}"))?;
                    worst = worst.max(gap);
                    if a == 0.5 {
                        let ruin = 1.0 - k as f64 / n_sites as f64;
                        let g = (linear.prob_hit_0 - ruin).abs().max((closed.prob_hit_0 - ruin).abs());
                        ensure(g <= 1e-12, || format!("gambler's ruin N={n_sites} k={k}: {g:.3e}"))?;
                    }
                }
            }
        }
    }
    let w = Walk::symmetric(0.7).unwrap();
    for k in 1..=10 {
        for alpha in ALPHA3 {
            let r = absorb_infinite(w, phi(alpha), k, 1e-10).map_err(|e| e.to_string())?;
            ensure((r.prob_hit_0 - 1.0).abs() <= 1e-8, || format!("infinite k={k}: {}", r.prob_hit_0))?;
        }
    }
    let mut brackets = 0;
    for a in [0.3, 0.5, 0.7, 0.9] {
        let w = Walk::symmetric(a).unwrap();
        for (n_sites, k) in [(3, 1), (7, 3), (12, 6), (12, 11)] {
            for alpha in ALPHA3 {
                let closed = absorb_closed_form(n_sites, k, w, phi(alpha)).map_err(|e| e.to_string())?.prob_hit_0;
                let boundary = BoundarySpec::finite(n_sites).map_err(|e| e.to_string())?;
                let t = absorb_truncated_paths(boundary, w, phi(alpha), k, 2000).map_err(|e| e.to_string())?;
                let ok = t.lower_bound <= closed + 1e-12 && closed <= t.lower_bound + t.unabsorbed + 1e-12;
                ensure(ok, || {
                    format!("bracket a={a} N={n_sites} k={k}: {} <= {closed} <= {} + {}", t.lower_bound, t.lower_bound, t.unabsorbed)
                })?;
                brackets += 1;
            }
        }
    }
    Ok(format!(
        "780 grid points, worst {worst:.2e}; gambler's ruin, infinite barrier and {brackets} brackets hold"
    ))
}

/// First-passage probabilities to `0` by evolving the walk with absorbing
/// barriers; `upper = None` leaves the right side open.
fn first_passage_dp(w: &Walk, alpha: f64, k: usize, upper: Option<usize>, order: usize) -> Vec<f64> {
    let (a, b, c, d) = (w.a(), w.b(), w.c(), w.d());
    let width = upper.unwrap_or(k + order + 2) + 1;
    // mass[s] = [last step left, last step right]
    let mut mass = vec![[0.0f64; 2]; width];
    mass[k] = [alpha, 1.0 - alpha];
    let mut out = vec![if k == 0 { 1.0 } else { 0.0 }];
    for _ in 1..=order {
        let mut next = vec![[0.0f64; 2]; width];
        for s in 1..width - 1 {
            if upper == Some(s) {
                continue;
            }
            let [l, r] = mass[s];
            next[s - 1][0] += a * l + b * r;
            next[s + 1][1] += c * l + d * r;
        }
        out.push(next[0][0] + next[0][1]);
        next[0] = [0.0, 0.0];
        if let Some(u) = upper {
            next[u] = [0.0, 0.0];
        }
        mass = next;
    }
    out
}

fn generating_functions() -> Outcome {
    let mut worst = 0.0f64;
    for (a, d) in [(0.3, 0.6), (0.7, 0.4), (0.8, 0.8)] {
        let w = walk(a, d);
        for n_sites in 3..=5 {
            let boundary = BoundarySpec::finite(n_sites).map_err(|e| e.to_string())?;
            for k in 1..n_sites {
                let series = gf_series_check(boundary, w, k, 20).map_err(|e| e.to_string())?;
                for alpha in [0.0, 0.35, 1.0] {
                    let from_series = series.probabilities(&w, &phi(alpha), k);
                    let dp = first_passage_dp(&w, alpha, k, Some(n_sites), 20);
                    for (n, (x, y)) in from_series.iter().zip(&dp).enumerate() {
                        let gap = (x - y).abs();
                        ensure(gap <= 1e-12, || format!("a={a} d={d} N={n_sites} k={k} n={n}: {gap:.3e}"))?;
                        worst = worst.max(gap);
                    }
                }
            }
        }
    }
    for (a, d) in [(0.3, 0.6), (0.7, 0.4), (0.8, 0.8)] {
        let w = walk(a, d);
        let boundary = BoundarySpec::finite(3).map_err(|e| e.to_string())?;
        let xi5 = &first_passage_matrices(boundary, w, 1, 5).map_err(|e| e.to_string())?[5];
        let (b, c) = (w.b(), w.c());
        let monomial = a * b * b * c;
        ensure(
            [xi5.cp(), xi5.cr() - monomial, xi5.cq(), xi5.cs()].iter().all(|v| v.abs() <= 1e-15),
            || format!("Xi_1(5) at a={a} d={d}: {:?}, expected R coefficient {monomial}", xi5.coefficients()),
        )?;
    }
    Ok(format!("N in 3..=5, order 20, worst {worst:.2e}; Xi_1(5) = ab^2c R at N = 3"))
}

fn monte_carlo() -> Outcome {
    let (w, f) = (walk(0.7, 0.4), phi(0.3));
    let stats = simulate_walk(&Simulation::walk(w, f, 10, 1_000_000, 10)).map_err(|e| e.to_string())?;
    let exact = distribution(10, w, f).map_err(|e| e.to_string())?;
    let check = multinomial_band_check(&stats, &exact, 4.0);
    ensure(check.passed(), || format!("n=10 pmf: worst z {:.2}", check.worst_z()))?;
    let pmf_z = check.worst_z();

    let mut worst_z = 0.0f64;
    let mut points = 0u64;
    for a in [0.3, 0.5, 0.7, 0.9] {
        let w = Walk::symmetric(a).unwrap();
        for n_sites in 3..=12usize {
            for k in 1..n_sites {
                for alpha in ALPHA3 {
                    points += 1;
                    let p = absorb_closed_form(n_sites, k, w, phi(alpha)).map_err(|e| e.to_string())?.prob_hit_0;
                    let boundary = BoundarySpec::finite(n_sites).map_err(|e| e.to_string())?;
                    let config = Simulation::walk(w, phi(alpha), 20_000, 1_000_000, 1_000 + points)
                        .with_absorption(boundary, k);
                    let stats = simulate_absorption(&config).map_err(|e| e.to_string())?;
                    let counts = stats.absorption.expect("absorption run");
                    ensure(counts.censored == 0, || format!("a={a} N={n_sites} k={k}: {} censored", counts.censored))?;
                    let check = binomial_band_check(counts.absorbed_at_0, stats.n_samples, p, 4.0);
                    ensure(check.passed(), || {
                        format!("a={a} N={n_sites} k={k} alpha={alpha}: z {:.2}", check.worst_z())
                    })?;
                    worst_z = worst_z.max(check.worst_z());
                }
            }
        }
    }
    Ok(format!("pmf worst z {pmf_z:.2}; {points} absorption points, worst z {worst_z:.2}"))
}

fn cli() -> Outcome {
    let mismatches = common::check_goldens(false)?;
    ensure(mismatches.is_empty(), || format!("golden mismatch: {mismatches:?}"))?;
    common::check_determinism(common::DETERMINISM_ARGS)?;
    let cases = common::failing_cases();
    for (args, code) in &cases {
        common::check_failure(args, *code)?;
    }
    Ok(format!("{} golden files, determinism, {} failure cases", 2 * common::GOLDEN.len(), cases.len()))
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "PQRS algebra", limit: Some(Duration::from_secs(1)), run: pqrs_algebra },
    Criterion { id: 2, title: "path sums vs enumeration", limit: Some(Duration::from_secs(30)), run: path_sums },
    Criterion { id: 3, title: "exact law vs enumeration", limit: Some(Duration::from_secs(60)), run: exact_law },
    Criterion { id: 4, title: "characteristic function and moments", limit: Some(Duration::from_secs(30)), run: spectral },
    Criterion { id: 5, title: "symmetry predicate", limit: None, run: symmetry },
    Criterion { id: 6, title: "diffusive variance", limit: Some(Duration::from_secs(120)), run: diffusive_scaling },
    Criterion { id: 7, title: "ballistic limit", limit: Some(Duration::from_secs(120)), run: ballistic_limit },
    Criterion { id: 8, title: "absorption", limit: Some(Duration::from_secs(30)), run: absorption },
    Criterion { id: 9, title: "first-passage series", limit: None, run: generating_functions },
    Criterion { id: 10, title: "Monte Carlo bands", limit: Some(Duration::from_secs(180)), run: monte_carlo },
    Criterion { id: 11, title: "command line", limit: None, run: cli },
];

fn main() -> ExitCode {
    let only: Option<u32> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let mut failures = 0;
    for c in CRITERIA.iter().filter(|c| only.is_none_or(|id| id == c.id)) {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(detail), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("{detail}; took longer than {limit:?}"));
            }
        }
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} [{}] {}: {detail} ({:.2}s)", c.id, c.title, elapsed.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
