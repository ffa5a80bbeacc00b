//! Seeded simulation of the walk, for statistical checks of the exact results.
//!
//! Trajectory `i` draws from its own Xoshiro256++ stream, seeded by hashing
//! `(seed, i)` through SplitMix64, and the
//! per-trajectory outcomes are folded into integer counters, so the summary is
//! bit-identical whatever the number of worker threads.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};
use rayon::prelude::*;

use crate::absorption::BoundarySpec;
use crate::distribution::{Distribution, InitialDistribution};
use crate::error::{Error, Result};
use crate::pqrs::WalkParameters;
use crate::scalar::Real;

/// Largest `n_samples * n_steps` a single run may request.
pub const STEP_BUDGET: u64 = 50_000_000_000;

/// Trajectories per work unit.
const CHUNK: u64 = 4096;

/// Barrier layout and start site for absorption runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbsorptionSetup {
    pub boundary: BoundarySpec,
    pub start: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig<T> {
    pub params: WalkParameters<T>,
    pub phi: InitialDistribution<T>,
    /// Walk length, or the step budget per trajectory in absorption runs.
    pub n_steps: u64,
    pub n_samples: u64,
    pub seed: u64,
    pub absorption: Option<AbsorptionSetup>,
}

impl<T: Real> SimulationConfig<T> {
    pub fn walk(params: WalkParameters<T>, phi: InitialDistribution<T>, n_steps: u64, n_samples: u64, seed: u64) -> Self {
        Self {
            params,
            phi,
            n_steps,
            n_samples,
            seed,
            absorption: None,
        }
    }

    pub fn with_absorption(mut self, boundary: BoundarySpec, start: usize) -> Self {
        self.absorption = Some(AbsorptionSetup { boundary, start });
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidParameter("n_samples must be at least 1".into()));
        }
        let work = self.n_samples.saturating_mul(self.n_steps.max(1));
        if work > STEP_BUDGET {
            return Err(Error::BudgetExceeded {
                what: "samples x steps",
                requested: work,
                limit: STEP_BUDGET,
            });
        }
        if let Some(setup) = &self.absorption {
            if let BoundarySpec::Finite(n) = setup.boundary {
                if n < 2 || setup.start > n {
                    return Err(Error::InvalidParameter(format!(
                        "start k = {} with barrier N = {n} is not a valid absorption setup",
                        setup.start
                    )));
                }
            }
        }
        Ok(())
    }
}

/// How absorption runs ended.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AbsorptionCounts {
    pub absorbed_at_0: u64,
    /// Reached the upper barrier (the survivors of a two-barrier run).
    pub absorbed_at_n: u64,
    /// Ran out of steps strictly between the barriers.
    pub censored: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats<T> {
    pub n_samples: u64,
    pub mean: T,
    /// Unbiased sample variance; `0` for a single sample.
    pub variance: T,
    /// Final positions (walk runs) or stopping sites (absorption runs).
    pub histogram: BTreeMap<i64, u64>,
    pub absorption: Option<AbsorptionCounts>,
    pub absorbed_at_0_fraction: Option<T>,
}

impl<T: Real> SampleStats<T> {
    /// Empirical `P(X = x)`.
    pub fn frequency(&self, x: i64) -> T {
        let count = self.histogram.get(&x).copied().unwrap_or(0);
        T::from_f64(count as f64 / self.n_samples as f64).unwrap_or_else(T::nan)
    }
}

#[derive(Default)]
struct Tally {
    sum: i128,
    sum_sq: i128,
    histogram: BTreeMap<i64, u64>,
    counts: AbsorptionCounts,
}

impl Tally {
    fn record(&mut self, x: i64) {
        self.sum += i128::from(x);
        self.sum_sq += i128::from(x) * i128::from(x);
        *self.histogram.entry(x).or_insert(0) += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        for (x, n) in other.histogram {
            *self.histogram.entry(x).or_insert(0) += n;
        }
        self.counts.absorbed_at_0 += other.counts.absorbed_at_0;
        self.counts.absorbed_at_n += other.counts.absorbed_at_n;
        self.counts.censored += other.counts.censored;
        self
    }
}

/// Step-sampling law in `f64`: `left_after[L]`, `left_after[R]`, `alpha`.
#[derive(Clone, Copy)]
struct StepLaw {
    left_after_left: f64,
    left_after_right: f64,
    alpha: f64,
}

impl StepLaw {
    fn new<T: Real>(params: &WalkParameters<T>, phi: &InitialDistribution<T>) -> Self {
        let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
        Self {
            left_after_left: f(params.a()),
            left_after_right: f(params.b()),
            alpha: f(phi.alpha()),
        }
    }

    /// `true` for chirality `L`.
    fn initial(&self, rng: &mut Xoshiro256PlusPlus) -> bool {
        rng.gen::<f64>() < self.alpha
    }

    /// Returns the new chirality, `true` meaning a step to the left.
    fn step(&self, rng: &mut Xoshiro256PlusPlus, left: bool) -> bool {
        let p = if left { self.left_after_left } else { self.left_after_right };
        rng.gen::<f64>() < p
    }
}

fn trajectory_rng(seed: u64, index: u64) -> Xoshiro256PlusPlus {
    // Two hashing rounds: distinct indices give distinct states, and runs with
    // nearby seeds do not share trajectories.
    let key = SplitMix64::seed_from_u64(seed).next_u64();
    let state = SplitMix64::seed_from_u64(key ^ index).next_u64();
    Xoshiro256PlusPlus::seed_from_u64(state)
}

fn run<F>(n_samples: u64, one: F) -> Tally
where
    F: Fn(u64, &mut Tally) + Sync,
{
    let chunks = n_samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut tally = Tally::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(n_samples) {
                one(i, &mut tally);
            }
            tally
        })
        .reduce(Tally::default, Tally::merge)
}

fn summarize<T: Real>(n_samples: u64, tally: Tally, absorbing: bool) -> SampleStats<T> {
    let n = i128::from(n_samples);
    let to_t = |x: f64| T::from_f64(x).unwrap_or_else(T::nan);
    let mean = to_t(tally.sum as f64 / n as f64);
    let variance = if n > 1 {
        let num = n * tally.sum_sq - tally.sum * tally.sum;
        to_t(num as f64 / (n * (n - 1)) as f64)
    } else {
        T::zero()
    };
    let (absorption, absorbed_at_0_fraction) = if absorbing {
        let frac = to_t(tally.counts.absorbed_at_0 as f64 / n_samples as f64);
        (Some(tally.counts), Some(frac))
    } else {
        (None, None)
    };
    SampleStats {
        n_samples,
        mean,
        variance,
        histogram: tally.histogram,
        absorption,
        absorbed_at_0_fraction,
    }
}

/// Simulates `n_samples` walks of `n_steps` steps and summarizes `X_n`.
pub fn simulate_walk<T: Real>(config: &SimulationConfig<T>) -> Result<SampleStats<T>> {
    config.validate()?;
    let law = StepLaw::new(&config.params, &config.phi);
    let (seed, n_steps) = (config.seed, config.n_steps);
    let tally = run(config.n_samples, |i, tally| {
        let mut rng = trajectory_rng(seed, i);
        let mut left = law.initial(&mut rng);
        let mut x = 0i64;
        for _ in 0..n_steps {
            left = law.step(&mut rng, left);
            x += if left { -1 } else { 1 };
        }
        tally.record(x);
    });
    Ok(summarize(config.n_samples, tally, false))
}

/// Simulates walks started at `k` until they hit a barrier or exhaust
/// `n_steps` steps. Walks still running at the budget are censored, never
/// counted as absorbed.
pub fn simulate_absorption<T: Real>(config: &SimulationConfig<T>) -> Result<SampleStats<T>> {
    config.validate()?;
    let setup = config
        .absorption
        .ok_or_else(|| Error::InvalidParameter("absorption run needs a boundary".into()))?;
    let upper = match setup.boundary {
        BoundarySpec::Finite(n) => Some(n as i64),
        BoundarySpec::Infinite => None,
    };
    let start = setup.start as i64;
    let law = StepLaw::new(&config.params, &config.phi);
    let (seed, n_steps) = (config.seed, config.n_steps);
    let tally = run(config.n_samples, |i, tally| {
        let mut x = start;
        let mut steps = 0u64;
        let mut rng = trajectory_rng(seed, i);
        let mut left = law.initial(&mut rng);
        while x != 0 && Some(x) != upper && steps < n_steps {
            left = law.step(&mut rng, left);
            x += if left { -1 } else { 1 };
            steps += 1;
        }
        if x == 0 {
            tally.counts.absorbed_at_0 += 1;
        } else if Some(x) == upper {
            tally.counts.absorbed_at_n += 1;
        } else {
            tally.counts.censored += 1;
        }
        tally.record(x);
    });
    Ok(summarize(config.n_samples, tally, true))
}

/// One cell of a band check.
#[derive(Debug, Clone, PartialEq)]
pub struct BandCell {
    pub position: i64,
    pub expected: f64,
    pub observed: f64,
    /// `|observed - expected| / sigma`; `0` when both sides are exactly zero.
    pub z: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandCheck {
    pub sigmas: f64,
    pub cells: Vec<BandCell>,
}

impl BandCheck {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.passed)
    }

    pub fn worst_z(&self) -> f64 {
        self.cells.iter().map(|c| c.z).fold(0.0, f64::max)
    }
}

fn band_cell(position: i64, p: f64, count: u64, n: u64, sigmas: f64) -> BandCell {
    let n_f = n as f64;
    let observed = count as f64 / n_f;
    let sigma = (p * (1.0 - p) / n_f).sqrt();
    let gap = (observed - p).abs();
    let (z, passed) = if sigma > 0.0 {
        (gap / sigma, gap <= sigmas * sigma)
    } else if gap == 0.0 {
        (0.0, true)
    } else {
        (f64::INFINITY, false)
    };
    BandCell {
        position,
        expected: p,
        observed,
        z,
        passed,
    }
}

/// Per-cell `sigmas`-sigma multinomial band check of a walk histogram
/// against the exact law; positions observed outside the support fail.
pub fn multinomial_band_check<T: Real>(stats: &SampleStats<T>, exact: &Distribution<T>, sigmas: f64) -> BandCheck {
    let mut cells: Vec<BandCell> = exact
        .iter()
        .map(|(x, p)| {
            let count = stats.histogram.get(&x).copied().unwrap_or(0);
            band_cell(x, p.to_f64().unwrap_or(f64::NAN), count, stats.n_samples, sigmas)
        })
        .collect();
    let support: Vec<i64> = exact.positions().collect();
    for (&x, &count) in &stats.histogram {
        if !support.contains(&x) {
            cells.push(band_cell(x, 0.0, count, stats.n_samples, sigmas));
        }
    }
    BandCheck { sigmas, cells }
}

/// Binomial band check of `successes` out of `trials` against `p`.
pub fn binomial_band_check(successes: u64, trials: u64, p: f64, sigmas: f64) -> BandCheck {
    BandCheck {
        sigmas,
        cells: vec![band_cell(0, p, successes, trials, sigmas)],
    }
}
