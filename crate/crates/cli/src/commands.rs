use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Map, Value};

use crw::absorption::{absorb, BoundarySpec};
use crw::distribution::{distribution, probability_bruteforce, InitialDistribution, ENUMERATION_BUDGET};
use crw::limits::{ballistic_cdf_gap, diffusive_variance, MixedLimitLaw};
use crw::montecarlo::{
    binomial_band_check, multinomial_band_check, simulate_absorption, simulate_walk, BandCheck,
    SimulationConfig,
};
use crw::spectral::{char_fn_grid, is_symmetric, moment, symmetry_predicate};
use crw::{Phi, Walk};

use crate::output::{Cell, Format, Report};
use crate::CliError;

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Probability of stepping left again after a left step.
    #[arg(long, allow_negative_numbers = true)]
    pub a: f64,
    /// Probability of stepping right again after a right step.
    #[arg(long, allow_negative_numbers = true)]
    pub d: f64,
    /// Probability that the initial chirality is left.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
}

impl WalkArgs {
    fn build(&self) -> Result<(Walk, Phi), CliError> {
        Ok((Walk::new(self.a, self.d)?, InitialDistribution::new(self.alpha)?))
    }

    fn echo(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("a".into(), json!(self.a));
        m.insert("d".into(), json!(self.d));
        m.insert("alpha".into(), json!(self.alpha));
        m
    }
}

fn parse_barrier(s: &str) -> Result<BoundarySpec, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(BoundarySpec::Infinite);
    }
    let n: usize = s
        .parse()
        .map_err(|_| format!("expected an integer >= 2 or \"inf\", got {s:?}"))?;
    BoundarySpec::finite(n).map_err(|e| e.to_string())
}

fn barrier_echo(b: BoundarySpec) -> Value {
    match b {
        BoundarySpec::Finite(n) => json!(n),
        BoundarySpec::Infinite => json!("inf"),
    }
}

fn require_time(n: u64) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Number of steps.
    #[arg(long)]
    pub n: u64,
    /// Add brute-force enumeration columns (n <= 22).
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn dist(args: &DistArgs) -> Result<Report, CliError> {
    let (w, f) = args.walk.build()?;
    require_time(args.n)?;
    let mut params = args.walk.echo();
    params.insert("n".into(), json!(args.n));
    params.insert("oracle".into(), json!(args.oracle));
    let pmf = distribution(args.n, w, f)?;
    if !args.oracle {
        let mut report = Report::new("dist", params, vec!["position", "probability"]);
        for (x, p) in pmf.iter() {
            report.push(vec![x.into(), p.into()]);
        }
        return Ok(report);
    }
    if args.n > ENUMERATION_BUDGET {
        return Err(crw::Error::BudgetExceeded {
            what: "path length",
            requested: args.n,
            limit: ENUMERATION_BUDGET,
        }
        .into());
    }
    let brute = probability_bruteforce(args.n, w, f)?;
    let max_dev = pmf.max_abs_diff(&brute);
    let mut report = Report::new(
        "dist",
        params,
        vec!["position", "probability", "bruteforce", "deviation", "max_deviation"],
    );
    for (x, p) in pmf.iter() {
        let q = brute.prob(x);
        report.push(vec![x.into(), p.into(), q.into(), (p - q).abs().into(), max_dev.into()]);
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct CfArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long)]
    pub n: u64,
    /// Number of angles, equally spaced over [-pi, pi].
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn cf(args: &CfArgs) -> Result<Report, CliError> {
    let (w, f) = args.walk.build()?;
    require_time(args.n)?;
    let mut params = args.walk.echo();
    params.insert("n".into(), json!(args.n));
    params.insert("points".into(), json!(args.points));
    let samples = char_fn_grid(args.n, args.points, w, f)?;
    let mut report = Report::new("cf", params, vec!["xi", "re", "im"]);
    for s in samples {
        report.push(vec![s.xi.into(), s.value.re.into(), s.value.im.into()]);
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    #[arg(long)]
    pub n: u64,
    /// Moment order.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn moment_cmd(args: &MomentArgs) -> Result<Report, CliError> {
    let (w, f) = args.walk.build()?;
    require_time(args.n)?;
    let mut params = args.walk.echo();
    params.insert("n".into(), json!(args.n));
    params.insert("m".into(), json!(args.m));
    let value = moment(args.n, args.m, w, f)?;
    let mut report = Report::new("moment", params, vec!["n", "m", "moment"]);
    report.push(vec![args.n.into(), u64::from(args.m).into(), value.into()]);
    Ok(report)
}

#[derive(Debug, Args)]
pub struct SymmetryArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Check P(X_n = x) = P(X_n = -x) for every n up to this horizon.
    #[arg(long, default_value_t = 20)]
    pub horizon: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn verdict(symmetric: bool) -> &'static str {
    if symmetric {
        "symmetric"
    } else {
        "asymmetric"
    }
}

pub fn symmetry(args: &SymmetryArgs) -> Result<Report, CliError> {
    let (w, f) = args.walk.build()?;
    let mut params = args.walk.echo();
    params.insert("horizon".into(), json!(args.horizon));
    let predicate = symmetry_predicate(&w, &f);
    let checked = is_symmetric(w, f, args.horizon)?;
    let mut report = Report::new("symmetry", params, vec!["verdict", "predicate", "horizon_check", "horizon"]);
    report.push(vec![
        verdict(checked).into(),
        verdict(predicate).into(),
        verdict(checked).into(),
        args.horizon.into(),
    ]);
    Ok(report)
}

#[derive(Debug, Args)]
pub struct AbsorbArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Upper barrier N (an integer >= 2) or "inf" for the origin alone.
    #[arg(long = "N", value_parser = parse_barrier)]
    pub barrier: BoundarySpec,
    /// Start site.
    #[arg(long, conflicts_with = "all")]
    pub k: Option<usize>,
    /// Every start site 0..=N.
    #[arg(long)]
    pub all: bool,
    /// Convergence tolerance for N = inf.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn absorb_cmd(args: &AbsorbArgs) -> Result<Report, CliError> {
    let (w, f) = args.walk.build()?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let starts: Vec<usize> = match (args.all, args.k, args.barrier) {
        (true, _, BoundarySpec::Finite(n)) => (0..=n).collect(),
        (true, _, BoundarySpec::Infinite) => {
            return Err(CliError::Usage("--all needs a finite --N".into()));
        }
        (false, Some(k), _) => vec![k],
        (false, None, _) => return Err(CliError::Usage("give --k or --all".into())),
    };
    let mut params = args.walk.echo();
    params.insert("N".into(), barrier_echo(args.barrier));
    params.insert("k".into(), json!(args.k));
    params.insert("all".into(), json!(args.all));
    params.insert("tol".into(), json!(args.tol));
    let mut report = Report::new("absorb", params, vec!["k", "probability", "method", "benchmark"]);
    for k in starts {
        let r = absorb(args.barrier, w, f, k, args.tol)?;
        report.push(vec![k.into(), r.prob_hit_0.into(), r.method.tag().into(), r.benchmark.into()]);
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// theta in (0, 1) for the ballistic law with a = d = 1 - theta/n.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Probability that the initial chirality is left.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Density samples on (-1, 1).
    #[arg(long, default_value_t = 101)]
    pub x_points: usize,
    /// Compare the exact CDF of X_n / n at this n with the limit CDF.
    #[arg(long)]
    pub compare_n: Option<u64>,
    /// Grid size for --compare-n.
    #[arg(long, default_value_t = 41)]
    pub cdf_points: usize,
    /// Report the diffusive variance a / (1 - a).
    #[arg(long)]
    pub variance: bool,
    /// Persistence a for --variance.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Must equal --a when given; the diffusive limit needs a = d.
    #[arg(long, allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub fn limit(args: &LimitArgs) -> Result<Report, CliError> {
    if args.theta.is_none() && !args.variance {
        return Err(CliError::Usage("give --theta, --variance, or both".into()));
    }
    if args.compare_n.is_some() && args.theta.is_none() {
        return Err(CliError::Usage("--compare-n needs --theta".into()));
    }
    let mut params = Map::new();
    params.insert("theta".into(), json!(args.theta));
    params.insert("alpha".into(), json!(args.alpha));
    params.insert("x_points".into(), json!(args.x_points));
    params.insert("compare_n".into(), json!(args.compare_n));
    params.insert("cdf_points".into(), json!(args.cdf_points));
    params.insert("variance".into(), json!(args.variance));
    params.insert("a".into(), json!(args.a));
    params.insert("d".into(), json!(args.d));
    let mut report = Report::new("limit", params, vec!["quantity", "x", "value"]);

    if let Some(theta) = args.theta {
        let phi = InitialDistribution::new(args.alpha)?;
        let law = MixedLimitLaw::new(theta, phi)?;
        report.push(vec!["atom".into(), (-1.0).into(), law.atom_minus1().into()]);
        report.push(vec!["atom".into(), 1.0.into(), law.atom_plus1().into()]);
        report.push(vec!["continuous_mass".into(), Cell::Empty, law.continuous_mass().into()]);
        report.push(vec!["total_mass".into(), Cell::Empty, law.total_mass().into()]);
        let m = args.x_points;
        for j in 0..m {
            // Interior points, symmetric about 0.
            let x = -1.0 + 2.0 * (j + 1) as f64 / (m + 1) as f64;
            report.push(vec!["density".into(), x.into(), law.density(x)?.into()]);
        }
        if let Some(n) = args.compare_n {
            require_time(n)?;
            let cmp = ballistic_cdf_gap(theta, phi, n, args.cdf_points)?;
            for p in &cmp.points {
                report.push(vec!["exact_cdf".into(), p.x.into(), p.exact.into()]);
                report.push(vec!["limit_cdf".into(), p.x.into(), p.limit.into()]);
            }
            report.push(vec!["sup_gap".into(), Cell::Empty, cmp.sup_gap.into()]);
        }
    }
    if args.variance {
        let a = args
            .a
            .ok_or_else(|| CliError::Usage("--variance needs --a".into()))?;
        let w = Walk::new(a, args.d.unwrap_or(a))?;
        report.push(vec!["variance".into(), Cell::Empty, diffusive_variance(&w)?.into()]);
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Steps per walk; the step budget per walk in absorption runs.
    #[arg(long)]
    pub steps: u64,
    /// Number of independent walks.
    #[arg(long)]
    pub samples: u64,
    /// Seed; the same seed gives identical output.
    #[arg(long)]
    pub seed: u64,
    /// Check the result against the exact law.
    #[arg(long)]
    pub against_exact: bool,
    /// Band half-width in standard deviations for --against-exact.
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,
    /// Absorption run: upper barrier N (an integer >= 2) or "inf".
    #[arg(long = "N", value_parser = parse_barrier, requires = "k")]
    pub barrier: Option<BoundarySpec>,
    /// Absorption run: start site.
    #[arg(long, requires = "barrier")]
    pub k: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn push_bands(report: &mut Report, check: &BandCheck, keyed: bool) {
    for cell in &check.cells {
        let key = if keyed { Cell::from(cell.position) } else { Cell::Empty };
        report.push(vec!["band_z".into(), key, cell.z.into()]);
    }
    report.push(vec!["worst_z".into(), Cell::Empty, check.worst_z().into()]);
    report.push(vec!["bands_passed".into(), Cell::Empty, check.passed().into()]);
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let (w, f) = args.walk.build()?;
    if args.sigmas.is_nan() || args.sigmas <= 0.0 {
        return Err(CliError::Usage("--sigmas must be positive".into()));
    }
    let mut params = args.walk.echo();
    params.insert("steps".into(), json!(args.steps));
    params.insert("samples".into(), json!(args.samples));
    params.insert("seed".into(), json!(args.seed));
    params.insert("against_exact".into(), json!(args.against_exact));
    params.insert("sigmas".into(), json!(args.sigmas));
    params.insert("N".into(), args.barrier.map_or(Value::Null, barrier_echo));
    params.insert("k".into(), json!(args.k));
    let config = SimulationConfig::walk(w, f, args.steps, args.samples, args.seed);
    let mut report = Report::new("simulate", params, vec!["quantity", "key", "value"]);
    report.push(vec!["samples".into(), Cell::Empty, args.samples.into()]);
    report.push(vec!["steps".into(), Cell::Empty, args.steps.into()]);

    if let (Some(barrier), Some(k)) = (args.barrier, args.k) {
        let stats = simulate_absorption(&config.with_absorption(barrier, k))?;
        let counts = stats.absorption.unwrap_or_default();
        report.push(vec!["absorbed_at_0".into(), Cell::Empty, counts.absorbed_at_0.into()]);
        report.push(vec!["absorbed_at_N".into(), Cell::Empty, counts.absorbed_at_n.into()]);
        report.push(vec!["censored".into(), Cell::Empty, counts.censored.into()]);
        report.push(vec![
            "absorbed_at_0_fraction".into(),
            Cell::Empty,
            stats.absorbed_at_0_fraction.into(),
        ]);
        if args.against_exact {
            let exact = absorb(barrier, w, f, k, 1e-10)?.prob_hit_0;
            report.push(vec!["exact_probability".into(), Cell::Empty, exact.into()]);
            let check = binomial_band_check(counts.absorbed_at_0, stats.n_samples, exact, args.sigmas);
            push_bands(&mut report, &check, false);
        }
        return Ok(report);
    }

    let stats = simulate_walk(&config)?;
    report.push(vec!["mean".into(), Cell::Empty, stats.mean.into()]);
    report.push(vec!["variance".into(), Cell::Empty, stats.variance.into()]);
    if args.steps > 0 {
        let per_step = stats.variance / args.steps as f64;
        report.push(vec!["variance_per_step".into(), Cell::Empty, per_step.into()]);
    }
    for (&x, &count) in &stats.histogram {
        report.push(vec!["count".into(), x.into(), count.into()]);
    }
    if args.against_exact {
        require_time(args.steps)?;
        let exact = distribution(args.steps, w, f)?;
        let check = multinomial_band_check(&stats, &exact, args.sigmas);
        push_bands(&mut report, &check, true);
    }
    Ok(report)
}
