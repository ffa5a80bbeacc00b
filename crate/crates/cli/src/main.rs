//! `crw`: exact laws, characteristic functions, limits, absorption
//! probabilities and simulations of correlated random walks.

mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    AbsorbArgs, CfArgs, DistArgs, LimitArgs, MomentArgs, OutputArgs, SimulateArgs, SymmetryArgs,
};
use output::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] crw::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(crw::Error::BudgetExceeded { .. }) => 3,
            CliError::Core(crw::Error::NonConvergence { .. }) => 4,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "crw", version, about = "Correlated random walks: exact laws, limits, absorption, simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact law of X_n.
    Dist(DistArgs),
    /// Characteristic function on a grid over [-pi, pi].
    Cf(CfArgs),
    /// E[X_n^m].
    Moment(MomentArgs),
    /// Reflection symmetry of the law of X_n.
    Symmetry(SymmetryArgs),
    /// Probability of reaching the origin before N.
    Absorb(AbsorbArgs),
    /// Ballistic and diffusive scaling limits.
    Limit(LimitArgs),
    /// Seeded Monte Carlo simulation.
    Simulate(SimulateArgs),
}

impl Command {
    fn output(&self) -> &OutputArgs {
        match self {
            Command::Dist(a) => &a.output,
            Command::Cf(a) => &a.output,
            Command::Moment(a) => &a.output,
            Command::Symmetry(a) => &a.output,
            Command::Absorb(a) => &a.output,
            Command::Limit(a) => &a.output,
            Command::Simulate(a) => &a.output,
        }
    }

    fn run(&self) -> Result<Report, CliError> {
        match self {
            Command::Dist(a) => commands::dist(a),
            Command::Cf(a) => commands::cf(a),
            Command::Moment(a) => commands::moment_cmd(a),
            Command::Symmetry(a) => commands::symmetry(a),
            Command::Absorb(a) => commands::absorb_cmd(a),
            Command::Limit(a) => commands::limit(a),
            Command::Simulate(a) => commands::simulate(a),
        }
    }
}

fn execute(command: &Command) -> Result<(), CliError> {
    let report = command.run()?;
    let out = command.output();
    let text = report.render(out.format);
    match &out.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Squeeze clap's message (minus the usage block) onto one line.
            let rendered = e.to_string();
            let message: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("crw: {}", message.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crw: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
