//! Command-line front end for `bloch-trap-core`.
//!
//! Models are read from JSON, summaries are printed as JSON and curves or
//! trajectories are written as CSV. Every vector on the command line and in
//! the output (states, controls, directions) is expressed in the intrinsic
//! frame of the model, whose axes `project` prints as the rows of `frame`.

pub mod commands;
pub mod error;
pub mod model;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "bloch-trap", version, about = "Purity control of two-level Lindblad systems")]
pub struct Cli {
    /// Model file (JSON).
    #[arg(long, global = true)]
    pub model: Option<PathBuf>,
    /// Where to write the CSV output; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Indentation of JSON output; 0 prints a single line.
    #[arg(long, global = true, default_value_t = 2)]
    pub json_indent: usize,
    /// Seed for randomized cross-checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Suppress warnings and diagnostics on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the six-parameter form of the model.
    Project,
    /// Tabulate the extremal rates f_max(r), f_min(r).
    Envelope {
        /// Number of radii in (0, 1].
        #[arg(long, default_value_t = bloch_trap_core::extremal::DEFAULT_GRID)]
        grid: usize,
        /// Compare this many random rows against dense sphere sampling.
        #[arg(long)]
        oracle_check: Option<usize>,
    },
    /// Decide whether the operator list can purify every state.
    Classify,
    /// Steer the Bloch radius from one value to another.
    Steer {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = bloch_trap_core::dynamics::DEFAULT_DT)]
        dt: f64,
        /// Give up when the target is not reached by this time.
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
    },
    /// Integrate the Bloch equation under given controls.
    Simulate {
        /// Initial Bloch vector `x,y,z`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vec3)]
        n0: [f64; 3],
        /// `zero`, or a CSV file with columns t,u1,u2,u3.
        #[arg(long, default_value = "zero")]
        controls: String,
        /// Final time.
        #[arg(long = "T")]
        t_final: f64,
        #[arg(long, default_value_t = bloch_trap_core::dynamics::DEFAULT_DT)]
        dt: f64,
    },
}

fn parse_vec3(s: &str) -> std::result::Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut v = [0.0; 3];
    for (x, part) in v.iter_mut().zip(&parts) {
        *x = part.parse().map_err(|e| format!("`{part}`: {e}"))?;
    }
    Ok(v)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let path = cli
        .model
        .as_deref()
        .ok_or_else(|| CliError::Usage("--model is required".into()))?;
    let model = model::load(path)?;
    if !cli.quiet {
        for w in &model.warnings {
            eprintln!("warning: {w}");
        }
    }
    let ctx = commands::Context {
        model,
        out: cli.out.clone(),
        indent: cli.json_indent,
        seed: cli.seed,
        quiet: cli.quiet,
    };
    match &cli.command {
        Command::Project => commands::project(&ctx),
        Command::Envelope { grid, oracle_check } => commands::envelope(&ctx, *grid, *oracle_check),
        Command::Classify => commands::classify(&ctx),
        Command::Steer { from, to, dt, t_max } => commands::steer(&ctx, *from, *to, *dt, *t_max),
        Command::Simulate { n0, controls, t_final, dt } => {
            commands::simulate(&ctx, *n0, controls, *t_final, *dt)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_parse_with_signs_and_spaces() {
        assert_eq!(parse_vec3("-0.5, 0,1e-1"), Ok([-0.5, 0.0, 0.1]));
        assert!(parse_vec3("1,2").is_err());
        assert!(parse_vec3("1,x,2").is_err());
    }

    #[test]
    fn exit_codes_follow_the_core_error() {
        use bloch_trap_core::Error;
        assert_eq!(CliError::from(Error::NotPsd { min_eigenvalue: -1.0 }).exit_code(), 2);
        assert_eq!(CliError::from(Error::BallViolation { time: 0.0, norm: 2.0 }).exit_code(), 4);
        assert_eq!(CliError::from(Error::InvalidArgument("x")).exit_code(), 1);
    }

    #[test]
    fn command_line_shape() {
        let cli = Cli::try_parse_from(["bloch-trap", "simulate", "--n0", "-1,0,0", "--T", "2", "--model", "m.json"]).unwrap();
        assert_eq!(cli.model.as_deref(), Some(std::path::Path::new("m.json")));
        match cli.command {
            Command::Simulate { n0, t_final, dt, .. } => {
                assert_eq!(n0, [-1.0, 0.0, 0.0]);
                assert_eq!((t_final, dt), (2.0, 1e-4));
            }
            _ => panic!("wrong command"),
        }
    }
}
