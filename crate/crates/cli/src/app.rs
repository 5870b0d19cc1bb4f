//! Argument parsing and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qbcharge::Engine;

use crate::commands::{self, Outcome};
use crate::config::{parse_axis, Overrides, RunConfig};
use crate::CliError;

/// Charging dynamics of a driven two-qubit quantum battery in a lossy cavity.
///
/// Settings come from an optional TOML file, then `--set` overrides, then
/// the dedicated flags. Every run writes CSV tables and a run.json record
/// into the output directory.
///
/// Exit codes: 0 success, 2 configuration or I/O error, 3 numerical
/// failure, 4 oracle check outside tolerance.
#[derive(Debug, Parser)]
#[command(name = "qbcharge", version, about, long_about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory [default: $QBCHARGE_OUT, else ./qbcharge-out]
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Amplitude engine: closed (equal detunings only) or pseudomode
    #[arg(long, global = true, value_parser = parse_engine)]
    pub engine: Option<Engine>,

    /// Relative integrator tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Sweep worker threads (0 = one per core)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Override any config key, e.g. --set params.R=10 --set grid.n_points=500
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplitudes, energy, power and ergotropy on the time grid (timeseries.csv)
    Timeseries,
    /// Maxima of energy, power and ergotropy and their times (maxima.csv)
    Maxima,
    /// Maxima over a Cartesian parameter grid (sweep.csv)
    Sweep {
        /// Axis as name=v1,v2,...; repeat for more axes, first varies slowest.
        /// Names: omega_drive, delta_A, delta_B, delta_common, delta_L, R, r1.
        /// Replaces the axes of the config file.
        #[arg(long = "axis", value_name = "NAME=VALUES")]
        axes: Vec<String>,
    },
    /// Tables for one of figures 2 to 11 (fig2 ... fig11)
    Reproduce {
        #[arg(long, value_name = "ID")]
        figure: Option<String>,
    },
    /// Compare the engines with a discretized-bath reference (oracle_check.csv)
    OracleCheck {
        /// Bath modes
        #[arg(long)]
        modes: Option<usize>,
        /// Half-width of the bath band in units of the loss rate
        #[arg(long)]
        span: Option<f64>,
        /// Also check the configured parameters with the configured engine
        #[arg(long)]
        include_config: bool,
    },
}

fn parse_engine(s: &str) -> Result<Engine, String> {
    match s.parse::<Engine>() {
        Ok(Engine::Oracle) | Err(_) => Err(format!("`{s}` is not one of closed, pseudomode")),
        Ok(engine) => Ok(engine),
    }
}

impl Cli {
    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let overrides = Overrides {
            engine: self.global.engine,
            tol: self.global.tol,
            threads: self.global.threads,
            out: self.global.out.clone(),
            set: self.global.set.clone(),
        };
        let mut cfg = RunConfig::load(self.global.config.as_deref(), &overrides)?;
        match &self.command {
            Command::Sweep { axes } if !axes.is_empty() => {
                cfg.sweep.axes = axes.iter().map(|a| parse_axis(a)).collect::<Result<_, _>>()?;
            }
            Command::Reproduce { figure: Some(f) } => cfg.figure = Some(f.clone()),
            Command::OracleCheck { modes, span, .. } => {
                if let Some(n) = modes {
                    cfg.oracle.n_modes = *n;
                }
                if let Some(s) = span {
                    cfg.oracle.span = *s;
                }
            }
            _ => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = cli.resolve_config()?;
    match &cli.command {
        Command::Timeseries => commands::timeseries(&cfg),
        Command::Maxima => commands::maxima(&cfg),
        Command::Sweep { .. } => commands::sweep(&cfg),
        Command::Reproduce { .. } => commands::reproduce(&cfg),
        Command::OracleCheck { include_config, .. } => commands::oracle_check(&cfg, *include_config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_reach_the_config() {
        let cli = Cli::parse_from([
            "qbcharge",
            "sweep",
            "--engine",
            "pseudomode",
            "--axis",
            "R=0.5,10",
            "--axis",
            "delta_L=0,2",
            "--threads",
            "3",
        ]);
        let cfg = cli.resolve_config().unwrap();
        assert_eq!(cfg.engine, Engine::Pseudomode);
        assert_eq!(cfg.threads, 3);
        assert_eq!(cfg.sweep.axes.len(), 2);
        assert_eq!(cfg.sweep.axes[0].values, [0.5, 10.0]);
    }

    #[test]
    fn oracle_engine_is_not_a_flag_value() {
        assert!(Cli::try_parse_from(["qbcharge", "maxima", "--engine", "oracle"]).is_err());
        assert!(Cli::try_parse_from(["qbcharge", "maxima", "--engine", "closed"]).is_ok());
    }
}
