//! `coexsim` binary: run coexistence experiments from presets or scenario
//! files and write deterministic CSV/TOML outputs.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use coexsim::error::{CliError, Result};
use coexsim::outputs::{beampattern_csv, detection_csv, write_atomic};
use coexsim::runner::{
    prepare, run_all, run_beampattern, run_detection, single_output_name, Method,
};
use coexsim::scenario_file::load_scenario;
use coexsim_core::detection::SweepVariable;
use coexsim_core::scenario::{NormalizationMode, Preset, Scenario};

#[derive(Parser, Debug)]
#[command(
    name = "coexsim",
    version,
    about = "Radar/cellular coexistence simulator: nulling, beampatterns, detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Where the scenario comes from: a named preset or a TOML file.
#[derive(Args, Debug)]
struct ScenarioSource {
    /// Built-in scenario: fig1a, fig1b, or fig2.
    #[arg(long, value_name = "NAME", conflicts_with = "scenario")]
    preset: Option<String>,
    /// Path to a scenario TOML file.
    #[arg(long, value_name = "FILE")]
    scenario: Option<PathBuf>,
}

impl ScenarioSource {
    fn resolve(&self) -> Result<Scenario> {
        match (&self.preset, &self.scenario) {
            (Some(name), None) => {
                let preset = name.parse::<Preset>().map_err(|_| {
                    CliError::InvalidInput(format!(
                        "unknown preset {name:?}; expected fig1a, fig1b, or fig2"
                    ))
                })?;
                Ok(Scenario::preset(preset))
            }
            (None, Some(path)) => load_scenario(path),
            (None, None) => Err(CliError::InvalidInput(
                "no scenario given; pass --preset NAME or --scenario FILE".into(),
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep the composite transmit–receive beampattern over the scenario grid.
    Beampattern {
        #[command(flatten)]
        source: ScenarioSource,
        /// Nulling method: eigen, spatial, or none.
        #[arg(long, default_value = "eigen")]
        method: String,
        /// Directory the CSV is written into.
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
        /// Override the scenario's normalization: fixed_k or peak.
        #[arg(long, value_name = "MODE")]
        normalize: Option<String>,
    },
    /// Evaluate detection probability along an angle or SNR sweep.
    Detection {
        #[command(flatten)]
        source: ScenarioSource,
        /// Nulling method: eigen or spatial.
        #[arg(long, default_value = "eigen")]
        method: String,
        /// Sweep variable: angle or snr.
        #[arg(long, default_value = "angle")]
        sweep: String,
        /// Monte Carlo trials per point (0 = analytic curve only).
        #[arg(long, default_value_t = 0)]
        mc_trials: u64,
        /// Override the scenario's random seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory the CSV is written into.
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
    },
    /// Run every experiment for the scenario and write the full output set.
    All {
        #[command(flatten)]
        source: ScenarioSource,
        /// Monte Carlo trials per detection point (0 = analytic only).
        #[arg(long, default_value_t = 0)]
        mc_trials: u64,
        /// Override the scenario's random seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory all outputs are written into.
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
    },
}

fn parse_sweep(s: &str) -> Result<SweepVariable> {
    match s {
        "angle" => Ok(SweepVariable::AngleDeg),
        "snr" => Ok(SweepVariable::SnrDb),
        other => Err(CliError::InvalidInput(format!(
            "unknown sweep variable {other:?}; expected angle or snr"
        ))),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Beampattern {
            source,
            method,
            out,
            normalize,
        } => {
            let mut scenario = source.resolve()?;
            if let Some(mode) = normalize {
                scenario.normalization = mode.parse::<NormalizationMode>().map_err(|_| {
                    CliError::InvalidInput(format!(
                        "unknown normalization {mode:?}; expected fixed_k or peak"
                    ))
                })?;
            }
            let method: Method = method.parse()?;
            let prepared = prepare(&scenario, method)?;
            let pattern = run_beampattern(&prepared)?;
            let path = out.join(single_output_name("beampattern", method));
            write_atomic(&path, beampattern_csv(&pattern).as_bytes())?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Detection {
            source,
            method,
            sweep,
            mc_trials,
            seed,
            out,
        } => {
            let scenario = source.resolve()?;
            let method: Method = method.parse()?;
            let variable = parse_sweep(&sweep)?;
            let prepared = prepare(&scenario, method)?;
            let seed = seed.unwrap_or(scenario.seed);
            let curve = run_detection(&prepared, variable, mc_trials, seed)?;
            let kind = match variable {
                SweepVariable::AngleDeg => "detection_angle",
                SweepVariable::SnrDb => "detection_snr",
            };
            let path = out.join(single_output_name(kind, method));
            write_atomic(&path, detection_csv(&curve).as_bytes())?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::All {
            source,
            mc_trials,
            seed,
            out,
        } => {
            let scenario = source.resolve()?;
            let seed = seed.unwrap_or(scenario.seed);
            let report = run_all(&scenario, &out, mc_trials, seed)?;
            for name in &report.output_paths {
                println!("wrote {}", out.join(name).display());
            }
            for (name, ok) in &report.checks {
                println!("check {name}: {}", if *ok { "pass" } else { "FAIL" });
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
