//! `uhvforge`: design and qualification pipeline for additively
//! manufactured, lattice-skinned ultra-high-vacuum chambers.
//!
//! Subcommands: `generate` (spec → STL + report), `simulate` (vacuum network
//! → trace CSV + report), `fit` (emission data → fit JSON), `buildparams`
//! (exposure parameters → scanning quantities), `analyze` (STL inspection).
//! All commands are deterministic: identical inputs give byte-identical
//! outputs. Exit codes: 0 success, 2 validation, 3 numerical/infeasibility,
//! 4 I/O.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use uhvforge_cli::error::CliError;
use uhvforge_cli::fit::FitMode;
use uhvforge_cli::{analyze, fit, generate, simulate};

#[derive(Parser)]
#[command(name = "uhvforge", version, about = "Lattice UHV chamber design toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the chamber STL and a geometry/qualification report.
    Generate {
        /// Chamber design JSON.
        #[arg(long)]
        spec: PathBuf,
        /// Sampling resolution, mm (must be <= lattice cell size / 8).
        #[arg(long = "voxel-mm")]
        voxel_mm: f64,
        /// Beam diameter for the optical-access check, mm.
        #[arg(long = "beam-mm", default_value_t = 10.0)]
        beam_mm: f64,
        /// Output directory for chamber.stl and report.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate a vacuum network scenario and emit the pressure trace.
    Simulate {
        /// Scenario JSON.
        #[arg(long)]
        scenario: PathBuf,
        /// Output CSV path; the report lands next to it as *.report.json.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit an emission trace (two-segment decay or Arrhenius).
    Fit {
        /// Emission CSV with header time_min,temp_C,signal.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum)]
        mode: FitMode,
        /// Output JSON path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Derive scanning speed, build rate and energy density.
    Buildparams {
        #[arg(long = "power-w")]
        power_w: f64,
        #[arg(long = "layer-um")]
        layer_um: f64,
        #[arg(long = "hatch-um")]
        hatch_um: f64,
        #[arg(long = "point-um")]
        point_um: f64,
        #[arg(long = "exposure-us")]
        exposure_us: f64,
    },
    /// Inspect an existing binary STL.
    Analyze {
        #[arg(long)]
        mesh: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { spec, voxel_mm, beam_mm, out } => {
            generate::run(&spec, voxel_mm, beam_mm, &out)
        }
        Command::Simulate { scenario, out } => simulate::run(&scenario, &out),
        Command::Fit { data, mode, out } => fit::run(&data, mode, &out),
        Command::Buildparams { power_w, layer_um, hatch_um, point_um, exposure_us } => {
            let params = uhvforge_core::model::compute_build_parameters(
                power_w, layer_um, hatch_um, point_um, exposure_us,
            )?;
            let mut json =
                serde_json::to_string_pretty(&params).expect("params serialization");
            json.push('\n');
            println!("{json}");
            Ok(())
        }
        Command::Analyze { mesh } => analyze::run(&mesh),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
