//! `ring-ob`: scenario-driven simulator for the steady-state optical
//! bistability of a Rydberg-EIT medium in a unidirectional ring cavity.

mod csv;
mod error;
mod manifest;
mod run;
mod scenario;
mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use error::CliError;
use ring_ob_core::{derive_blockade, eta_closed_form, MediumParams};
use run::RunOverrides;

#[derive(Parser)]
#[command(
    name = "ring-ob",
    version,
    about = "Steady-state optical bistability of a Rydberg-EIT medium in a ring cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write CSV (and optionally SVG) outputs
    Run {
        /// Scenario file path
        scenario: PathBuf,
        /// Output directory (overrides the scenario's `[output] dir`)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write SVG plots
        #[arg(long)]
        svg: bool,
    },
    /// Parse and validate a scenario file without computing anything
    Validate {
        /// Scenario file path
        scenario: PathBuf,
    },
    /// Evaluate the nonlinear coefficient for one parameter set
    Eta {
        /// Probe one-photon detuning (gamma2 units)
        #[arg(long, allow_hyphen_values = true)]
        delta_p: f64,
        /// Coupling Rabi frequency (gamma2 units)
        #[arg(long)]
        omega_c: f64,
        /// Optical density
        #[arg(long)]
        alpha: f64,
        /// van der Waals coefficient (gamma2 * length^6)
        #[arg(long)]
        c6: f64,
        /// Atomic number density (length^-3)
        #[arg(long)]
        density: f64,
        /// Rydberg coherence relaxation rate (gamma2 units)
        #[arg(long, default_value_t = 0.0)]
        gamma13: f64,
        /// Print a CSV row instead of the text block
        #[arg(long)]
        csv: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { scenario, out, svg } => {
            let files = run::run_scenario(&scenario, RunOverrides { out, svg })?;
            for file in files {
                println!("wrote {}", file.display());
            }
            Ok(())
        }
        Command::Validate { scenario } => {
            let (resolved, _) = run::load_scenario(&scenario, RunOverrides::default())?;
            let derived = derive_blockade(&resolved.medium).map_err(CliError::from_model)?;
            println!("scenario ok: sweep kind `{}`", resolved.sweep.name());
            println!(
                "medium: omega_c={} delta_p={} alpha={} c6={} density={}",
                resolved.medium.omega_c,
                resolved.medium.delta_p,
                resolved.medium.alpha,
                resolved.medium.c6,
                resolved.medium.density
            );
            println!(
                "derived: delta_eit={} r_c={} n_blockade={}",
                derived.delta_eit, derived.r_c, derived.n_blockade
            );
            println!(
                "cavity: t_mirror={} cavity_detuning={}",
                resolved.cavity.t_mirror, resolved.cavity.cavity_detuning
            );
            Ok(())
        }
        Command::Eta {
            delta_p,
            omega_c,
            alpha,
            c6,
            density,
            gamma13,
            csv,
        } => {
            let mut medium = MediumParams::new(omega_c, delta_p, c6, density, alpha)
                .map_err(CliError::from_model)?;
            if gamma13 != 0.0 {
                medium = medium.with_gamma13(gamma13).map_err(CliError::from_model)?;
            }
            let derived = derive_blockade(&medium).map_err(CliError::from_model)?;
            let eta = eta_closed_form(&medium, &derived).map_err(CliError::from_model)?;
            if csv {
                println!("a,b,magnitude,theta");
                println!(
                    "{},{},{},{}",
                    csv::num(eta.a),
                    csv::num(eta.b),
                    csv::num(eta.magnitude),
                    csv::num(eta.theta)
                );
            } else {
                println!("eta = a + i b (dimensionless Kerr coefficient)");
                println!("a (dispersion)  = {}", eta.a);
                println!("b (absorption)  = {}", eta.b);
                println!("|eta|           = {}", eta.magnitude);
                println!("theta           = {} rad", eta.theta);
                println!("delta_eit       = {} gamma2", derived.delta_eit);
                println!("r_c             = {} length units", derived.r_c);
                println!("n_blockade      = {}", derived.n_blockade);
            }
            Ok(())
        }
    }
}
