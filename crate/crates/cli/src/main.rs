//! Command-line driver for the lattice Dirac–Kähler calculus: invariant
//! verification, dense spectra and chirality certificates.

mod commands;
mod config;
mod report;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{CommonArgs, RunConfig};

#[derive(Parser)]
#[command(
    name = "dklattice",
    about = "Verification and spectral reports for the discrete Dirac-Kahler calculus",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full invariant suite with seeded random forms.
    Verify(CommonArgs),
    /// Write the eigenvalues of the Dirac-Kahler matrix as CSV and check
    /// them against the Fourier-symbol oracle.
    Spectrum(CommonArgs),
    /// Certify the mass gap of the chiral sectors and the chirality flip.
    Chirality(CommonArgs),
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, fn(RunConfig) -> Result<report::Report>) = match &cli.command {
        Command::Verify(args) => (args, commands::cmd_verify),
        Command::Spectrum(args) => (args, commands::cmd_spectrum),
        Command::Chirality(args) => (args, commands::cmd_chirality),
    };
    let config = RunConfig::resolve(args)?;
    let out = config.out.clone();
    let report = run(config)?;
    report.emit(out.as_deref())?;
    let failed = report.summary.failed;
    if failed > 0 {
        eprintln!("{failed} check(s) failed");
        std::process::exit(1);
    }
    Ok(())
}
