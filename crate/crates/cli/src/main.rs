//! specgap: batch front door for the negative-spectrum laboratory.
//!
//! Every subcommand reads one JSON scenario, runs the matching computation
//! and writes a deterministic report (plus CSV tables) into the output
//! directory. Exit codes: 0 success, 1 error, 2 informative non-result
//! (no Birman–Schwinger root / no quadratic-form witness).

mod run;
mod scenario;

use clap::Parser;
use scenario::{CommandKind, OutputFormat, Scenario};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "specgap", version, about = "negative-spectrum laboratory scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct CommonArgs {
    /// Path to the JSON scenario file.
    #[arg(long)]
    scenario: PathBuf,

    /// Output directory for report.json and CSV tables.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Seed for the iterative solvers (overrides the scenario).
    #[arg(long)]
    seed: Option<u64>,

    /// What to print on stdout: the JSON report or the primary CSV table.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(format!("unknown format `{other}`, expected json or csv")),
    }
}

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Lowest eigenvalues of the grid Hamiltonian.
    Spectrum(CommonArgs),
    /// Bound-state energy from the Birman–Schwinger root μ+(λ) = 1/σ.
    BsRoot(CommonArgs),
    /// Coupling constant m, secular predictions and BS roots over a σ sweep.
    WeakCoupling(CommonArgs),
    /// Annulus quadratic-form witness for ∫V > 0.
    Quadform(CommonArgs),
    /// Neumann half-line shooting with the truncated-form certificate.
    Shoot(CommonArgs),
    /// Bessel-matched 2D well for a prescribed eigenvalue.
    ConstructWell(CommonArgs),
    /// Sparse deep-well L¹ potential with dense-in-window eigenvalues.
    ConstructEssSpec(CommonArgs),
    /// Large-spots threshold σ* and Rayleigh certificates.
    ConstructSpots(CommonArgs),
    /// Sparse-bump emptiness certificate and ∫V^β divergence.
    ConstructSparse(CommonArgs),
    /// Integrability diagnostics of a potential.
    Diagnostics(CommonArgs),
    /// CSV tables of J0/J1/K0/K1 and c1/c2.
    SpecfunTable(CommonArgs),
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Spectrum(_) => CommandKind::Spectrum,
            Command::BsRoot(_) => CommandKind::BsRoot,
            Command::WeakCoupling(_) => CommandKind::WeakCoupling,
            Command::Quadform(_) => CommandKind::Quadform,
            Command::Shoot(_) => CommandKind::Shoot,
            Command::ConstructWell(_) => CommandKind::ConstructWell,
            Command::ConstructEssSpec(_) => CommandKind::ConstructEssSpec,
            Command::ConstructSpots(_) => CommandKind::ConstructSpots,
            Command::ConstructSparse(_) => CommandKind::ConstructSparse,
            Command::Diagnostics(_) => CommandKind::Diagnostics,
            Command::SpecfunTable(_) => CommandKind::SpecfunTable,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a)
            | Command::BsRoot(a)
            | Command::WeakCoupling(a)
            | Command::Quadform(a)
            | Command::Shoot(a)
            | Command::ConstructWell(a)
            | Command::ConstructEssSpec(a)
            | Command::ConstructSpots(a)
            | Command::ConstructSparse(a)
            | Command::Diagnostics(a)
            | Command::SpecfunTable(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let args = cli.command.args();
    match execute(kind, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(kind: CommandKind, args: &CommonArgs) -> Result<i32, specgap_core::Error> {
    let scenario = Scenario::from_path(&args.scenario)?;
    if scenario.command != kind {
        return Err(specgap_core::Error::invalid(vec![format!(
            "scenario file says `{}` but the CLI subcommand is `{}`",
            scenario.command.as_str(),
            kind.as_str()
        )]));
    }
    let resolved = scenario.resolve(args.seed, args.format);
    let format = resolved.format.unwrap_or(OutputFormat::Json);
    let output = run::run(&resolved)?;
    run::write_outputs(&args.out, &output, format)?;
    Ok(output.exit_code)
}
