mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CommutatorArgs, CouplingArg, Failure, OscillatorArgs, Scheme, TruncationArg, Variant};
use config::RunConfig;
use output::{Format, Header, Sink};

#[derive(Parser)]
#[command(name = "fuzzyqm", version, about = "Smeared-operator quantum mechanics: commutators, oscillator spectra and the Yukawa deuteron")]
struct Cli {
    /// `key = value` file overriding physical constants and numerical settings
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for result and plot-data files; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commutator refinement ladder, Robertson bound and 2-D commutator checks
    Commutators {
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, default_value_t = 8.0)]
        cutoff: f64,
        #[arg(long, value_enum, default_value_t = Scheme::CentralDifference)]
        scheme: Scheme,
    },
    /// Fuzzy oscillator levels from diagonalization against the closed forms
    Oscillator {
        #[arg(long, default_value_t = 0.01)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long, value_enum, default_value_t = TruncationArg::Quadratic)]
        truncation: TruncationArg,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = CouplingArg::Leading)]
        coupling: CouplingArg,
        #[arg(long, value_enum, default_value_t = Scheme::Spectral)]
        scheme: Scheme,
        /// Grid points; defaults to the config's oscillator_points
        #[arg(long)]
        points: Option<usize>,
    },
    /// Yukawa deuteron analysis
    Deuteron {
        #[command(subcommand)]
        command: DeuteronCommand,
    },
}

#[derive(Subcommand)]
enum DeuteronCommand {
    /// Depth giving the binding energy at each range
    RangeDepth {
        #[arg(long, value_enum, default_value_t = Variant::Ordinary)]
        variant: Variant,
        /// Ranges in fm
        #[arg(long, value_delimiter = ',')]
        r0: Vec<f64>,
    },
    /// Range at which the fuzzy depth changes sign
    CoreRadius,
    /// Depths, core radius, repulsive strength and meson couplings
    Couplings,
}

fn run(cli: Cli, command_line: String) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path).map_err(|e| Failure::Usage(format!("config: {e:#}")))?,
        None => RunConfig::default(),
    };
    let mut header = Header::new(command_line, &cfg);
    let default_format = match &cli.command {
        Command::Deuteron { command: DeuteronCommand::CoreRadius | DeuteronCommand::Couplings } => Format::Json,
        _ => Format::Csv,
    };
    let sink = Sink { dir: cli.out, format: cli.format.unwrap_or(default_format) };
    match cli.command {
        Command::Commutators { levels, mass, cutoff, scheme } => {
            commands::commutators(&CommutatorArgs { levels, mass, cutoff, scheme }, &cfg, &sink, &header)
        }
        Command::Oscillator { omega, mass, truncation, nmax, coupling, scheme, points } => commands::oscillator(
            &OscillatorArgs { omega, mass, truncation, nmax, coupling, scheme, points },
            &cfg,
            &sink,
            &header,
        ),
        Command::Deuteron { command } => match command {
            DeuteronCommand::RangeDepth { variant, r0 } => {
                let r0 = if r0.is_empty() { commands::default_ranges() } else { r0 };
                commands::range_depth(variant, &r0, &cfg, &sink, &mut header)
            }
            DeuteronCommand::CoreRadius => commands::core(&cfg, &sink, &mut header),
            DeuteronCommand::Couplings => commands::couplings(&cfg, &sink, &mut header),
        },
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let command_line = std::iter::once("fuzzyqm".to_string()).chain(args.iter().skip(1).cloned()).collect::<Vec<_>>().join(" ");
    let cli = Cli::parse();
    match run(cli, command_line) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
