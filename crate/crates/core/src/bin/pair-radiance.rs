//! Command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pair_radiance::cli::{self, CliCommand, OutputFormat, Overrides};
use pair_radiance::sources::AlphaVariant;

#[derive(Parser)]
#[command(
    name = "pair-radiance",
    version,
    about = "Photon-pair emission rates, spectra and powers for orbiting spheres and binary stars"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    /// 16π²/k² metric amplitude prefactor.
    Paper,
    /// 4π/k² prefactor from the independent spatial integral.
    Rederived,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output path; stdout when omitted (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (overrides the config).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Random seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker count; results do not depend on it. Falls back to the
    /// PAIR_RADIANCE_THREADS environment variable.
    #[arg(long)]
    threads: Option<usize>,
    /// Metric amplitude prefactor variant.
    #[arg(long, value_enum, default_value = "paper")]
    alpha_variant: VariantArg,
}

#[derive(Subcommand)]
enum Command {
    /// Total pair rate with its per-harmonic breakdown.
    Rate(Common),
    /// Radiated powers, waiting time and cross-check ratios.
    Power(Common),
    /// Pair spectrum dRate/dω₁ at the dominant harmonic.
    Spectrum(Common),
    /// Angular distribution of the pair direction versus elevation χ.
    Angular(Common),
    /// The dimensionless phase-space integrals IE and IM.
    Integrals(Common),
    /// Rejection-sampled pair events.
    Sample(Common),
    /// Sweep one parameter and tabulate rates and powers.
    Scan(Common),
    /// Side-by-side dielectric / metric / graviton comparison.
    Compare(Common),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let args = Args::parse();
    let (cmd, common) = match &args.command {
        Command::Rate(c) => (CliCommand::Rate, c),
        Command::Power(c) => (CliCommand::Power, c),
        Command::Spectrum(c) => (CliCommand::Spectrum, c),
        Command::Angular(c) => (CliCommand::Angular, c),
        Command::Integrals(c) => (CliCommand::Integrals, c),
        Command::Sample(c) => (CliCommand::Sample, c),
        Command::Scan(c) => (CliCommand::Scan, c),
        Command::Compare(c) => (CliCommand::Compare, c),
    };

    let threads = common.threads.or_else(|| {
        std::env::var("PAIR_RADIANCE_THREADS").ok().and_then(|v| v.parse().ok())
    });

    let mut config = match cli::parse_config(&common.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    if let Some(path) = &common.out {
        config.output_path = Some(path.clone());
    }

    let overrides = Overrides {
        seed: common.seed,
        format: common.format.map(|f| match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }),
        alpha_variant: Some(match common.alpha_variant {
            VariantArg::Paper => AlphaVariant::Paper,
            VariantArg::Rederived => AlphaVariant::Rederived,
        }),
        threads,
    };

    match cli::run(cmd, &config, &overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
