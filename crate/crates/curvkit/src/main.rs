use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use curvkit::commands::{self, ClassifyOptions, Section};
use curvkit::error::Result;
use curvkit::report::Report;
use curvkit_core::harness::TrialConfig;
use curvkit_core::QcParams;

#[derive(Parser)]
#[command(name = "curvkit", version, about = "Curvature of coordinate metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectionArg {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "4")]
    Four,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Christoffel symbols, curvature tensors and identity residuals.
    Curvature {
        manifest: PathBuf,
        /// Evaluation point, e.g. `pi/3,0.4`; defaults to the manifest's `at:` lines.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Einstein, quasi-Einstein and quasi-constant curvature tests.
    Classify {
        manifest: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Eigenvalue clustering tolerance.
        #[arg(long, default_value_t = 1e-6)]
        cluster: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
    },
    /// Recover the 1-forms of a weakly Ricci symmetric structure.
    Wrs {
        manifest: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Randomized checks of the contraction theorems.
    Verify {
        #[arg(long, value_enum, default_value_t = SectionArg::All)]
        section: SectionArg,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
    },
}

fn run(command: Command) -> Result<Report> {
    match command {
        Command::Curvature { manifest, at } => commands::curvature(&manifest, at.as_deref()),
        Command::Classify {
            manifest,
            at,
            tol,
            cluster,
            a,
            b,
        } => commands::classify(
            &manifest,
            at.as_deref(),
            &ClassifyOptions {
                tolerance: tol,
                cluster,
                params: QcParams::new(a, b),
            },
        ),
        Command::Wrs { manifest, at, tol } => commands::wrs(&manifest, at.as_deref(), tol),
        Command::Verify {
            section,
            n,
            trials,
            seed,
            tol,
            a,
            b,
        } => {
            let section = match section {
                SectionArg::Two => Section::Two,
                SectionArg::Three => Section::Three,
                SectionArg::Four => Section::Four,
                SectionArg::All => Section::All,
            };
            let config = TrialConfig {
                seed,
                trials,
                n,
                params: QcParams::new(a, b),
                tolerance: tol,
            };
            commands::verify(section, &config)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_status as u8)
        }
        Err(e) => {
            eprintln!("curvkit: {e}");
            ExitCode::from(2)
        }
    }
}
