//! Thin command-line front end over the report builders.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 on I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ghz_boxes::doublewell::Figure;
use ghz_boxes::epr::ConstraintFamily;
use ghz_boxes::report::{
    epr_report, expand_report, lhv_report, measure_report, render_human, rules_report,
    waveform_report, RunReport, StateChoice,
};
use ghz_boxes::{Basis, BoxId, Error};

#[derive(Parser)]
#[command(
    name = "ghz-boxes",
    version,
    about = "Three-box entanglement demonstrations: expansions, pair rules, the property clash, hidden-assignment scans, seeded measurements and waveform data"
)]
struct Cli {
    /// Emit machine-readable JSON instead of plain text
    #[arg(long, global = true)]
    json: bool,

    /// Seed for sampling commands (required by `measure`)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Amplitude tolerance for cancellation and certainty checks
    #[arg(long, global = true, default_value_t = 1e-12)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand the entangled state into one frame per box
    Expand {
        /// Three frame names, e.g. `position position position`
        #[arg(num_args = 3, value_name = "BASIS")]
        frames: Vec<Basis>,
    },
    /// Derive the two deterministic pair rules
    Rules,
    /// Property-distribution sets, their clash, and the parity certificate
    Epr,
    /// Scan all 64 hidden assignments against the derived rules
    Lhv {
        /// Restrict to some constraint families (position, bonding, mixed)
        #[arg(long, value_delimiter = ',', value_parser = parse_family)]
        families: Option<Vec<ConstraintFamily>>,
    },
    /// Run a seeded measurement script and report predictions
    Measure {
        /// Steps of the form BOX:BASIS, e.g. `A:position B:bonding`
        #[arg(required = true, value_name = "BOX:BASIS", value_parser = parse_step)]
        script: Vec<(BoxId, Basis)>,
        /// Initial state: ghz (three boxes) or two-box
        #[arg(long, default_value = "ghz")]
        state: StateChoice,
        /// Allow measuring the same box more than once
        #[arg(long)]
        allow_repeat: bool,
    },
    /// Write figure sample data as CSV (one file per curve)
    Waveform {
        /// Figure tag: fig2, fig9 or fig10
        figure: Figure,
        #[arg(long, default_value_t = 128)]
        resolution: usize,
        /// Output path; each dataset name is appended to the file stem
        #[arg(long, default_value = "waveform.csv")]
        out: PathBuf,
    },
}

fn parse_family(s: &str) -> Result<ConstraintFamily, String> {
    match s.to_ascii_lowercase().as_str() {
        "position" => Ok(ConstraintFamily::Position),
        "bonding" => Ok(ConstraintFamily::Bonding),
        "mixed" => Ok(ConstraintFamily::Mixed),
        other => Err(format!(
            "unknown constraint family {other:?} (expected position, bonding or mixed)"
        )),
    }
}

fn parse_step(s: &str) -> Result<(BoxId, Basis), String> {
    let (box_part, basis_part) = s
        .split_once(':')
        .ok_or_else(|| format!("expected BOX:BASIS, got {s:?}"))?;
    Ok((box_part.parse()?, basis_part.parse()?))
}

enum Failure {
    Usage(String),
    Io(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        match error {
            Error::Io(e) => Failure::Io(e.to_string()),
            Error::UnknownFigure(_)
            | Error::ResolutionTooSmall(_)
            | Error::BoxOutOfRange { .. }
            | Error::LabelNotInBasis { .. } => Failure::Usage(error.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn run(cli: &Cli) -> Result<RunReport, Failure> {
    match &cli.command {
        Command::Expand { frames } => {
            let frames: [Basis; 3] = frames
                .clone()
                .try_into()
                .map_err(|_| Failure::Usage("expand takes exactly three frames".to_string()))?;
            Ok(expand_report(frames, cli.tolerance))
        }
        Command::Rules => Ok(rules_report()?),
        Command::Epr => Ok(epr_report()?),
        Command::Lhv { families } => {
            let families = families
                .clone()
                .unwrap_or_else(|| ConstraintFamily::ALL.to_vec());
            Ok(lhv_report(&families)?)
        }
        Command::Measure {
            script,
            state,
            allow_repeat,
        } => {
            if !allow_repeat {
                let mut seen = Vec::new();
                for (box_id, _) in script {
                    if seen.contains(box_id) {
                        return Err(Failure::Usage(format!(
                            "box {box_id} appears twice; pass --allow-repeat to permit it"
                        )));
                    }
                    seen.push(*box_id);
                }
            }
            let seed = cli.seed.ok_or_else(|| {
                Failure::Usage(
                    "measure samples outcomes; pass --seed <u64> for a reproducible transcript"
                        .to_string(),
                )
            })?;
            Ok(measure_report(*state, script, seed)?)
        }
        Command::Waveform {
            figure,
            resolution,
            out,
        } => Ok(waveform_report(*figure, *resolution, out)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", render_human(&report));
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Io(message)) => {
            eprintln!("i/o error: {message}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(message)) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
