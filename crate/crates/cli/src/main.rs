use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prank::curve::{Curve, CurveSpec};
use prank::report::{self, Options};
use prank::sweep::{self, Predicate, RangeSpec};
use prank::Error;

/// p-rank, a-number and ordinariness of curves in characteristic p.
#[derive(Parser)]
#[command(name = "prank", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariants of a curve file.
    Invariants {
        file: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
        /// Include the basis and the Frobenius matrix in the report.
        #[arg(long)]
        emit_matrices: bool,
        /// Search for singular points over extensions of degree up to N
        /// (incomplete; a sanity check only).
        #[arg(long, value_name = "N", num_args = 0..=1, default_missing_value = "4")]
        probe_singular: Option<usize>,
    },
    /// Cross-check Frobenius against the Cartier operator and point counts.
    Verify {
        file: PathBuf,
        /// Largest extension degree to count points over.
        #[arg(long, value_name = "N")]
        zeta_max_ext: Option<usize>,
    },
    /// Count points and reconstruct the zeta numerator.
    Zeta {
        file: PathBuf,
        #[arg(long, value_name = "N")]
        max_ext: usize,
    },
    /// Run the invariants over a grid of placeholder values.
    Sweep {
        template: PathBuf,
        /// NAME=all|nonzero|prime|nonprime|v1,v2,...
        #[arg(long = "range", value_name = "NAME=SUBSET")]
        ranges: Vec<RangeSpec>,
        /// Keep only rows where this holds, e.g. "A!=B".
        #[arg(long = "where", value_name = "PREDICATE")]
        wheres: Vec<Predicate>,
        #[arg(long, value_name = "OUT")]
        csv: PathBuf,
    },
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Compute(e.to_string())
        }
    }
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Failure::Compute(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Compute(e.to_string())),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("PRANK_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Input(format!(
            "PRANK_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Compute(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Invariants {
            file,
            json,
            emit_matrices,
            probe_singular,
        } => {
            let curve = Curve::load(&file)?;
            let opts = Options {
                emit_matrices,
                probe_singular,
            };
            let r = report::invariants(&curve, &opts)?;
            emit_json(&r, json.as_deref())
        }
        Command::Verify { file, zeta_max_ext } => {
            let curve = Curve::load(&file)?;
            let r = report::verify(&curve, zeta_max_ext)?;
            emit_json(&r, None)?;
            if r.pass {
                Ok(())
            } else {
                Err(Failure::Compute("verification failed".into()))
            }
        }
        Command::Zeta { file, max_ext } => {
            let curve = Curve::load(&file)?;
            emit_json(&report::zeta(&curve, max_ext)?, None)
        }
        Command::Sweep {
            template,
            ranges,
            wheres,
            csv,
        } => {
            let text = fs::read_to_string(&template)
                .map_err(|e| Failure::Input(format!("{}: {e}", template.display())))?;
            let spec = CurveSpec::from_toml(&text)?;
            let rows = sweep::sweep(&spec, &ranges, &wheres)?;
            let file = fs::File::create(&csv)
                .map_err(|e| Failure::Input(format!("{}: {e}", csv.display())))?;
            sweep::write_csv(io::BufWriter::new(file), &ranges, &rows)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Compute(msg)) => {
            eprintln!("prank: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("prank: {msg}");
            ExitCode::from(2)
        }
    }
}
