use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

mod run;

use run::{Failure, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Ifun,
    MirrorMap,
    Invariants,
    Serre,
    Oracle,
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// Exact genus-zero Gromov-Witten invariants via the quantum Lefschetz
/// pipeline.
#[derive(Parser, Debug)]
#[command(name = "lefschetz", version)]
struct Args {
    /// Geometry JSON file.
    #[arg(long)]
    geometry: PathBuf,
    #[arg(long, value_enum)]
    cmd: Command,
    /// Total q-degree truncation.
    #[arg(long, default_value_t = 6)]
    max_degree: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for the localization weights.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write `<cmd>.<format>` here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Earlier dump to resume from: an `ifun` series for `mirror-map`, a
    /// `mirror-map` for `invariants`.
    #[arg(long)]
    input: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = RunConfig {
        geometry: args.geometry,
        command: args.cmd,
        max_degree: args.max_degree,
        format: args.format,
        seed: args.seed,
        out: args.out,
        input: args.input,
    };
    match run::run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            let body = lefschetz::serial::ErrorJson::from(&e);
            eprintln!("{}", serde_json::to_string(&body).expect("plain data serializes"));
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{}", serde_json::json!({ "module": "cli", "kind": "Mismatch", "beta": null, "message": msg }));
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{}", serde_json::json!({ "module": "cli", "kind": "Io", "beta": null, "message": msg }));
            ExitCode::from(2)
        }
    }
}
