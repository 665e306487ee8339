//! `stillwave` command-line front end. Every run writes `report.json` and
//! `manifest.json` (plus any extra outputs) into `--out`.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use commands::Outcome;

const EXIT_NOT_APPLICABLE: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "stillwave", version, about = "Shear flows with a still free surface")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json, manifest.json and extras.
    #[arg(long, default_value = "stillwave-out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Stream profile U(y; s) of the selected flow.
    Stream(Common),
    /// Critical speed s0, depth h0 and the still-depth family.
    Depths {
        #[command(flatten)]
        common: Common,
        /// Include the elliptic-integral cross-check values.
        #[arg(long)]
        details: bool,
    },
    /// Hypothesis report; exit code 2 when the theorem does not apply.
    Check(Common),
    /// Newton solve from a perturbed flat state, or branch continuation.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Also write surface.csv (x, eta) and field.csv (x, q, psi).
        #[arg(long)]
        csv: bool,
    },
    /// Nonexistence sweep over amplitudes and wavelengths.
    Sweep(Common),
    /// Dispersion function on a wavenumber grid and its roots.
    Dispersion(Common),
    /// Perturbation norms for a state against the still reference flow.
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// WaveState JSON, e.g. state.json from `solve`; defaults to the
        /// manufactured surface of the config.
        #[arg(long)]
        state: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    config_digest: &'a str,
    tool_version: &'a str,
    outputs: Vec<String>,
    /// Seconds since the Unix epoch.
    timestamp: u64,
}

fn write_outputs(name: &str, common: &Common, digest: &str, outcome: &Outcome) -> Result<()> {
    let out = &common.out;
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let report = serde_json::to_string_pretty(&outcome.report)? + "\n";
    let mut files = vec![("report.json".to_string(), report.clone())];
    files.extend(outcome.files.iter().cloned());
    let mut outputs = Vec::new();
    for (file, contents) in &files {
        let path = out.join(file);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        outputs.push(path.display().to_string());
    }
    let manifest = Manifest {
        subcommand: name,
        config_digest: digest,
        tool_version: env!("CARGO_PKG_VERSION"),
        outputs,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    let path = out.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    print!("{report}");
    Ok(())
}

type Handler<'a> = &'a dyn Fn(&config::Config) -> Result<Outcome>;

fn dispatch(name: &str, common: &Common, f: Handler<'_>) -> Result<bool> {
    let loaded = config::load(&common.config)?;
    let outcome = f(&loaded.config)?;
    write_outputs(name, common, &loaded.digest, &outcome)?;
    Ok(outcome.not_applicable)
}

/// True when the run completed but the theorem's hypotheses failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Stream(c) => dispatch("stream", &c, &commands::stream),
        Command::Depths { common, details } => dispatch("depths", &common, &|cfg| commands::depths(cfg, details)),
        Command::Check(c) => dispatch("check", &c, &commands::check),
        Command::Solve { common, csv } => dispatch("solve", &common, &|cfg| commands::solve(cfg, csv)),
        Command::Sweep(c) => dispatch("sweep", &c, &commands::sweep),
        Command::Dispersion(c) => dispatch("dispersion", &c, &commands::dispersion),
        Command::Diagnose { common, state } => {
            dispatch("diagnose", &common, &|cfg| commands::diagnose_cmd(cfg, state.as_deref()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_NOT_APPLICABLE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
