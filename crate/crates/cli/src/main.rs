//! Command-line driver: builds ring planes and their Veronesean models,
//! runs the checker suites and writes reports and exports.

mod config;
mod export;
mod models;
mod verify;

use clap::{Parser, Subcommand};
use config::{resolve, ConfigError, Format, ModelArgs, VerifyArgs};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "quadplane", version, about = "Ring planes over quadratic algebras and their Veronesean sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run checks and write a report (exit 0 if all hold, 1 if any fails).
    Verify(VerifyArgs),
    /// Write the plane and model JSON and the incidence grid to a directory.
    Export(ModelArgs),
}

fn init_threads(n: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = n {
        if n == 0 {
            return Err(ConfigError("--threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Verify(args) => {
            init_threads(args.model.threads)?;
            let r = resolve(&args.model, args.checks.as_deref())?;
            let report = verify::verify(&r)?;
            let mut bytes = match args.format {
                Format::Json => serde_json::to_vec_pretty(&report)?,
                Format::Text => verify::render_text(&report).into_bytes(),
            };
            if args.format == Format::Json {
                bytes.push(b'\n');
            }
            match &args.model.out {
                Some(path) => std::fs::write(path, &bytes).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?,
                None => std::io::stdout().write_all(&bytes)?,
            }
            Ok(report.body.holds)
        }
        Command::Export(args) => {
            init_threads(args.threads)?;
            let r = resolve(&args, Some("algebra"))?;
            let written = export::export(&r, args.out.as_deref())?;
            let mut out = std::io::stdout().lock();
            for (path, digest) in &written.files {
                writeln!(out, "{digest}  {}", path.display())?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
