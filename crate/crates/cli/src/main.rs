use clap::{Parser, Subcommand};
use floquet_cli::{simulate, verify, workers_from_env, CliError, Request};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact and perturbative Floquet experiments on driven quantum chains.
#[derive(Debug, Parser)]
#[command(name = "floquet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write its tables and manifest.
    Simulate {
        /// One of: freeze, alpha-scan, dynloc, hsf-entropy, hsf-fragments, hsf-autocorr,
        /// xy-tower, pxp-fidelity, pxp-eigen, timecrystal, tc-melting
        scenario: String,
        #[arg(long)]
        config: PathBuf,
        /// Output directory [default: out/<scenario>]
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recompute the digests recorded in a manifest.
    Verify { manifest: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(n) = workers_from_env()? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Simulate { scenario, config, out, seed } => {
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(&scenario));
            let m = simulate(&Request { scenario, config, out: out.clone(), seed })?;
            for f in &m.files {
                println!("{}  {}", f.sha256, out.join(&f.name).display());
            }
            for (k, v) in &m.summary {
                println!("{k} = {v}");
            }
            println!("manifest: {}", out.join(floquet_cli::MANIFEST_NAME).display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { manifest } => {
            let r = verify(&manifest)?;
            for name in &r.mismatched {
                println!("MISMATCH {name}");
            }
            for name in &r.missing {
                println!("MISSING {name}");
            }
            if r.ok() {
                println!("ok: {} file(s) verified", r.verified.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
