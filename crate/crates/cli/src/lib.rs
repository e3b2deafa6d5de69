//! Experiment runner: validated configs in, CSV tables and a digest manifest out.

pub mod config;
pub mod error;
pub mod manifest;
pub mod scenarios;
pub mod table;

pub use config::Config;
pub use error::CliError;
pub use manifest::{verify, Manifest, VerifyReport, MANIFEST_NAME};
pub use scenarios::{Scenario, SCENARIOS};

use manifest::{sha256_hex, write_atomic, FileDigest};
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "FLOQUET_WORKERS";

#[derive(Debug, Clone)]
pub struct Request {
    pub scenario: String,
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
}

/// Validates, runs, then writes the tables followed by the manifest.
/// Nothing touches `out` until the computation has succeeded.
pub fn simulate(req: &Request) -> Result<Manifest, CliError> {
    let scenario: Scenario = req.scenario.parse()?;
    let cfg = Config::from_file(&req.config)?;
    simulate_with(scenario, cfg, &req.out, req.seed)
}

pub fn simulate_with(scenario: Scenario, cfg: Config, out: &Path, seed: u64) -> Result<Manifest, CliError> {
    let prepared = scenarios::prepare(scenario, cfg, seed)?;
    let start = Instant::now();
    let output = (prepared.job)().map_err(|source| CliError::Model { scenario: scenario.name(), source })?;
    let wall_time_s = start.elapsed().as_secs_f64();

    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut files = Vec::with_capacity(output.files.len());
    for (name, table) in &output.files {
        let bytes = table.render().into_bytes();
        write_atomic(&out.join(name), &bytes)?;
        files.push(FileDigest { name: name.clone(), sha256: sha256_hex(&bytes), bytes: bytes.len() as u64 });
    }
    let manifest = Manifest {
        artifact: manifest::ARTIFACT.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.name().to_string(),
        seed,
        config: prepared.config,
        conventions: manifest::conventions(),
        summary: output.summary,
        wall_time_s,
        files,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
    write_atomic(&out.join(MANIFEST_NAME), text.as_bytes())?;
    Ok(manifest)
}

/// Reads the worker count from [`WORKERS_ENV`], if set.
pub fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))),
        },
    }
}
