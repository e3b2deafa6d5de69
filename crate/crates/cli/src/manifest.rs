//! Run manifests: config echo, conventions and SHA-256 digests of emitted files.

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MANIFEST_NAME: &str = "manifest.json";
pub const ARTIFACT: &str = "floquet";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub version: String,
    pub scenario: String,
    pub seed: u64,
    pub config: BTreeMap<String, Value>,
    pub conventions: BTreeMap<String, String>,
    pub summary: BTreeMap<String, Value>,
    pub wall_time_s: f64,
    pub files: Vec<FileDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes via a sibling temporary file and a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let mut f = fs::File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

/// Every convention a run depends on, keyed by module.
pub fn conventions() -> BTreeMap<String, String> {
    [
        ("units", "hbar = 1; J = 1 unless overridden"),
        ("drive.cosine_phase", "h(t) = h_s + h_1 cos(omega_D t), t = 0 at the start of each period"),
        ("drive.square_pulse", "first half period at offset - amplitude, second half at offset + amplitude"),
        ("drive.kicks", "instantaneous unitaries, never finite pulses"),
        ("bessel.evaluation", "ascending series for small x, normalised downward recurrence otherwise"),
        ("ising.boundary_sector", "antiperiodic momenta k = (2m+1) pi / L, m = 0 .. L/2 - 1"),
        ("ising.initial_state", "ground state of H(t=0) with gamma dropped (option: all-down)"),
        ("ising.non_hermitian_norm", "each mode renormalised after every period; observables use <.>/<psi|psi>"),
        ("ising.steady_state", "each mode iterated until unchanged up to phase (1e-10) over 50 cycles, cap 50000 cycles"),
        ("ising.integrator", "midpoint 2x2 exponentials with step doubling to 1e-9 per period"),
        ("dynloc.vector_potential", "A(0) = 0, A(t) = -(E_0/omega_D) sin(omega_D t)"),
        ("ed.dense_threshold", "dense propagators up to dimension 4096, action-only above"),
        ("ed.entropy", "Schmidt blocks per left configuration of the product-space embedding"),
        ("ed.quasienergy_branch", "principal value in (-pi/T, pi/T], ties to +pi/T"),
        ("hsf.page_normalization", "S_p from full half-chain dimensions 2^(L/2) x 2^(L - L/2)"),
        ("hsf.obc_edge_density", "A_j = n_(j+2) - n_(j-1) with sites outside the chain counted as empty"),
        ("hsf.jw_boundary_sign", "wrap-around hop carries (-1)^(N-1) in the N-particle sector"),
        ("hsf.defaults", "J = 1, V_0 = 1, V_2 = 0.5, half filling"),
        ("hsf.gamma1", "gamma_1 = V_1 T / 4"),
        ("hsf.autocorrelator", "C_L reported raw and connected (minus mean density squared)"),
        ("pxp.pulse_order", "default: lambda = -lambda_0 in the first half period"),
        ("pxp.detuning", "H(t) = Omega sum_j P sigma^x_j P - (lambda(t)/2) sum_j sigma^z_j, lambda(t) = -+lambda_0; special points lambda_0 T = 4 n pi"),
        ("pxp.o22", "O22 = n_2 n_4 with sites counted from one"),
        ("pxp.oz_boundary", "O_z over sites with both neighbours; closure asserted with PBC only"),
        ("xy.spin_one", "S^+- = (S^x +- i S^y)/2; tower spacing reported as measured"),
        ("tc.kick", "angle (pi/2)(1 - epsilon) per site about x"),
        ("tc.melting", "period-2 amplitude below half its initial value over a sliding 20-cycle window"),
        ("tc.cats", "degenerate cat pairs analysed within each degenerate subspace"),
        ("tc.frame", "rotating frame U = I"),
        ("runner.csv", "17 significant digits, '.' radix, Unix newlines"),
        ("runner.config", "flat JSON object, keys namespaced by module, unknown keys rejected"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Manifest { path: path.into(), reason: e.to_string() })?;
        serde_json::from_str(&text).map_err(|e| CliError::Manifest { path: path.into(), reason: format!("unreadable: {e}") })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub verified: Vec<String>,
    pub mismatched: Vec<String>,
    pub missing: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatched.is_empty() && self.missing.is_empty()
    }
}

/// Recomputes every digest listed in the manifest. Files resolve relative to the manifest.
pub fn verify(manifest_path: &Path) -> Result<VerifyReport, CliError> {
    let m = Manifest::load(manifest_path)?;
    let dir: PathBuf = manifest_path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut report = VerifyReport::default();
    for f in &m.files {
        match fs::read(dir.join(&f.name)) {
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => report.missing.push(f.name.clone()),
            Err(e) => return Err(CliError::io(dir.join(&f.name), e)),
            Ok(bytes) if bytes.len() as u64 == f.bytes && sha256_hex(&bytes) == f.sha256 => report.verified.push(f.name.clone()),
            Ok(_) => report.mismatched.push(f.name.clone()),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn conventions_cover_every_module() {
        let c = conventions();
        for prefix in ["drive.", "ising.", "dynloc.", "ed.", "hsf.", "pxp.", "xy.", "tc.", "runner."] {
            assert!(c.keys().any(|k| k.starts_with(prefix)), "{prefix}");
        }
    }
}
