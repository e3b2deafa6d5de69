//! Shared fixtures for the benchmarks.

use floquet_core::ed::Path;
use floquet_core::hsf::{Boundary, HsfParams};
use floquet_core::scars::PxpParams;
use floquet_core::{FloquetOperator, FockBasis, C64};

/// Fragmented chain at a special frequency with its basis.
pub fn hsf_fixture(l: usize) -> (HsfParams, FockBasis) {
    let p = HsfParams::new(l, 40.0, 20.0, Boundary::Pbc).expect("valid parameters");
    let b = p.basis().expect("basis");
    (p, b)
}

/// Driven PXP propagator away from the special points.
pub fn pxp_fixture(l: usize, path: Path) -> (FockBasis, FloquetOperator) {
    let p = PxpParams::new(l, 1.0, 15.0, 8.5, Boundary::Obc).expect("valid parameters");
    let b = p.basis().expect("basis");
    let u = floquet_core::scars::pxp_floquet(&p, &b, path).expect("propagator");
    (b, u)
}

/// Deterministic normalised state with spread-out amplitudes.
pub fn spread_state(dim: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|i| C64::new((0.37 * i as f64).sin(), (0.11 * i as f64).cos())).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}
