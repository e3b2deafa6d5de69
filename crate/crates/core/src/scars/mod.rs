//! Scarred spin chains: the spin-one XY tower and the driven PXP model.

pub mod pxp;
pub mod xy;

pub use pxp::{
    a0, a0_closed_form, eigenstate_scan, fidelity_run, o22_outliers, pxp_floquet, pxp_hamiltonian, pxp_hf1, pxp_hf3, scar_families,
    su2_closure, PulseOrder, PxpInitial, PxpParams, ScarFamilies, Su2Closure,
};
pub use xy::{bimagnon_tower, su2_generators, xy_hamiltonian, Tower, XyParams};
