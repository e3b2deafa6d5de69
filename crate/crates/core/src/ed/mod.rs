//! Exact diagonalization toolkit: bases, sparse operators, propagators,
//! entanglement and Floquet spectra.

pub mod basis;
pub mod entropy;
pub mod floquet;
pub mod krylov;
pub mod sparse;
pub mod spectrum;

pub use basis::{Constraint, FockBasis};
pub use entropy::{entanglement_entropy, page_value};
pub use floquet::{floquet_squarepulse, kick_unitary, x_kick, Factor, FloquetOperator, Path, DENSE_LIMIT};
pub use krylov::{expm_apply, KrylovOptions};
pub use sparse::SparseOperator;
pub use spectrum::{fold_quasienergy, quasienergies, EigenReport};
