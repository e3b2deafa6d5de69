//! Exact and perturbative Floquet dynamics of driven quantum chains.

pub mod bessel;
pub mod drive;
pub mod ed;
pub mod error;
pub mod linalg;
pub mod series;
pub mod dynloc;
pub mod hsf;
pub mod ising;
pub mod scars;
pub mod timecrystal;

pub type C64 = num_complex::Complex64;

pub use drive::{special_frequency, DriveKind, DriveProtocol};
pub use ed::{Constraint, EigenReport, FloquetOperator, FockBasis, SparseOperator};
pub use error::{Error, Result};
pub use series::TimeSeries;
