//! Exact symbolic machinery for quasi-exactly-solvable matrix operators:
//! rational polynomials, the Weyl algebra and its 2×2 matrices, the
//! generator families, relation checks, and the spectral analysis of the
//! gauged two-channel Hamiltonian.

pub mod error;
pub mod exactnum;
pub mod generators;
pub mod report;
pub mod spectral;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
