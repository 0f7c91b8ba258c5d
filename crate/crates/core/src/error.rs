use thiserror::Error;

use crate::exactnum::Var;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial variable mismatch: {left} vs {right}")]
    VarMismatch { left: Var, right: Var },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("entry depends on the coupling parameter; a rational value is required")]
    NotRational,
    #[error("empty or reversed interval ({lo}, {hi}]")]
    InvalidInterval { lo: String, hi: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("operator leaks out of the polynomial module ({0} overflow terms)")]
    Leakage(usize),
    #[error("defective eigenvalue {value}: geometric multiplicity {geometric} < algebraic {algebraic}")]
    DefectiveEigenvalue {
        value: f64,
        algebraic: usize,
        geometric: usize,
    },
    #[error("no interior minimum of the level gap in [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },
    #[error("box half-width {half_width} too small: boundary amplitude {amplitude:e}")]
    BoxTooSmall { half_width: f64, amplitude: f64 },
    #[error("eigensolver did not converge after {0} sweeps")]
    NonConvergence(usize),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
