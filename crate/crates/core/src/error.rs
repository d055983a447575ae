use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("node {node} out of range for a ring of {size} nodes")]
    NodeOutOfRange { node: usize, size: usize },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("operation requires a finite lattice")]
    InfiniteLattice,

    #[error("classical sum left an imaginary residue of {residue:e} (limit 1e-12)")]
    ImaginaryResidue { residue: f64 },

    #[error("quadrature did not converge: achieved error estimate {achieved:e}, target {target:e}, {panels} panels")]
    QuadratureNonConvergence {
        achieved: f64,
        target: f64,
        panels: usize,
    },

    #[error("{0}")]
    Precondition(String),

    #[error("no maximum found in bracket [{lo}, {hi}]: {trace}")]
    NoMaximum { lo: f64, hi: f64, trace: String },

    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),

    #[error("lattice of {size} nodes exceeds the oracle limit of {limit}")]
    OracleTooLarge { size: usize, limit: usize },

    #[error("time step {step} exceeds the stability bound {bound}")]
    StepTooLarge { step: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
