use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("potential is not confining, the spectrum is not purely discrete")]
    NotConfining,

    #[error("radial coordinate must be non-negative, got {0}")]
    NegativeRadius(f64),

    #[error("unsupported power r^{0}, only powers >= -1 are representable")]
    UnsupportedPower(i32),

    #[error("block size {block} is smaller than the half-bandwidth {bandwidth}")]
    Partition { block: usize, bandwidth: usize },

    #[error("continued fraction tail is singular at depth {depth}")]
    TailSingular { depth: usize },

    #[error("z = {z} is a pole of the Green's matrix to working precision")]
    AtPole { z: Complex64 },

    #[error("tail did not converge by depth {depth} (last relative change {estimate:e})")]
    NonConvergence { depth: usize, estimate: f64 },

    #[error("contour error: {0}")]
    Contour(String),

    #[error("residue is not rank one (rank defect {rank_defect:e})")]
    Degenerate { rank_defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
