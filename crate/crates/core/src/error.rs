use thiserror::Error;

use crate::exact::Rat;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("unsupported dimension {0}: A_n* models are built for 2 <= n <= 5")]
    UnsupportedDimension(usize),

    #[error("degenerate simplex: vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("constraint maps are linearly dependent (witness {})", fmt_witness(.witness))]
    DependentConstraints { witness: Vec<Rat> },

    #[error("inconsistent perturbation data: {0}")]
    InconsistentRho(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("lattice has no Farkas direction for this pair; the ball is extensible here, use the redundancy certificates instead")]
    Extensible,

    #[error("no witness step found down to s = {0}")]
    NoWitness(Rat),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn fmt_witness(w: &[Rat]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
