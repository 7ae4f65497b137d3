use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error in {what}: {detail}")]
    Parse { what: String, detail: String },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("classes belong to different lattices")]
    LatticeMismatch,

    #[error("class has {got} coordinates, lattice rank is {expected}")]
    CoordinateLength { expected: usize, got: usize },

    #[error("polynomial entries present: {context}; evaluate the parameter first")]
    PolynomialEntries { context: String },

    #[error("form is not negative definite")]
    NotNegativeDefinite,

    #[error("lattice signature is {got}, expected hyperbolic (1, rank-1, 0)")]
    NotHyperbolic { got: String },

    #[error("positive-square pivot required: class has square {got}")]
    NonPositivePivot { got: String },

    #[error("reflection root must have square -2, got {got}")]
    BadRootSquare { got: String },

    #[error("{0}")]
    Precondition(String),

    #[error("reflection descent did not terminate within {max_iters} iterations")]
    ReflectionBudget { max_iters: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
