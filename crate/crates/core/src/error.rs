use crate::lattice::{Direction, LatticePoint};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("{form} has {what}")]
    NoCornerSet {
        form: &'static str,
        what: &'static str,
    },

    #[error("diagram is not periodic")]
    NotPeriodic,

    #[error("margin exhausted: power {requested} exceeds window margin {margin}")]
    MarginExhausted { requested: usize, margin: usize },

    #[error("subspace is not invariant under the {0} shift")]
    NotInvariant(Direction),

    #[error("pair is not doubly commuting (witness {witness})")]
    NotDoublyCommuting { witness: LatticePoint },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("vector is not cyclic: Krylov rank {rank} < {dim}")]
    NotCyclic { rank: usize, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resolution mismatch: {0}")]
    ResolutionMismatch(String),

    #[error("inconsistent block structure: {0}")]
    InconsistentBlocks(String),
}
