//! Lattice diagrams, monomial and truncated numeric models of shift pairs on
//! the bidisc and the torus, generalized powers, and torus stripe geometry.

pub mod diagram;
pub mod error;
pub mod exact_model;
pub mod genpowers;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod numeric_model;
pub mod torusgeo;

pub use diagram::{Diagram, DiagramClass, DiagramForm, PeriodCell, SimpleKind};
pub use error::{Error, Result};
pub use exact_model::{recover_diagram, vanish_check, MonomialSubspace, Recovery, RecoveryStatus, Soundness};
pub use genpowers::{build_gp, gp_verify, period_rescale_check, BlockLayout, GeneralizedPowerSystem, GpVerdict};
pub use lattice::{Direction, LatticePoint, Window};
pub use numeric_model::{compress, CompressedOperator, NumericSubspace, ShiftOp};
pub use torusgeo::{preimage, ArcSet, OmegaMap, TorusGridSet};

/// Complex scalar used throughout the numeric layers.
pub type C64 = num_complex::Complex64;
