//! Coherence and entanglement monotones built from concave symmetric
//! functionals, incoherent state conversion, the CNOT-type embedding of
//! coherence into entanglement, and certified lower bounds on the generalized
//! concurrence for mixed states.
//!
//! Every numeric routine is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision choice.

pub mod bounds;
pub mod error;
mod lp;
pub mod majorize;
pub mod mapping;
pub mod monotones;
pub mod qstate;
pub mod random;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result};
pub use majorize::{ConcavityClass, Functional, ProbVector, TTransform};
pub use monotones::{RoofEstimate, RoofKind, RoofOptions};
pub use qstate::{BipartitePureState, ComplexMatrix, DensityMatrix, PureState, Subsystem};
pub use scalar::{Real, C};
pub use transform::{ChannelClass, KrausClass, KrausSet};

pub type Complex64 = C<f64>;
pub type Matrix64 = ComplexMatrix<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type PureState64 = PureState<f64>;
pub type BipartitePureState64 = BipartitePureState<f64>;
pub type ProbVector64 = ProbVector<f64>;
pub type KrausSet64 = KrausSet<f64>;

pub type Matrix32 = ComplexMatrix<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type PureState32 = PureState<f32>;
