//! Exact computations with finite involutive quantaloids and the categories
//! enriched in them: symmetrisation, Cauchy and symmetric completion, the
//! comparison functor between them, and decision procedures for the two
//! bilaterality conditions on the base.

pub mod completion;
pub mod constructors;
pub mod format;
pub mod lattice;
pub mod qcat;
pub mod quantaloid;
pub mod sampling;

pub use completion::{CompletionError, CompletionResult};
pub use lattice::FiniteLattice;
pub use qcat::{Distributor, QCategory, QFunctor};
pub use quantaloid::{MorphismRef, Quantaloid};
