//! Proofs without words for planar Euclidean constructions.
//!
//! The pipeline reads a construction (from the construction language or a
//! `.ggb` archive), checks a conjectured relation on random numeric witnesses,
//! saturates a geometry deduction database with forward-chaining rules and
//! exact angle/length chasing, and exports the derivation as a step-by-step
//! visual proof document.

pub mod construction;
pub mod engine;
pub mod fact;
pub mod ggb;
pub mod label;
pub mod numeric;
pub mod proof;

pub use construction::{Construction, GoalStatement, Step, StepKind};
pub use fact::{Fact, Predicate};
pub use label::Label;
pub use numeric::{NumericModel, Tolerances};
