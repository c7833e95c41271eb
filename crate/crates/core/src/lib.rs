//! Decision procedures for the identity and group problems in finitely
//! generated sub-semigroups of the Heisenberg group over the Gaussian
//! rationals, with exact arithmetic throughout.

pub mod arith;
pub mod decider;
pub mod generate;
pub mod instance;
pub mod linsolve;
pub mod matrix;
pub mod oracle;

pub use arith::{Gaussian, Rational};
pub use decider::{decide_group, decide_identity, Branch, Decision, DecisionTrace, Problem};
pub use instance::Instance;
pub use linsolve::{LinSystem, Relation};
pub use matrix::{GeneratorSet, HeisenbergMatrix, MatrixError};
