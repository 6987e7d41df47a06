//! Exact graded-state engine: Fock-space vectors over the lattice
//! Heisenberg algebra, the half-integer-mode sector operators, and the
//! consistency checks tying them to the sector representations.

pub mod checks;
pub mod operator;
pub mod scalar;
pub mod series;
pub mod vector;

pub use operator::{l_minus1, OpSeries, TwistedEngine, Window};
pub use scalar::Scalar;
pub use series::delta_coefficients;
pub use vector::{heisenberg_apply, Base, FockVector, Monomial};
