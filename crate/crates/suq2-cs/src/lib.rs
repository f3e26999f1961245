//! Numerical Chern-Simons theory on the quantum 3-sphere.
//!
//! The crate builds a truncated spectral triple for the q-deformed SU(2)
//! coordinate algebra, extracts zeta-function residues from shell-trace
//! asymptotics, evaluates the local index cochains through independent
//! routes (exact circle-symbol arithmetic and residue fits), assembles the
//! Chern-Simons action with its linear term, verifies its gauge behaviour
//! against a numerically computed Fredholm index, and searches for
//! stationary points of the action in coefficient space.

pub mod basis;
pub mod error;
pub mod ncpoly;
pub mod ops;
pub mod rep;
pub mod shell;
pub mod fit;
pub mod residues;
pub mod forms;
pub mod random;
pub mod symbols;
pub mod represent;
pub mod cocycles;
pub mod index;
pub mod action;
pub mod optimize;
pub mod dlsv;
pub mod config;
pub mod selftest;

pub use basis::{BasisIndex, Truncation};
pub use error::{Error, Result};
pub use ncpoly::{Gen, Letter, NCPoly, Word};
pub use ops::{C64, SeqOp, ShiftOp};
pub use rep::{DiracOps, LadderKind, PiSign, Rep};
