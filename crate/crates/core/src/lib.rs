//! Simulation toolkit for one-dimensional fermionic anyons.
//!
//! States live in [`fock`], operators in [`operator`], sector maps in
//! [`transmute`], circuits and their evolution in [`optics`], the determinant
//! fast path in [`fastpath`] and entanglement analysis in [`entanglement`].
//! [`engine`] exposes the two circuit back ends behind one trait.

pub mod check;
pub mod engine;
pub mod entanglement;
pub mod error;
pub mod fastpath;
pub mod fock;
pub mod linalg;
pub mod operator;
pub mod optics;
pub mod presets;
pub mod sampling;
pub mod transmute;

pub use error::{Error, Result};
pub use fock::{AnyonState, ExchangeSign, LadderKind, OccupationVector};
pub use operator::{LadderFactor, LadderTerm, OperatorExpr};
pub use optics::{Circuit, GateElement};

pub use transmute::TransmutationMap;
