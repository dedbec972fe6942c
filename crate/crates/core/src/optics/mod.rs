//! Optical elements, circuits and their action on anyonic states.

pub mod bogoliubov;
pub mod decompose;
pub mod dense;
pub mod evolve;
pub mod gate;

pub use bogoliubov::{apply_induced_bogoliubov, BogoliubovPair, BogoliubovTransform, QuadraticGenerator};
pub use decompose::{decompose_distant, fswap_chain};
pub use evolve::{apply_fswap, apply_gate, beam_splitter_series, evolve, run_circuit};
pub use gate::{Circuit, GateElement};
