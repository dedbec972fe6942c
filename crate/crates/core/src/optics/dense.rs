//! Full `2^m`-dimensional matrices, used as oracles on small mode counts.

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::AnyonState;
use crate::linalg::{expm_i, CMatrix, CVector};

use super::gate::{Circuit, GateElement};

/// Mode counts above this are refused by the dense oracles.
pub const DENSE_MAX_MODES: usize = 10;

fn check_dense(m: usize) {
    assert!(m <= DENSE_MAX_MODES, "dense matrices are limited to {DENSE_MAX_MODES} modes");
}

/// The element as a `2^m × 2^m` matrix indexed by occupation mask.
pub fn gate_matrix(gate: &GateElement, m: usize, phi: f64) -> Result<CMatrix> {
    check_dense(m);
    let g = gate.generator(m, phi)?.dense_matrix(phi);
    Ok(expm_i(&g, gate.angle()))
}

/// Product of the element matrices, later gates on the left.
pub fn circuit_matrix(circuit: &Circuit) -> Result<CMatrix> {
    let m = circuit.m();
    check_dense(m);
    let dim = 1usize << m;
    circuit
        .gates()
        .iter()
        .try_fold(CMatrix::identity(dim, dim), |acc, g| {
            Ok(gate_matrix(g, m, circuit.phi())? * acc)
        })
}

/// Product of a gate list read at φ, later gates on the left.
pub fn sequence_matrix(gates: &[GateElement], m: usize, phi: f64) -> Result<CMatrix> {
    check_dense(m);
    let dim = 1usize << m;
    gates.iter().try_fold(CMatrix::identity(dim, dim), |acc, g| {
        Ok(gate_matrix(g, m, phi)? * acc)
    })
}

pub fn state_vector(state: &AnyonState) -> CVector {
    check_dense(state.m());
    let mut v = CVector::zeros(1 << state.m());
    for (occ, a) in state.iter() {
        v[occ.bits() as usize] = a;
    }
    v
}

pub fn vector_state(m: usize, phi: f64, v: &CVector) -> Result<AnyonState> {
    let amps = v
        .iter()
        .enumerate()
        .map(|(k, &a)| (k as u64, a))
        .filter(|(_, a): &(u64, Complex64)| a.norm() > 0.0)
        .collect();
    crate::fock::normalize_phi(phi).map(|p| AnyonState::from_map(m, p, amps))
}
