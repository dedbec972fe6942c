use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{AnyonState, ExchangeSign};
use crate::linalg::{expm_i, CMatrix, CVector};
use crate::operator::OperatorExpr;

use super::gate::{Circuit, GateElement};

/// Basis states reachable from the support of `state` under repeated action
/// of `generator`, in discovery order.
fn closure(state: &AnyonState, generator: &OperatorExpr) -> Vec<u64> {
    let mut seen: BTreeSet<u64> = state.raw().keys().copied().collect();
    let mut order: Vec<u64> = seen.iter().copied().collect();
    let mut queue: VecDeque<u64> = order.iter().copied().collect();
    while let Some(b) = queue.pop_front() {
        for (nb, _) in generator.act_on_basis(b, state.phi(), ExchangeSign::Canonical) {
            if seen.insert(nb) {
                order.push(nb);
                queue.push_back(nb);
            }
        }
    }
    order
}

/// `exp(i·angle·G)|ψ⟩` for Hermitian `G`, exponentiating `G` on the smallest
/// invariant subspace containing the support of `ψ`.
pub fn evolve(state: &AnyonState, generator: &OperatorExpr, angle: f64) -> Result<AnyonState> {
    if generator.m() != state.m() {
        return Err(Error::ModeCountMismatch(state.m(), generator.m()));
    }
    if state.is_zero() {
        return Ok(state.clone());
    }
    let basis = closure(state, generator);
    let pos: BTreeMap<u64, usize> = basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let d = basis.len();
    let mut h = CMatrix::zeros(d, d);
    for (col, &b) in basis.iter().enumerate() {
        for (nb, c) in generator.act_on_basis(b, state.phi(), ExchangeSign::Canonical) {
            h[(pos[&nb], col)] += c;
        }
    }
    let u = expm_i(&h, angle);
    let v = CVector::from_iterator(d, basis.iter().map(|&b| state.amplitude_bits(b)));
    let out = u * v;
    let amps = basis.iter().zip(out.iter()).map(|(&b, &a)| (b, a)).collect();
    Ok(AnyonState::from_map(state.m(), state.phi(), amps))
}

/// Applies one optical element in the state's own sector.
pub fn apply_gate(state: &AnyonState, gate: &GateElement) -> Result<AnyonState> {
    let g = gate.generator(state.m(), state.phi())?;
    evolve(state, &g, gate.angle())
}

/// `fSWAP_{i,j}` through its closed form rather than an exponential.
pub fn apply_fswap(state: &AnyonState, i: usize, j: usize) -> Result<AnyonState> {
    let op = GateElement::fswap_closed_form(state.m(), i, j, state.phi())?;
    state.apply_operator_expr(&op)
}

/// Applies the gates of `circuit` left to right.
pub fn run_circuit(state: &AnyonState, circuit: &Circuit) -> Result<AnyonState> {
    circuit.check_state(state)?;
    circuit
        .gates()
        .iter()
        .try_fold(state.clone(), |s, g| apply_gate(&s, g))
}

/// `(1 + i·sinθ·K + (cosθ − 1)·K²)` with `K = a†_i a_j + a†_j a_i`.
pub fn beam_splitter_series(m: usize, i: usize, j: usize, theta: f64) -> Result<OperatorExpr> {
    let k = GateElement::bs(i, j, theta).generator(m, 0.0)?;
    let k2 = &k * &k;
    Ok(&(&OperatorExpr::identity(m)? + &k.scale(Complex64::new(0.0, theta.sin())))
        + &k2.scale(Complex64::new(theta.cos() - 1.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn occ(s: &str) -> OccupationVector {
        s.parse().unwrap()
    }

    #[test]
    fn beam_splitter_on_single_particle() {
        for phi in [0.0, 0.9, PI] {
            let t = 0.4;
            let s = AnyonState::basis_state(occ("1000"), phi).unwrap();
            let out = apply_gate(&s, &GateElement::bs(1, 2, t)).unwrap();
            assert!((out.amplitude(&occ("1000")) - Complex64::new(t.cos(), 0.0)).norm() < 1e-12);
            assert!((out.amplitude(&occ("0100")) - Complex64::new(0.0, t.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_shift_is_diagonal() {
        let s = AnyonState::basis_state(occ("0110"), 2.0).unwrap();
        let out = apply_gate(&s, &GateElement::ps(2, 0.3)).unwrap();
        assert!((out.amplitude(&occ("0110")) - Complex64::from_polar(1.0, 0.3)).norm() < 1e-13);
        let out = apply_gate(&s, &GateElement::ps(1, 0.3)).unwrap();
        assert!((out.amplitude(&occ("0110")) - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fswap_two_modes_at_zero() {
        let f = |s: &str| apply_fswap(&AnyonState::basis_state(occ(s), 0.0).unwrap(), 1, 2).unwrap();
        assert_eq!(f("10").amplitude(&occ("01")), Complex64::new(1.0, 0.0));
        assert_eq!(f("01").amplitude(&occ("10")), Complex64::new(1.0, 0.0));
        assert_eq!(f("11").amplitude(&occ("11")), Complex64::new(-1.0, 0.0));
        assert_eq!(f("00").amplitude(&occ("00")), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn fswap_exponential_matches_closed_form() {
        for phi in [0.0, 1.3, PI] {
            let s = AnyonState::from_amplitudes(
                4,
                phi,
                [
                    (occ("1100"), Complex64::new(0.5, 0.1)),
                    (occ("0110"), Complex64::new(-0.3, 0.6)),
                    (occ("1010"), Complex64::new(0.2, -0.4)),
                ],
            )
            .unwrap();
            let a = apply_gate(&s, &GateElement::fswap(1, 3)).unwrap();
            let b = apply_fswap(&s, 1, 3).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn parametric_amplifier_changes_parity_sector_only() {
        let s = AnyonState::vacuum(2, 0.7).unwrap();
        let out = apply_gate(&s, &GateElement::pa(1, 2, 0.3)).unwrap();
        assert!((out.amplitude(&occ("00")) - Complex64::new(0.3f64.cos(), 0.0)).norm() < 1e-13);
        assert!((out.amplitude(&occ("11")) - Complex64::new(0.0, 0.3f64.sin())).norm() < 1e-13);
    }

    #[test]
    fn worked_two_particle_example() {
        let t = 0.61;
        for phi in [0.0, 0.8, PI, 4.0] {
            let s = AnyonState::from_amplitudes(
                4,
                phi,
                [(occ("1100"), Complex64::new(FRAC_1_SQRT_2, 0.0)), (occ("1001"), Complex64::new(FRAC_1_SQRT_2, 0.0))],
            )
            .unwrap();
            let c = Circuit::new(4, phi, vec![GateElement::bs(1, 2, t)]).unwrap();
            let out = run_circuit(&s, &c).unwrap();
            let r = FRAC_1_SQRT_2;
            assert!((out.amplitude(&occ("1100")) - Complex64::new(r, 0.0)).norm() < 1e-12);
            assert!((out.amplitude(&occ("1001")) - Complex64::new(r * t.cos(), 0.0)).norm() < 1e-12);
            assert!((out.amplitude(&occ("0101")) - Complex64::new(0.0, r * t.sin())).norm() < 1e-12);
        }
    }

    #[test]
    fn circuit_checks_state_sector() {
        let s = AnyonState::vacuum(3, 0.5).unwrap();
        let c = Circuit::empty(3, 0.6).unwrap();
        assert!(matches!(run_circuit(&s, &c), Err(Error::PhiMismatch(..))));
        let c = Circuit::empty(4, 0.5).unwrap();
        assert!(matches!(run_circuit(&s, &c), Err(Error::ModeCountMismatch(..))));
    }
}
