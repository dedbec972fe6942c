//! Named example states and circuits.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{AnyonState, OccupationVector};
use crate::optics::{Circuit, GateElement};

pub const PRESET_NAMES: [&str; 3] = ["appendixG", "two-slater", "fock1100"];

/// Beam-splitter angle used when a preset is run without a θ grid.
pub const DEFAULT_THETA: f64 = FRAC_PI_4;

fn occ(s: &str) -> OccupationVector {
    s.parse().expect("preset occupation strings are valid")
}

fn superposition(phi: f64, terms: &[(&str, Complex64)]) -> Result<AnyonState> {
    AnyonState::from_amplitudes(4, phi, terms.iter().map(|&(s, a)| (occ(s), a)))
}

/// `(a†₁a†₂ + a†₁a†₄)|0⟩/√2` on four modes.
pub fn two_particle_input(phi: f64) -> Result<AnyonState> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    superposition(phi, &[("1100", r), ("1001", r)])
}

/// `BS₁,₂(θ)` on four modes.
pub fn two_particle_circuit(phi: f64, theta: f64) -> Result<Circuit> {
    Circuit::new(4, phi, vec![GateElement::bs(1, 2, theta)])
}

/// Closed form of the beam-splitter output:
/// `(a†₁a†₂ + cosθ a†₁a†₄ + i sinθ a†₂a†₄)|0⟩/√2`.
pub fn two_particle_output(phi: f64, theta: f64) -> Result<AnyonState> {
    let r = FRAC_1_SQRT_2;
    superposition(
        phi,
        &[
            ("1100", Complex64::new(r, 0.0)),
            ("1001", Complex64::new(r * theta.cos(), 0.0)),
            ("0101", Complex64::new(0.0, r * theta.sin())),
        ],
    )
}

/// `(a†₁a†₂ + a†₃a†₄)|0⟩/√2`, Slater rank 2.
pub fn two_slater(phi: f64) -> Result<AnyonState> {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    superposition(phi, &[("1100", r), ("0011", r)])
}

pub fn fock1100(phi: f64) -> Result<AnyonState> {
    AnyonState::basis_state(occ("1100"), phi)
}

/// A named initial state together with the circuit it is paired with.
#[derive(Debug, Clone)]
pub struct Preset {
    pub state: AnyonState,
    pub circuit: Circuit,
}

/// Looks up a preset by name. Only `appendixG` carries a nontrivial circuit.
pub fn preset(name: &str, phi: f64, theta: f64) -> Option<Result<Preset>> {
    let build = |state: Result<AnyonState>, circuit: Result<Circuit>| -> Result<Preset> {
        Ok(Preset {
            state: state?,
            circuit: circuit?,
        })
    };
    match name {
        "appendixG" => Some(build(two_particle_input(phi), two_particle_circuit(phi, theta))),
        "two-slater" => Some(build(two_slater(phi), Circuit::empty(4, phi))),
        "fock1100" => Some(build(fock1100(phi), Circuit::empty(4, phi))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::run_circuit;

    #[test]
    fn circuit_produces_closed_form() {
        for phi in [0.0, 0.8, std::f64::consts::PI] {
            for theta in [0.0, 0.4, 1.9] {
                let out = run_circuit(&two_particle_input(phi).unwrap(), &two_particle_circuit(phi, theta).unwrap()).unwrap();
                assert!(out.max_abs_diff(&two_particle_output(phi, theta).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn all_names_resolve() {
        for name in PRESET_NAMES {
            let p = preset(name, 0.3, DEFAULT_THETA).unwrap().unwrap();
            assert!(p.state.is_normalized());
        }
        assert!(preset("nope", 0.0, 0.0).is_none());
    }
}
