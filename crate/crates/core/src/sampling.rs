//! Seeded random states, unitaries, operators and circuits for property checks.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::fock::{AnyonState, OccupationVector};
use crate::linalg::CMatrix;
use crate::operator::{LadderFactor, LadderTerm, OperatorExpr};
use crate::optics::{Circuit, GateElement};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_phi(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.0..TAU)
}

pub fn random_angle(rng: &mut impl Rng) -> f64 {
    rng.random_range(-PI..PI)
}

/// Normalized state with Gaussian amplitudes on the `n`-particle sector, or on
/// the whole Fock space when `n` is `None`.
pub fn random_state(rng: &mut impl Rng, m: usize, n: Option<usize>, phi: f64) -> Result<AnyonState> {
    let basis: Vec<OccupationVector> = match n {
        Some(n) => OccupationVector::sector(m, n)?,
        None => (0..1u64 << m).map(|b| OccupationVector::new(m, b)).collect::<Result<_>>()?,
    };
    let amps: Vec<_> = basis.into_iter().map(|o| (o, gaussian(rng))).collect();
    AnyonState::from_amplitudes(m, phi, amps)?.normalize()
}

pub fn random_fock_state(rng: &mut impl Rng, m: usize, n: usize, phi: f64) -> Result<AnyonState> {
    let sector = OccupationVector::sector(m, n)?;
    let occ = sector[rng.random_range(0..sector.len())];
    AnyonState::basis_state(occ, phi)
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn random_unitary(rng: &mut impl Rng, m: usize) -> CMatrix {
    let g = CMatrix::from_fn(m, m, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for k in 0..m {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Sum of `terms` random ladder monomials of length at most `max_len`.
pub fn random_operator(rng: &mut impl Rng, m: usize, terms: usize, max_len: usize) -> Result<OperatorExpr> {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let len = rng.random_range(0..=max_len);
        let factors = (0..len)
            .map(|_| {
                let mode = rng.random_range(1..=m);
                if rng.random_bool(0.5) {
                    LadderFactor::create(mode)
                } else {
                    LadderFactor::annihilate(mode)
                }
            })
            .collect();
        out.push(LadderTerm::new(m, gaussian(rng), factors));
    }
    OperatorExpr::from_terms(m, out)
}

fn distinct_pair(rng: &mut impl Rng, m: usize) -> (usize, usize) {
    let i = rng.random_range(1..=m);
    let mut j = rng.random_range(1..m);
    if j >= i {
        j += 1;
    }
    (i, j)
}

/// Circuit built only from gates the determinant path accepts: phase shifts,
/// nearest-neighbour beam splitters and fSWAPs. `PA₁,₂` is mixed in when
/// `pairing` is set.
pub fn random_in_family_circuit(rng: &mut impl Rng, m: usize, depth: usize, phi: f64, pairing: bool) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(depth);
    for _ in 0..depth {
        let kinds = if pairing { 4 } else { 3 };
        let g = match rng.random_range(0..kinds) {
            0 => GateElement::ps(rng.random_range(1..=m), random_angle(rng)),
            1 => {
                let i = rng.random_range(1..m);
                if rng.random_bool(0.5) {
                    GateElement::bs(i, i + 1, random_angle(rng))
                } else {
                    GateElement::bs(i + 1, i, random_angle(rng))
                }
            }
            2 => {
                let (i, j) = distinct_pair(rng, m);
                GateElement::fswap(i, j)
            }
            _ => GateElement::pa(1, 2, random_angle(rng)),
        };
        gates.push(g);
    }
    Circuit::new(m, phi, gates)
}

/// Random gate on any modes, including distant beam splitters.
pub fn random_gate(rng: &mut impl Rng, m: usize, number_conserving: bool) -> GateElement {
    let (i, j) = distinct_pair(rng, m);
    let kinds = if number_conserving { 3 } else { 4 };
    match rng.random_range(0..kinds) {
        0 => GateElement::ps(i, random_angle(rng)),
        1 => GateElement::bs(i, j, random_angle(rng)),
        2 => GateElement::fswap(i, j),
        _ => GateElement::pa(i, j, random_angle(rng)),
    }
}

pub fn random_circuit(rng: &mut impl Rng, m: usize, depth: usize, phi: f64, number_conserving: bool) -> Result<Circuit> {
    let gates = (0..depth).map(|_| random_gate(rng, m, number_conserving)).collect();
    Circuit::new(m, phi, gates)
}
