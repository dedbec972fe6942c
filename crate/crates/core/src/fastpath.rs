//! Determinant amplitudes for circuits whose fermionic image is linear optics.
//!
//! Circuits built from phase shifters, nearest-neighbour beam splitters,
//! fermionic swaps and `PA₁,₂` have Fock matrices that do not depend on φ, so
//! they can be simulated at φ = 0. Number-conserving stretches compile to an
//! `m × m` matrix and each amplitude is one `N × N` determinant.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{AnyonState, OccupationVector};
use crate::linalg::{unitarity_error, CMatrix};
use crate::optics::{BogoliubovPair, Circuit, GateElement};

pub const UNITARY_TOL: f64 = 1e-10;

/// `Û f†_j Û† = Σ_i U_ij f†_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleUnitary {
    u: CMatrix,
}

impl SingleParticleUnitary {
    pub fn new(u: CMatrix) -> Result<Self> {
        if u.nrows() == 0 || u.nrows() != u.ncols() {
            return Err(Error::InvalidBogoliubov("single-particle matrix must be square".into()));
        }
        let e = unitarity_error(&u);
        if e > UNITARY_TOL {
            return Err(Error::InvalidBogoliubov(format!("matrix is not unitary ({e:e})")));
        }
        Ok(Self { u })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            u: CMatrix::identity(m, m),
        }
    }

    pub fn m(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SingleParticleUnitary) -> Self {
        Self {
            u: &next.u * &self.u,
        }
    }

    /// The same transformation in the row convention of [`BogoliubovPair`].
    pub fn to_bogoliubov(&self) -> BogoliubovPair {
        BogoliubovPair::change_of_basis(self.u.transpose())
            .expect("a unitary matrix is a valid change of basis")
    }

    /// `⟨y|Û|x⟩ = det U[y, x]` with rows and columns in increasing mode order.
    pub fn amplitude(&self, x: &OccupationVector, y: &OccupationVector) -> Amplitude {
        if x.particle_number() != y.particle_number() {
            return Amplitude {
                value: Complex64::new(0.0, 0.0),
                number_mismatch: true,
            };
        }
        Amplitude {
            value: self.minor(&y.modes(), &x.modes()),
            number_mismatch: false,
        }
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> Complex64 {
        let n = rows.len();
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let sub = DMatrix::from_fn(n, n, |r, c| self.u[(rows[r] - 1, cols[c] - 1)]);
        sub.determinant()
    }

    /// Image of a number-conserving state, summed over its particle sectors.
    pub fn apply(&self, state: &AnyonState) -> AnyonState {
        let m = state.m();
        let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (x, a) in state.iter() {
            let cols = x.modes();
            for y in sector_masks(m, cols.len()) {
                let rows = mask_modes(y);
                let d = self.minor(&rows, &cols);
                *out.entry(y).or_default() += a * d;
            }
        }
        AnyonState::from_map(m, state.phi(), out)
    }
}

/// A fast-path amplitude; `number_mismatch` flags a forced zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude {
    pub value: Complex64,
    pub number_mismatch: bool,
}

fn mask_modes(bits: u64) -> Vec<usize> {
    (0..64).filter(|k| bits & (1u64 << k) != 0).map(|k| k + 1).collect()
}

/// Masks of `m` bits with exactly `n` set, increasing (Gosper's hack).
fn sector_masks(m: usize, n: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << m;
    let first: u128 = if n == 0 { 0 } else { (1u128 << n) - 1 };
    let mut next = if n <= m { Some(first) } else { None };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let succ = (((r ^ cur) >> 2) / c) | r;
            (succ < limit).then_some(succ)
        };
        Some(cur as u64)
    })
}

fn out_of_family(index: usize, gate: &GateElement, reason: &str) -> Error {
    Error::OutOfFamily {
        index,
        gate: gate.to_string(),
        reason: reason.to_string(),
    }
}

/// Single-particle matrix of one number-conserving in-family element.
fn element_matrix(m: usize, index: usize, gate: &GateElement) -> Result<CMatrix> {
    let mut g = CMatrix::identity(m, m);
    match *gate {
        GateElement::PhaseShift { i, theta } => {
            g[(i - 1, i - 1)] = Complex64::from_polar(1.0, theta);
        }
        GateElement::BeamSplitter { i, j, theta } => {
            if i.abs_diff(j) != 1 {
                return Err(out_of_family(
                    index,
                    gate,
                    "beam splitters between non-adjacent modes depend on the statistics",
                ));
            }
            let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin()));
            g[(i - 1, i - 1)] = c;
            g[(j - 1, j - 1)] = c;
            g[(i - 1, j - 1)] = s;
            g[(j - 1, i - 1)] = s;
        }
        GateElement::FSwap { i, j } => {
            g[(i - 1, i - 1)] = Complex64::new(0.0, 0.0);
            g[(j - 1, j - 1)] = Complex64::new(0.0, 0.0);
            g[(i - 1, j - 1)] = Complex64::new(1.0, 0.0);
            g[(j - 1, i - 1)] = Complex64::new(1.0, 0.0);
        }
        GateElement::ParametricAmplifier { .. } => {
            return Err(out_of_family(index, gate, "parametric amplifiers do not conserve particle number"));
        }
    }
    Ok(g)
}

/// `⟨y|Û|x⟩` as a minor of `u`; zero and flagged when particle numbers differ.
pub fn amplitude_number_conserving(u: &SingleParticleUnitary, x: &OccupationVector, y: &OccupationVector) -> Amplitude {
    u.amplitude(x, y)
}

/// Compiles a number-conserving in-family circuit.
pub fn compile_single_particle(circuit: &Circuit) -> Result<SingleParticleUnitary> {
    let m = circuit.m();
    let mut u = CMatrix::identity(m, m);
    for (k, g) in circuit.gates().iter().enumerate() {
        u = element_matrix(m, k, g)? * u;
    }
    Ok(SingleParticleUnitary { u })
}

enum Segment {
    Linear(SingleParticleUnitary),
    Pairing(f64),
}

/// Splits an in-family circuit into compiled linear stretches and `PA₁,₂`.
fn segments(circuit: &Circuit) -> Result<Vec<Segment>> {
    let m = circuit.m();
    let mut out = Vec::new();
    let mut cur: Option<CMatrix> = None;
    for (k, g) in circuit.gates().iter().enumerate() {
        if let GateElement::ParametricAmplifier { i, j, theta } = *g {
            if (i, j) != (1, 2) {
                return Err(out_of_family(
                    k,
                    g,
                    "parametric amplifiers are statistics-independent only as PA1,2",
                ));
            }
            if let Some(u) = cur.take() {
                out.push(Segment::Linear(SingleParticleUnitary { u }));
            }
            out.push(Segment::Pairing(theta));
        } else {
            let e = element_matrix(m, k, g)?;
            cur = Some(match cur {
                Some(u) => e * u,
                None => e,
            });
        }
    }
    if let Some(u) = cur {
        out.push(Segment::Linear(SingleParticleUnitary { u }));
    }
    Ok(out)
}

/// Checks that every element lies in the statistics-independent family.
pub fn check_family(circuit: &Circuit) -> Result<()> {
    segments(circuit).map(|_| ())
}

/// `PA₁,₂(θ)`: `|00⟩ ↦ cosθ|00⟩ + i sinθ|11⟩`, `|11⟩ ↦ cosθ|11⟩ + i sinθ|00⟩` on
/// modes (1, 2); other components untouched.
fn apply_pairing(state: &AnyonState, theta: f64) -> AnyonState {
    let (c, s) = (Complex64::new(theta.cos(), 0.0), Complex64::new(0.0, theta.sin()));
    let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
    for (x, a) in state.iter() {
        let b = x.bits();
        match b & 0b11 {
            0b00 | 0b11 => {
                *out.entry(b).or_default() += a * c;
                *out.entry(b ^ 0b11).or_default() += a * s;
            }
            _ => *out.entry(b).or_default() += a,
        }
    }
    AnyonState::from_map(state.m(), state.phi(), out)
}

/// Runs an in-family circuit without building any generator.
pub fn run_fastpath(state: &AnyonState, circuit: &Circuit) -> Result<AnyonState> {
    circuit.check_state(state)?;
    let mut s = state.clone();
    for seg in segments(circuit)? {
        s = match seg {
            Segment::Linear(u) => u.apply(&s),
            Segment::Pairing(theta) => apply_pairing(&s, theta),
        };
    }
    Ok(s)
}

/// `⟨y|C|x⟩` for an in-family circuit; identical for every φ.
pub fn anyonic_amplitude_via_fastpath(
    circuit: &Circuit,
    x: &OccupationVector,
    y: &OccupationVector,
) -> Result<Complex64> {
    for o in [x, y] {
        if o.m() != circuit.m() {
            return Err(Error::ModeCountMismatch(circuit.m(), o.m()));
        }
    }
    let segs = segments(circuit)?;
    if let [Segment::Linear(u)] = segs.as_slice() {
        return Ok(u.amplitude(x, y).value);
    }
    if segs.is_empty() {
        return Ok(Complex64::new(if x == y { 1.0 } else { 0.0 }, 0.0));
    }
    let out = run_fastpath(&AnyonState::basis_state(*x, circuit.phi())?, circuit)?;
    Ok(out.amplitude(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff};
    use crate::optics::run_circuit;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn occ(s: &str) -> OccupationVector {
        s.parse().unwrap()
    }

    #[test]
    fn sector_enumeration() {
        assert_eq!(sector_masks(4, 2).collect::<Vec<_>>(), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(sector_masks(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(sector_masks(3, 3).collect::<Vec<_>>(), vec![0b111]);
        assert_eq!(sector_masks(2, 3).count(), 0);
        assert_eq!(sector_masks(10, 4).count(), 210);
    }

    #[test]
    fn compiled_elements() {
        let t = 0.3;
        let u = compile_single_particle(&Circuit::new(2, 0.0, vec![GateElement::ps(1, t)]).unwrap()).unwrap();
        assert!(max_abs_diff(u.matrix(), &CMatrix::from_row_slice(2, 2, &[Complex64::from_polar(1.0, t), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])) < 1e-15);
        let u = compile_single_particle(&Circuit::new(3, 0.0, vec![GateElement::fswap(1, 2)]).unwrap()).unwrap();
        assert_eq!(u.matrix()[(1, 0)], c(1.0, 0.0));
        assert_eq!(u.matrix()[(2, 2)], c(1.0, 0.0));
    }

    #[test]
    fn rejects_out_of_family() {
        let c1 = Circuit::new(3, 0.5, vec![GateElement::ps(1, 0.1), GateElement::bs(1, 3, 0.2)]).unwrap();
        match compile_single_particle(&c1) {
            Err(Error::OutOfFamily { index, gate, .. }) => {
                assert_eq!(index, 1);
                assert!(gate.starts_with("BS1,3"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let c2 = Circuit::new(3, 0.5, vec![GateElement::pa(2, 3, 0.2)]).unwrap();
        assert!(matches!(check_family(&c2), Err(Error::OutOfFamily { index: 0, .. })));
        let c3 = Circuit::new(3, 0.5, vec![GateElement::pa(1, 2, 0.2)]).unwrap();
        assert!(check_family(&c3).is_ok());
        assert!(compile_single_particle(&c3).is_err());
        let c4 = Circuit::new(3, 0.5, vec![GateElement::pa(2, 1, 0.2)]).unwrap();
        assert!(check_family(&c4).is_err());
    }

    #[test]
    fn determinant_matches_dense_including_sign() {
        let gates = vec![
            GateElement::bs(1, 2, 0.4),
            GateElement::bs(2, 3, 1.1),
            GateElement::ps(3, 0.7),
            GateElement::fswap(1, 4),
            GateElement::bs(3, 4, -0.6),
            GateElement::bs(1, 2, 0.9),
        ];
        for phi in [0.0, PI / 3.0, PI] {
            let circ = Circuit::new(4, phi, gates.clone()).unwrap();
            for x in OccupationVector::sector(4, 2).unwrap() {
                let dense = run_circuit(&AnyonState::basis_state(x, phi).unwrap(), &circ).unwrap();
                for y in OccupationVector::sector(4, 2).unwrap() {
                    let fast = anyonic_amplitude_via_fastpath(&circ, &x, &y).unwrap();
                    assert!((fast - dense.amplitude(&y)).norm() < 1e-10, "{x}->{y} at {phi}");
                }
            }
        }
    }

    #[test]
    fn pairing_segments_match_dense() {
        let gates = vec![GateElement::bs(2, 3, 0.5), GateElement::pa(1, 2, 0.8), GateElement::bs(1, 2, 0.3), GateElement::pa(1, 2, 0.4)];
        for phi in [0.0, 2.0] {
            let circ = Circuit::new(3, phi, gates.clone()).unwrap();
            let s = AnyonState::basis_state(occ("001"), phi).unwrap();
            let a = run_fastpath(&s, &circ).unwrap();
            let b = run_circuit(&s, &circ).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn worked_example_amplitudes() {
        let t = 0.77;
        let r = FRAC_1_SQRT_2;
        let circ = Circuit::new(4, 1.3, vec![GateElement::bs(1, 2, t)]).unwrap();
        let u = compile_single_particle(&circ).unwrap();
        let s = AnyonState::from_amplitudes(4, 1.3, [(occ("1100"), c(r, 0.0)), (occ("1001"), c(r, 0.0))]).unwrap();
        let out = u.apply(&s);
        assert!((out.amplitude(&occ("1100")) - c(r, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&occ("1001")) - c(r * t.cos(), 0.0)).norm() < 1e-12);
        assert!((out.amplitude(&occ("0101")) - c(0.0, r * t.sin())).norm() < 1e-12);
    }

    #[test]
    fn mismatched_numbers_are_flagged() {
        let u = SingleParticleUnitary::identity(3);
        let a = u.amplitude(&occ("100"), &occ("110"));
        assert!(a.number_mismatch);
        assert_eq!(a.value, c(0.0, 0.0));
        assert_eq!(u.amplitude(&occ("101"), &occ("101")).value, c(1.0, 0.0));
    }

    #[test]
    fn bogoliubov_transpose_agrees() {
        let circ = Circuit::new(3, 0.0, vec![GateElement::bs(1, 2, 0.4), GateElement::ps(2, 0.9), GateElement::bs(2, 3, 0.2)]).unwrap();
        let u = compile_single_particle(&circ).unwrap();
        let b = crate::optics::BogoliubovTransform::ChangeOfBasis(u.to_bogoliubov());
        for x in OccupationVector::sector(3, 2).unwrap() {
            let s = AnyonState::basis_state(x, 0.6).unwrap();
            let lhs = crate::optics::apply_induced_bogoliubov(&s, &b).unwrap();
            assert!(lhs.max_abs_diff(&u.apply(&s)) < 1e-12);
        }
    }
}
