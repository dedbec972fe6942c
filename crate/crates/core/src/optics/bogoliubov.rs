use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ladder_on_basis, AnyonState, ExchangeSign, LadderKind};
use crate::linalg::{expm_i, hermiticity_error, max_abs, unitarity_error, CMatrix};
use crate::operator::{LadderFactor, OperatorExpr};
use crate::transmute::{anyonize, fermionize};

use super::evolve::evolve;

pub const BOGOLIUBOV_TOL: f64 = 1e-10;

/// `f†_i ↦ Σ_j U_ij f†_j + V_ij f_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogoliubovPair {
    u: CMatrix,
    v: CMatrix,
}

impl BogoliubovPair {
    pub fn new(u: CMatrix, v: CMatrix) -> Result<Self> {
        let m = u.nrows();
        if m == 0 || u.ncols() != m || v.nrows() != m || v.ncols() != m {
            return Err(Error::InvalidBogoliubov("U and V must be square of equal size".into()));
        }
        let norm = &u * u.adjoint() + &v * v.adjoint() - CMatrix::identity(m, m);
        let e1 = max_abs(&norm);
        if e1 > BOGOLIUBOV_TOL {
            return Err(Error::InvalidBogoliubov(format!("UU† + VV† deviates from 1 by {e1:e}")));
        }
        let e2 = max_abs(&(&u * v.transpose() + &v * u.transpose()));
        if e2 > BOGOLIUBOV_TOL {
            return Err(Error::InvalidBogoliubov(format!("UVᵀ + VUᵀ deviates from 0 by {e2:e}")));
        }
        Ok(Self { u, v })
    }

    /// A pure change of basis (`V = 0`).
    pub fn change_of_basis(u: CMatrix) -> Result<Self> {
        let m = u.nrows();
        Self::new(u, CMatrix::zeros(m, m))
    }

    pub fn m(&self) -> usize {
        self.u.nrows()
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn is_change_of_basis(&self) -> bool {
        max_abs(&self.v) <= BOGOLIUBOV_TOL
    }
}

/// `H = Σ A_ij f†_i f_j + ½ Σ (B_ij f†_i f†_j + conj(B_ij) f_j f_i)` with `A`
/// Hermitian and `B` antisymmetric; the transformation is `exp(iH)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticGenerator {
    a: CMatrix,
    b: CMatrix,
}

impl QuadraticGenerator {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        let m = a.nrows();
        if m == 0 || a.ncols() != m || b.nrows() != m || b.ncols() != m {
            return Err(Error::InvalidBogoliubov("A and B must be square of equal size".into()));
        }
        let eh = hermiticity_error(&a);
        if eh > BOGOLIUBOV_TOL {
            return Err(Error::InvalidBogoliubov(format!("A is not Hermitian ({eh:e})")));
        }
        let ea = max_abs(&(&b + b.transpose()));
        if ea > BOGOLIUBOV_TOL {
            return Err(Error::InvalidBogoliubov(format!("B is not antisymmetric ({ea:e})")));
        }
        Ok(Self { a, b })
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn b(&self) -> &CMatrix {
        &self.b
    }

    /// `H` as a fermionic operator expression.
    pub fn operator(&self) -> OperatorExpr {
        let m = self.m();
        let mut terms = Vec::new();
        for i in 1..=m {
            for j in 1..=m {
                let a = self.a[(i - 1, j - 1)];
                if a.norm() > 0.0 {
                    terms.push(crate::operator::LadderTerm::new(
                        m,
                        a,
                        vec![LadderFactor::create(i), LadderFactor::annihilate(j)],
                    ));
                }
                let b = self.b[(i - 1, j - 1)];
                if i != j && b.norm() > 0.0 {
                    terms.push(crate::operator::LadderTerm::new(
                        m,
                        b * 0.5,
                        vec![LadderFactor::create(i), LadderFactor::create(j)],
                    ));
                    terms.push(crate::operator::LadderTerm::new(
                        m,
                        b.conj() * 0.5,
                        vec![LadderFactor::annihilate(j), LadderFactor::annihilate(i)],
                    ));
                }
            }
        }
        OperatorExpr::from_terms(m, terms).expect("indices are in range by construction")
    }

    /// The `(U, V)` pair of `exp(iH)`.
    pub fn pair(&self) -> Result<BogoliubovPair> {
        let m = self.m();
        let mut big = CMatrix::zeros(2 * m, 2 * m);
        big.view_mut((0, 0), (m, m)).copy_from(&(-&self.a));
        big.view_mut((0, m), (m, m)).copy_from(&(-&self.b));
        big.view_mut((m, 0), (m, m)).copy_from(&self.b.map(|z| z.conj()));
        big.view_mut((m, m), (m, m)).copy_from(&self.a.map(|z| z.conj()));
        let e = expm_i(&big, 1.0);
        let u = e.view((m, m), (m, m)).into_owned();
        let v = e.view((m, 0), (m, m)).into_owned();
        BogoliubovPair::new(u, v)
    }
}

/// The two accepted presentations of a Bogoliubov transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum BogoliubovTransform {
    ChangeOfBasis(BogoliubovPair),
    Generated(QuadraticGenerator),
}

impl BogoliubovTransform {
    pub fn m(&self) -> usize {
        match self {
            BogoliubovTransform::ChangeOfBasis(p) => p.m(),
            BogoliubovTransform::Generated(g) => g.m(),
        }
    }

    pub fn pair(&self) -> Result<BogoliubovPair> {
        match self {
            BogoliubovTransform::ChangeOfBasis(p) => Ok(p.clone()),
            BogoliubovTransform::Generated(g) => g.pair(),
        }
    }
}

impl TryFrom<BogoliubovPair> for BogoliubovTransform {
    type Error = Error;

    fn try_from(p: BogoliubovPair) -> Result<Self> {
        if p.is_change_of_basis() {
            Ok(BogoliubovTransform::ChangeOfBasis(p))
        } else {
            Err(Error::InvalidBogoliubov(
                "transformations with V ≠ 0 must be given by a quadratic generator".into(),
            ))
        }
    }
}

/// Fermionic action of a change of basis: each `f†_i` becomes `Σ_j U_ij f†_j`.
pub(crate) fn change_of_basis_fermionic(state: &AnyonState, u: &CMatrix) -> AnyonState {
    let m = state.m();
    let mut total: BTreeMap<u64, Complex64> = BTreeMap::new();
    for (occ, amp) in state.iter() {
        let mut cur: BTreeMap<u64, Complex64> = BTreeMap::new();
        cur.insert(0, amp);
        for i in occ.modes().into_iter().rev() {
            let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
            for (&bits, &a) in &cur {
                for j in 1..=m {
                    let w = u[(i - 1, j - 1)];
                    if w.norm() == 0.0 {
                        continue;
                    }
                    if let Some((nb, p)) = ladder_on_basis(bits, j, LadderKind::Create, 0.0, ExchangeSign::Canonical) {
                        *next.entry(nb).or_default() += a * w * p;
                    }
                }
            }
            cur = next;
        }
        for (b, a) in cur {
            *total.entry(b).or_default() += a;
        }
    }
    AnyonState::from_map(m, 0.0, total)
}

/// `J_φ⁻¹ ∘ B ∘ J_φ`: fermionize, transform, read back in the original sector.
pub fn apply_induced_bogoliubov(state: &AnyonState, b: &BogoliubovTransform) -> Result<AnyonState> {
    if b.m() != state.m() {
        return Err(Error::ModeCountMismatch(state.m(), b.m()));
    }
    let f = fermionize(state);
    let out = match b {
        BogoliubovTransform::ChangeOfBasis(p) => {
            if !p.is_change_of_basis() {
                return Err(Error::InvalidBogoliubov(
                    "transformations with V ≠ 0 must be given by a quadratic generator".into(),
                ));
            }
            if unitarity_error(p.u()) > BOGOLIUBOV_TOL {
                return Err(Error::InvalidBogoliubov("U is not unitary".into()));
            }
            change_of_basis_fermionic(&f, p.u())
        }
        BogoliubovTransform::Generated(g) => evolve(&f, &g.operator(), 1.0)?,
    };
    anyonize(&out, state.phi())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;
    use crate::linalg::{c, max_abs_diff};
    use crate::optics::{apply_gate, GateElement};
    use std::f64::consts::PI;

    fn occ(s: &str) -> OccupationVector {
        s.parse().unwrap()
    }

    fn sample_generator() -> QuadraticGenerator {
        let a = CMatrix::from_row_slice(3, 3, &[
            c(0.3, 0.0), c(0.1, 0.4), c(-0.2, 0.1),
            c(0.1, -0.4), c(-0.5, 0.0), c(0.0, 0.3),
            c(-0.2, -0.1), c(0.0, -0.3), c(0.8, 0.0),
        ]);
        let b = CMatrix::from_row_slice(3, 3, &[
            c(0.0, 0.0), c(0.4, 0.2), c(0.0, -0.3),
            c(-0.4, -0.2), c(0.0, 0.0), c(0.25, 0.0),
            c(0.0, 0.3), c(-0.25, 0.0), c(0.0, 0.0),
        ]);
        QuadraticGenerator::new(a, b).unwrap()
    }

    #[test]
    fn identity_is_identity() {
        let s = AnyonState::from_amplitudes(3, 1.1, [(occ("110"), c(0.6, 0.0)), (occ("011"), c(0.0, 0.8))]).unwrap();
        let b = BogoliubovTransform::ChangeOfBasis(BogoliubovPair::change_of_basis(CMatrix::identity(3, 3)).unwrap());
        assert!(apply_induced_bogoliubov(&s, &b).unwrap().max_abs_diff(&s) < 1e-14);
    }

    #[test]
    fn rotation_reproduces_nearest_neighbour_beam_splitter() {
        let t: f64 = 0.7;
        let mut u = CMatrix::identity(3, 3);
        u[(0, 0)] = c(t.cos(), 0.0);
        u[(0, 1)] = c(0.0, t.sin());
        u[(1, 0)] = c(0.0, t.sin());
        u[(1, 1)] = c(t.cos(), 0.0);
        let b = BogoliubovTransform::ChangeOfBasis(BogoliubovPair::change_of_basis(u).unwrap());
        for phi in [0.0, 1.0, PI] {
            for x in ["100", "010", "110", "101", "011"] {
                let s = AnyonState::basis_state(occ(x), phi).unwrap();
                let a = apply_induced_bogoliubov(&s, &b).unwrap();
                let g = apply_gate(&s, &GateElement::bs(1, 2, t)).unwrap();
                assert!(a.max_abs_diff(&g) < 1e-12, "{x} at {phi}");
            }
        }
    }

    #[test]
    fn generator_pair_satisfies_invariants() {
        let p = sample_generator().pair().unwrap();
        assert!(!p.is_change_of_basis());
    }

    #[test]
    fn generator_pair_matches_conjugated_creation() {
        let g = sample_generator();
        let m = g.m();
        let p = g.pair().unwrap();
        let u_full = expm_i(&g.operator().dense_matrix(0.0), 1.0);
        for i in 1..=m {
            let lhs = &u_full * OperatorExpr::create(m, i).unwrap().dense_matrix(0.0) * u_full.adjoint();
            let mut rhs = CMatrix::zeros(1 << m, 1 << m);
            for j in 1..=m {
                rhs += OperatorExpr::create(m, j).unwrap().dense_matrix(0.0) * p.u()[(i - 1, j - 1)];
                rhs += OperatorExpr::annihilate(m, j).unwrap().dense_matrix(0.0) * p.v()[(i - 1, j - 1)];
            }
            assert!(max_abs_diff(&lhs, &rhs) < 1e-12, "mode {i}");
        }
    }

    #[test]
    fn generated_transform_preserves_norm() {
        let s = AnyonState::basis_state(occ("100"), 0.9).unwrap();
        let out = apply_induced_bogoliubov(&s, &BogoliubovTransform::Generated(sample_generator())).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(out.particle_number().is_none());
    }

    #[test]
    fn rejects_invalid_pairs() {
        let bad = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(BogoliubovPair::change_of_basis(bad).is_err());
        let p = sample_generator().pair().unwrap();
        assert!(BogoliubovTransform::try_from(p).is_err());
    }
}
