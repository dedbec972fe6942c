//! Fractional Jordan-Wigner maps between statistics sectors.
//!
//! `J_{φ₁→φ₂}` sends `a_{φ₁,i}` to `a_{φ₂,i} · exp(−i(φ₂−φ₁) Σ_{k<i} n_k)` and
//! `a†_{φ₁,i}` to its adjoint `a†_{φ₂,i} · exp(+i(φ₂−φ₁) Σ_{k<i} n_k)`. With this
//! sign an operator and its image have the same matrix in the Fock basis, so
//! states carry over between sectors with unchanged amplitude tables.

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{normalize_phi, AnyonState, LadderKind};
use crate::operator::{LadderFactor, LadderTerm, OperatorExpr};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmutationMap {
    source: f64,
    target: f64,
}

impl TransmutationMap {
    pub fn new(source: f64, target: f64) -> Result<Self> {
        Ok(Self {
            source: normalize_phi(source)?,
            target: normalize_phi(target)?,
        })
    }

    /// `J_φ`: from the φ-sector to fermions.
    pub fn to_fermions(phi: f64) -> Result<Self> {
        Self::new(phi, 0.0)
    }

    /// `J_φ⁻¹`: from fermions to the φ-sector.
    pub fn from_fermions(phi: f64) -> Result<Self> {
        Self::new(0.0, phi)
    }

    pub fn source(&self) -> f64 {
        self.source
    }

    pub fn target(&self) -> f64 {
        self.target
    }

    pub fn inverse(&self) -> Self {
        Self {
            source: self.target,
            target: self.source,
        }
    }

    fn delta(&self) -> f64 {
        self.target - self.source
    }

    /// Image of a single ladder factor as a one-term expression.
    fn factor_image(&self, m: usize, f: LadderFactor) -> LadderTerm {
        let w = match f.kind {
            LadderKind::Annihilate => -self.delta(),
            LadderKind::Create => self.delta(),
        };
        let mut string = vec![0.0; m];
        for s in string.iter_mut().take(f.mode - 1) {
            *s = w;
        }
        LadderTerm {
            coefficient: Complex64::new(1.0, 0.0),
            factors: vec![f],
            number_string: string,
        }
    }

    fn term_image(&self, t: &LadderTerm) -> LadderTerm {
        let m = t.m();
        let head = LadderTerm::scalar(m, t.coefficient);
        let body = t
            .factors
            .iter()
            .fold(head, |acc, &f| acc.product(&self.factor_image(m, f)));
        let tail = LadderTerm {
            coefficient: Complex64::new(1.0, 0.0),
            factors: Vec::new(),
            number_string: t.number_string.clone(),
        };
        body.product(&tail)
    }

    /// Applies the map to an operator written in the source sector.
    pub fn apply(&self, op: &OperatorExpr) -> OperatorExpr {
        let terms = op.terms().iter().map(|t| self.term_image(t)).collect();
        OperatorExpr::from_terms(op.m(), terms)
            .expect("transmutation preserves mode count and indices")
    }

    /// Reads a source-sector state in the target sector.
    pub fn apply_state(&self, state: &AnyonState) -> Result<AnyonState> {
        state.with_phi(self.target)
    }
}

pub fn transmute_operator(op: &OperatorExpr, map: &TransmutationMap) -> OperatorExpr {
    map.apply(op)
}

/// Retags the amplitude table with a new statistical parameter.
pub fn transmute_state(state: &AnyonState, phi_target: f64) -> Result<AnyonState> {
    state.with_phi(phi_target)
}

pub fn fermionize(state: &AnyonState) -> AnyonState {
    state.with_phi(0.0).expect("0 is a valid statistical parameter")
}

pub fn anyonize(state: &AnyonState, phi: f64) -> Result<AnyonState> {
    state.with_phi(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::OccupationVector;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> bool {
        (a - b).iter().all(|z| z.norm() < 1e-12)
    }

    fn sample_op(m: usize) -> OperatorExpr {
        let a = OperatorExpr::hopping(m, 3, 1).unwrap();
        let b = &OperatorExpr::create(m, 4).unwrap() * &OperatorExpr::create(m, 2).unwrap();
        let c = &OperatorExpr::annihilate(m, 2).unwrap() * &OperatorExpr::number(m, 4).unwrap();
        &(&a + &b.scale(Complex64::new(0.3, -0.2))) + &c
    }

    #[test]
    fn matrix_elements_are_sector_independent() {
        let op = sample_op(4);
        for (p1, p2) in [(0.0, 1.0), (0.4, PI), (PI, 5.5), (2.0, 0.0)] {
            let j = TransmutationMap::new(p1, p2).unwrap();
            assert!(close(&j.apply(&op).dense_matrix(p2), &op.dense_matrix(p1)));
        }
    }

    #[test]
    fn worked_out_of_order_string() {
        // f†₅ f†₃|0⟩ maps to e^{iφ} a†₅ a†₃|0⟩
        let phi = 0.83;
        let m = 5;
        let f = &OperatorExpr::create(m, 5).unwrap() * &OperatorExpr::create(m, 3).unwrap();
        let image = TransmutationMap::from_fermions(phi).unwrap().apply(&f);
        let vac = AnyonState::vacuum(m, phi).unwrap();
        let lhs = vac.apply_operator_expr(&image).unwrap();
        let rhs = vac
            .apply_operator_expr(&f)
            .unwrap()
            .scale(Complex64::from_polar(1.0, phi));
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn number_operator_is_invariant() {
        let j = TransmutationMap::new(0.3, 2.9).unwrap();
        for i in 1..=4 {
            let n = OperatorExpr::number(4, i).unwrap();
            let img = j.apply(&n).simplify();
            assert_eq!(img.terms().len(), 1);
            assert!(img.terms()[0].number_string.iter().all(|w| *w == 0.0));
            assert!((img.terms()[0].coefficient - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn nearest_neighbour_hopping_is_invariant() {
        let m = 4;
        let j = TransmutationMap::new(0.0, 1.7).unwrap();
        for i in 1..m {
            let h = &OperatorExpr::hopping(m, i, i + 1).unwrap() + &OperatorExpr::hopping(m, i + 1, i).unwrap();
            assert!(close(&j.apply(&h).dense_matrix(0.3), &h.dense_matrix(0.3)));
        }
        // distant hopping is not
        let h = &OperatorExpr::hopping(m, 1, 3).unwrap() + &OperatorExpr::hopping(m, 3, 1).unwrap();
        assert!(!close(&j.apply(&h).dense_matrix(0.3), &h.dense_matrix(0.3)));
    }

    #[test]
    fn composition_and_inverse() {
        let op = sample_op(4);
        let (p1, p2, p3) = (0.2, 2.5, 4.4);
        let j12 = TransmutationMap::new(p1, p2).unwrap();
        let j23 = TransmutationMap::new(p2, p3).unwrap();
        let j13 = TransmutationMap::new(p1, p3).unwrap();
        assert!(close(
            &j23.apply(&j12.apply(&op)).dense_matrix(p3),
            &j13.apply(&op).dense_matrix(p3)
        ));
        assert!(close(&j12.inverse().apply(&j12.apply(&op)).dense_matrix(p1), &op.dense_matrix(p1)));
    }

    #[test]
    fn star_compatibility() {
        let op = sample_op(4);
        let j = TransmutationMap::new(1.0, 3.0).unwrap();
        assert!(close(
            &j.apply(&op.adjoint()).dense_matrix(3.0),
            &j.apply(&op).adjoint().dense_matrix(3.0)
        ));
    }

    #[test]
    fn state_round_trip() {
        let occ: OccupationVector = "1010".parse().unwrap();
        let s = AnyonState::basis_state(occ, 1.2).unwrap();
        let f = fermionize(&s);
        assert_eq!(f.phi(), 0.0);
        assert_eq!(f.amplitude(&occ), Complex64::new(1.0, 0.0));
        assert_eq!(anyonize(&f, 1.2).unwrap(), s);
    }
}
