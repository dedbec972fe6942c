//! Second-quantized operators as sums of ladder monomials.
//!
//! A [`LadderTerm`] is `c · F · e^{i Σ_k c_k n_k}`: a scalar, an ordered
//! product of ladder factors and a trailing number-diagonal phase string. The
//! factors carry no statistics of their own; they are interpreted in whatever
//! φ-sector the operator is applied in.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    check_mode, check_mode_count, ladder_on_basis, ExchangeSign, LadderKind,
};

/// String weights closer than this (mod 2π) are treated as equal.
const STRING_TOL: f64 = 1e-12;
/// Coefficients below this magnitude are dropped by [`OperatorExpr::simplify`].
const COEFF_TOL: f64 = 1e-14;

fn wrap_weight(w: f64) -> f64 {
    let r = w.rem_euclid(TAU);
    if TAU - r < STRING_TOL || r < STRING_TOL {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderFactor {
    pub mode: usize,
    pub kind: LadderKind,
}

impl LadderFactor {
    pub fn create(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Create,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            kind: LadderKind::Annihilate,
        }
    }

    /// Sign with which the factor shifts the occupation of its mode.
    fn shift(self) -> f64 {
        match self.kind {
            LadderKind::Create => 1.0,
            LadderKind::Annihilate => -1.0,
        }
    }
}

impl fmt::Display for LadderFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LadderKind::Create => write!(f, "a†{}", self.mode),
            LadderKind::Annihilate => write!(f, "a{}", self.mode),
        }
    }
}

/// `coefficient · factors[0] ⋯ factors[n−1] · exp(i Σ_k string[k] n_{k+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    pub coefficient: Complex64,
    pub factors: Vec<LadderFactor>,
    pub number_string: Vec<f64>,
}

impl LadderTerm {
    pub fn scalar(m: usize, c: Complex64) -> Self {
        Self {
            coefficient: c,
            factors: Vec::new(),
            number_string: vec![0.0; m],
        }
    }

    pub fn new(m: usize, coefficient: Complex64, factors: Vec<LadderFactor>) -> Self {
        Self {
            coefficient,
            factors,
            number_string: vec![0.0; m],
        }
    }

    pub fn m(&self) -> usize {
        self.number_string.len()
    }

    /// Phase acquired when `exp(i C·n)` is moved rightwards through `factors`:
    /// `e^{iC·n} F = F e^{iC·n} · phase`.
    pub(crate) fn string_passing_phase(string: &[f64], factors: &[LadderFactor]) -> Complex64 {
        let angle: f64 = factors
            .iter()
            .map(|f| f.shift() * string[f.mode - 1])
            .sum();
        Complex64::from_polar(1.0, angle)
    }

    pub fn product(&self, rhs: &Self) -> Self {
        let phase = Self::string_passing_phase(&self.number_string, &rhs.factors);
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&rhs.factors);
        Self {
            coefficient: self.coefficient * rhs.coefficient * phase,
            factors,
            number_string: self
                .number_string
                .iter()
                .zip(&rhs.number_string)
                .map(|(a, b)| wrap_weight(a + b))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let factors: Vec<LadderFactor> = self
            .factors
            .iter()
            .rev()
            .map(|f| LadderFactor {
                mode: f.mode,
                kind: f.kind.dagger(),
            })
            .collect();
        let neg: Vec<f64> = self.number_string.iter().map(|w| wrap_weight(-w)).collect();
        let phase = Self::string_passing_phase(&neg, &factors);
        Self {
            coefficient: self.coefficient.conj() * phase,
            factors,
            number_string: neg,
        }
    }

    /// Action on one basis mask; at most one output component.
    pub fn act_on_basis(&self, bits: u64, phi: f64, sign: ExchangeSign) -> Option<(u64, Complex64)> {
        let angle: f64 = self
            .number_string
            .iter()
            .enumerate()
            .filter(|(k, _)| bits & (1u64 << k) != 0)
            .map(|(_, w)| w)
            .sum();
        let mut amp = self.coefficient * Complex64::from_polar(1.0, angle);
        let mut b = bits;
        for f in self.factors.iter().rev() {
            let (nb, p) = ladder_on_basis(b, f.mode, f.kind, phi, sign)?;
            b = nb;
            amp *= p;
        }
        Some((b, amp))
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.factors == other.factors
            && self
                .number_string
                .iter()
                .zip(&other.number_string)
                .all(|(a, b)| wrap_weight(a - b) == 0.0)
    }
}

impl fmt::Display for LadderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.6}{:+.6}i)", self.coefficient.re, self.coefficient.im)?;
        for x in &self.factors {
            write!(f, " {x}")?;
        }
        let nz: Vec<String> = self
            .number_string
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(k, w)| format!("{w:.6}·n{}", k + 1))
            .collect();
        if !nz.is_empty() {
            write!(f, " exp(i[{}])", nz.join(" + "))?;
        }
        Ok(())
    }
}

/// A sum of [`LadderTerm`]s on `m` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorExpr {
    m: usize,
    terms: Vec<LadderTerm>,
}

impl OperatorExpr {
    pub fn zero(m: usize) -> Result<Self> {
        check_mode_count(m)?;
        Ok(Self { m, terms: Vec::new() })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Self::scalar(m, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(m: usize, c: Complex64) -> Result<Self> {
        check_mode_count(m)?;
        Ok(Self {
            m,
            terms: vec![LadderTerm::scalar(m, c)],
        })
    }

    /// Single monomial from a factor list, validated against `m`.
    pub fn monomial(m: usize, coefficient: Complex64, factors: Vec<LadderFactor>) -> Result<Self> {
        check_mode_count(m)?;
        for f in &factors {
            check_mode(f.mode, m)?;
        }
        Ok(Self {
            m,
            terms: vec![LadderTerm::new(m, coefficient, factors)],
        })
    }

    pub fn create(m: usize, i: usize) -> Result<Self> {
        Self::monomial(m, Complex64::new(1.0, 0.0), vec![LadderFactor::create(i)])
    }

    pub fn annihilate(m: usize, i: usize) -> Result<Self> {
        Self::monomial(m, Complex64::new(1.0, 0.0), vec![LadderFactor::annihilate(i)])
    }

    /// `n_i = a†_i a_i`.
    pub fn number(m: usize, i: usize) -> Result<Self> {
        Self::monomial(
            m,
            Complex64::new(1.0, 0.0),
            vec![LadderFactor::create(i), LadderFactor::annihilate(i)],
        )
    }

    /// `a†_i a_j`.
    pub fn hopping(m: usize, i: usize, j: usize) -> Result<Self> {
        Self::monomial(
            m,
            Complex64::new(1.0, 0.0),
            vec![LadderFactor::create(i), LadderFactor::annihilate(j)],
        )
    }

    /// The diagonal operator `exp(i Σ_k weights[k] n_{k+1})`.
    pub fn number_string(weights: Vec<f64>) -> Result<Self> {
        let m = weights.len();
        check_mode_count(m)?;
        Ok(Self {
            m,
            terms: vec![LadderTerm {
                coefficient: Complex64::new(1.0, 0.0),
                factors: Vec::new(),
                number_string: weights.into_iter().map(wrap_weight).collect(),
            }],
        })
    }

    pub fn from_terms(m: usize, terms: Vec<LadderTerm>) -> Result<Self> {
        check_mode_count(m)?;
        for t in &terms {
            if t.m() != m {
                return Err(Error::ModeCountMismatch(m, t.m()));
            }
            for f in &t.factors {
                check_mode(f.mode, m)?;
            }
        }
        Ok(Self { m, terms })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[LadderTerm] {
        &self.terms
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            m: self.m,
            terms: self
                .terms
                .iter()
                .map(|t| LadderTerm {
                    coefficient: t.coefficient * c,
                    ..t.clone()
                })
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m,
            terms: self.terms.iter().map(LadderTerm::adjoint).collect(),
        }
    }

    /// Merges terms with identical factors and strings and drops zeros.
    pub fn simplify(&self) -> Self {
        let mut out: Vec<LadderTerm> = Vec::new();
        for t in &self.terms {
            match out.iter_mut().find(|o| o.same_shape(t)) {
                Some(o) => o.coefficient += t.coefficient,
                None => out.push(t.clone()),
            }
        }
        out.retain(|t| t.coefficient.norm() >= COEFF_TOL);
        Self { m: self.m, terms: out }
    }

    fn assert_same_m(&self, other: &Self) {
        assert_eq!(
            self.m, other.m,
            "operator expressions on different mode counts cannot be combined"
        );
    }

    /// All nonzero outputs of the operator on one basis mask, merged.
    pub fn act_on_basis(&self, bits: u64, phi: f64, sign: ExchangeSign) -> Vec<(u64, Complex64)> {
        let mut out: Vec<(u64, Complex64)> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some((b, c)) = t.act_on_basis(bits, phi, sign) {
                match out.iter_mut().find(|(k, _)| *k == b) {
                    Some((_, acc)) => *acc += c,
                    None => out.push((b, c)),
                }
            }
        }
        out
    }

    /// Dense `2^m × 2^m` matrix in the φ-sector, indexed by occupation mask.
    pub fn dense_matrix(&self, phi: f64) -> DMatrix<Complex64> {
        assert!(self.m <= 12, "dense operator matrices are limited to 12 modes");
        let dim = 1usize << self.m;
        let mut mat = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            for (row, c) in self.act_on_basis(col as u64, phi, ExchangeSign::Canonical) {
                mat[(row as usize, col)] += c;
            }
        }
        mat
    }

    /// True when some term has a ladder factor on `mode`.
    pub fn touches_mode(&self, mode: usize) -> bool {
        self.terms
            .iter()
            .any(|t| t.factors.iter().any(|f| f.mode == mode))
    }

    /// Net change in particle number of every term, if they all agree.
    pub fn particle_shift(&self) -> Option<i32> {
        let mut it = self
            .terms
            .iter()
            .map(|t| t.factors.iter().map(|f| f.shift() as i32).sum::<i32>());
        let first = it.next()?;
        it.all(|s| s == first).then_some(first)
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;

    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.assert_same_m(rhs);
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OperatorExpr { m: self.m, terms }
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;

    fn add(self, rhs: OperatorExpr) -> OperatorExpr {
        &self + &rhs
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;

    fn neg(self) -> OperatorExpr {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;

    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        self + &(-rhs)
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;

    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        &self - &rhs
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        self.assert_same_m(rhs);
        let terms = self
            .terms
            .iter()
            .flat_map(|a| rhs.terms.iter().map(move |b| a.product(b)))
            .collect();
        OperatorExpr { m: self.m, terms }
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        &self * &rhs
    }
}

impl Mul<Complex64> for &OperatorExpr {
    type Output = OperatorExpr;

    fn mul(self, rhs: Complex64) -> OperatorExpr {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{AnyonState, OccupationVector};
    use std::f64::consts::PI;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn dense_close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() < tol)
    }

    #[test]
    fn identity_leaves_state_alone() {
        let s = AnyonState::from_amplitudes(
            3,
            0.7,
            [
                ("101".parse().unwrap(), Complex64::new(0.6, 0.0)),
                ("010".parse().unwrap(), Complex64::new(0.0, 0.8)),
            ],
        )
        .unwrap();
        let id = OperatorExpr::identity(3).unwrap();
        assert_eq!(s.apply_operator_expr(&id).unwrap(), s);
    }

    #[test]
    fn hopping_on_empty_left() {
        for phi in [0.0, 1.1, PI] {
            let s = AnyonState::basis_state("0100".parse().unwrap(), phi).unwrap();
            let out = s.apply_operator_expr(&OperatorExpr::hopping(4, 1, 2).unwrap()).unwrap();
            let target: OccupationVector = "1000".parse().unwrap();
            assert_eq!(out.amplitude(&target), one());
            assert_eq!(out.support_size(), 1);
        }
    }

    #[test]
    fn product_matches_matrix_product() {
        let m = 3;
        let a = &OperatorExpr::hopping(m, 1, 3).unwrap() * &OperatorExpr::number_string(vec![0.3, -1.2, 0.9]).unwrap();
        let b = &OperatorExpr::number_string(vec![1.0, 0.5, 2.0]).unwrap() * &OperatorExpr::create(m, 2).unwrap();
        for phi in [0.0, 0.9, PI] {
            let ab = (&a * &b).dense_matrix(phi);
            let expect = a.dense_matrix(phi) * b.dense_matrix(phi);
            assert!(dense_close(&ab, &expect, 1e-12));
        }
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let m = 3;
        let op = &(&OperatorExpr::number_string(vec![0.4, 2.2, -0.7]).unwrap() * &OperatorExpr::hopping(m, 3, 1).unwrap())
            * &OperatorExpr::number_string(vec![1.5, 0.0, 0.1]).unwrap().scale(Complex64::new(0.2, 0.9));
        for phi in [0.0, 2.3] {
            let lhs = op.adjoint().dense_matrix(phi);
            let rhs = op.dense_matrix(phi).adjoint();
            assert!(dense_close(&lhs, &rhs, 1e-12));
        }
    }

    #[test]
    fn simplify_merges_like_terms() {
        let n = OperatorExpr::number(2, 1).unwrap();
        let s = (&n + &n).simplify();
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].coefficient, Complex64::new(2.0, 0.0));
        assert!((&n - &n).simplify().terms().is_empty());
    }

    #[test]
    fn index_validation() {
        assert!(OperatorExpr::create(3, 4).is_err());
        assert!(OperatorExpr::hopping(3, 0, 1).is_err());
    }
}
