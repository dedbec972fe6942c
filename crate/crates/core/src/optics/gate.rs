use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{check_mode, normalize_phi, same_phi, AnyonState};
use crate::operator::OperatorExpr;
use crate::transmute::TransmutationMap;

/// An optical element. Every element is `exp(i·angle·G)` with `G` Hermitian.
///
/// | element | generator `G` | angle |
/// |---|---|---|
/// | `PS(i, θ)` | `n_i` | `θ` |
/// | `BS(i, j, θ)` | `a†_i a_j + a†_j a_i` | `θ` |
/// | `PA(i, j, θ)` | `a†_i a†_j + a_j a_i` | `θ` |
/// | `FSWAP(i, j)` | image of `n_i + n_j − f†_i f_j − f†_j f_i` | `π/2` |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GateElement {
    #[serde(rename = "PS")]
    PhaseShift { i: usize, theta: f64 },
    #[serde(rename = "BS")]
    BeamSplitter { i: usize, j: usize, theta: f64 },
    #[serde(rename = "PA")]
    ParametricAmplifier { i: usize, j: usize, theta: f64 },
    #[serde(rename = "FSWAP")]
    FSwap { i: usize, j: usize },
}

impl GateElement {
    pub fn ps(i: usize, theta: f64) -> Self {
        GateElement::PhaseShift { i, theta }
    }

    pub fn bs(i: usize, j: usize, theta: f64) -> Self {
        GateElement::BeamSplitter { i, j, theta }
    }

    pub fn pa(i: usize, j: usize, theta: f64) -> Self {
        GateElement::ParametricAmplifier { i, j, theta }
    }

    pub fn fswap(i: usize, j: usize) -> Self {
        GateElement::FSwap { i, j }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            GateElement::PhaseShift { i, .. } => vec![i],
            GateElement::BeamSplitter { i, j, .. }
            | GateElement::ParametricAmplifier { i, j, .. }
            | GateElement::FSwap { i, j } => vec![i, j],
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        let modes = self.modes();
        for &k in &modes {
            check_mode(k, m)?;
        }
        if modes.len() == 2 && modes[0] == modes[1] {
            return Err(Error::RepeatedMode(modes[0]));
        }
        Ok(())
    }

    pub fn conserves_number(&self) -> bool {
        !matches!(self, GateElement::ParametricAmplifier { .. })
    }

    pub fn angle(&self) -> f64 {
        match *self {
            GateElement::PhaseShift { theta, .. }
            | GateElement::BeamSplitter { theta, .. }
            | GateElement::ParametricAmplifier { theta, .. } => theta,
            GateElement::FSwap { .. } => FRAC_PI_2,
        }
    }

    /// The element with its angle negated (the inverse; fSWAP is self-inverse).
    pub fn inverse(&self) -> Self {
        match *self {
            GateElement::PhaseShift { i, theta } => GateElement::ps(i, -theta),
            GateElement::BeamSplitter { i, j, theta } => GateElement::bs(i, j, -theta),
            GateElement::ParametricAmplifier { i, j, theta } => GateElement::pa(i, j, -theta),
            g @ GateElement::FSwap { .. } => g,
        }
    }

    /// Hermitian generator `G` in the φ-sector, so that the element is
    /// `exp(i·angle·G)`.
    pub fn generator(&self, m: usize, phi: f64) -> Result<OperatorExpr> {
        self.validate(m)?;
        Ok(match *self {
            GateElement::PhaseShift { i, .. } => OperatorExpr::number(m, i)?,
            GateElement::BeamSplitter { i, j, .. } => {
                &OperatorExpr::hopping(m, i, j)? + &OperatorExpr::hopping(m, j, i)?
            }
            GateElement::ParametricAmplifier { i, j, .. } => {
                let up = &OperatorExpr::create(m, i)? * &OperatorExpr::create(m, j)?;
                &up + &up.adjoint()
            }
            GateElement::FSwap { i, j } => {
                let hop = &OperatorExpr::hopping(m, i, j)? + &OperatorExpr::hopping(m, j, i)?;
                let g = &(&OperatorExpr::number(m, i)? + &OperatorExpr::number(m, j)?) - &hop;
                TransmutationMap::from_fermions(phi)?.apply(&g)
            }
        })
    }

    /// `fSWAP` in closed form, `1 − n_i − n_j + f†_i f_j + f†_j f_i`, carried
    /// into the φ-sector.
    pub fn fswap_closed_form(m: usize, i: usize, j: usize, phi: f64) -> Result<OperatorExpr> {
        GateElement::fswap(i, j).validate(m)?;
        let hop = &OperatorExpr::hopping(m, i, j)? + &OperatorExpr::hopping(m, j, i)?;
        let num = &OperatorExpr::number(m, i)? + &OperatorExpr::number(m, j)?;
        let f = &(&OperatorExpr::identity(m)? - &num) + &hop;
        Ok(TransmutationMap::from_fermions(phi)?.apply(&f))
    }
}

impl fmt::Display for GateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateElement::PhaseShift { i, theta } => write!(f, "PS{i}({theta})"),
            GateElement::BeamSplitter { i, j, theta } => write!(f, "BS{i},{j}({theta})"),
            GateElement::ParametricAmplifier { i, j, theta } => write!(f, "PA{i},{j}({theta})"),
            GateElement::FSwap { i, j } => write!(f, "FSWAP{i},{j}"),
        }
    }
}

/// An ordered gate sequence on `m` modes in the φ-sector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Circuit {
    m: usize,
    phi: f64,
    gates: Vec<GateElement>,
}

#[derive(Deserialize)]
struct CircuitWire {
    m: usize,
    phi: f64,
    #[serde(default)]
    gates: Vec<GateElement>,
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = CircuitWire::deserialize(d)?;
        Circuit::new(w.m, w.phi, w.gates).map_err(serde::de::Error::custom)
    }
}

impl Circuit {
    pub fn new(m: usize, phi: f64, gates: Vec<GateElement>) -> Result<Self> {
        crate::fock::check_mode_count(m)?;
        for g in &gates {
            g.validate(m)?;
        }
        Ok(Self {
            m,
            phi: normalize_phi(phi)?,
            gates,
        })
    }

    pub fn empty(m: usize, phi: f64) -> Result<Self> {
        Self::new(m, phi, Vec::new())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn gates(&self) -> &[GateElement] {
        &self.gates
    }

    pub fn push(&mut self, g: GateElement) -> Result<()> {
        g.validate(self.m)?;
        self.gates.push(g);
        Ok(())
    }

    /// The same gates read in another statistics sector.
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.m, phi, self.gates.clone())
    }

    /// Reversed sequence of inverted elements.
    pub fn inverse(&self) -> Self {
        Self {
            m: self.m,
            phi: self.phi,
            gates: self.gates.iter().rev().map(GateElement::inverse).collect(),
        }
    }

    pub fn conserves_number(&self) -> bool {
        self.gates.iter().all(GateElement::conserves_number)
    }

    pub(crate) fn check_state(&self, state: &AnyonState) -> Result<()> {
        if state.m() != self.m {
            return Err(Error::ModeCountMismatch(self.m, state.m()));
        }
        if !same_phi(state.phi(), self.phi) {
            return Err(Error::PhiMismatch(self.phi, state.phi()));
        }
        Ok(())
    }
}
