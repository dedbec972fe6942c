//! Fock-space states of `m`-mode fermionic anyons.
//!
//! A basis state `|x⟩` is the state obtained by applying creation operators in
//! strictly increasing mode order to the vacuum,
//! `|x⟩ = a†_{i₁} ⋯ a†_{i_N} |0⟩` with `i₁ < ⋯ < i_N`. Creating a particle in
//! mode `i` therefore has to be reordered past every occupied mode `k < i`,
//! and each such exchange contributes the factor `−e^{−iφ}`:
//!
//! ```text
//! a†_i |x⟩ = (−e^{−iφ})^{n_<(x, i)} |x + e_i⟩,   n_<(x, i) = Σ_{k<i} x_k
//! ```
//!
//! This is the unique choice of exponent sign for which the deformed exchange
//! relations `a_i a_j† + e^{−iφε_ij} a_j† a_i = δ_ij` and
//! `a_i a_j + e^{iφε_ij} a_j a_i = 0` (with `ε_ij = sign(j − i)`) hold on the
//! whole Fock space. [`ExchangeSign::Flipped`] keeps the opposite choice around
//! so that convention audits can show it failing.
//!
//! Modes are numbered `1..=m` everywhere in the public API.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::OperatorExpr;

/// Largest supported mode count (occupations are stored in a `u64`).
pub const MAX_MODES: usize = 64;
/// Absolute tolerance on `| ‖ψ‖² − 1 |` for a state to count as normalized.
pub const NORM_TOL: f64 = 1e-10;
/// Amplitudes below this magnitude are dropped after every operator application.
pub const PRUNE_TOL: f64 = 1e-14;
/// Two statistical parameters closer than this (mod 2π) are the same algebra.
pub const PHI_TOL: f64 = 1e-12;

/// Reduces a statistical parameter to `[0, 2π)`.
///
/// `φ` and `φ + 2πk` define the same algebra, so grids that include `2π` are
/// accepted and folded back onto `0`.
pub fn normalize_phi(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::NonFinitePhi(phi));
    }
    let r = phi.rem_euclid(TAU);
    Ok(if TAU - r < PHI_TOL { 0.0 } else { r })
}

/// True when two statistical parameters describe the same algebra.
pub fn same_phi(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < PHI_TOL || TAU - d < PHI_TOL
}

pub(crate) fn check_mode(mode: usize, m: usize) -> Result<()> {
    if mode == 0 || mode > m {
        Err(Error::ModeOutOfRange { mode, m })
    } else {
        Ok(())
    }
}

pub(crate) fn check_mode_count(m: usize) -> Result<()> {
    if m == 0 {
        Err(Error::ZeroModes)
    } else if m > MAX_MODES {
        Err(Error::TooManyModes(m))
    } else {
        Ok(())
    }
}

#[inline]
pub(crate) fn mode_mask(mode: usize) -> u64 {
    1u64 << (mode - 1)
}

/// Number of occupied modes strictly to the left of `mode`.
#[inline]
pub(crate) fn occupied_below(bits: u64, mode: usize) -> i32 {
    (bits & (mode_mask(mode) - 1)).count_ones() as i32
}

/// Occupation numbers of `m` modes, indexing the Fock basis.
///
/// Bit `k − 1` of the mask holds the occupation of mode `k`. The textual form
/// lists modes left to right, so `"1010"` has modes 1 and 3 occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    m: usize,
    bits: u64,
}

impl OccupationVector {
    pub fn new(m: usize, bits: u64) -> Result<Self> {
        check_mode_count(m)?;
        if m < 64 && bits >> m != 0 {
            return Err(Error::InvalidOccupation(format!(
                "mask {bits:#b} has bits beyond {m} modes"
            )));
        }
        Ok(Self { m, bits })
    }

    pub fn empty(m: usize) -> Result<Self> {
        Self::new(m, 0)
    }

    /// Builds the occupation vector with the given (1-based) modes occupied.
    pub fn from_modes(m: usize, modes: &[usize]) -> Result<Self> {
        check_mode_count(m)?;
        let mut bits = 0u64;
        for &k in modes {
            check_mode(k, m)?;
            if bits & mode_mask(k) != 0 {
                return Err(Error::RepeatedMode(k));
            }
            bits |= mode_mask(k);
        }
        Ok(Self { m, bits })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_occupied(&self, mode: usize) -> bool {
        mode >= 1 && mode <= self.m && self.bits & mode_mask(mode) != 0
    }

    pub fn particle_number(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Occupied modes in increasing order.
    pub fn modes(&self) -> Vec<usize> {
        (1..=self.m).filter(|&k| self.is_occupied(k)).collect()
    }

    /// All occupation vectors of `m` modes holding exactly `n` particles, in
    /// increasing mask order.
    pub fn sector(m: usize, n: usize) -> Result<Vec<Self>> {
        check_mode_count(m)?;
        if m > 30 {
            return Err(Error::TooManyModes(m));
        }
        Ok((0u64..1u64 << m)
            .filter(|b| b.count_ones() as usize == n)
            .map(|bits| Self { m, bits })
            .collect())
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..=self.m {
            f.write_str(if self.is_occupied(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for OccupationVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = s.len();
        check_mode_count(m)?;
        let mut bits = 0u64;
        for (k, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1u64 << k,
                other => {
                    return Err(Error::InvalidOccupation(format!(
                        "unexpected character '{other}' in \"{s}\""
                    )))
                }
            }
        }
        Ok(Self { m, bits })
    }
}

/// Which exponent sign the reordering phase uses.
///
/// Only [`ExchangeSign::Canonical`] satisfies the exchange relations; the
/// flipped variant exists for convention audits and mutation checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExchangeSign {
    /// `σ = (−e^{−iφ})^{n_<}` for creation.
    #[default]
    Canonical,
    /// `σ = (−e^{+iφ})^{n_<}` for creation.
    Flipped,
}

impl ExchangeSign {
    /// Reordering phase picked up by `a†_i` past `n_less` occupied modes.
    pub fn creation_phase(self, phi: f64, n_less: i32) -> Complex64 {
        let s = match self {
            ExchangeSign::Canonical => -1.0,
            ExchangeSign::Flipped => 1.0,
        };
        let sign = if n_less % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::from_polar(sign, s * phi * n_less as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderKind {
    Create,
    Annihilate,
}

impl LadderKind {
    pub fn dagger(self) -> Self {
        match self {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        }
    }
}

/// Applies one ladder operator to a basis mask. `None` when it annihilates.
#[inline]
pub(crate) fn ladder_on_basis(
    bits: u64,
    mode: usize,
    kind: LadderKind,
    phi: f64,
    sign: ExchangeSign,
) -> Option<(u64, Complex64)> {
    let mask = mode_mask(mode);
    let occupied = bits & mask != 0;
    let n_less = occupied_below(bits, mode);
    match kind {
        LadderKind::Create if !occupied => Some((bits | mask, sign.creation_phase(phi, n_less))),
        LadderKind::Annihilate if occupied => {
            Some((bits ^ mask, sign.creation_phase(phi, n_less).conj()))
        }
        _ => None,
    }
}

/// A pure state of `m` fermionic-anyon modes with statistical parameter `φ`.
///
/// Amplitudes are stored sparsely, keyed by occupation mask. States are never
/// renormalized implicitly; see [`AnyonState::normalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnyonState {
    m: usize,
    phi: f64,
    amplitudes: BTreeMap<u64, Complex64>,
}

impl AnyonState {
    /// The vacuum `|0…0⟩`.
    pub fn vacuum(m: usize, phi: f64) -> Result<Self> {
        check_mode_count(m)?;
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(0, Complex64::new(1.0, 0.0));
        Ok(Self {
            m,
            phi: normalize_phi(phi)?,
            amplitudes,
        })
    }

    /// The zero vector, e.g. the image of an annihilator on the vacuum.
    pub fn zero(m: usize, phi: f64) -> Result<Self> {
        check_mode_count(m)?;
        Ok(Self {
            m,
            phi: normalize_phi(phi)?,
            amplitudes: BTreeMap::new(),
        })
    }

    /// The basis state `|occ⟩` with unit amplitude.
    pub fn basis_state(occ: OccupationVector, phi: f64) -> Result<Self> {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(occ.bits, Complex64::new(1.0, 0.0));
        Ok(Self {
            m: occ.m,
            phi: normalize_phi(phi)?,
            amplitudes,
        })
    }

    /// Builds a state from `(occupation, amplitude)` pairs. Repeated
    /// occupations are summed.
    pub fn from_amplitudes<I>(m: usize, phi: f64, amplitudes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        check_mode_count(m)?;
        let mut map = BTreeMap::new();
        for (occ, amp) in amplitudes {
            if occ.m != m {
                return Err(Error::ModeCountMismatch(m, occ.m));
            }
            *map.entry(occ.bits).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        let mut s = Self {
            m,
            phi: normalize_phi(phi)?,
            amplitudes: map,
        };
        s.prune();
        Ok(s)
    }

    pub(crate) fn from_map(m: usize, phi: f64, amplitudes: BTreeMap<u64, Complex64>) -> Self {
        let mut s = Self { m, phi, amplitudes };
        s.prune();
        s
    }

    fn prune(&mut self) {
        self.amplitudes.retain(|_, a| a.norm() >= PRUNE_TOL);
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn amplitude(&self, occ: &OccupationVector) -> Complex64 {
        self.amplitudes
            .get(&occ.bits)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub(crate) fn amplitude_bits(&self, bits: u64) -> Complex64 {
        self.amplitudes
            .get(&bits)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Nonzero components in increasing mask order.
    pub fn iter(&self) -> impl Iterator<Item = (OccupationVector, Complex64)> + '_ {
        let m = self.m;
        self.amplitudes
            .iter()
            .map(move |(&bits, &a)| (OccupationVector { m, bits }, a))
    }

    pub(crate) fn raw(&self) -> &BTreeMap<u64, Complex64> {
        &self.amplitudes
    }

    pub fn support_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n < PRUNE_TOL {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let amplitudes = self.amplitudes.iter().map(|(&k, &a)| (k, a * c)).collect();
        Self::from_map(self.m, self.phi, amplitudes)
    }

    /// `self + other`; both must live in the same algebra.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut amplitudes = self.amplitudes.clone();
        for (&k, &a) in &other.amplitudes {
            *amplitudes.entry(k).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        Ok(Self::from_map(self.m, self.phi, amplitudes))
    }

    /// The same amplitude table read in another statistics sector.
    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Ok(Self {
            m: self.m,
            phi: normalize_phi(phi)?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    /// The particle number if every component has the same one.
    pub fn particle_number(&self) -> Option<usize> {
        let mut it = self.amplitudes.keys().map(|b| b.count_ones() as usize);
        let first = it.next()?;
        it.all(|n| n == first).then_some(first)
    }

    /// Like [`AnyonState::particle_number`] but as an error for callers that
    /// need a definite, nonzero-state particle number.
    pub fn definite_particle_number(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroState);
        }
        self.particle_number().ok_or(Error::IndefiniteParticleNumber)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ModeCountMismatch(self.m, other.m));
        }
        if !same_phi(self.phi, other.phi) {
            return Err(Error::PhiMismatch(self.phi, other.phi));
        }
        Ok(())
    }

    /// `⟨self|other⟩ = Σ_x conj(self_x) other_x`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let (small, large, flip) = if self.amplitudes.len() <= other.amplitudes.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, a) in &small.amplitudes {
            if let Some(b) = large.amplitudes.get(k) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// Applies a single ladder operator using the chosen reordering convention.
    pub fn apply_ladder_with(&self, mode: usize, kind: LadderKind, sign: ExchangeSign) -> Result<Self> {
        check_mode(mode, self.m)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .filter_map(|(&bits, &a)| {
                ladder_on_basis(bits, mode, kind, self.phi, sign).map(|(b, p)| (b, a * p))
            })
            .collect();
        Ok(Self::from_map(self.m, self.phi, amplitudes))
    }

    /// `a†_i |ψ⟩`.
    pub fn apply_create(&self, mode: usize) -> Result<Self> {
        self.apply_ladder_with(mode, LadderKind::Create, ExchangeSign::Canonical)
    }

    /// `a_i |ψ⟩`.
    pub fn apply_annihilate(&self, mode: usize) -> Result<Self> {
        self.apply_ladder_with(mode, LadderKind::Annihilate, ExchangeSign::Canonical)
    }

    /// `n_i |ψ⟩`: keeps the components with mode `i` occupied.
    pub fn apply_number(&self, mode: usize) -> Result<Self> {
        check_mode(mode, self.m)?;
        let mask = mode_mask(mode);
        let amplitudes = self
            .amplitudes
            .iter()
            .filter(|(&bits, _)| bits & mask != 0)
            .map(|(&k, &a)| (k, a))
            .collect();
        Ok(Self::from_map(self.m, self.phi, amplitudes))
    }

    /// Applies an operator expression, interpreting its ladder factors in
    /// this state's statistics sector.
    pub fn apply_operator_expr(&self, op: &OperatorExpr) -> Result<Self> {
        self.apply_operator_expr_with(op, ExchangeSign::Canonical)
    }

    pub fn apply_operator_expr_with(&self, op: &OperatorExpr, sign: ExchangeSign) -> Result<Self> {
        if op.m() != self.m {
            return Err(Error::ModeCountMismatch(self.m, op.m()));
        }
        let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&bits, &a) in &self.amplitudes {
            for (b, c) in op.act_on_basis(bits, self.phi, sign) {
                *out.entry(b).or_insert(Complex64::new(0.0, 0.0)) += a * c;
            }
        }
        Ok(Self::from_map(self.m, self.phi, out))
    }

    /// Largest amplitude difference against another state of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<u64> = self.amplitudes.keys().copied().collect();
        keys.extend(other.amplitudes.keys().copied());
        keys.into_iter()
            .map(|k| (self.amplitude_bits(k) - other.amplitude_bits(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Wire form of a state: `{"m", "phi", "amplitudes": [{"occ", "re", "im"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub m: usize,
    pub phi: f64,
    pub amplitudes: Vec<AmplitudeJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub occ: String,
    pub re: f64,
    pub im: f64,
}

impl From<&AnyonState> for StateJson {
    fn from(s: &AnyonState) -> Self {
        StateJson {
            m: s.m,
            phi: s.phi,
            amplitudes: s
                .iter()
                .map(|(occ, a)| AmplitudeJson {
                    occ: occ.to_string(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<StateJson> for AnyonState {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        let amps = j
            .amplitudes
            .iter()
            .map(|a| {
                let occ: OccupationVector = a.occ.parse()?;
                if occ.m != j.m {
                    return Err(Error::ModeCountMismatch(j.m, occ.m));
                }
                Ok((occ, Complex64::new(a.re, a.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        AnyonState::from_amplitudes(j.m, j.phi, amps)
    }
}
