//! Reduced density matrices, entropies, minimal-entropy modes and the Slater
//! normal form of two-particle states.
//!
//! The particle partial trace of an anyonic state depends on φ even for
//! states obtained from a Fock state by single-particle operations. The
//! statistics-independent quantities live on the fermionized amplitude table:
//! occupation numbers of the one-body matrix and the Slater coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{ladder_on_basis, AnyonState, ExchangeSign, LadderKind, OccupationVector};
use crate::linalg::{binary_entropy, hermitian_eigen, hermiticity_error, CMatrix};
use crate::optics::bogoliubov::change_of_basis_fermionic;
use crate::transmute::fermionize;

pub const DM_TOL: f64 = 1e-10;
/// Eigenvalues below this are left out of the entropy sum.
pub const ENTROPY_CUTOFF: f64 = 1e-12;
pub const SEPARABILITY_TOL: f64 = 1e-8;
/// Slater coefficients above this count towards the rank.
pub const RANK_TOL: f64 = 1e-8;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::InvalidDensityMatrix("matrix must be square and nonempty".into()));
        }
        let (vals, _) = hermitian_eigen(&entries, DM_TOL)?;
        let tr = entries.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > DM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {tr}")));
        }
        if let Some(v) = vals.iter().find(|&&v| v < -DM_TOL) {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {v:e}")));
        }
        Ok(Self { entries })
    }

    /// Divides a Hermitian positive matrix by its trace.
    pub fn from_unnormalized(m: CMatrix) -> Result<Self> {
        let tr = m.trace().re;
        if tr <= 0.0 {
            return Err(Error::ZeroState);
        }
        let h = hermiticity_error(&m);
        if h > DM_TOL * tr.max(1.0) {
            return Err(Error::NotHermitian(h));
        }
        Self::new(m / Complex64::new(tr, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Entry with 1-based indices, matching mode labels.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i - 1, j - 1)]
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.entries, DM_TOL)
            .expect("validated on construction")
            .0
    }
}

/// `−Σ λ log₂ λ` over eigenvalues above the cutoff.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// Entropy of a raw matrix, rejecting non-Hermitian input.
pub fn von_neumann_entropy_of(m: &CMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m, DM_TOL)?;
    Ok(entropy_of_spectrum(&vals))
}

fn entropy_of_spectrum(vals: &[f64]) -> f64 {
    vals.iter()
        .filter(|&&l| l >= ENTROPY_CUTOFF)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

fn require_particles(state: &AnyonState) -> Result<usize> {
    let n = state.definite_particle_number()?;
    if n == 0 {
        return Err(Error::WrongParticleNumber { expected: 1, found: 0 });
    }
    Ok(n)
}

/// `ρ_kl = ⟨a†_l a_k⟩ / N` in the state's own sector.
pub fn one_body_rdm(state: &AnyonState) -> Result<DensityMatrix> {
    require_particles(state)?;
    let m = state.m();
    let lowered: Vec<AnyonState> = (1..=m)
        .map(|k| state.apply_annihilate(k))
        .collect::<Result<_>>()?;
    let mut rho = CMatrix::zeros(m, m);
    for k in 0..m {
        for l in 0..m {
            rho[(k, l)] = lowered[l].inner_product(&lowered[k])?;
        }
    }
    DensityMatrix::from_unnormalized(rho)
}

/// Which particle label survives the particle partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KeptParticle {
    /// Trace out the leading particles and keep the last one.
    Y,
    /// Trace out the last particle of a pair and keep the first one.
    X,
}

/// `⟨0|a_i a_{t_{N−1}} ⋯ a_{t_1}|ψ⟩` for increasing traced tuples `t`, as one
/// single-particle amplitude vector per tuple.
fn traced_vectors(state: &AnyonState, traced: usize) -> Result<Vec<(u64, Vec<Complex64>)>> {
    let m = state.m();
    let mut out = Vec::new();
    for t in OccupationVector::sector(m, traced)? {
        let mut s = state.clone();
        for k in t.modes() {
            s = s.apply_annihilate(k)?;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        for (occ, a) in s.iter() {
            let modes = occ.modes();
            if let [i] = modes[..] {
                // ⟨0|a_i a†_i|0⟩ = 1, so the amplitude is read off directly
                v[i - 1] = a;
            }
        }
        out.push((t.bits(), v));
    }
    Ok(out)
}

/// Particle partial trace with the anyonic exchange phases.
///
/// Keeping `Y` works for any `N ≥ 1`; keeping `X` needs `N = 2` and weighs each
/// traced mode `t` by `e^{iφ(ε_{t i} + ε_{j t})}`.
pub fn particle_trace_rdm(state: &AnyonState, keep: KeptParticle) -> Result<DensityMatrix> {
    let n = require_particles(state)?;
    let m = state.m();
    let mut rho = CMatrix::zeros(m, m);
    match keep {
        KeptParticle::Y => {
            for (_, v) in traced_vectors(state, n - 1)? {
                for i in 0..m {
                    for j in 0..m {
                        rho[(i, j)] += v[i] * v[j].conj();
                    }
                }
            }
        }
        KeptParticle::X => {
            if n != 2 {
                return Err(Error::WrongParticleNumber { expected: 2, found: n });
            }
            let eps = |a: usize, b: usize| (b as i64 - a as i64).signum() as f64;
            for (tbits, v) in traced_vectors(state, 1)? {
                let t = tbits.trailing_zeros() as usize + 1;
                for i in 1..=m {
                    for j in 1..=m {
                        let phase = Complex64::from_polar(1.0, state.phi() * (eps(t, i) + eps(j, t)));
                        rho[(i - 1, j - 1)] += phase * v[i - 1] * v[j - 1].conj();
                    }
                }
            }
        }
    }
    DensityMatrix::from_unnormalized(rho)
}

/// Minimal-entropy mode representation of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalEntropyModes {
    /// Natural orbitals as columns.
    pub mode_basis: CMatrix,
    /// Occupation numbers `λ_i ∈ [0, 1]`, descending; they sum to `N`.
    pub occupations: Vec<f64>,
    /// `Σ_i H(λ_i)` in bits.
    pub e_sp: f64,
}

/// Diagonalizes the fermionized `⟨f†_l f_k⟩`.
pub fn minimal_entropy_modes(state: &AnyonState) -> Result<MinimalEntropyModes> {
    let n = require_particles(state)? as f64;
    let rho = one_body_rdm(&fermionize(state))?;
    let g = rho.entries() * Complex64::new(n, 0.0);
    let (vals, vecs) = hermitian_eigen(&g, DM_TOL * n)?;
    let occupations: Vec<f64> = vals.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let e_sp = occupations.iter().map(|&l| binary_entropy(l)).sum();
    Ok(MinimalEntropyModes {
        mode_basis: vecs,
        occupations,
        e_sp,
    })
}

/// Antisymmetric `v_ij` with `ψ = Σ_{i,j} v_ij f†_i f†_j |0⟩` for a normalized,
/// fermionized two-particle state (so `Σ_{i,j} |v_ij|² = 1/2`).
pub fn two_particle_coefficients(state: &AnyonState) -> Result<CMatrix> {
    let n = state.definite_particle_number()?;
    if n != 2 {
        return Err(Error::WrongParticleNumber { expected: 2, found: n });
    }
    let f = fermionize(&state.normalize()?);
    let m = f.m();
    let mut v = CMatrix::zeros(m, m);
    for (occ, a) in f.iter() {
        let modes = occ.modes();
        let (i, j) = (modes[0] - 1, modes[1] - 1);
        v[(i, j)] = a * 0.5;
        v[(j, i)] = -a * 0.5;
    }
    Ok(v)
}

/// `ψ = Σ_k z_k f̃†_{2k−1} f̃†_{2k} |0⟩` with `f̃†_l = Σ_j conj(U_lj) f†_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlaterDecomposition {
    #[serde(skip)]
    pub u: CMatrix,
    /// Coefficients above [`RANK_TOL`], descending.
    pub z: Vec<f64>,
    pub rank: usize,
}

impl SlaterDecomposition {
    /// The fermionic state rebuilt from the normal form.
    pub fn reconstruct(&self) -> AnyonState {
        let m = self.u.nrows();
        let pairs = self.z.iter().enumerate().map(|(k, &z)| {
            let occ = OccupationVector::from_modes(m, &[2 * k + 1, 2 * k + 2])
                .expect("pair modes fit inside m");
            (occ, Complex64::new(z, 0.0))
        });
        let normal = AnyonState::from_amplitudes(m, 0.0, pairs).expect("valid mode count");
        change_of_basis_fermionic(&normal, &self.u.map(|c| c.conj()))
    }

    /// `U V Uᵀ`, which should be block diagonal with blocks `z_k / 2`.
    pub fn normal_form(&self, v: &CMatrix) -> CMatrix {
        &self.u * v * self.u.transpose()
    }
}

/// Orthonormal basis (columns) of the complement of `cols` inside `C^d`.
fn complement(d: usize, cols: &[nalgebra::DVector<Complex64>]) -> CMatrix {
    let mut p = CMatrix::identity(d, d);
    for c in cols {
        p -= c * c.adjoint();
    }
    let (_, vecs) = hermitian_eigen(&p, 1e-8).expect("projector is Hermitian");
    vecs.columns(0, d - cols.len()).into_owned()
}

/// Block-diagonalizes the antisymmetric coefficient matrix by unitary
/// congruence, one 2×2 block at a time.
pub fn slater_decompose(state: &AnyonState) -> Result<SlaterDecomposition> {
    let v = two_particle_coefficients(state)?;
    let m = v.nrows();
    let mut q = CMatrix::identity(m, m);
    let mut vecs: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(m);
    let mut z = Vec::new();
    while q.ncols() >= 2 {
        let d = q.ncols();
        let vr = q.adjoint() * &v * q.map(|c| c.conj());
        let (_, evecs) = hermitian_eigen(&(&vr * vr.adjoint()), 1e-9)?;
        let mut y1 = evecs.column(0).into_owned();
        if let Some(p) = y1.iter().find(|c| c.norm() > 1e-8) {
            let phase = p.conj() / p.norm();
            y1 *= phase;
        }
        let w = -(&vr * y1.map(|c| c.conj()));
        let half = w.norm();
        if 2.0 * half <= RANK_TOL {
            break;
        }
        let y2 = w / Complex64::new(half, 0.0);
        z.push(2.0 * half);
        vecs.push(&q * &y1);
        vecs.push(&q * &y2);
        let rest = complement(d, &[y1, y2]);
        q = &q * rest;
    }
    for k in 0..q.ncols() {
        vecs.push(q.column(k).into_owned());
    }
    let cols = DMatrix::from_columns(&vecs);
    let u = cols.adjoint();
    let rank = z.len();
    Ok(SlaterDecomposition { u, z, rank })
}

/// Particle-separability verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Separability {
    pub separable: bool,
    pub occupations: Vec<f64>,
    pub slater_rank: Option<usize>,
    /// Mode basis in which the state is a single Fock state when separable.
    pub witness: CMatrix,
}

/// Separable iff every natural occupation is within `tol` of 0 or 1; for two
/// particles the Slater rank must also be 1.
pub fn is_separable(state: &AnyonState, tol: f64) -> Result<Separability> {
    let modes = minimal_entropy_modes(state)?;
    let integral = modes
        .occupations
        .iter()
        .all(|&l| (l - l.round()).abs() <= tol);
    let slater_rank = if state.particle_number() == Some(2) {
        Some(slater_decompose(state)?.rank)
    } else {
        None
    };
    Ok(Separability {
        separable: integral && slater_rank.is_none_or(|r| r == 1),
        occupations: modes.occupations,
        slater_rank,
        witness: modes.mode_basis,
    })
}

/// The natural occupation for each mode of a Fock state, used in tests.
pub fn fock_occupations(occ: &OccupationVector) -> Vec<f64> {
    (1..=occ.m()).map(|k| if occ.is_occupied(k) { 1.0 } else { 0.0 }).collect()
}

/// Amplitude of a two-particle basis state under the increasing-order
/// convention, read through explicit creation operators.
pub fn pair_amplitude(state: &AnyonState, i: usize, j: usize) -> Result<Complex64> {
    let mut bits = 0u64;
    let mut amp = Complex64::new(1.0, 0.0);
    for k in [j, i] {
        let (nb, p) = ladder_on_basis(bits, k, LadderKind::Create, state.phi(), ExchangeSign::Canonical)
            .ok_or(Error::RepeatedMode(k))?;
        bits = nb;
        amp *= p;
    }
    let occ = OccupationVector::new(state.m(), bits)?;
    Ok(state.amplitude(&occ) * amp.conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff};
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn occ(s: &str) -> OccupationVector {
        s.parse().unwrap()
    }

    fn worked(theta: f64, phi: f64) -> AnyonState {
        let r = FRAC_1_SQRT_2;
        AnyonState::from_amplitudes(
            4,
            phi,
            [
                (occ("1100"), c(r, 0.0)),
                (occ("1001"), c(r * theta.cos(), 0.0)),
                (occ("0101"), c(0.0, r * theta.sin())),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fock_state_rdm() {
        let s = AnyonState::basis_state(occ("1100"), 0.7).unwrap();
        let rho = one_body_rdm(&s).unwrap();
        let expect = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0)]));
        assert!(max_abs_diff(rho.entries(), &expect) < 1e-15);
        assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_reference_values() {
        let pure = DensityMatrix::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]))).unwrap();
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        let mixed = DensityMatrix::new(CMatrix::identity(4, 4) * c(0.25, 0.0)).unwrap();
        assert!((von_neumann_entropy(&mixed) - 2.0).abs() < 1e-12);
        let bad = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(von_neumann_entropy_of(&bad), Err(Error::NotHermitian(_))));
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn worked_reduced_matrix_entries() {
        for (theta, phi) in [(0.3, 0.0), (1.1, 0.9), (2.0, PI)] {
            let rho = particle_trace_rdm(&worked(theta, phi), KeptParticle::Y).unwrap();
            let (s, co) = (theta.sin(), theta.cos());
            assert!((rho.get(1, 1) - c((1.0 + co * co) / 4.0, 0.0)).norm() < 1e-12);
            assert!((rho.get(1, 4) - c(0.0, s / 4.0) * Complex64::from_polar(1.0, phi)).norm() < 1e-12);
            assert!((rho.get(4, 1) - c(0.0, -s / 4.0) * Complex64::from_polar(1.0, -phi)).norm() < 1e-12);
            assert!((rho.get(2, 4) - c(co / 4.0, 0.0)).norm() < 1e-12);
            assert!((rho.get(1, 2) - c(0.0, -s * co / 4.0)).norm() < 1e-12);
            for j in 1..=4 {
                assert_eq!(rho.get(3, j), c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn keep_x_on_worked_state() {
        let (theta, phi) = (0.8, 1.3);
        let rho = particle_trace_rdm(&worked(theta, phi), KeptParticle::X).unwrap();
        assert!((rho.get(1, 4) - c(0.0, theta.sin() / 4.0) * Complex64::from_polar(1.0, -phi)).norm() < 1e-12);
        assert!((rho.get(4, 1) - c(0.0, -theta.sin() / 4.0) * Complex64::from_polar(1.0, phi)).norm() < 1e-12);
        let sy = von_neumann_entropy(&particle_trace_rdm(&worked(theta, phi), KeptParticle::Y).unwrap());
        assert!((von_neumann_entropy(&rho) - sy).abs() < 1e-10);
    }

    #[test]
    fn fermionic_trace_equals_one_body() {
        let s = worked(0.4, 0.0);
        let a = particle_trace_rdm(&s, KeptParticle::Y).unwrap();
        let b = one_body_rdm(&s).unwrap();
        assert!(max_abs_diff(a.entries(), b.entries()) < 1e-12);
    }

    #[test]
    fn worked_state_is_separable() {
        for phi in [0.0, 1.0, PI] {
            let s = worked(0.7, phi);
            let v = is_separable(&s, SEPARABILITY_TOL).unwrap();
            assert!(v.separable);
            assert_eq!(v.slater_rank, Some(1));
            let modes = minimal_entropy_modes(&s).unwrap();
            assert!(modes.e_sp.abs() < 1e-9);
        }
    }

    #[test]
    fn two_slater_state() {
        let r = FRAC_1_SQRT_2;
        let s = AnyonState::from_amplitudes(4, 0.9, [(occ("1100"), c(r, 0.0)), (occ("0011"), c(r, 0.0))]).unwrap();
        let d = slater_decompose(&s).unwrap();
        assert_eq!(d.rank, 2);
        assert!((d.z[0] - r).abs() < 1e-12 && (d.z[1] - r).abs() < 1e-12);
        assert!(!is_separable(&s, SEPARABILITY_TOL).unwrap().separable);
        assert!(fermionize(&s).max_abs_diff(&d.reconstruct()) < 1e-12);
    }

    #[test]
    fn fock_state_normal_form() {
        let s = AnyonState::basis_state(occ("1100"), 0.0).unwrap();
        let d = slater_decompose(&s).unwrap();
        assert_eq!(d.rank, 1);
        assert!((d.z[0] - 1.0).abs() < 1e-12);
        assert!(max_abs_diff(&d.u, &CMatrix::identity(4, 4)) < 1e-12);
    }

    #[test]
    fn normal_form_blocks() {
        let s = AnyonState::from_amplitudes(
            5,
            0.0,
            [
                (occ("11000"), c(0.3, 0.1)),
                (occ("01010"), c(-0.2, 0.5)),
                (occ("00101"), c(0.4, -0.3)),
                (occ("10001"), c(0.1, 0.2)),
            ],
        )
        .unwrap()
        .normalize()
        .unwrap();
        let d = slater_decompose(&s).unwrap();
        let v = two_particle_coefficients(&s).unwrap();
        let z = d.normal_form(&v);
        for (k, zk) in d.z.iter().enumerate() {
            assert!((z[(2 * k, 2 * k + 1)] - c(zk / 2.0, 0.0)).norm() < 1e-10);
        }
        let mut off = z.clone();
        for k in 0..d.z.len() {
            off[(2 * k, 2 * k + 1)] = c(0.0, 0.0);
            off[(2 * k + 1, 2 * k)] = c(0.0, 0.0);
        }
        assert!(off.iter().all(|x| x.norm() < 1e-10));
        assert!(s.max_abs_diff(&d.reconstruct()) < 1e-10);
        assert!((d.z.iter().map(|z| z * z).sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn particle_number_guards() {
        let s = AnyonState::vacuum(3, 0.0).unwrap();
        assert!(one_body_rdm(&s).is_err());
        let s = AnyonState::basis_state(occ("111"), 0.0).unwrap();
        assert!(matches!(slater_decompose(&s), Err(Error::WrongParticleNumber { expected: 2, found: 3 })));
        assert!(particle_trace_rdm(&s, KeptParticle::X).is_err());
        assert!(particle_trace_rdm(&s, KeptParticle::Y).is_ok());
        let mixed = AnyonState::from_amplitudes(3, 0.0, [(occ("100"), c(0.6, 0.0)), (occ("110"), c(0.8, 0.0))]).unwrap();
        assert_eq!(minimal_entropy_modes(&mixed).unwrap_err(), Error::IndefiniteParticleNumber);
    }

    #[test]
    fn pair_amplitude_reads_increasing_order() {
        let s = AnyonState::basis_state(occ("0101"), 0.4).unwrap();
        assert!((pair_amplitude(&s, 2, 4).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }
}
