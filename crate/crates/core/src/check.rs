//! Fast self-check suites: ladder algebra, transmutation laws, fSWAP
//! identities and engine equivalence. Each suite reports its largest
//! deviation and the first few failures.
//!
//! The ladder sign convention is a parameter so that a deliberately flipped
//! convention can be shown to break the algebra suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::engine::{DenseEngine, Engine, FastPathEngine};
use crate::entanglement::{is_separable, slater_decompose, two_particle_coefficients, SEPARABILITY_TOL};
use crate::error::Result;
use crate::fock::{AnyonState, ExchangeSign, LadderKind, OccupationVector};
use crate::linalg::{max_abs_diff, CMatrix};
use crate::operator::OperatorExpr;
use crate::optics::dense::{circuit_matrix, gate_matrix, sequence_matrix};
use crate::optics::{apply_induced_bogoliubov, decompose_distant, BogoliubovPair, BogoliubovTransform, GateElement};
use crate::sampling;
use crate::transmute::{transmute_state, TransmutationMap};

const MAX_FAILURES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            report: SuiteReport {
                name,
                checks: 0,
                max_error: 0.0,
                tolerance,
                failures: Vec::new(),
            },
        }
    }

    fn fail(&mut self, what: String) {
        if self.report.failures.len() < MAX_FAILURES {
            self.report.failures.push(what);
        }
    }

    fn record(&mut self, err: f64, what: impl FnOnce() -> String) {
        self.report.checks += 1;
        if err.is_nan() || err > self.report.max_error {
            self.report.max_error = err;
        }
        if err.is_nan() || err > self.report.tolerance {
            self.fail(format!("{}: error {err:e}", what()));
        }
    }

    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.report.checks += 1;
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    pub sign: ExchangeSign,
    pub phi_grid: Vec<f64>,
    /// Largest mode count in the exhaustive algebra suites.
    pub max_modes: usize,
    /// Random trials per property in the sampled suites.
    pub trials: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            sign: ExchangeSign::Canonical,
            phi_grid: default_phi_grid(),
            max_modes: 5,
            trials: 30,
            seed: 2024,
        }
    }
}

/// Eleven points `kπ/5`, `k = 0..=10`; contains both 0 and π.
pub fn default_phi_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 * PI / 5.0).collect()
}

fn eps(i: usize, j: usize) -> f64 {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => 1.0,
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Greater => -1.0,
    }
}

fn ladder(s: &AnyonState, mode: usize, kind: LadderKind, sign: ExchangeSign) -> AnyonState {
    s.apply_ladder_with(mode, kind, sign).expect("mode in range")
}

fn combine(a: &AnyonState, b: &AnyonState, w: Complex64) -> AnyonState {
    a.add(&b.scale(w)).expect("same algebra")
}

fn basis(m: usize, phi: f64) -> impl Iterator<Item = AnyonState> {
    (0..1u64 << m).map(move |b| AnyonState::basis_state(OccupationVector::new(m, b).unwrap(), phi).unwrap())
}

/// `a_i a†_j + e^{−iφε_ij} a†_j a_i = δ_ij` and `a_i a_j + e^{iφε_ij} a_j a_i = 0`
/// on every basis state.
pub fn exchange_relations(cfg: &CheckConfig) -> SuiteReport {
    use LadderKind::{Annihilate as A, Create as C};
    let mut t = Tally::new("exchange-relations", 1e-12);
    for m in 1..=cfg.max_modes {
        for &phi in &cfg.phi_grid {
            for x in basis(m, phi) {
                for i in 1..=m {
                    for j in 1..=m {
                        let s = cfg.sign;
                        let e = eps(i, j);
                        let lhs = combine(
                            &ladder(&ladder(&x, j, C, s), i, A, s),
                            &ladder(&ladder(&x, i, A, s), j, C, s),
                            Complex64::from_polar(1.0, -phi * e),
                        );
                        let rhs = if i == j { x.clone() } else { AnyonState::zero(m, phi).unwrap() };
                        t.record(lhs.max_abs_diff(&rhs), || format!("mixed relation m={m} φ={phi:.4} i={i} j={j}"));
                        let lhs = combine(
                            &ladder(&ladder(&x, j, A, s), i, A, s),
                            &ladder(&ladder(&x, i, A, s), j, A, s),
                            Complex64::from_polar(1.0, phi * e),
                        );
                        t.record(lhs.max_abs_diff(&AnyonState::zero(m, phi).unwrap()), || {
                            format!("annihilator relation m={m} φ={phi:.4} i={i} j={j}")
                        });
                    }
                }
            }
        }
    }
    t.finish()
}

/// `n_i = a†_i a_i`, `[n_i, a†_j] = δ_ij a†_j` and `[n_i, a_j] = −δ_ij a_j`.
pub fn number_operators(cfg: &CheckConfig) -> SuiteReport {
    use LadderKind::{Annihilate as A, Create as C};
    let mut t = Tally::new("number-operators", 1e-12);
    let s = cfg.sign;
    for m in 1..=cfg.max_modes {
        for &phi in &cfg.phi_grid {
            for x in basis(m, phi) {
                for i in 1..=m {
                    let n = x.apply_number(i).unwrap();
                    t.record(n.max_abs_diff(&ladder(&ladder(&x, i, A, s), i, C, s)), || format!("n_{i} m={m} φ={phi:.4}"));
                    for j in 1..=m {
                        for (kind, sgn) in [(C, 1.0), (A, -1.0)] {
                            let na = ladder(&x, j, kind, s).apply_number(i).unwrap();
                            let an = ladder(&x.apply_number(i).unwrap(), j, kind, s);
                            let comm = combine(&na, &an, Complex64::new(-1.0, 0.0));
                            let expect = if i == j {
                                ladder(&x, j, kind, s).scale(Complex64::new(sgn, 0.0))
                            } else {
                                AnyonState::zero(m, phi).unwrap()
                            };
                            t.record(comm.max_abs_diff(&expect), || format!("[n_{i}, {kind:?}_{j}] m={m} φ={phi:.4}"));
                        }
                    }
                }
            }
        }
    }
    t.finish()
}

/// φ = 0 gives Jordan-Wigner fermions; φ = π makes distinct modes commute.
pub fn limits(cfg: &CheckConfig) -> SuiteReport {
    use LadderKind::{Annihilate as A, Create as C};
    let mut t = Tally::new("phi-limits", 1e-12);
    let s = cfg.sign;
    for m in 1..=cfg.max_modes {
        for x in basis(m, 0.0) {
            for i in 1..=m {
                let got = ladder(&x, i, C, s);
                let bits = x.iter().next().unwrap().0.bits();
                let below = (bits & ((1u64 << (i - 1)) - 1)).count_ones();
                let expect = if bits >> (i - 1) & 1 == 1 {
                    AnyonState::zero(m, 0.0).unwrap()
                } else {
                    let occ = OccupationVector::new(m, bits | 1 << (i - 1)).unwrap();
                    AnyonState::basis_state(occ, 0.0).unwrap().scale(Complex64::new(if below.is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0))
                };
                t.record(got.max_abs_diff(&expect), || format!("fermionic sign m={m} i={i}"));
            }
        }
        for x in basis(m, PI) {
            for i in 1..=m {
                for j in (1..=m).filter(|&j| j != i) {
                    for (ki, kj) in [(A, A), (A, C), (C, C)] {
                        let ij = ladder(&ladder(&x, j, kj, s), i, ki, s);
                        let ji = ladder(&ladder(&x, i, ki, s), j, kj, s);
                        t.record(ij.max_abs_diff(&ji), || format!("φ=π commutation m={m} i={i} j={j}"));
                    }
                }
            }
        }
    }
    t.finish()
}

/// Amplitude invariance, composition, inverse, `n_i` invariance and matrix
/// element preservation of the transmutation map.
pub fn transmutation_laws(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tally::new("transmutation-laws", 1e-10);
    let mut rng = sampling::rng(cfg.seed);
    for trial in 0..cfg.trials {
        let m = rng.random_range(1..=cfg.max_modes);
        let (p1, p2, p3) = (sampling::random_phi(&mut rng), sampling::random_phi(&mut rng), sampling::random_phi(&mut rng));
        let psi = sampling::random_state(&mut rng, m, None, p1).unwrap();
        let moved = transmute_state(&psi, p2).unwrap();
        let same_amps = psi.iter().map(|(o, a)| (moved.amplitude(&o) - a).norm()).fold(0.0, f64::max);
        t.record(same_amps, || format!("amplitude invariance trial {trial}"));

        let op = sampling::random_operator(&mut rng, m, 4, 4).unwrap();
        let j12 = TransmutationMap::new(p1, p2).unwrap();
        let j23 = TransmutationMap::new(p2, p3).unwrap();
        let j13 = TransmutationMap::new(p1, p3).unwrap();
        let composed = j23.apply(&j12.apply(&op));
        t.record(max_abs_diff(&composed.dense_matrix(p3), &j13.apply(&op).dense_matrix(p3)), || {
            format!("composition trial {trial}")
        });
        let back = j12.inverse().apply(&j12.apply(&op));
        t.record(max_abs_diff(&back.dense_matrix(p1), &op.dense_matrix(p1)), || format!("inverse trial {trial}"));
        for i in 1..=m {
            let n = OperatorExpr::number(m, i).unwrap();
            t.record(max_abs_diff(&j12.apply(&n).dense_matrix(p2), &n.dense_matrix(p1)), || {
                format!("n_{i} invariance trial {trial}")
            });
        }

        let Some(before) = t.ok(psi.apply_operator_expr_with(&op, cfg.sign), || format!("apply trial {trial}")) else {
            continue;
        };
        let Some(after) = t.ok(moved.apply_operator_expr_with(&j12.apply(&op), cfg.sign), || format!("apply trial {trial}")) else {
            continue;
        };
        let err = before.iter().chain(after.iter()).map(|(o, _)| (before.amplitude(&o) - after.amplitude(&o)).norm()).fold(0.0, f64::max);
        t.record(err, || format!("matrix elements trial {trial}"));
    }
    t.finish()
}

/// Involution, the three-gate composition and distant-gate decomposition.
pub fn fswap_identities(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tally::new("fswap-identities", 1e-10);
    for &phi in &cfg.phi_grid {
        let m = 3;
        let id = CMatrix::identity(1 << m, 1 << m);
        for (i, j) in [(1, 2), (2, 3), (1, 3)] {
            let f = gate_matrix(&GateElement::fswap(i, j), m, phi).unwrap();
            t.record(max_abs_diff(&(&f * &f), &id), || format!("involution ({i},{j}) φ={phi:.4}"));
        }
        let chain = [GateElement::fswap(1, 2), GateElement::fswap(2, 3), GateElement::fswap(1, 2)];
        let lhs = sequence_matrix(&chain, m, phi).unwrap();
        let rhs = gate_matrix(&GateElement::fswap(1, 3), m, phi).unwrap();
        t.record(max_abs_diff(&lhs, &rhs), || format!("three-gate composition φ={phi:.4}"));
    }
    let mut rng = sampling::rng(cfg.seed ^ 0xf5);
    for _ in 0..cfg.trials {
        let m = rng.random_range(3..=cfg.max_modes.max(3));
        let g = sampling::random_gate(&mut rng, m, false);
        let g = match g {
            GateElement::FSwap { .. } => GateElement::ps(g.modes()[0], 0.4),
            g => g,
        };
        let direct = gate_matrix(&g, m, 0.0).unwrap();
        let via = sequence_matrix(&decompose_distant(&g), m, 0.0).unwrap();
        t.record(max_abs_diff(&direct, &via), || format!("decomposition of {g} on {m} modes"));
    }
    t.finish()
}

/// Determinant amplitudes against the dense engine, and their φ-independence.
pub fn fastpath_equivalence(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tally::new("fastpath-equivalence", 1e-10);
    let mut rng = sampling::rng(cfg.seed ^ 0xfa57);
    let (dense, fast) = (DenseEngine, FastPathEngine);
    for trial in 0..cfg.trials {
        let m = rng.random_range(2..=6);
        let n = rng.random_range(1..=m.min(3));
        let depth = rng.random_range(1..=12);
        let c0 = sampling::random_in_family_circuit(&mut rng, m, depth, 0.0, false).unwrap();
        let x = OccupationVector::sector(m, n).unwrap()[0];
        let ys = OccupationVector::sector(m, n).unwrap();
        let mut reference: Option<Vec<Complex64>> = None;
        for phi in [0.0, PI / 3.0, PI] {
            let c = c0.with_phi(phi).unwrap();
            let Some(out) = t.ok(dense.run(&c, &AnyonState::basis_state(x, phi).unwrap()), || format!("dense trial {trial}")) else {
                continue;
            };
            let mut amps = Vec::with_capacity(ys.len());
            for y in &ys {
                let Some(a) = t.ok(fast.amplitude(&c, &x, y), || format!("fastpath trial {trial}")) else {
                    continue;
                };
                t.record((a - out.amplitude(y)).norm(), || format!("trial {trial} φ={phi:.4} y={y}"));
                amps.push(a);
            }
            match &reference {
                None => reference = Some(amps),
                Some(r) => {
                    let d = r.iter().zip(&amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    t.record(d, || format!("φ-dependence trial {trial} φ={phi:.4}"));
                }
            }
        }
    }
    t.finish()
}

/// Slater normal form against the singular values of the coefficient matrix.
pub fn slater_oracle(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tally::new("slater-decomposition", 1e-8);
    let mut rng = sampling::rng(cfg.seed ^ 0x51a7);
    for trial in 0..cfg.trials {
        let m = rng.random_range(2..=6);
        let phi = sampling::random_phi(&mut rng);
        let psi = sampling::random_state(&mut rng, m, Some(2), phi).unwrap();
        let Some(d) = t.ok(slater_decompose(&psi), || format!("decompose trial {trial}")) else {
            continue;
        };
        let fermionic = transmute_state(&psi, 0.0).unwrap();
        t.record(fermionic.max_abs_diff(&d.reconstruct()), || format!("reconstruction trial {trial}"));
        let sv = two_particle_coefficients(&psi).unwrap().singular_values();
        let mut sv: Vec<f64> = sv.iter().map(|s| 2.0 * s).filter(|&s| s > 1e-8).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let expect: Vec<f64> = sv.chunks(2).map(|p| p[0]).collect();
        if expect.len() != d.z.len() {
            t.fail(format!("rank {} vs oracle {} trial {trial}", d.rank, expect.len()));
            continue;
        }
        let err = expect.iter().zip(&d.z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        t.record(err, || format!("coefficients trial {trial}"));
    }
    t.finish()
}

/// Induced single-particle changes of basis keep Fock states separable.
pub fn separability_invariance(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tally::new("separability-invariance", 0.0);
    let mut rng = sampling::rng(cfg.seed ^ 0x5e9);
    for trial in 0..cfg.trials {
        let m = rng.random_range(2..=6);
        let n = rng.random_range(1..=m);
        let phi = sampling::random_phi(&mut rng);
        let x = sampling::random_fock_state(&mut rng, m, n, phi).unwrap();
        let pair = BogoliubovPair::change_of_basis(sampling::random_unitary(&mut rng, m)).unwrap();
        let b = BogoliubovTransform::try_from(pair).unwrap();
        let Some(y) = t.ok(apply_induced_bogoliubov(&x, &b), || format!("transform trial {trial}")) else {
            continue;
        };
        let Some(v) = t.ok(is_separable(&y, SEPARABILITY_TOL), || format!("verdict trial {trial}")) else {
            continue;
        };
        t.record(if v.separable { 0.0 } else { 1.0 }, || format!("trial {trial} m={m} N={n}"));
    }
    t.finish()
}

/// Gate-by-gate dense evolution against the full circuit matrix.
pub fn circuit_unitarity(cfg: &CheckConfig) -> SuiteReport {
    let mut t = Tally::new("circuit-unitarity", 1e-10);
    let mut rng = sampling::rng(cfg.seed ^ 0xc1c);
    for trial in 0..cfg.trials {
        let m = rng.random_range(2..=5);
        let phi = sampling::random_phi(&mut rng);
        let c = sampling::random_circuit(&mut rng, m, 6, phi, false).unwrap();
        let u = circuit_matrix(&c).unwrap();
        let dim = u.nrows();
        t.record(max_abs_diff(&(u.adjoint() * &u), &CMatrix::identity(dim, dim)), || format!("trial {trial}"));
        let psi = sampling::random_state(&mut rng, m, None, phi).unwrap();
        let back = DenseEngine.run(&c.inverse(), &DenseEngine.run(&c, &psi).unwrap()).unwrap();
        t.record(back.max_abs_diff(&psi), || format!("inverse circuit trial {trial}"));
    }
    t.finish()
}

pub type Suite = fn(&CheckConfig) -> SuiteReport;

pub const SUITES: [(&str, Suite); 9] = [
    ("exchange-relations", exchange_relations),
    ("number-operators", number_operators),
    ("phi-limits", limits),
    ("transmutation-laws", transmutation_laws),
    ("fswap-identities", fswap_identities),
    ("circuit-unitarity", circuit_unitarity),
    ("fastpath-equivalence", fastpath_equivalence),
    ("slater-decomposition", slater_oracle),
    ("separability-invariance", separability_invariance),
];

pub fn run_all(cfg: &CheckConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, f)| f(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CheckConfig {
        CheckConfig {
            max_modes: 3,
            trials: 5,
            ..CheckConfig::default()
        }
    }

    #[test]
    fn all_suites_pass() {
        for r in run_all(&small()) {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.checks > 0, "{}", r.name);
        }
    }

    #[test]
    fn flipped_sign_breaks_exchange_relations() {
        let cfg = CheckConfig {
            sign: ExchangeSign::Flipped,
            ..small()
        };
        assert!(!exchange_relations(&cfg).passed());
        assert!(!transmutation_laws(&cfg).passed());
        assert!(limits(&cfg).passed());
    }

    #[test]
    fn grid_has_endpoints() {
        let g = default_phi_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert!((g[5] - PI).abs() < 1e-15);
    }
}
