use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyonsim::check::{self, CheckConfig};
use anyonsim::engine::EngineRegistry;
use anyonsim::entanglement::{minimal_entropy_modes, particle_trace_rdm, slater_decompose, von_neumann_entropy, KeptParticle};
use anyonsim::ExchangeSign;
use rayon::prelude::*;
use serde::Serialize;

use crate::engines::{evolve, EngineChoice};
use crate::error::{CliError, CliResult};
use crate::format::{clean, num};
use crate::grid::Grid;
use crate::input::Inputs;

pub fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::parse(format!("cannot create `{}`: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub struct RunArgs<'a> {
    pub inputs: &'a Inputs,
    pub phi: Option<f64>,
    pub theta: f64,
    pub engine: EngineChoice,
    pub tol: f64,
}

pub fn run(args: &RunArgs, out: &mut dyn Write) -> CliResult<()> {
    let registry = EngineRegistry::with_defaults();
    let (state, circuit) = args.inputs.exact(args.phi, args.theta)?;
    let evolved = evolve(&registry, args.engine, &circuit, &state, args.tol)?;
    if let Some(gap) = evolved.engine_gap {
        eprintln!("max |dense - fastpath| = {gap:e}");
    }
    writeln!(out, "occ,re,im")?;
    for (occ, a) in evolved.state.iter() {
        writeln!(out, "{occ},{},{}", num(clean(a.re)), num(clean(a.im)))?;
    }
    out.flush()?;
    Ok(())
}

pub struct ScanArgs<'a> {
    pub inputs: &'a Inputs,
    pub phi_grid: Grid,
    pub theta_grid: Option<Grid>,
    pub engine: EngineChoice,
    pub tol: f64,
}

struct ScanRow {
    phi: f64,
    theta: f64,
    s_x: f64,
    s_y: f64,
    e_sp: f64,
    rank: usize,
}

pub fn entropy_scan(args: &ScanArgs, out: &mut dyn Write) -> CliResult<()> {
    let theta_grid = match (&args.theta_grid, args.inputs.uses_theta()) {
        (Some(g), true) => g.clone(),
        (None, true) => Grid::point(anyonsim::presets::DEFAULT_THETA),
        (Some(g), false) if g.n > 1 => {
            return Err(CliError::parse("--theta-grid only applies to the appendixG preset without --circuit"))
        }
        (Some(g), false) => g.clone(),
        (None, false) => Grid::point(0.0),
    };
    let phis = args.phi_grid.points();
    let thetas = theta_grid.points();
    let points: Vec<(f64, f64)> = phis.iter().flat_map(|&p| thetas.iter().map(move |&t| (p, t))).collect();
    let registry = EngineRegistry::with_defaults();
    let rows: Vec<CliResult<ScanRow>> = points
        .par_iter()
        .map(|&(phi, theta)| {
            let (state, circuit) = args.inputs.at(phi, theta)?;
            let psi = evolve(&registry, args.engine, &circuit, &state, args.tol)?.state;
            let n = psi.definite_particle_number()?;
            if n != 2 {
                return Err(anyonsim::Error::WrongParticleNumber { expected: 2, found: n }.into());
            }
            let s_x = von_neumann_entropy(&particle_trace_rdm(&psi, KeptParticle::X)?);
            let s_y = von_neumann_entropy(&particle_trace_rdm(&psi, KeptParticle::Y)?);
            Ok(ScanRow {
                phi,
                theta,
                s_x,
                s_y,
                e_sp: minimal_entropy_modes(&psi)?.e_sp,
                rank: slater_decompose(&psi)?.rank,
            })
        })
        .collect();
    writeln!(out, "phi,theta,S_x,S_y,E_SP,slater_rank")?;
    for row in rows {
        let r = row?;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.phi),
            num(r.theta),
            num(clean(r.s_x)),
            num(clean(r.s_y)),
            num(clean(r.e_sp)),
            r.rank
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SchmidtReport {
    z: Vec<f64>,
    rank: usize,
    /// Rows of the mode unitary, each entry `[re, im]`.
    mode_basis: Vec<Vec<[f64; 2]>>,
}

pub fn schmidt(args: &RunArgs, out: &mut dyn Write) -> CliResult<()> {
    let registry = EngineRegistry::with_defaults();
    let (state, circuit) = args.inputs.exact(args.phi, args.theta)?;
    let psi = evolve(&registry, args.engine, &circuit, &state, args.tol)?.state;
    let d = slater_decompose(&psi)?;
    let report = SchmidtReport {
        z: d.z.clone(),
        rank: d.rank,
        mode_basis: d
            .u
            .row_iter()
            .map(|row| row.iter().map(|c| [clean(c.re), clean(c.im)]).collect())
            .collect(),
    };
    serde_json::to_writer(&mut *out, &report).map_err(|e| CliError::invariant(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub struct CheckArgs {
    pub max_modes: usize,
    pub trials: usize,
    pub seed: u64,
    pub flip_sign: bool,
}

pub fn check(args: &CheckArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = CheckConfig {
        sign: if args.flip_sign { ExchangeSign::Flipped } else { ExchangeSign::Canonical },
        max_modes: args.max_modes,
        trials: args.trials,
        seed: args.seed,
        ..CheckConfig::default()
    };
    let reports: Vec<_> = check::SUITES.par_iter().map(|(_, suite)| suite(&cfg)).collect();
    let mut failed = 0;
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {:<24} {:>7} checks  max error {:.2e}  (tol {:.0e})", r.name, r.checks, r.max_error, r.tolerance)?;
        for f in &r.failures {
            writeln!(out, "     {f}")?;
        }
        if !r.passed() {
            failed += 1;
        }
    }
    writeln!(out, "{} of {} suites passed", reports.len() - failed, reports.len())?;
    out.flush()?;
    if failed > 0 {
        return Err(CliError::invariant(format!("{failed} check suite(s) failed")));
    }
    Ok(())
}
