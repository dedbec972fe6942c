//! Circuit back ends behind a common trait, looked up by name.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fastpath::{anyonic_amplitude_via_fastpath, check_family, run_fastpath};
use crate::fock::{AnyonState, OccupationVector};
use crate::optics::{run_circuit, Circuit};

pub trait Engine: Send + Sync {
    fn name(&self) -> &'static str;

    /// `Ok` when the engine can run the circuit, otherwise the reason.
    fn supports(&self, circuit: &Circuit) -> Result<()>;

    fn run(&self, circuit: &Circuit, state: &AnyonState) -> Result<AnyonState>;

    /// `⟨y|C|x⟩`.
    fn amplitude(&self, circuit: &Circuit, x: &OccupationVector, y: &OccupationVector) -> Result<Complex64>;
}

/// Sector-restricted matrix exponentials; accepts every circuit.
#[derive(Debug, Default, Clone, Copy)]
pub struct DenseEngine;

impl Engine for DenseEngine {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn supports(&self, _circuit: &Circuit) -> Result<()> {
        Ok(())
    }

    fn run(&self, circuit: &Circuit, state: &AnyonState) -> Result<AnyonState> {
        run_circuit(state, circuit)
    }

    fn amplitude(&self, circuit: &Circuit, x: &OccupationVector, y: &OccupationVector) -> Result<Complex64> {
        let out = run_circuit(&AnyonState::basis_state(*x, circuit.phi())?, circuit)?;
        Ok(out.amplitude(y))
    }
}

/// Determinant amplitudes; statistics-independent circuits only.
#[derive(Debug, Default, Clone, Copy)]
pub struct FastPathEngine;

impl Engine for FastPathEngine {
    fn name(&self) -> &'static str {
        "fastpath"
    }

    fn supports(&self, circuit: &Circuit) -> Result<()> {
        check_family(circuit)
    }

    fn run(&self, circuit: &Circuit, state: &AnyonState) -> Result<AnyonState> {
        run_fastpath(state, circuit)
    }

    fn amplitude(&self, circuit: &Circuit, x: &OccupationVector, y: &OccupationVector) -> Result<Complex64> {
        anyonic_amplitude_via_fastpath(circuit, x, y)
    }
}

pub struct EngineRegistry {
    engines: BTreeMap<&'static str, Box<dyn Engine>>,
}

impl EngineRegistry {
    pub fn empty() -> Self {
        Self {
            engines: BTreeMap::new(),
        }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(DenseEngine));
        r.register(Box::new(FastPathEngine));
        r
    }

    /// Adds an engine, replacing any previous one of the same name.
    pub fn register(&mut self, engine: Box<dyn Engine>) {
        self.engines.insert(engine.name(), engine);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Engine> {
        self.engines
            .get(name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownEngine(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.engines.keys().copied().collect()
    }
}

impl Default for EngineRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::GateElement;

    #[test]
    fn registry_lookup() {
        let r = EngineRegistry::with_defaults();
        assert_eq!(r.names(), vec!["dense", "fastpath"]);
        assert_eq!(r.get("dense").unwrap().name(), "dense");
        assert_eq!(r.get("gpu").err(), Some(Error::UnknownEngine("gpu".into())));
    }

    #[test]
    fn engines_agree_in_family() {
        let r = EngineRegistry::with_defaults();
        let c = Circuit::new(3, 0.9, vec![GateElement::bs(1, 2, 0.3), GateElement::fswap(1, 3), GateElement::ps(2, 0.5)]).unwrap();
        let x: OccupationVector = "110".parse().unwrap();
        let y: OccupationVector = "011".parse().unwrap();
        let a = r.get("dense").unwrap().amplitude(&c, &x, &y).unwrap();
        let b = r.get("fastpath").unwrap().amplitude(&c, &x, &y).unwrap();
        assert!((a - b).norm() < 1e-12);
        let out = Circuit::new(3, 0.9, vec![GateElement::bs(1, 3, 0.3)]).unwrap();
        assert!(r.get("fastpath").unwrap().supports(&out).is_err());
        assert!(r.get("dense").unwrap().supports(&out).is_ok());
    }
}
