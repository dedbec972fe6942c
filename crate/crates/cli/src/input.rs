//! Resolves the initial state and circuit from files, inline JSON and presets.

use std::fs;
use std::path::Path;

use anyonsim::fock::StateJson;
use anyonsim::presets::{self, PRESET_NAMES};
use anyonsim::{AnyonState, Circuit};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub enum StateSource {
    Given(AnyonState),
    Preset(String),
}

#[derive(Debug, Clone)]
pub struct Inputs {
    pub state: StateSource,
    pub circuit: Option<Circuit>,
}

fn read_json(arg: &str, what: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    fs::read_to_string(Path::new(arg)).map_err(|e| CliError::parse(format!("cannot read {what} `{arg}`: {e}")))
}

pub fn load_state(arg: &str) -> CliResult<AnyonState> {
    let text = read_json(arg, "state")?;
    let j: StateJson = serde_json::from_str(&text).map_err(|e| CliError::parse(format!("malformed state JSON: {e}")))?;
    Ok(AnyonState::try_from(j)?)
}

pub fn load_circuit(arg: &str) -> CliResult<Circuit> {
    let text = read_json(arg, "circuit")?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("malformed circuit JSON: {e}")))
}

impl Inputs {
    pub fn new(state: Option<&str>, preset: Option<&str>, circuit: Option<&str>) -> CliResult<Self> {
        let state = match (state, preset) {
            (Some(s), None) => StateSource::Given(load_state(s)?),
            (None, Some(p)) => {
                if !PRESET_NAMES.contains(&p) {
                    return Err(CliError::parse(format!(
                        "unknown preset `{p}`; available: {}",
                        PRESET_NAMES.join(", ")
                    )));
                }
                StateSource::Preset(p.to_string())
            }
            (None, None) => StateSource::Preset("appendixG".into()),
            (Some(_), Some(_)) => return Err(CliError::parse("--state and --preset are mutually exclusive")),
        };
        let circuit = circuit.map(load_circuit).transpose()?;
        if let (StateSource::Given(s), Some(c)) = (&state, &circuit) {
            if s.m() != c.m() {
                return Err(anyonsim::Error::ModeCountMismatch(c.m(), s.m()).into());
            }
        }
        Ok(Self { state, circuit })
    }

    /// Whether θ drives the circuit (the beam-splitter preset without a user circuit).
    pub fn uses_theta(&self) -> bool {
        matches!(&self.state, StateSource::Preset(p) if p == "appendixG") && self.circuit.is_none()
    }

    /// The φ fixed by the inputs, if any: a circuit file or a state file pins it.
    pub fn pinned_phi(&self) -> Option<f64> {
        match (&self.circuit, &self.state) {
            (Some(c), _) => Some(c.phi()),
            (None, StateSource::Given(s)) => Some(s.phi()),
            _ => None,
        }
    }

    /// State and circuit in the φ-sector. A given state keeps its amplitude
    /// table and is reinterpreted in that sector.
    pub fn at(&self, phi: f64, theta: f64) -> CliResult<(AnyonState, Circuit)> {
        let (state, preset_circuit) = match &self.state {
            StateSource::Given(s) => (s.with_phi(phi)?, Circuit::empty(s.m(), phi)?),
            StateSource::Preset(name) => {
                let p = presets::preset(name, phi, theta).expect("name checked on construction")?;
                (p.state, p.circuit)
            }
        };
        let circuit = match &self.circuit {
            Some(c) => c.with_phi(phi)?,
            None => preset_circuit,
        };
        if circuit.m() != state.m() {
            return Err(anyonsim::Error::ModeCountMismatch(circuit.m(), state.m()).into());
        }
        Ok((state, circuit))
    }

    /// Same as [`Inputs::at`] but rejects a φ that contradicts the files.
    pub fn exact(&self, phi: Option<f64>, theta: f64) -> CliResult<(AnyonState, Circuit)> {
        let pinned = self.pinned_phi();
        if let (StateSource::Given(s), Some(c)) = (&self.state, &self.circuit) {
            if !anyonsim::fock::same_phi(s.phi(), c.phi()) {
                return Err(anyonsim::Error::PhiMismatch(s.phi(), c.phi()).into());
            }
        }
        let phi = match (phi, pinned) {
            (Some(a), Some(b)) if !anyonsim::fock::same_phi(a, b) => {
                return Err(CliError::precondition(format!("--phi {a} contradicts φ = {b} fixed by the input files")))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => 0.0,
        };
        self.at(phi, theta)
    }
}
