//! Engine selection on top of the core registry.

use anyonsim::engine::EngineRegistry;
use anyonsim::{AnyonState, Circuit};
use clap::ValueEnum;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    Dense,
    Fastpath,
    Both,
}

pub struct Evolved {
    pub state: AnyonState,
    /// `max |dense − fastpath|` when both engines ran.
    pub engine_gap: Option<f64>,
}

pub fn evolve(
    registry: &EngineRegistry,
    choice: EngineChoice,
    circuit: &Circuit,
    state: &AnyonState,
    tol: f64,
) -> CliResult<Evolved> {
    match choice {
        EngineChoice::Dense | EngineChoice::Fastpath => {
            let name = if choice == EngineChoice::Dense { "dense" } else { "fastpath" };
            let engine = registry.get(name)?;
            engine.supports(circuit)?;
            Ok(Evolved {
                state: engine.run(circuit, state)?,
                engine_gap: None,
            })
        }
        EngineChoice::Both => {
            let dense = registry.get("dense")?;
            let fast = registry.get("fastpath")?;
            let reference = dense.run(circuit, state)?;
            if let Err(e) = fast.supports(circuit) {
                eprintln!("warning: {e}; running the dense engine only");
                return Ok(Evolved {
                    state: reference,
                    engine_gap: None,
                });
            }
            let other = fast.run(circuit, state)?;
            let gap = reference.max_abs_diff(&other);
            if gap.is_nan() || gap > tol {
                return Err(CliError::invariant(format!(
                    "engines disagree: max |dense - fastpath| = {gap:e} exceeds {tol:e}"
                )));
            }
            Ok(Evolved {
                state: reference,
                engine_gap: Some(gap),
            })
        }
    }
}
