use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Unitary;
use crate::rng::RngStream;
use crate::state::PureState;

/// Per-cycle disturbance applied to the controlled object. Depolarizing
/// noise is unraveled trajectory-style: with probability p a uniformly
/// random Pauli (identity included) hits the qubit, which averages to
/// rho -> (1-p) rho + p I/2 while keeping the object state pure.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum NoiseModel {
    #[default]
    None,
    Depolarizing {
        p: f64,
    },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::None => Ok(()),
            NoiseModel::Depolarizing { p } => {
                if (0.0..1.0).contains(p) {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig(format!(
                        "depolarizing probability {p} outside [0, 1)"
                    )))
                }
            }
        }
    }

    pub fn apply(&self, state: &PureState, rng: &mut RngStream) -> Result<PureState> {
        match self {
            NoiseModel::None => Ok(state.clone()),
            NoiseModel::Depolarizing { p } => {
                if state.num_qubits() != 1 {
                    return Err(Error::DimensionMismatch(format!(
                        "depolarizing noise drives a single qubit, got {}",
                        state.num_qubits()
                    )));
                }
                if !rng.bernoulli(*p) {
                    return Ok(state.clone());
                }
                match rng.below(4) {
                    0 => Ok(state.clone()),
                    1 => state.apply(&Unitary::pauli_x(), &[0]),
                    2 => state.apply(&Unitary::pauli_y(), &[0]),
                    _ => state.apply(&Unitary::pauli_z(), &[0]),
                }
            }
        }
    }
}
