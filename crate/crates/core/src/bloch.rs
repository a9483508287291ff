use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::gates::Unitary;
use crate::state::PureState;

/// Real 3-vector (tr rho sigma_x, tr rho sigma_y, tr rho sigma_z) of a
/// single-qubit state. Up is the +z pole; pure states have unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            x: self.x * factor,
            y: self.y * factor,
            z: self.z * factor,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-12 {
            return Err(Error::DegenerateAxis);
        }
        Ok(self.scaled(1.0 / n))
    }
}

/// Pauli expectation values of a single-qubit density operator.
pub fn bloch_vector(rho: &DensityOperator) -> Result<BlochVector> {
    if rho.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch vector of a {}-qubit operator",
            rho.num_qubits()
        )));
    }
    let component = |sigma: &Unitary| (rho.matrix() * sigma.matrix()).trace().re;
    Ok(BlochVector {
        x: component(&Unitary::pauli_x()),
        y: component(&Unitary::pauli_y()),
        z: component(&Unitary::pauli_z()),
    })
}

impl DensityOperator {
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        bloch_vector(self)
    }
}

impl PureState {
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        bloch_vector(&DensityOperator::from_pure(self))
    }
}
