use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::STRUCTURAL_TOL;

/// Unitary operator on a small register, stored dense.
#[derive(Debug, Clone)]
pub struct Unitary {
    dim: usize,
    matrix: DMatrix<Complex64>,
}

impl Unitary {
    /// Validate and wrap a matrix. The dimension must be a power of two and
    /// U\u{2020}U must equal the identity entrywise within `STRUCTURAL_TOL`.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || matrix.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square with power-of-two dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let gram = matrix.adjoint() * &matrix;
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((gram[(i, j)] - expected).norm());
            }
        }
        if worst > STRUCTURAL_TOL {
            return Err(Error::NotUnitary(worst));
        }
        Ok(Self { dim, matrix })
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self {
            dim,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_rows_2x2([
            [Complex64::ZERO, Complex64::ONE],
            [Complex64::ONE, Complex64::ZERO],
        ])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows_2x2([
            [Complex64::ZERO, -Complex64::I],
            [Complex64::I, Complex64::ZERO],
        ])
    }

    pub fn pauli_z() -> Self {
        Self::from_rows_2x2([
            [Complex64::ONE, Complex64::ZERO],
            [Complex64::ZERO, -Complex64::ONE],
        ])
    }

    /// Two-qubit gate that flips the second (target) qubit when the first
    /// (control) qubit is up. Sub-register order: control, target.
    pub fn cnot_flip_when_up() -> Self {
        let mut m = DMatrix::from_element(4, 4, Complex64::ZERO);
        // |up,up> <-> |up,down>; the down-control block is identity.
        m[(1, 0)] = Complex64::ONE;
        m[(0, 1)] = Complex64::ONE;
        m[(2, 2)] = Complex64::ONE;
        m[(3, 3)] = Complex64::ONE;
        Self { dim: 4, matrix: m }
    }

    /// Single-qubit rotation by `angle` about the given Bloch axis:
    /// cos(angle/2) I - i sin(angle/2) (axis . sigma).
    pub fn rotation_about_axis(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if norm < 1e-12 {
            return Err(Error::DegenerateAxis);
        }
        let (x, y, z) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
        let c = Complex64::new((angle / 2.0).cos(), 0.0);
        let s = (angle / 2.0).sin();
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                c - Complex64::new(0.0, s * z),
                Complex64::new(-s * y, -s * x),
                Complex64::new(s * y, -s * x),
                c + Complex64::new(0.0, s * z),
            ],
        );
        Ok(Self { dim: 2, matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.adjoint(),
        }
    }

    fn from_rows_2x2(rows: [[Complex64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            matrix: DMatrix::from_row_slice(2, 2, &[rows[0][0], rows[0][1], rows[1][0], rows[1][1]]),
        }
    }
}
