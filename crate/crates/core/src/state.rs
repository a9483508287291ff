use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::Unitary;
use crate::indexing::TargetIndexer;

/// Register cap. Dense amplitudes over 2^12 entries cover every scenario this
/// crate runs while keeping all operations exact and simple.
pub const MAX_QUBITS: usize = 12;

/// Tolerance for structural invariants (normalization, orthonormality,
/// Hermiticity, unitarity).
pub const STRUCTURAL_TOL: f64 = 1e-9;

/// Pure state of an n-qubit register.
///
/// Amplitudes are indexed most-significant-qubit-first, with the basis
/// symbols up = 0 and down = 1. The two-qubit singlet therefore reads
/// `(0, 1/sqrt(2), -1/sqrt(2), 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Build a state from amplitudes. The length must be a power of two and
    /// the vector normalized within `STRUCTURAL_TOL`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::BadAmplitudeCount(dim));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits == 0 {
            return Err(Error::BadAmplitudeCount(dim));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(num_qubits));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self {
            num_qubits,
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    pub fn single_qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    /// Basis state |index> of an n-qubit register.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(num_qubits));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::QubitOutOfRange {
                index,
                num_qubits,
            });
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Self::new(amplitudes)
    }

    /// |up> = (1, 0).
    pub fn ket_up() -> Self {
        Self::basis_state(1, 0).expect("static 1-qubit state")
    }

    /// |down> = (0, 1).
    pub fn ket_down() -> Self {
        Self::basis_state(1, 1).expect("static 1-qubit state")
    }

    /// (|up> + |down>) / sqrt(2).
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(vec![h, h]).expect("static 1-qubit state")
    }

    /// (|up> - |down>) / sqrt(2).
    pub fn minus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(vec![h, -h]).expect("static 1-qubit state")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "inner product between {}- and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Tensor product; `self`'s qubits become the most significant block.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(num_qubits));
        }
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in self.amplitudes.iter() {
            for b in other.amplitudes.iter() {
                amplitudes.push(a * b);
            }
        }
        Self::new(amplitudes)
    }

    /// Apply `unitary` to the listed target qubits, identity elsewhere.
    /// `targets[0]` is the most significant qubit of the gate's sub-register.
    pub fn apply(&self, unitary: &Unitary, targets: &[usize]) -> Result<Self> {
        if unitary.dim() != 1 << targets.len() {
            return Err(Error::DimensionMismatch(format!(
                "gate of dimension {} on {} target qubits",
                unitary.dim(),
                targets.len()
            )));
        }
        let ix = TargetIndexer::new(self.num_qubits, targets)?;
        let m = unitary.matrix();
        let sub = ix.sub_count();
        let mut out = DVector::from_element(self.dim(), Complex64::ZERO);
        let mut column = vec![Complex64::ZERO; sub];
        for rest in 0..ix.rest_count() {
            for (s, slot) in column.iter_mut().enumerate() {
                *slot = self.amplitudes[ix.full_index(s, rest)];
            }
            for row in 0..sub {
                let mut acc = Complex64::ZERO;
                for (s, &amp) in column.iter().enumerate() {
                    acc += m[(row, s)] * amp;
                }
                out[ix.full_index(row, rest)] = acc;
            }
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    /// Rotate the global phase so the first amplitude with modulus above
    /// `STRUCTURAL_TOL` becomes real and nonnegative.
    pub fn canonical_phase(&self) -> Result<Self> {
        let pivot = self
            .amplitudes
            .iter()
            .find(|a| a.norm() > STRUCTURAL_TOL)
            .ok_or(Error::ZeroVector)?;
        let phase = pivot.conj() / pivot.norm();
        let amplitudes = self.amplitudes.map(|a| a * phase);
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes,
        })
    }
}

/// Squared overlap |<a|b>|^2 between two pure states.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}
