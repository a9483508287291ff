use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::Unitary;
use crate::indexing::TargetIndexer;
use crate::state::{PureState, MAX_QUBITS, STRUCTURAL_TOL};

/// Density operator of an n-qubit register: Hermitian, unit trace, positive
/// semidefinite. Construction checks Hermiticity and trace; positivity is a
/// consequence of how operators arise here (projections, reductions,
/// mixtures) and is exposed for verification via `min_eigenvalue`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || matrix.ncols() != dim || !dim.is_power_of_two() {
            return Err(Error::DimensionMismatch(format!(
                "density operator must be square with power-of-two dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(num_qubits));
        }
        let mut herm_dev = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                herm_dev = herm_dev.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if herm_dev > STRUCTURAL_TOL {
            return Err(Error::NotHermitian(herm_dev));
        }
        let trace: Complex64 = matrix.trace();
        if (trace.re - 1.0).abs() > STRUCTURAL_TOL || trace.im.abs() > STRUCTURAL_TOL {
            return Err(Error::TraceNotOne(trace.re));
        }
        Ok(Self { num_qubits, matrix })
    }

    /// |psi><psi|.
    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        let dim = state.dim();
        let matrix = DMatrix::from_fn(dim, dim, |i, j| amps[i] * amps[j].conj());
        Self {
            num_qubits: state.num_qubits(),
            matrix,
        }
    }

    /// I / 2^n.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let matrix = DMatrix::from_diagonal_element(
            dim,
            dim,
            Complex64::new(1.0 / dim as f64, 0.0),
        );
        Self { num_qubits, matrix }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// tr(rho^2), 1 exactly for pure states.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Smallest eigenvalue; >= -1e-9 for a physical operator.
    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |acc, &v| acc.min(v))
    }

    /// <a|rho|a> for a pure probe state.
    pub fn fidelity_with_pure(&self, a: &PureState) -> Result<f64> {
        if a.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "fidelity between {}-qubit operator and {}-qubit state",
                self.num_qubits,
                a.num_qubits()
            )));
        }
        let v = a.amplitudes();
        Ok((v.adjoint() * &self.matrix * v)[(0, 0)].re)
    }

    /// Conjugate by a unitary on the listed target qubits.
    pub fn conjugate(&self, unitary: &Unitary, targets: &[usize]) -> Result<Self> {
        let full = embed_operator(self.num_qubits, unitary.matrix(), targets)?;
        let matrix = &full * &self.matrix * full.adjoint();
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix,
        })
    }

    /// Trace out all qubits except `keep`. Output qubit `j` is input qubit
    /// `keep[j]`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let ix = TargetIndexer::new(self.num_qubits, keep)?;
        let sub = ix.sub_count();
        let mut out = DMatrix::from_element(sub, sub, Complex64::ZERO);
        for s in 0..sub {
            for t in 0..sub {
                let mut acc = Complex64::ZERO;
                for r in 0..ix.rest_count() {
                    acc += self.matrix[(ix.full_index(s, r), ix.full_index(t, r))];
                }
                out[(s, t)] = acc;
            }
        }
        Ok(Self {
            num_qubits: keep.len(),
            matrix: out,
        })
    }

    /// Relabel qubits: output qubit `perm[i]` is input qubit `i`. `perm`
    /// must be a bijection on `0..n`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} on {} qubits",
                perm.len(),
                self.num_qubits
            )));
        }
        let mut seen = vec![false; self.num_qubits];
        for &p in perm {
            if p >= self.num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: p,
                    num_qubits: self.num_qubits,
                });
            }
            if seen[p] {
                return Err(Error::DuplicateQubit(p));
            }
            seen[p] = true;
        }
        let n = self.num_qubits;
        let dim = self.dim();
        let map = |i: usize| -> usize {
            let mut j = 0usize;
            for (q, &p) in perm.iter().enumerate() {
                let bit = (i >> (n - 1 - q)) & 1;
                j |= bit << (n - 1 - p);
            }
            j
        };
        let remap: Vec<usize> = (0..dim).map(map).collect();
        let mut out = DMatrix::from_element(dim, dim, Complex64::ZERO);
        for i in 0..dim {
            for j in 0..dim {
                out[(remap[i], remap[j])] = self.matrix[(i, j)];
            }
        }
        Ok(Self {
            num_qubits: n,
            matrix: out,
        })
    }
}

impl PureState {
    /// Reduced state over `keep`, tracing out every other qubit.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let ix = TargetIndexer::new(self.num_qubits(), keep)?;
        let sub = ix.sub_count();
        let amps = self.amplitudes();
        let mut out = DMatrix::from_element(sub, sub, Complex64::ZERO);
        for s in 0..sub {
            for t in 0..sub {
                let mut acc = Complex64::ZERO;
                for r in 0..ix.rest_count() {
                    acc += amps[ix.full_index(s, r)] * amps[ix.full_index(t, r)].conj();
                }
                out[(s, t)] = acc;
            }
        }
        DensityOperator::new(out)
    }
}

/// Embed an operator acting on `targets` into the full register, identity on
/// the rest.
pub(crate) fn embed_operator(
    num_qubits: usize,
    op: &DMatrix<Complex64>,
    targets: &[usize],
) -> Result<DMatrix<Complex64>> {
    if op.nrows() != 1 << targets.len() || op.ncols() != op.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {}x{} on {} target qubits",
            op.nrows(),
            op.ncols(),
            targets.len()
        )));
    }
    let ix = TargetIndexer::new(num_qubits, targets)?;
    let dim = 1usize << num_qubits;
    let mut out = DMatrix::from_element(dim, dim, Complex64::ZERO);
    for s in 0..ix.sub_count() {
        for t in 0..ix.sub_count() {
            let v = op[(s, t)];
            if v == Complex64::ZERO {
                continue;
            }
            for r in 0..ix.rest_count() {
                out[(ix.full_index(s, r), ix.full_index(t, r))] = v;
            }
        }
    }
    Ok(out)
}
