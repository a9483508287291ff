//! Approximate copying of an unknown qubit state. Exact copying of
//! nonorthogonal states is impossible for any linear machine, so the loop
//! uses the optimal universal cloner instead, realized by projecting the
//! input together with maximally mixed blanks onto the symmetric subspace:
//!
//!   rho_out = S (|psi><psi| x (I/2)^(K-1)) S / tr(...)
//!
//! Every reduced copy then equals eta |psi><psi| + (1 - eta) I/2 with
//! shrink factor eta = (K+2)/(3K) and copy fidelity (2K+1)/(3K), the known
//! optimum, independent of the input.

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::state::PureState;

/// Largest joint register the cloner will build (dense 2^8 matrices).
pub const MAX_CLONE_QUBITS: usize = 8;

/// Projector onto the permutation-symmetric subspace of an n-qubit register.
#[derive(Debug, Clone)]
pub struct SymmetricProjector {
    num_qubits: usize,
    matrix: DMatrix<Complex64>,
}

impl SymmetricProjector {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }
}

/// Build the symmetric projector, the average of all n! qubit-permutation
/// operators. Averaging permutations of basis states gives the entrywise
/// closed form S[j,i] = 1/binomial(n,w) when i and j share Hamming weight w,
/// and 0 otherwise, which is what gets built here.
pub fn symmetric_projector(n: usize) -> Result<SymmetricProjector> {
    if !(1..=MAX_CLONE_QUBITS).contains(&n) {
        return Err(Error::CloneCountOutOfRange(n));
    }
    let dim = 1usize << n;
    let mut binomial = vec![0f64; n + 1];
    for (w, b) in binomial.iter_mut().enumerate() {
        *b = choose(n, w);
    }
    let matrix = DMatrix::from_fn(dim, dim, |i, j| {
        let (wi, wj) = (i.count_ones() as usize, j.count_ones() as usize);
        if wi == wj {
            Complex64::new(1.0 / binomial[wi], 0.0)
        } else {
            Complex64::ZERO
        }
    });
    Ok(SymmetricProjector {
        num_qubits: n,
        matrix,
    })
}

fn choose(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Brute-force permutation average, kept as the independent reference for
/// `symmetric_projector` in tests. O(n! 2^n), fine for n <= 6.
pub fn permutation_average(n: usize) -> Result<DMatrix<Complex64>> {
    if !(1..=MAX_CLONE_QUBITS).contains(&n) {
        return Err(Error::CloneCountOutOfRange(n));
    }
    let dim = 1usize << n;
    let mut sum = DMatrix::from_element(dim, dim, Complex64::ZERO);
    let mut count = 0usize;
    for perm in (0..n).permutations(n) {
        for i in 0..dim {
            // perm maps input qubit q to output qubit perm[q].
            let mut j = 0usize;
            for (q, &p) in perm.iter().enumerate() {
                let bit = (i >> (n - 1 - q)) & 1;
                j |= bit << (n - 1 - p);
            }
            sum[(j, i)] += Complex64::ONE;
        }
        count += 1;
    }
    Ok(sum / Complex64::new(count as f64, 0.0))
}

/// Output of one cloning round: the joint K-qubit state, the K identical
/// reduced copies, and the source kept for simulation bookkeeping.
#[derive(Debug, Clone)]
pub struct CloneBatch {
    total_copies: usize,
    joint_state: DensityOperator,
    copies: Vec<DensityOperator>,
    source: PureState,
}

impl CloneBatch {
    pub fn total_copies(&self) -> usize {
        self.total_copies
    }

    pub fn joint_state(&self) -> &DensityOperator {
        &self.joint_state
    }

    pub fn copies(&self) -> &[DensityOperator] {
        &self.copies
    }

    pub fn copy(&self, index: usize) -> &DensityOperator {
        &self.copies[index]
    }

    pub fn source(&self) -> &PureState {
        &self.source
    }
}

/// Clone a single-qubit state into K approximate copies.
pub fn clone(input: &PureState, total_copies: usize) -> Result<CloneBatch> {
    if input.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "cloner input must be a single qubit, got {}",
            input.num_qubits()
        )));
    }
    if !(2..=MAX_CLONE_QUBITS).contains(&total_copies) {
        return Err(Error::CloneCountOutOfRange(total_copies));
    }
    let k = total_copies;
    let projector = symmetric_projector(k)?;

    // |psi><psi| x (I/2)^(K-1): the blank block is scalar, so the product
    // is the source projector spread over identity blocks.
    let source_rho = DensityOperator::from_pure(input);
    let blank_dim = 1usize << (k - 1);
    let scale = Complex64::new(1.0 / blank_dim as f64, 0.0);
    let dim = 1usize << k;
    let mut seeded = DMatrix::from_element(dim, dim, Complex64::ZERO);
    for a in 0..2 {
        for b in 0..2 {
            let v = source_rho.matrix()[(a, b)] * scale;
            if v == Complex64::ZERO {
                continue;
            }
            for r in 0..blank_dim {
                seeded[(a * blank_dim + r, b * blank_dim + r)] = v;
            }
        }
    }

    let s = projector.matrix();
    let projected = s * seeded * s;
    let trace = projected.trace().re;
    let joint_matrix = projected.map(|v| v / trace);
    let joint_state = DensityOperator::new(joint_matrix)?;

    let copies = (0..k)
        .map(|q| joint_state.partial_trace(&[q]))
        .collect::<Result<Vec<_>>>()?;

    Ok(CloneBatch {
        total_copies: k,
        joint_state,
        copies,
        source: input.clone(),
    })
}

/// Copy routing for one loop cycle: the first N copies feed the recognizer,
/// the next M feed the actuator, and the last one is the system output.
#[derive(Debug, Clone)]
pub struct CopySplit {
    pub recognizer: Vec<DensityOperator>,
    pub feedback: Vec<DensityOperator>,
    pub output: DensityOperator,
    pub recognizer_indices: Vec<usize>,
    pub feedback_indices: Vec<usize>,
    pub output_index: usize,
}

pub fn split_copies(batch: &CloneBatch, n_recognizer: usize, m_feedback: usize) -> Result<CopySplit> {
    let k = batch.total_copies();
    if n_recognizer < 1 || m_feedback < 1 || n_recognizer + m_feedback + 1 != k {
        return Err(Error::CopySplitMismatch {
            n: n_recognizer,
            m: m_feedback,
            k,
        });
    }
    let recognizer_indices: Vec<usize> = (0..n_recognizer).collect();
    let feedback_indices: Vec<usize> = (n_recognizer..n_recognizer + m_feedback).collect();
    let output_index = k - 1;
    Ok(CopySplit {
        recognizer: recognizer_indices.iter().map(|&i| batch.copies[i].clone()).collect(),
        feedback: feedback_indices.iter().map(|&i| batch.copies[i].clone()).collect(),
        output: batch.copies[output_index].clone(),
        recognizer_indices,
        feedback_indices,
        output_index,
    })
}

/// Inner-product mismatch |<psi|phi> - <psi|phi>^2| that any linear map
/// copying both states exactly would need to vanish. Strictly positive for
/// nonorthogonal, nonidentical pairs: exact cloning of unknown states is
/// impossible.
pub fn no_cloning_witness(psi: &PureState, phi: &PureState) -> Result<f64> {
    if psi.num_qubits() != 1 || phi.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(
            "no-cloning witness takes single-qubit states".into(),
        ));
    }
    let overlap = psi.inner(phi)?;
    Ok((overlap - overlap * overlap).norm())
}

/// Optimal per-copy fidelity of a 1 -> K universal cloner: (2K+1)/(3K).
pub fn optimal_copy_fidelity(total_copies: usize) -> f64 {
    let k = total_copies as f64;
    (2.0 * k + 1.0) / (3.0 * k)
}

/// Monte-Carlo estimate of the mean per-copy fidelity over Haar-random
/// inputs. Each sample runs on its own derived stream, so the estimate does
/// not depend on evaluation order.
pub fn monte_carlo_copy_fidelity(
    total_copies: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    let base = crate::rng::RngStream::from_seed(seed);
    let mut sum = 0.0;
    for i in 0..samples {
        let mut stream = base.derive(i as u64);
        let psi = stream.haar_state(1)?;
        let batch = clone(&psi, total_copies)?;
        let copy_index = stream.below(total_copies);
        sum += batch.copy(copy_index).fidelity_with_pure(&psi)?;
    }
    Ok(sum / samples as f64)
}

/// Bloch-vector shrink factor of a 1 -> K universal cloner: (K+2)/(3K).
pub fn shrink_factor(total_copies: usize) -> f64 {
    let k = total_copies as f64;
    (k + 2.0) / (3.0 * k)
}
