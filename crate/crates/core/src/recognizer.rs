//! State recognition: each copy is described by coefficients in its own
//! orthonormal basis, the per-copy bases are merged into one extended
//! (possibly nonorthogonal) basis, every coefficient vector is zero-padded
//! into it, and each copy's Euclidean distance from the arithmetic-mean
//! coefficient vector gates the actuator on or off against a threshold.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{check_orthonormal_set, measure_projective};
use crate::rng::RngStream;
use crate::state::{PureState, STRUCTURAL_TOL};

/// Default overlap tolerance when merging duplicate basis vectors:
/// two vectors merge when |<u|v>| > 1 - DEFAULT_MERGE_TOLERANCE.
pub const DEFAULT_MERGE_TOLERANCE: f64 = 1e-6;

/// How the recognizer obtains each copy's description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecognitionMode {
    /// Read the true amplitudes from the simulation state.
    #[default]
    Oracle,
    /// One projective shot per copy in its description basis; the
    /// description collapses to the observed basis state.
    Measured,
}

/// On/off signal sent to the actuator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateSignal {
    On,
    Off,
}

impl std::fmt::Display for GateSignal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GateSignal::On => "On",
            GateSignal::Off => "Off",
        })
    }
}

/// A copy expressed in its own orthonormal basis: coefficients
/// beta_j = <p_j|psi> with the state phase-canonicalized first.
#[derive(Debug, Clone)]
pub struct CopyDescription {
    basis: Vec<PureState>,
    coefficients: Vec<Complex64>,
}

impl CopyDescription {
    pub fn basis(&self) -> &[PureState] {
        &self.basis
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }
}

/// Ordered union of the copies' bases with phase-equal duplicates merged.
/// Retained vectors may be mutually nonorthogonal.
#[derive(Debug, Clone)]
pub struct ExtendedBasis {
    vectors: Vec<PureState>,
    merge_tolerance: f64,
}

impl ExtendedBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[PureState] {
        &self.vectors
    }

    pub fn merge_tolerance(&self) -> f64 {
        self.merge_tolerance
    }
}

/// A copy's coefficients zero-padded onto the extended basis.
#[derive(Debug, Clone)]
pub struct ExpandedCopy {
    coefficients: Vec<Complex64>,
}

impl ExpandedCopy {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Componentwise arithmetic mean of the expanded copies. Deliberately not
/// renormalized.
#[derive(Debug, Clone)]
pub struct MeanState {
    coefficients: Vec<Complex64>,
}

impl MeanState {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Recognition verdict for one copy set.
#[derive(Debug, Clone)]
pub struct RecognitionReport {
    pub distances: Vec<f64>,
    pub max_distance: f64,
    pub threshold: f64,
    pub signal: GateSignal,
}

/// The computational basis of an n-qubit register.
pub fn computational_basis(num_qubits: usize) -> Vec<PureState> {
    (0..1usize << num_qubits)
        .map(|i| PureState::basis_state(num_qubits, i).expect("in-range basis state"))
        .collect()
}

/// Describe a copy in an orthonormal basis that spans it.
pub fn describe_copy(state: &PureState, basis: &[PureState]) -> Result<CopyDescription> {
    if basis.is_empty() {
        return Err(Error::InvalidConfig("empty description basis".into()));
    }
    check_orthonormal_set(basis)?;
    let canonical = state.canonical_phase()?;
    let coefficients: Vec<Complex64> = basis
        .iter()
        .map(|p| p.inner(&canonical))
        .collect::<Result<_>>()?;
    let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    let residual = (canonical.norm_sqr() - captured).abs();
    if residual > STRUCTURAL_TOL {
        return Err(Error::BasisDoesNotSpan(residual));
    }
    Ok(CopyDescription {
        basis: basis.to_vec(),
        coefficients,
    })
}

/// Description resulting from a single projective shot: the indicator
/// vector of the observed basis state.
pub fn describe_from_shot(outcome: usize, basis: &[PureState]) -> Result<CopyDescription> {
    if outcome >= basis.len() {
        return Err(Error::QubitOutOfRange {
            index: outcome,
            num_qubits: basis.len(),
        });
    }
    check_orthonormal_set(basis)?;
    let mut coefficients = vec![Complex64::ZERO; basis.len()];
    coefficients[outcome] = Complex64::ONE;
    Ok(CopyDescription {
        basis: basis.to_vec(),
        coefficients,
    })
}

/// Merge the copies' bases into the extended basis: ordered union, first
/// occurrence kept, vectors equal up to global phase within the tolerance
/// treated as duplicates.
pub fn extend_basis(copies: &[CopyDescription], merge_tolerance: f64) -> Result<ExtendedBasis> {
    if copies.is_empty() {
        return Err(Error::InvalidConfig("no copies to recognize".into()));
    }
    let mut vectors: Vec<PureState> = Vec::new();
    for copy in copies {
        for candidate in &copy.basis {
            let duplicate = vectors
                .iter()
                .map(|kept| Ok(kept.inner(candidate)?.norm()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .any(|overlap| overlap > 1.0 - merge_tolerance);
            if !duplicate {
                vectors.push(candidate.clone());
            }
        }
    }
    Ok(ExtendedBasis {
        vectors,
        merge_tolerance,
    })
}

/// Zero-pad a copy's coefficients onto the extended basis: slot k receives
/// beta_j when extended vector k merged from basis vector j, zero otherwise.
pub fn expand_copy(copy: &CopyDescription, extended: &ExtendedBasis) -> Result<ExpandedCopy> {
    let mut coefficients = vec![Complex64::ZERO; extended.len()];
    let mut claimed = vec![usize::MAX; extended.len()];
    for (j, p) in copy.basis.iter().enumerate() {
        let slot = extended
            .vectors
            .iter()
            .position(|v| {
                v.inner(p)
                    .map(|o| o.norm() > 1.0 - extended.merge_tolerance)
                    .unwrap_or(false)
            })
            .ok_or(Error::UnmatchedBasisVector(j))?;
        if claimed[slot] != usize::MAX {
            return Err(Error::AmbiguousBasisMerge(claimed[slot], j));
        }
        claimed[slot] = j;
        coefficients[slot] = copy.coefficients[j];
    }
    Ok(ExpandedCopy { coefficients })
}

/// Componentwise mean over N expanded copies, divisor N.
pub fn mean_state(expanded: &[ExpandedCopy]) -> Result<MeanState> {
    let first = expanded.first().ok_or(Error::InvalidConfig("no copies to average".into()))?;
    let len = first.len();
    for copy in expanded {
        if copy.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "expanded copies of lengths {} and {}",
                len,
                copy.len()
            )));
        }
    }
    let n = expanded.len() as f64;
    let coefficients = (0..len)
        .map(|k| {
            expanded.iter().map(|c| c.coefficients[k]).sum::<Complex64>() / n
        })
        .collect();
    Ok(MeanState { coefficients })
}

/// Euclidean distance between a copy's expanded coefficients and the mean
/// coefficients. Zero exactly when the vectors coincide.
pub fn state_distance(copy: &ExpandedCopy, mean: &MeanState) -> Result<f64> {
    if copy.len() != mean.len() {
        return Err(Error::DimensionMismatch(format!(
            "copy of length {} against mean of length {}",
            copy.len(),
            mean.len()
        )));
    }
    let sum: f64 = copy
        .coefficients
        .iter()
        .zip(&mean.coefficients)
        .map(|(b, a)| (b - a).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Run the recognition pipeline over pre-built descriptions.
pub fn recognize(
    descriptions: &[CopyDescription],
    threshold: f64,
    merge_tolerance: f64,
) -> Result<RecognitionReport> {
    if threshold <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "state-distance threshold {threshold} must be positive"
        )));
    }
    let extended = extend_basis(descriptions, merge_tolerance)?;
    let expanded: Vec<ExpandedCopy> = descriptions
        .iter()
        .map(|d| expand_copy(d, &extended))
        .collect::<Result<_>>()?;
    let mean = mean_state(&expanded)?;
    let distances: Vec<f64> = expanded
        .iter()
        .map(|c| state_distance(c, &mean))
        .collect::<Result<_>>()?;
    let max_distance = distances.iter().fold(0.0f64, |acc, &d| acc.max(d));
    let signal = if distances.iter().all(|&d| d < threshold) {
        GateSignal::On
    } else {
        GateSignal::Off
    };
    Ok(RecognitionReport {
        distances,
        max_distance,
        threshold,
        signal,
    })
}

/// Full gate: describe the copies in the given bases (one per copy) and
/// recognize them. Oracle mode reads true amplitudes; measured mode takes
/// one projective shot per copy.
pub fn gate_signal_with_bases(
    copies: &[PureState],
    bases: &[Vec<PureState>],
    threshold: f64,
    mode: RecognitionMode,
    rng: &mut RngStream,
) -> Result<RecognitionReport> {
    if copies.is_empty() {
        return Err(Error::InvalidConfig("no copies to recognize".into()));
    }
    if bases.len() != copies.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} bases for {} copies",
            bases.len(),
            copies.len()
        )));
    }
    let descriptions: Vec<CopyDescription> = copies
        .iter()
        .zip(bases)
        .map(|(copy, basis)| match mode {
            RecognitionMode::Oracle => describe_copy(copy, basis),
            RecognitionMode::Measured => {
                let targets: Vec<usize> = (0..copy.num_qubits()).collect();
                let shot = measure_projective(copy, basis, &targets, rng)?;
                describe_from_shot(shot.index, basis)
            }
        })
        .collect::<Result<_>>()?;
    recognize(&descriptions, threshold, DEFAULT_MERGE_TOLERANCE)
}

/// `gate_signal_with_bases` with the computational basis for every copy.
pub fn gate_signal(
    copies: &[PureState],
    threshold: f64,
    mode: RecognitionMode,
    rng: &mut RngStream,
) -> Result<RecognitionReport> {
    let bases: Vec<Vec<PureState>> = copies
        .iter()
        .map(|c| computational_basis(c.num_qubits()))
        .collect();
    gate_signal_with_bases(copies, &bases, threshold, mode, rng)
}
