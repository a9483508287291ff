use nalgebra::DVector;
use num_complex::Complex64;

use crate::density::{embed_operator, DensityOperator};
use crate::error::{Error, Result};
use crate::indexing::TargetIndexer;
use crate::rng::RngStream;
use crate::state::{PureState, STRUCTURAL_TOL};

/// Result of a projective measurement: sampled outcome, renormalized
/// post-measurement state, and the outcome's Born probability.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub index: usize,
    pub collapsed: PureState,
    pub probability: f64,
}

/// Check that `basis` is a complete orthonormal basis of an n-qubit
/// sub-register.
pub fn check_orthonormal_basis(basis: &[PureState], num_qubits: usize) -> Result<()> {
    let expected = 1usize << num_qubits;
    if basis.len() != expected {
        return Err(Error::IncompleteMeasurementBasis {
            got: basis.len(),
            expected,
        });
    }
    check_orthonormal_set(basis)
}

/// Check pairwise orthonormality of an arbitrary set of equal-size states.
pub fn check_orthonormal_set(vectors: &[PureState]) -> Result<()> {
    let mut worst = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate().skip(i) {
            let overlap = u.inner(v)?;
            let expected = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((overlap.norm() - expected).abs());
        }
    }
    if worst > STRUCTURAL_TOL {
        return Err(Error::NotOrthonormal(worst));
    }
    Ok(())
}

/// Inner product of `bra` against the `targets` sub-register of `state`,
/// leaving an unnormalized residual vector over the remaining qubits
/// (ascending original order).
pub fn partial_project(
    state: &PureState,
    bra: &PureState,
    targets: &[usize],
) -> Result<DVector<Complex64>> {
    if bra.num_qubits() != targets.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit bra against {} target qubits",
            bra.num_qubits(),
            targets.len()
        )));
    }
    let ix = TargetIndexer::new(state.num_qubits(), targets)?;
    let amps = state.amplitudes();
    let bra_amps = bra.amplitudes();
    let mut residual = DVector::from_element(ix.rest_count(), Complex64::ZERO);
    for r in 0..ix.rest_count() {
        let mut acc = Complex64::ZERO;
        for s in 0..ix.sub_count() {
            acc += bra_amps[s].conj() * amps[ix.full_index(s, r)];
        }
        residual[r] = acc;
    }
    Ok(residual)
}

/// Born probabilities of measuring the `targets` sub-register in `basis`.
pub fn outcome_probabilities(
    state: &PureState,
    basis: &[PureState],
    targets: &[usize],
) -> Result<Vec<f64>> {
    check_orthonormal_basis(basis, targets.len())?;
    basis
        .iter()
        .map(|b| Ok(partial_project(state, b, targets)?.norm_squared()))
        .collect()
}

/// Projective measurement of the `targets` sub-register in an orthonormal
/// basis. The outcome is sampled by the Born rule; zero-probability outcomes
/// are never produced.
pub fn measure_projective(
    state: &PureState,
    basis: &[PureState],
    targets: &[usize],
    rng: &mut RngStream,
) -> Result<MeasurementOutcome> {
    let probabilities = outcome_probabilities(state, basis, targets)?;
    let index = rng.sample_discrete(&probabilities)?;
    let probability = probabilities[index];

    let residual = partial_project(state, &basis[index], targets)?;
    let scale = Complex64::new(1.0 / probability.sqrt(), 0.0);
    let ix = TargetIndexer::new(state.num_qubits(), targets)?;
    let sub_amps = basis[index].amplitudes();
    let mut collapsed = vec![Complex64::ZERO; state.dim()];
    for s in 0..ix.sub_count() {
        for r in 0..ix.rest_count() {
            collapsed[ix.full_index(s, r)] = sub_amps[s] * residual[r] * scale;
        }
    }
    Ok(MeasurementOutcome {
        index,
        collapsed: PureState::new(collapsed)?,
        probability,
    })
}

/// Single-shot projective measurement of one qubit of a density operator in
/// a two-element orthonormal basis. Returns the outcome index, the collapsed
/// operator, and the outcome probability.
pub fn measure_density_qubit(
    rho: &DensityOperator,
    qubit: usize,
    basis: &[PureState],
    rng: &mut RngStream,
) -> Result<(usize, DensityOperator, f64)> {
    check_orthonormal_basis(basis, 1)?;
    let projectors: Vec<_> = basis
        .iter()
        .map(|b| {
            let m = DensityOperator::from_pure(b);
            embed_operator(rho.num_qubits(), m.matrix(), &[qubit])
        })
        .collect::<Result<_>>()?;
    let probabilities: Vec<f64> = projectors
        .iter()
        .map(|p| (p * rho.matrix()).trace().re.max(0.0))
        .collect();
    let index = rng.sample_discrete(&probabilities)?;
    let probability = probabilities[index];
    let p = &projectors[index];
    let collapsed = (p * rho.matrix() * p).map(|v| v / probability);
    Ok((index, DensityOperator::new(collapsed)?, probability))
}
