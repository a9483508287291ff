//! Drive-signal synthesis: rotate the feedback copy's Bloch direction onto
//! the target direction. The cloner preserves Bloch direction exactly, so
//! in the absence of noise this rotation carries the underlying pure object
//! state onto the target.

use crate::bloch::BlochVector;
use crate::density::DensityOperator;
use crate::error::{Error, Result};
use crate::gates::Unitary;
use crate::state::PureState;

/// Feedback copies with Bloch norm at or below this carry no usable
/// direction; the actuator idles and flags the cycle.
pub const DIRECTION_THRESHOLD: f64 = 1e-9;

/// Alignment tolerance on the sine of the angle between directions.
const ALIGNMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ActuatorAction {
    pub unitary: Unitary,
    /// True when the feedback copy was directionless (maximally mixed) and
    /// the identity was returned as a fallback.
    pub degenerate: bool,
}

/// Rotation taking the feedback copy's Bloch direction onto the target's.
/// Aligned directions yield the identity; anti-aligned directions rotate by
/// pi about a deterministic axis orthogonal to the target.
pub fn actuator_update(feedback_copy: &DensityOperator, target: &PureState) -> Result<ActuatorAction> {
    if target.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "target must be a single qubit, got {}",
            target.num_qubits()
        )));
    }
    let feedback = feedback_copy.bloch_vector()?;
    if feedback.norm() <= DIRECTION_THRESHOLD {
        return Ok(ActuatorAction {
            unitary: Unitary::identity(1),
            degenerate: true,
        });
    }
    let from = feedback.normalized()?;
    let to = target.bloch_vector()?.normalized()?;

    let cross = from.cross(&to);
    let sin = cross.norm();
    let cos = from.dot(&to);

    if sin <= ALIGNMENT_TOL && cos > 0.0 {
        return Ok(ActuatorAction {
            unitary: Unitary::identity(1),
            degenerate: false,
        });
    }
    if sin <= ALIGNMENT_TOL && cos < 0.0 {
        // Anti-aligned: any axis orthogonal to the target works; take the
        // first of x, y not parallel to it, projected into its orthogonal
        // plane.
        let candidates = [
            BlochVector { x: 1.0, y: 0.0, z: 0.0 },
            BlochVector { x: 0.0, y: 1.0, z: 0.0 },
        ];
        let pick = candidates
            .into_iter()
            .find(|u| u.dot(&to).abs() < 1.0 - 1e-9)
            .expect("at most one axis is parallel to the target");
        let axis = BlochVector {
            x: pick.x - pick.dot(&to) * to.x,
            y: pick.y - pick.dot(&to) * to.y,
            z: pick.z - pick.dot(&to) * to.z,
        }
        .normalized()?;
        let unitary = Unitary::rotation_about_axis([axis.x, axis.y, axis.z], std::f64::consts::PI)?;
        return Ok(ActuatorAction {
            unitary,
            degenerate: false,
        });
    }

    let axis = cross.normalized()?;
    let angle = sin.atan2(cos);
    let unitary = Unitary::rotation_about_axis([axis.x, axis.y, axis.z], angle)?;
    Ok(ActuatorAction {
        unitary,
        degenerate: false,
    })
}
