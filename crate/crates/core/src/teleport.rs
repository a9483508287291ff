//! Teleportation of a single-qubit state from the sender (Alice, holding the
//! source S and one half A of a shared entangled pair) to the receiver (Bob,
//! holding the other half B), plus the downstream feedback processor that
//! copies the received state onto a control spin.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Unitary;
use crate::measure::partial_project;
use crate::rng::RngStream;
use crate::state::{fidelity, PureState};

/// The four Bell-basis measurement results carried over the classical
/// channel. Each maps to exactly one correction unitary on Bob's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellOutcome {
    PsiMinus,
    PsiPlus,
    PhiMinus,
    PhiPlus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PsiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PhiPlus,
    ];

    /// The two-qubit Bell state this outcome projects onto.
    pub fn bell_state(self) -> PureState {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let amps = match self {
            BellOutcome::PsiMinus => vec![Complex64::ZERO, h, -h, Complex64::ZERO],
            BellOutcome::PsiPlus => vec![Complex64::ZERO, h, h, Complex64::ZERO],
            BellOutcome::PhiMinus => vec![h, Complex64::ZERO, Complex64::ZERO, -h],
            BellOutcome::PhiPlus => vec![h, Complex64::ZERO, Complex64::ZERO, h],
        };
        PureState::new(amps).expect("static Bell state")
    }

    pub fn label(self) -> &'static str {
        match self {
            BellOutcome::PsiMinus => "PsiMinus",
            BellOutcome::PsiPlus => "PsiPlus",
            BellOutcome::PhiMinus => "PhiMinus",
            BellOutcome::PhiPlus => "PhiPlus",
        }
    }
}

impl std::fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Correction Bob applies for each outcome: nothing, sigma_z, sigma_x, or
/// sigma_y respectively.
pub fn correction_for(outcome: BellOutcome) -> Unitary {
    match outcome {
        BellOutcome::PsiMinus => Unitary::identity(1),
        BellOutcome::PsiPlus => Unitary::pauli_z(),
        BellOutcome::PhiMinus => Unitary::pauli_x(),
        BellOutcome::PhiPlus => Unitary::pauli_y(),
    }
}

/// Classical side channel between sender and receiver. Messages sent at
/// cycle t become available at cycle t + delay, in send order; each message
/// may be dropped at send time with the configured probability.
#[derive(Debug, Clone)]
pub struct ClassicalChannel {
    delay: u64,
    drop_probability: f64,
    now: u64,
    queue: VecDeque<(u64, BellOutcome)>,
}

impl ClassicalChannel {
    pub fn new(delay: u64, drop_probability: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&drop_probability) {
            return Err(Error::InvalidConfig(format!(
                "drop probability {drop_probability} outside [0, 1)"
            )));
        }
        Ok(Self {
            delay,
            drop_probability,
            now: 0,
            queue: VecDeque::new(),
        })
    }

    /// Lossless channel with no delay.
    pub fn ideal() -> Self {
        Self::new(0, 0.0).expect("valid parameters")
    }

    pub fn delay(&self) -> u64 {
        self.delay
    }

    pub fn now(&self) -> u64 {
        self.now
    }

    pub fn advance(&mut self) {
        self.now += 1;
    }

    /// Send a message stamped with the current cycle. Returns false when the
    /// drop probability fires; dropped messages are never delivered.
    pub fn send(&mut self, outcome: BellOutcome, rng: &mut RngStream) -> bool {
        if self.drop_probability > 0.0 && rng.bernoulli(self.drop_probability) {
            return false;
        }
        self.queue.push_back((self.now, outcome));
        true
    }

    /// Messages whose delivery time has been reached, in send order.
    pub fn take_due(&mut self) -> Vec<(u64, BellOutcome)> {
        let mut due = Vec::new();
        while let Some(&(sent, _)) = self.queue.front() {
            if sent + self.delay <= self.now {
                due.push(self.queue.pop_front().expect("front checked"));
            } else {
                break;
            }
        }
        due
    }
}

/// Outcome of one full teleportation round.
#[derive(Debug, Clone)]
pub struct TeleportReport {
    pub outcome: BellOutcome,
    pub outcome_probability: f64,
    pub bob_state: PureState,
    pub fidelity_to_input: f64,
    /// Channel cycle at which the sender measured.
    pub measured_at: u64,
    /// Channel cycle at which the outcome arrived, if it did.
    pub delivered_at: Option<u64>,
    /// False when the message was dropped and Bob's state stayed uncorrected.
    pub correction_applied: bool,
}

/// The shared entangled pair (|up,down> - |down,up>) / sqrt(2).
pub fn make_epr() -> PureState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    PureState::new(vec![Complex64::ZERO, h, -h, Complex64::ZERO]).expect("static state")
}

/// Joint state of source and entangled pair before the sender's
/// measurement, qubit order S, A, B.
pub fn compose_sab(psi_s: &PureState) -> Result<PureState> {
    if psi_s.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "source must be a single qubit, got {}",
            psi_s.num_qubits()
        )));
    }
    psi_s.tensor(&make_epr())
}

/// Born probabilities of the four Bell outcomes on qubits S, A.
pub fn bell_outcome_probabilities(state: &PureState) -> Result<[f64; 4]> {
    if state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "expected the 3-qubit S,A,B register, got {} qubits",
            state.num_qubits()
        )));
    }
    let mut probs = [0.0; 4];
    for (slot, outcome) in probs.iter_mut().zip(BellOutcome::ALL) {
        *slot = partial_project(state, &outcome.bell_state(), &[0, 1])?.norm_squared();
    }
    Ok(probs)
}

/// Bell measurement on qubits S, A of the composed register. Returns the
/// sampled outcome, Bob's conditional (renormalized) state, and the
/// outcome probability.
pub fn bell_measure(
    state: &PureState,
    rng: &mut RngStream,
) -> Result<(BellOutcome, PureState, f64)> {
    let probs = bell_outcome_probabilities(state)?;
    let index = rng.sample_discrete(&probs)?;
    let outcome = BellOutcome::ALL[index];
    let (bob, probability) = bell_branch(state, outcome)?;
    debug_assert!((probability - probs[index]).abs() < 1e-12);
    Ok((outcome, bob, probability))
}

/// Deterministic branch selection for tests and exhaustive checks: project
/// onto the requested outcome instead of sampling.
pub fn bell_measure_forced(
    state: &PureState,
    outcome: BellOutcome,
) -> Result<(PureState, f64)> {
    bell_branch(state, outcome)
}

fn bell_branch(state: &PureState, outcome: BellOutcome) -> Result<(PureState, f64)> {
    if state.num_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "expected the 3-qubit S,A,B register, got {} qubits",
            state.num_qubits()
        )));
    }
    let residual = partial_project(state, &outcome.bell_state(), &[0, 1])?;
    let probability = residual.norm_squared();
    if probability <= 0.0 {
        return Err(Error::NoOutcomeMass);
    }
    let scale = Complex64::new(1.0 / probability.sqrt(), 0.0);
    let bob = PureState::new(residual.iter().map(|a| a * scale).collect())?;
    Ok((bob, probability))
}

/// One full teleportation round through the given channel. With a nonzero
/// delay the correction waits for the outcome message; the report is issued
/// at delivery time. A dropped message leaves Bob's state uncorrected.
pub fn teleport(
    psi_s: &PureState,
    channel: &mut ClassicalChannel,
    rng: &mut RngStream,
) -> Result<TeleportReport> {
    let sab = compose_sab(psi_s)?;
    let (outcome, bob_raw, probability) = bell_measure(&sab, rng)?;
    let measured_at = channel.now();

    if !channel.send(outcome, rng) {
        let fidelity_to_input = fidelity(&bob_raw, psi_s)?;
        return Ok(TeleportReport {
            outcome,
            outcome_probability: probability,
            bob_state: bob_raw,
            fidelity_to_input,
            measured_at,
            delivered_at: None,
            correction_applied: false,
        });
    }

    let delivered_at = loop {
        if let Some(&(sent, _)) = channel.take_due().first() {
            debug_assert_eq!(sent, measured_at);
            break channel.now();
        }
        channel.advance();
    };

    let corrected = bob_raw
        .apply(&correction_for(outcome), &[0])?
        .canonical_phase()?;
    let fidelity_to_input = fidelity(&corrected, psi_s)?;
    Ok(TeleportReport {
        outcome,
        outcome_probability: probability,
        bob_state: corrected,
        fidelity_to_input,
        measured_at,
        delivered_at: Some(delivered_at),
        correction_applied: true,
    })
}

/// Teleportation with a forced Bell branch and an ideal channel; the
/// deterministic counterpart of `teleport` used by exhaustive tests.
pub fn teleport_forced(psi_s: &PureState, outcome: BellOutcome) -> Result<TeleportReport> {
    let sab = compose_sab(psi_s)?;
    let (bob_raw, probability) = bell_measure_forced(&sab, outcome)?;
    let corrected = bob_raw
        .apply(&correction_for(outcome), &[0])?
        .canonical_phase()?;
    let fidelity_to_input = fidelity(&corrected, psi_s)?;
    Ok(TeleportReport {
        outcome,
        outcome_probability: probability,
        bob_state: corrected,
        fidelity_to_input,
        measured_at: 0,
        delivered_at: Some(0),
        correction_applied: true,
    })
}

/// First feedback stage: adjoin a control spin prepared in |down> and apply
/// the flip-when-up CNOT from the received qubit onto it, entangling the
/// two. (a, b) becomes a|up,up> + b|down,down> in the B,C register.
pub fn feedback_step_entangle(psi_b: &PureState) -> Result<PureState> {
    if psi_b.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "feedback input must be a single qubit, got {}",
            psi_b.num_qubits()
        )));
    }
    psi_b
        .tensor(&PureState::ket_down())?
        .apply(&Unitary::cnot_flip_when_up(), &[0, 1])
}

/// Second feedback stage: flip the first spin exactly when the control spin
/// is up, leaving |down> x (a|up> + b|down>).
pub fn feedback_step_flip(state: &PureState) -> Result<PureState> {
    if state.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "feedback register must hold 2 qubits, got {}",
            state.num_qubits()
        )));
    }
    state.apply(&Unitary::cnot_flip_when_up(), &[1, 0])
}

/// Both feedback stages: entangle with the control spin, then flip
/// conditionally. The received superposition ends up on the control spin.
pub fn feedback_process(psi_b: &PureState) -> Result<PureState> {
    feedback_step_flip(&feedback_step_entangle(psi_b)?)
}
