//! Closed-loop scenario drivers. Each cycle disturbs the object, carries its
//! output through the configured feedback path (teleportation or cloning +
//! recognition), and lets the actuator steer the object toward the target.

use std::collections::VecDeque;

use crate::actuator::actuator_update;
use crate::cloner::{clone, split_copies};
use crate::config::{LoopConfig, Scenario};
use crate::error::{Error, Result};
use crate::measure::measure_density_qubit;
use crate::recognizer::{
    computational_basis, describe_copy, describe_from_shot, recognize, CopyDescription,
    GateSignal, RecognitionMode, DEFAULT_MERGE_TOLERANCE,
};
use crate::rng::RngStream;
use crate::state::{fidelity, PureState};
use crate::teleport::{bell_measure, compose_sab, correction_for, feedback_process, ClassicalChannel};
use crate::trajectory::TrajectoryRecord;

/// Run the scenario named in the config.
pub fn run_scenario(config: &LoopConfig) -> Result<Vec<TrajectoryRecord>> {
    match config.scenario {
        Scenario::Teleport => run_teleport_loop(config),
        Scenario::Clone => run_clone_loop(config),
    }
}

/// Distant feedback loop: each cycle the object's output state is teleported
/// to the receiver through the classical channel, pushed through the
/// feedback processor, and the actuator rotation derived from the control
/// spin is applied to the object once the outcome message arrives.
pub fn run_teleport_loop(config: &LoopConfig) -> Result<Vec<TrajectoryRecord>> {
    config.validate()?;
    if config.scenario != Scenario::Teleport {
        return Err(Error::InvalidConfig(format!(
            "expected a teleport scenario, got {}",
            config.scenario
        )));
    }
    let channel_config = config.channel_or_default();
    let mut channel = ClassicalChannel::new(channel_config.delay, channel_config.drop_probability)?;
    let mut rng = RngStream::from_seed(config.resolved_seed());
    let target = config.target_state()?;
    let mut object = config.initial_state()?;

    // Receiver-side qubits waiting for their outcome message, keyed by the
    // channel cycle of the measurement.
    let mut pending: VecDeque<(u64, PureState)> = VecDeque::new();
    let mut records = Vec::with_capacity(config.cycles as usize);

    for cycle in 1..=config.cycles {
        channel.advance();
        object = config.noise.apply(&object, &mut rng)?;

        // The object's output is consumed by the sender's measurement; the
        // receiver holds the conditional state until the message lands.
        let sab = compose_sab(&object)?;
        let (outcome, bob_raw, _probability) = bell_measure(&sab, &mut rng)?;
        if channel.send(outcome, &mut rng) {
            pending.push_back((channel.now(), bob_raw));
        }

        let mut actuator_applied = false;
        for (sent_at, delivered_outcome) in channel.take_due() {
            // Entries older than this message belong to dropped rounds.
            while pending.front().is_some_and(|(t, _)| *t < sent_at) {
                pending.pop_front();
            }
            let Some((_, held)) = pending.pop_front() else {
                continue;
            };
            let corrected = held
                .apply(&correction_for(delivered_outcome), &[0])?
                .canonical_phase()?;
            let processed = feedback_process(&corrected)?;
            let control_spin = processed.partial_trace(&[1])?;
            let action = actuator_update(&control_spin, &target)?;
            if !action.degenerate {
                object = object.apply(&action.unitary, &[0])?;
                actuator_applied = true;
            }
        }

        records.push(TrajectoryRecord {
            cycle,
            fidelity_to_target: fidelity(&object, &target)?,
            bell_outcome: Some(outcome),
            recognizer_max_distance: None,
            gate_signal: None,
            actuator_applied,
        });
    }
    Ok(records)
}

/// Recognition-gated feedback loop: each cycle the object is cloned into
/// N + M + 1 copies; N go to the recognizer, and only an On verdict lets the
/// actuator use a feedback copy to steer the object.
pub fn run_clone_loop(config: &LoopConfig) -> Result<Vec<TrajectoryRecord>> {
    config.validate()?;
    if config.scenario != Scenario::Clone {
        return Err(Error::InvalidConfig(format!(
            "expected a clone scenario, got {}",
            config.scenario
        )));
    }
    let cloner = config.cloner.expect("validated clone config");
    let recognizer = config.recognizer.clone().expect("validated clone config");
    let total_copies = cloner.total_copies();

    let bases: Vec<Vec<PureState>> = match &recognizer.bases {
        Some(pair_lists) => pair_lists
            .iter()
            .map(|pair_list| {
                pair_list
                    .iter()
                    .map(|p| p.to_state())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?,
        None => (0..cloner.n).map(|_| computational_basis(1)).collect(),
    };

    let mut rng = RngStream::from_seed(config.resolved_seed());
    let target = config.target_state()?;
    let mut object = config.initial_state()?;
    let mut records = Vec::with_capacity(config.cycles as usize);

    for cycle in 1..=config.cycles {
        object = config.noise.apply(&object, &mut rng)?;

        let batch = clone(&object, total_copies)?;
        let split = split_copies(&batch, cloner.n, cloner.m)?;

        let descriptions: Vec<CopyDescription> = match recognizer.mode {
            RecognitionMode::Oracle => bases
                .iter()
                .map(|basis| describe_copy(&object, basis))
                .collect::<Result<_>>()?,
            RecognitionMode::Measured => {
                // Shots collapse the joint state sequentially, so the
                // copies' mutual correlations survive into the outcomes.
                let mut joint = batch.joint_state().clone();
                let mut descriptions = Vec::with_capacity(cloner.n);
                for (&qubit, basis) in split.recognizer_indices.iter().zip(&bases) {
                    let (outcome, collapsed, _p) =
                        measure_density_qubit(&joint, qubit, basis, &mut rng)?;
                    joint = collapsed;
                    descriptions.push(describe_from_shot(outcome, basis)?);
                }
                descriptions
            }
        };

        let report = recognize(&descriptions, recognizer.d0, DEFAULT_MERGE_TOLERANCE)?;
        let mut actuator_applied = false;
        if report.signal == GateSignal::On {
            let action = actuator_update(&split.feedback[0], &target)?;
            if !action.degenerate {
                object = object.apply(&action.unitary, &[0])?;
                actuator_applied = true;
            }
        }

        records.push(TrajectoryRecord {
            cycle,
            fidelity_to_target: fidelity(&object, &target)?,
            bell_outcome: None,
            recognizer_max_distance: Some(report.max_distance),
            gate_signal: Some(report.signal),
            actuator_applied,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AmplitudePair, ChannelConfig, ClonerConfig, RecognizerConfig};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn up_target() -> AmplitudePair {
        AmplitudePair {
            alpha: c(1.0, 0.0),
            beta: c(0.0, 0.0),
        }
    }

    fn teleport_config() -> LoopConfig {
        LoopConfig {
            scenario: Scenario::Teleport,
            initial_alpha: c(0.6, 0.0),
            initial_beta: c(0.8, 0.0),
            target: up_target(),
            cycles: 5,
            seed: Some(11),
            noise: Default::default(),
            channel: Some(ChannelConfig::default()),
            cloner: None,
            recognizer: None,
        }
    }

    fn clone_config() -> LoopConfig {
        LoopConfig {
            scenario: Scenario::Clone,
            initial_alpha: c(0.6, 0.0),
            initial_beta: c(0.8, 0.0),
            target: up_target(),
            cycles: 5,
            seed: Some(11),
            noise: Default::default(),
            channel: None,
            cloner: Some(ClonerConfig { n: 2, m: 1 }),
            recognizer: Some(RecognizerConfig {
                d0: 0.1,
                mode: RecognitionMode::Oracle,
                bases: None,
            }),
        }
    }

    #[test]
    fn noiseless_teleport_loop_converges_in_one_cycle() {
        let records = run_teleport_loop(&teleport_config()).unwrap();
        assert_eq!(records.len(), 5);
        for r in &records {
            assert_abs_diff_eq!(r.fidelity_to_target, 1.0, epsilon = 1e-9);
            assert!(r.actuator_applied);
            assert!(r.bell_outcome.is_some());
        }
    }

    #[test]
    fn teleport_loop_with_delay_actuates_after_the_delay() {
        let mut config = teleport_config();
        config.channel = Some(ChannelConfig {
            delay: 2,
            drop_probability: 0.0,
        });
        config.cycles = 6;
        let records = run_teleport_loop(&config).unwrap();
        // No delivery before cycle 1 + delay; the first delivered
        // correction lands the object exactly on target.
        assert!(!records[0].actuator_applied);
        assert!(!records[1].actuator_applied);
        assert!(records[2].actuator_applied);
        assert!(records[2].fidelity_to_target > 1.0 - 1e-9);
        // Corrections keep arriving two cycles stale, so the converged
        // object gets perturbed again: delayed feedback destabilizes.
        assert!(records[3].actuator_applied);
        assert!(records[3].fidelity_to_target < 1.0 - 1e-6);
    }

    #[test]
    fn fully_dropped_channel_freezes_the_trajectory() {
        let mut config = teleport_config();
        config.channel = Some(ChannelConfig {
            delay: 0,
            drop_probability: 0.999_999_999,
        });
        let initial_fidelity = 0.36; // |<up|(0.6, 0.8)>|^2
        let records = run_teleport_loop(&config).unwrap();
        for r in &records {
            assert!(!r.actuator_applied);
            assert_abs_diff_eq!(r.fidelity_to_target, initial_fidelity, epsilon = 1e-9);
        }
    }

    #[test]
    fn teleport_fixed_point_stays_put() {
        let mut config = teleport_config();
        config.initial_alpha = c(1.0, 0.0);
        config.initial_beta = c(0.0, 0.0);
        let records = run_teleport_loop(&config).unwrap();
        for r in &records {
            assert_abs_diff_eq!(r.fidelity_to_target, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn noiseless_clone_loop_converges_in_one_cycle() {
        let records = run_clone_loop(&clone_config()).unwrap();
        let first = &records[0];
        assert_abs_diff_eq!(first.recognizer_max_distance.unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(first.gate_signal, Some(GateSignal::On));
        assert!(first.actuator_applied);
        assert_abs_diff_eq!(first.fidelity_to_target, 1.0, epsilon = 1e-9);
        for r in &records {
            assert!(r.fidelity_to_target > 1.0 - 1e-9);
        }
    }

    #[test]
    fn clone_fixed_point_keeps_signal_on() {
        let mut config = clone_config();
        config.initial_alpha = c(1.0, 0.0);
        config.initial_beta = c(0.0, 0.0);
        let records = run_clone_loop(&config).unwrap();
        for r in &records {
            assert_abs_diff_eq!(r.fidelity_to_target, 1.0, epsilon = 1e-12);
            assert_eq!(r.gate_signal, Some(GateSignal::On));
            assert!(r.actuator_applied);
        }
    }

    #[test]
    fn off_signal_blocks_the_actuator() {
        // Measured mode with a threshold below the two-basis-state distance:
        // whenever the shots disagree the gate must stay off and the
        // actuator must idle.
        let mut config = clone_config();
        config.recognizer = Some(RecognizerConfig {
            d0: 0.5,
            mode: RecognitionMode::Measured,
            bases: None,
        });
        config.cycles = 40;
        let records = run_clone_loop(&config).unwrap();
        let mut saw_off = false;
        for r in &records {
            if r.gate_signal == Some(GateSignal::Off) {
                saw_off = true;
                assert!(!r.actuator_applied);
                assert!(r.recognizer_max_distance.unwrap() > 0.5);
            }
        }
        assert!(saw_off, "expected at least one disagreeing-shot cycle");
    }

    #[test]
    fn loops_are_deterministic_given_the_seed() {
        let a = run_clone_loop(&clone_config()).unwrap();
        let b = run_clone_loop(&clone_config()).unwrap();
        assert_eq!(a, b);
        let a = run_teleport_loop(&teleport_config()).unwrap();
        let b = run_teleport_loop(&teleport_config()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scenario_dispatch_enforces_the_kind() {
        assert!(run_teleport_loop(&clone_config()).is_err());
        assert!(run_clone_loop(&teleport_config()).is_err());
        assert!(run_scenario(&clone_config()).is_ok());
        assert!(run_scenario(&teleport_config()).is_ok());
    }
}
