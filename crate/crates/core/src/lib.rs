//! Deterministic state-vector simulation of two closed-loop quantum
//! feedback schemes: distant feedback through teleportation over a classical
//! side channel, and recognition-gated feedback fed by an optimal universal
//! cloner.
//!
//! The crate is organized bottom-up: `state`, `gates`, `density`, `bloch`,
//! and `measure` form the simulation substrate; `teleport`, `cloner`,
//! `recognizer`, and `actuator` implement the protocol pieces; `control`
//! wires them into scenario loops configured by `config` and recorded by
//! `trajectory`.

pub mod actuator;
pub mod bloch;
pub mod cloner;
pub mod config;
pub mod control;
pub mod density;
pub mod error;
pub mod gates;
mod indexing;
pub mod measure;
pub mod noise;
pub mod recognizer;
pub mod rng;
pub mod state;
pub mod teleport;
pub mod trajectory;

pub use actuator::{actuator_update, ActuatorAction};
pub use bloch::{bloch_vector, BlochVector};
pub use cloner::{
    clone, monte_carlo_copy_fidelity, no_cloning_witness, optimal_copy_fidelity, shrink_factor,
    split_copies, symmetric_projector, CloneBatch, CopySplit, SymmetricProjector,
};
pub use config::{
    AmplitudePair, ChannelConfig, ClonerConfig, LoopConfig, RecognizerConfig, Scenario,
};
pub use control::{run_clone_loop, run_scenario, run_teleport_loop};
pub use density::DensityOperator;
pub use error::{Error, Result};
pub use gates::Unitary;
pub use measure::{measure_projective, outcome_probabilities, MeasurementOutcome};
pub use noise::NoiseModel;
pub use recognizer::{
    describe_copy, expand_copy, extend_basis, gate_signal, mean_state, recognize, state_distance,
    CopyDescription, ExpandedCopy, ExtendedBasis, GateSignal, MeanState, RecognitionMode,
    RecognitionReport,
};
pub use rng::RngStream;
pub use state::{fidelity, PureState, MAX_QUBITS};
pub use teleport::{
    bell_measure, bell_measure_forced, compose_sab, correction_for, feedback_process,
    feedback_step_entangle, feedback_step_flip, make_epr, teleport, teleport_forced, BellOutcome,
    ClassicalChannel, TeleportReport,
};
pub use trajectory::{export_trajectory, ExportFormat, TrajectoryRecord};
