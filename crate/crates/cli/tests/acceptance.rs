//! Acceptance suite: one test per criterion, each printing a PASS line once
//! its assertions hold. Run with `cargo test -p qfc-cli --test acceptance --
//! --nocapture` to see the per-criterion lines.

use std::process::Command;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;

use qfc_core::{
    bell_measure, clone, compose_sab, feedback_step_entangle, fidelity, gate_signal,
    monte_carlo_copy_fidelity, no_cloning_witness, optimal_copy_fidelity, run_clone_loop,
    run_teleport_loop, shrink_factor, teleport_forced, AmplitudePair, BellOutcome,
    ChannelConfig, ClassicalChannel, ClonerConfig, GateSignal, LoopConfig, NoiseModel,
    PureState, RecognitionMode, RecognizerConfig, RngStream, Scenario,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn criterion_01_teleportation_exactness() {
    let mut rng = RngStream::from_seed(101);
    for _ in 0..1000 {
        let psi = rng.haar_state(1).unwrap();
        for outcome in BellOutcome::ALL {
            let report = teleport_forced(&psi, outcome).unwrap();
            assert!(
                (report.fidelity_to_input - 1.0).abs() < 1e-12,
                "outcome {outcome:?} fidelity {}",
                report.fidelity_to_input
            );
        }
    }
    println!("acceptance 1 (teleportation exactness): PASS");
}

#[test]
fn criterion_02_bell_outcome_uniformity() {
    let mut input_rng = RngStream::from_seed(202);
    let psi = input_rng.haar_state(1).unwrap();
    let sab = compose_sab(&psi).unwrap();
    let mut rng = RngStream::from_seed(203);
    let mut counts = [0usize; 4];
    let shots = 40_000;
    for _ in 0..shots {
        let (outcome, _bob, _p) = bell_measure(&sab, &mut rng).unwrap();
        counts[BellOutcome::ALL.iter().position(|&o| o == outcome).unwrap()] += 1;
    }
    for (outcome, &count) in BellOutcome::ALL.iter().zip(&counts) {
        let frequency = count as f64 / shots as f64;
        assert!(
            (0.24..=0.26).contains(&frequency),
            "outcome {outcome:?} frequency {frequency}"
        );
    }
    println!("acceptance 2 (Bell-outcome uniformity): PASS");
}

#[test]
fn criterion_03_post_cnot_state() {
    let psi = PureState::single_qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
    let entangled = feedback_step_entangle(&psi).unwrap();
    let expected = [c(0.6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.8, 0.0)];
    for (i, &e) in expected.iter().enumerate() {
        assert!(
            (entangled.amplitude(i) - e).norm() < 1e-12,
            "amplitude {i}: {} vs {e}",
            entangled.amplitude(i)
        );
    }
    println!("acceptance 3 (post-CNOT state): PASS");
}

#[test]
fn criterion_04_cloner_fidelity() {
    let mut rng = RngStream::from_seed(404);
    for k in 2..=6 {
        let expected = optimal_copy_fidelity(k);
        for _ in 0..100 {
            let psi = rng.haar_state(1).unwrap();
            let batch = clone(&psi, k).unwrap();
            for copy in batch.copies() {
                let f = copy.fidelity_with_pure(&psi).unwrap();
                assert!(
                    (f - expected).abs() < 1e-9,
                    "K = {k}: per-copy fidelity {f} vs {expected}"
                );
            }
        }
    }
    let estimate = monte_carlo_copy_fidelity(2, 10_000, 405).unwrap();
    assert_abs_diff_eq!(estimate, optimal_copy_fidelity(2), epsilon = 1e-3);
    println!("acceptance 4 (cloner fidelity): PASS");
}

#[test]
fn criterion_05_bloch_shrink_and_direction() {
    let mut rng = RngStream::from_seed(505);
    for k in 2..=6 {
        let eta = shrink_factor(k);
        for _ in 0..20 {
            let psi = rng.haar_state(1).unwrap();
            let input = psi.bloch_vector().unwrap();
            let batch = clone(&psi, k).unwrap();
            for copy in batch.copies() {
                let b = copy.bloch_vector().unwrap();
                assert!((b.x - eta * input.x).abs() < 1e-9, "K = {k} x component");
                assert!((b.y - eta * input.y).abs() < 1e-9, "K = {k} y component");
                assert!((b.z - eta * input.z).abs() < 1e-9, "K = {k} z component");
            }
        }
    }
    println!("acceptance 5 (Bloch shrink and direction): PASS");
}

#[test]
fn criterion_06_no_cloning_witness() {
    let up = PureState::ket_up();
    let down = PureState::ket_down();
    let plus = PureState::plus();
    let expected = std::f64::consts::FRAC_1_SQRT_2 - 0.5;
    assert!((no_cloning_witness(&up, &plus).unwrap() - expected).abs() < 1e-12);
    assert!(no_cloning_witness(&up, &up).unwrap() < 1e-12);
    assert!(no_cloning_witness(&up, &down).unwrap() < 1e-12);
    println!("acceptance 6 (no-cloning witness): PASS");
}

#[test]
fn criterion_07_state_distance() {
    let mut gate_rng = RngStream::from_seed(0);

    // Identical copies: all distances zero.
    let psi = PureState::single_qubit(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
    let report = gate_signal(
        &[psi.clone(), psi.clone(), psi],
        1.0,
        RecognitionMode::Oracle,
        &mut gate_rng,
    )
    .unwrap();
    for &d in &report.distances {
        assert!(d < 1e-12, "identical copies gave distance {d}");
    }

    // Up/down pair: both distances sqrt(0.5).
    let pair = [PureState::ket_up(), PureState::ket_down()];
    let report = gate_signal(&pair, 1.0, RecognitionMode::Oracle, &mut gate_rng).unwrap();
    for &d in &report.distances {
        assert!((d - 0.5f64.sqrt()).abs() < 1e-12, "up/down distance {d}");
    }

    // Permutation invariance and nonnegativity over random copy sets.
    let mut rng = RngStream::from_seed(707);
    for _ in 0..1000 {
        let n = 2 + rng.below(3);
        let copies: Vec<PureState> = (0..n).map(|_| rng.haar_state(1).unwrap()).collect();
        let report = gate_signal(&copies, 1.0, RecognitionMode::Oracle, &mut gate_rng).unwrap();
        assert!(report.distances.iter().all(|&d| d >= 0.0));

        let mut reversed = copies.clone();
        reversed.reverse();
        let report_rev =
            gate_signal(&reversed, 1.0, RecognitionMode::Oracle, &mut gate_rng).unwrap();
        let mut a = report.distances.clone();
        let mut b = report_rev.distances.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
    println!("acceptance 7 (state-distance): PASS");
}

#[test]
fn criterion_08_gate_semantics() {
    let pair = [PureState::ket_up(), PureState::ket_down()];
    let mut rng = RngStream::from_seed(0);
    let off = gate_signal(&pair, 0.5, RecognitionMode::Oracle, &mut rng).unwrap();
    assert_eq!(off.signal, GateSignal::Off);
    let on = gate_signal(&pair, 0.8, RecognitionMode::Oracle, &mut rng).unwrap();
    assert_eq!(on.signal, GateSignal::On);

    // Monotone over a 100-point threshold sweep: once on, never off again.
    let mut previous_on = false;
    for i in 1..=100 {
        let d0 = i as f64 / 100.0;
        let report = gate_signal(&pair, d0, RecognitionMode::Oracle, &mut rng).unwrap();
        let now_on = report.signal == GateSignal::On;
        assert!(
            now_on || !previous_on,
            "gate turned off again at d0 = {d0}"
        );
        previous_on = now_on;
    }
    assert!(previous_on, "gate never turned on across the sweep");
    println!("acceptance 8 (gate semantics): PASS");
}

#[test]
fn criterion_09_closed_loop_convergence() {
    let mut rng = RngStream::from_seed(909);
    for i in 0..100 {
        let psi = rng.haar_state(1).unwrap();
        let teleport_cfg = LoopConfig {
            scenario: Scenario::Teleport,
            initial_alpha: psi.amplitude(0),
            initial_beta: psi.amplitude(1),
            target: AmplitudePair {
                alpha: c(1.0, 0.0),
                beta: c(0.0, 0.0),
            },
            cycles: 1,
            seed: Some(i),
            noise: NoiseModel::None,
            channel: Some(ChannelConfig::default()),
            cloner: None,
            recognizer: None,
        };
        let records = run_teleport_loop(&teleport_cfg).unwrap();
        assert!(
            records[0].fidelity_to_target >= 1.0 - 1e-9,
            "teleport loop cycle-1 fidelity {}",
            records[0].fidelity_to_target
        );

        let clone_cfg = LoopConfig {
            scenario: Scenario::Clone,
            initial_alpha: psi.amplitude(0),
            initial_beta: psi.amplitude(1),
            target: AmplitudePair {
                alpha: c(1.0, 0.0),
                beta: c(0.0, 0.0),
            },
            cycles: 1,
            seed: Some(i),
            noise: NoiseModel::None,
            channel: None,
            cloner: Some(ClonerConfig { n: 2, m: 1 }),
            recognizer: Some(RecognizerConfig {
                d0: 0.1,
                mode: RecognitionMode::Oracle,
                bases: None,
            }),
        };
        let records = run_clone_loop(&clone_cfg).unwrap();
        assert!(
            records[0].fidelity_to_target >= 1.0 - 1e-9,
            "clone loop cycle-1 fidelity {}",
            records[0].fidelity_to_target
        );
    }
    println!("acceptance 9 (closed-loop convergence): PASS");
}

#[test]
fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("clone.json");
    std::fs::write(
        &config_path,
        r#"{
            "scenario": "clone",
            "initial_alpha": {"re": 0.6, "im": 0.0},
            "initial_beta": {"re": 0.8, "im": 0.0},
            "target": {"alpha": {"re": 1.0, "im": 0.0}, "beta": {"re": 0.0, "im": 0.0}},
            "cycles": 12,
            "seed": 99,
            "noise": {"depolarizing": {"p": 0.2}},
            "cloner": {"n": 2, "m": 1},
            "recognizer": {"d0": 0.5, "mode": "measured"}
        }"#,
    )
    .unwrap();

    let run = |out: &str| {
        let out_path = dir.path().join(out);
        let status = Command::new(env!("CARGO_BIN_EXE_qfc"))
            .args([
                "clone-loop",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out_path.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(out_path).unwrap()
    };
    let first = run("a.csv");
    let second = run("b.csv");
    assert!(!first.is_empty());
    assert_eq!(first, second, "CSV exports differ between identical runs");
    println!("acceptance 10 (determinism): PASS");
}

/// The convergence anchors also hold through the public protocol path with
/// sampled outcomes and a live channel, not just the forced branches.
#[test]
fn sampled_teleportation_round_trips_exactly() {
    let mut rng = RngStream::from_seed(1111);
    for _ in 0..200 {
        let psi = rng.haar_state(1).unwrap();
        let mut channel = ClassicalChannel::ideal();
        let report = qfc_core::teleport(&psi, &mut channel, &mut rng).unwrap();
        assert!((report.fidelity_to_input - 1.0).abs() < 1e-12);
        assert!(fidelity(&report.bob_state, &psi).unwrap() > 1.0 - 1e-12);
    }
}
