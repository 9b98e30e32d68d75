mod common;

use common::*;
use loqc::cluster::{
    brickwork, build_cluster, grow_while_measuring, run_pattern, run_pattern_forced, ClusterGraph, ClusterState,
    GrowthStep, MeasurementInstruction,
};
use loqc::logical::LogicalState;
use loqc::rng::{seeded, trial_rng};
use loqc::Error;
use rand::Rng;

#[test]
fn build_examples() {
    let s = build_cluster(&ClusterGraph::linear(2).unwrap()).unwrap();
    for (a, w) in s.amplitudes().iter().zip([0.5, 0.5, 0.5, -0.5]) {
        assert!((a - c(w, 0.0)).norm() < 1e-15);
    }
    assert_eq!(build_cluster(&ClusterGraph::new(1).unwrap()).unwrap(), LogicalState::plus());
    let edges = [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)];
    let mut rev = edges;
    rev.reverse();
    assert_eq!(
        build_cluster(&ClusterGraph::with_edges(4, &edges).unwrap()).unwrap(),
        build_cluster(&ClusterGraph::with_edges(4, &rev).unwrap()).unwrap()
    );
    assert!(matches!(ClusterGraph::new(25), Err(Error::ClusterTooLarge { nodes: 25, cap: 20 })));
}

/// `H·Z(φ₄)·H·Z(φ₃)·H·Z(φ₂)·H·Z(φ₁)|+⟩` as plain 2×2 arithmetic.
fn chain_oracle(phis: &[f64]) -> LogicalState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = [c(s, 0.0), c(s, 0.0)];
    for &p in phis {
        v = apply2(&hadamard(), apply2(&z_rot(p), v));
    }
    LogicalState::new(1, v.to_vec()).unwrap()
}

#[test]
fn linear_chain_matches_circuit() {
    let g = ClusterGraph::linear(5).unwrap();
    let mut rng = seeded(6);
    for _ in 0..5 {
        let phis: Vec<f64> = (0..4).map(|_| rng.random_range(-3.0..3.0)).collect();
        let sched: Vec<_> = phis.iter().enumerate().map(|(i, &p)| MeasurementInstruction::xy(i, p)).collect();
        let want = chain_oracle(&phis);
        for branch in 0..16u8 {
            let outcomes: Vec<u8> = (0..4).map(|k| (branch >> k) & 1).collect();
            let r = run_pattern_forced(&g, &sched, &outcomes).unwrap();
            assert_eq!(r.output_nodes, vec![4]);
            assert!(LogicalState::overlap(&r.output, &want).unwrap() > 1.0 - 1e-10);
        }
    }
}

#[test]
fn empty_schedule_returns_cluster() {
    let g = ClusterGraph::linear(3).unwrap();
    let r = run_pattern(&g, &[], &mut seeded(0)).unwrap();
    assert_eq!(r.output, build_cluster(&g).unwrap());
    assert!(r.frame.is_trivial());
}

#[test]
fn measurement_statistics() {
    let g = ClusterGraph::linear(3).unwrap();
    let n = 10_000;
    let ones: u32 = (0..n)
        .map(|k| {
            let r = run_pattern(&g, &[MeasurementInstruction::xy(1, 0.4)], &mut trial_rng(8, k)).unwrap();
            u32::from(r.transcript[0].outcome)
        })
        .sum();
    assert!((f64::from(ones) / n as f64 - 0.5).abs() < 0.02);
}

#[test]
fn growth_matches_monolithic() {
    let mut rng = seeded(90);
    for case in 0..10u64 {
        let g = brickwork(2, 4).unwrap();
        let sched: Vec<_> = (0..6).map(|n| MeasurementInstruction::xy(n, rng.random_range(-3.0..3.0))).collect();
        let (start, steps) = interleave(&g, &sched, &mut rng);
        let a = run_pattern(&g, &sched, &mut trial_rng(1, case)).unwrap();
        let b = grow_while_measuring(&start, &steps, &mut trial_rng(1, case)).unwrap();
        assert_eq!(a.transcript, b.transcript);
        assert!(LogicalState::overlap(&a.output, &b.output).unwrap() > 1.0 - 1e-10);
    }
}

#[test]
fn grown_single_node_is_one_step_teleportation() {
    let g = ClusterGraph::new(2).unwrap();
    let steps = [GrowthStep::Bond(0, 1), GrowthStep::Measure(MeasurementInstruction::xy(0, 0.9))];
    let r = grow_while_measuring(&g, &steps, &mut seeded(5)).unwrap();
    assert!(LogicalState::overlap(&r.output, &chain_oracle(&[0.9])).unwrap() > 1.0 - 1e-12);
}

#[test]
fn measure_node_examples() {
    let g = ClusterGraph::new(1).unwrap();
    let mut cs = ClusterState::new(&g).unwrap();
    let e = cs.measure(&MeasurementInstruction::xy(0, 0.0), &mut |_, p0| {
        assert!((p0 - 1.0).abs() < 1e-15);
        0
    });
    assert_eq!(e.unwrap().outcome, 0);
    let mut cs = ClusterState::new(&g).unwrap();
    assert!(matches!(
        cs.measure(&MeasurementInstruction::xy(0, 0.0), &mut |_, _| 1),
        Err(Error::ImpossibleOutcome { .. })
    ));
}
