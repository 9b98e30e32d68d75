//! One line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};
use std::time::{Duration, Instant};

use common::*;
use loqc::cluster::{
    brickwork, grow_while_measuring, run_pattern, run_pattern_forced, ClusterGraph, MeasurementInstruction,
};
use loqc::detection::{herald, DetectorModel, HeraldPattern};
use loqc::encoding::{decompose_su2, element_matrix, phase_distance};
use loqc::fock::{FockBasisState, PhotonNumber, PhotonicState};
use loqc::gates::{klm_cnot, ns_gate, run_heralded, run_photonic};
use loqc::interferometer::{apply, compose, hom_coincidence, permanent, ModePair, OpticalElement};
use loqc::logical::LogicalState;
use loqc::rng::{seeded, trial_rng};
use loqc::teleport::{teleport_forced, teleported_cnot_trials, BellLabel};
use rand::Rng;

type Criterion = (&'static str, fn() -> Check, Option<Duration>);

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: String) -> Check {
    Check { ok, detail }
}

fn hom() -> Check {
    let bs = compose(&[OpticalElement::balanced(0, 1)], 2).unwrap();
    let out = apply(&bs, &PhotonicState::basis(&[1, 1]).unwrap()).unwrap();
    let pat = HeraldPattern::counts(&[(0, 1), (1, 1)]).unwrap();
    let p = herald(&out, &pat, &DetectorModel::ideal()).unwrap().probability;
    let classical = hom_coincidence(0.5, 0.0).unwrap();
    check(
        p.abs() <= 1e-12 && (classical - 0.5).abs() <= 1e-12,
        format!("P(1,1)={:.3e} P(x=0)={classical:.15}", p.abs()),
    )
}

fn klm() -> Check {
    let g = klm_cnot();
    let mut worst_p = 0.0f64;
    let mut worst_f = 1.0f64;
    for bits in ["00", "01", "10", "11"] {
        let l = LogicalState::from_bits(bits).unwrap();
        let r = run_heralded(&g, &l, &DetectorModel::ideal()).unwrap();
        let mut want = l.clone();
        want.apply_cnot(0, 1).unwrap();
        worst_p = worst_p.max((r.probability - 1.0 / 16.0).abs());
        let f = r.logical_output.map_or(0.0, |o| LogicalState::overlap(&o, &want).unwrap());
        worst_f = worst_f.min(f);
    }
    check(worst_p <= 1e-9 && worst_f >= 1.0 - 1e-10, format!("max |p-1/16|={worst_p:.2e} min overlap={worst_f:.15}"))
}

fn ns() -> Check {
    let terms = [0u32, 1, 2].map(|n| (FockBasisState::new(vec![n]), c(1.0 / 3f64.sqrt(), 0.0)));
    let input = PhotonicState::from_terms(1, terms).unwrap();
    let r = run_photonic(&ns_gate(), &input, &DetectorModel::ideal()).unwrap();
    let out = r.output.unwrap();
    let (a0, a1, a2) = (out.amplitude(&[0]), out.amplitude(&[1]), out.amplitude(&[2]));
    let sign_ok = (a1 / a0 - c(1.0, 0.0)).norm() < 1e-10 && (a2 / a0 - c(-1.0, 0.0)).norm() < 1e-10;
    check((r.probability - 0.25).abs() <= 1e-9 && sign_ok, format!("p={:.15} a2/a0={:.12}", r.probability, a2 / a0))
}

fn teleported_cnot() -> Check {
    let input = LogicalState::random(2, &mut seeded(2024));
    let trials = teleported_cnot_trials(&input, 100_000, 7).unwrap();
    let mean = trials.iter().map(|t| t.pairs as f64).sum::<f64>() / trials.len() as f64;
    let worst = trials.iter().map(|t| t.overlap).fold(1.0, f64::min);
    check(
        (31.5..=32.5).contains(&mean) && worst >= 1.0 - 1e-10,
        format!("trials={} mean pairs={mean:.4} min overlap={worst:.15}", trials.len()),
    )
}

fn teleportation() -> Check {
    let mut rng = seeded(5);
    let mut worst = 1.0f64;
    for _ in 0..100 {
        let psi = LogicalState::random(1, &mut rng);
        for l in BellLabel::ALL {
            let t = teleport_forced(&psi, l).unwrap();
            worst = worst.min(LogicalState::overlap(&t.output, &psi).unwrap());
        }
    }
    check(worst >= 1.0 - 1e-12, format!("400 runs, min overlap={worst:.15}"))
}

/// `H·Z(φ)` applied per measured node, starting from `psi`.
fn chain_oracle(psi: &LogicalState, phis: &[f64]) -> LogicalState {
    let mut v = [psi.amplitude(0), psi.amplitude(1)];
    for &p in phis {
        v = apply2(&hadamard(), apply2(&z_rot(p), v));
    }
    LogicalState::new(1, v.to_vec()).unwrap()
}

fn cluster() -> Check {
    let mut rng = seeded(11);
    let mut worst = 1.0f64;
    for _ in 0..20 {
        let psi = LogicalState::random(1, &mut rng);
        let mut g = ClusterGraph::linear(5).unwrap();
        g.set_input(0, psi.clone()).unwrap();
        let phis = [0.0, rng.random_range(-PI..PI), rng.random_range(-PI..PI), rng.random_range(-PI..PI)];
        let sched: Vec<_> = phis.iter().enumerate().map(|(i, &p)| MeasurementInstruction::xy(i, p)).collect();
        let want = chain_oracle(&psi, &phis);
        for branch in 0..16u8 {
            let outcomes: Vec<u8> = (0..4).map(|k| (branch >> k) & 1).collect();
            let r = run_pattern_forced(&g, &sched, &outcomes).unwrap();
            worst = worst.min(LogicalState::overlap(&r.output, &want).unwrap());
        }
    }
    let mut grown_ok = 0;
    let mut grown_worst = 1.0f64;
    for case in 0..50u64 {
        let mut rng = trial_rng(99, case);
        let wires = rng.random_range(1..=3);
        let columns = rng.random_range(2..=5);
        let g = brickwork(wires, columns).unwrap();
        let sched: Vec<_> =
            (0..wires * (columns - 1)).map(|n| MeasurementInstruction::xy(n, rng.random_range(-PI..PI))).collect();
        let (start, steps) = interleave(&g, &sched, &mut rng);
        let a = run_pattern(&g, &sched, &mut trial_rng(case, 0)).unwrap();
        let b = grow_while_measuring(&start, &steps, &mut trial_rng(case, 0)).unwrap();
        let f = LogicalState::overlap(&a.output, &b.output).unwrap();
        grown_worst = grown_worst.min(f);
        if a.transcript == b.transcript && f >= 1.0 - 1e-10 {
            grown_ok += 1;
        }
    }
    check(
        worst >= 1.0 - 1e-10 && grown_ok == 50,
        format!("320 branches min overlap={worst:.15}; growth {grown_ok}/50 min overlap={grown_worst:.15}"),
    )
}

fn permanents() -> Check {
    let mut rng = seeded(13);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let m = random_matrix(&mut rng, 1 + k % 6);
        let (p, q) = (permanent(&m).unwrap(), naive_permanent(&m));
        worst = worst.max((p - q).norm() / q.norm().max(1e-300));
    }
    let mut norm_dev = 0.0f64;
    let mut photons_ok = true;
    for _ in 0..20 {
        let photons = rng.random_range(0..=4);
        let s = random_sector_state(&mut rng, 8, photons, 6);
        let u = compose(&random_network(&mut rng, 8, 30), 8).unwrap();
        norm_dev = norm_dev.max(u.deviation_from_unitary());
        let out = apply(&u, &s).unwrap();
        norm_dev = norm_dev.max((out.norm_sqr() - 1.0).abs());
        photons_ok &= out.photon_number() == PhotonNumber::Definite(photons);
    }
    check(
        worst <= 1e-10 && norm_dev <= 1e-10 && photons_ok,
        format!("200 matrices max rel err={worst:.2e}; 8-mode norm dev={norm_dev:.2e}"),
    )
}

fn waveplates() -> Check {
    let m = |e| element_matrix(&e).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]];
    let x = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    let dh = phase_distance(&m(OpticalElement::hwp(ModePair(0, 1), FRAC_PI_8)), &h);
    let dx = phase_distance(&m(OpticalElement::hwp(ModePair(0, 1), FRAC_PI_4)), &x);
    let mut rng = seeded(17);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let u = random_u2(&mut rng);
        let w = decompose_su2(&u).unwrap();
        let built = mat_mul(&retarder(w.qwp3, FRAC_PI_2), &mat_mul(&retarder(w.hwp, PI), &retarder(w.qwp1, FRAC_PI_2)));
        worst = worst.max(dist_up_to_phase(&built, &u));
    }
    check(
        dh <= 1e-12 && dx <= 1e-12 && worst < 1e-8,
        format!("hwp(22.5)-H={dh:.2e} hwp(45)-X={dx:.2e}; 50 decompositions max err={worst:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 HOM null", hom, Some(Duration::from_secs(1))),
        ("2 KLM CNOT", klm, Some(Duration::from_secs(10))),
        ("3 NS gate", ns, Some(Duration::from_secs(1))),
        ("4 teleported CNOT resources", teleported_cnot, Some(Duration::from_secs(60))),
        ("5 teleportation", teleportation, Some(Duration::from_secs(5))),
        ("6 cluster equivalence", cluster, Some(Duration::from_secs(30))),
        ("7 permanent engine", permanents, Some(Duration::from_secs(10))),
        ("8 waveplate algebra", waveplates, None),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let t = Instant::now();
        let r = f();
        let took = t.elapsed();
        let in_time = limit.is_none_or(|l| took < l);
        let ok = r.ok && in_time;
        failed += usize::from(!ok);
        let budget = limit.map_or("no limit".to_string(), |l| format!("limit {}s", l.as_secs()));
        println!(
            "criterion {name}: {} | {} | {:.3}s ({budget})",
            if ok { "PASS" } else { "FAIL" },
            r.detail,
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
