mod common;

use common::*;
use loqc::cluster::{brickwork, grow_while_measuring, run_pattern, ClusterGraph, MeasurementInstruction, PauliFrame};
use loqc::detection::{herald, outcome_distribution, postselect, DetectorModel, HeraldPattern, Requirement};
use loqc::encoding::{bloch, decode, decompose_su2, encode, phase_distance, QubitEncoding, WaveplateSequence};
use loqc::fock::{FockBasisState, PhotonNumber, PhotonicState};
use loqc::gates::{klm_cnot, run_heralded};
use loqc::interferometer::{apply, compose, hom_coincidence, permanent, sector_basis, ModePair, OpticalElement};
use loqc::logical::LogicalState;
use loqc::rng::{seeded, trial_rng};
use loqc::teleport::{linear_optics_branches, teleport_forced, teleported_cnot_with, BellLabel, Forcing};
use loqc::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn diff_norm(a: &PhotonicState, b: &PhotonicState) -> f64 {
    PhotonicState::superpose(a, c(1.0, 0.0), b, c(-1.0, 0.0)).unwrap().norm_sqr().sqrt()
}

/// Random state over several photon-number sectors.
fn random_state(seed: u64, modes: usize, max_photons: u32) -> PhotonicState {
    let mut rng = seeded(seed);
    let mut s = PhotonicState::zero(modes);
    for n in 0..=max_photons {
        let part = random_sector_state(&mut rng, modes, n, 3);
        s = PhotonicState::superpose(&s, c(1.0, 0.0), &part, random_complex(&mut rng)).unwrap();
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_structure(seed in any::<u64>(), modes in 1usize..4) {
        let a = random_state(seed, modes, 2);
        let b = random_state(seed ^ 1, modes, 2);
        let d = random_state(seed ^ 2, modes, 2);
        let (x, y) = (c(0.3, -1.1), c(-0.7, 0.2));
        let lhs = PhotonicState::inner(&a, &PhotonicState::superpose(&b, x, &d, y).unwrap()).unwrap();
        let rhs = x * PhotonicState::inner(&a, &b).unwrap() + y * PhotonicState::inner(&a, &d).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
        let ab = PhotonicState::inner(&a, &b).unwrap();
        let ba = PhotonicState::inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
        prop_assert!(PhotonicState::inner(&a, &a).unwrap().im.abs() < 1e-12);
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>()) {
        let a = random_state(seed, 1, 2);
        let b = random_state(seed ^ 7, 2, 1);
        let d = random_state(seed ^ 9, 1, 1);
        let l = PhotonicState::tensor(&PhotonicState::tensor(&a, &b), &d);
        let r = PhotonicState::tensor(&a, &PhotonicState::tensor(&b, &d));
        prop_assert!(diff_norm(&l, &r) < 1e-12);
        let n = a.norm_sqr() * b.norm_sqr() * d.norm_sqr();
        prop_assert!((l.norm_sqr() - n).abs() < 1e-9 * n.max(1.0));
    }

    #[test]
    fn normalization(seed in any::<u64>(), modes in 1usize..5) {
        let s = random_state(seed, modes, 3);
        prop_assert!((s.normalized().unwrap().norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_optics_preserves_norm_and_photons(seed in any::<u64>(), modes in 2usize..=8, photons in 0u32..=4) {
        let mut rng = seeded(seed);
        let s = random_sector_state(&mut rng, modes, photons, 4);
        let net = random_network(&mut rng, modes, 10);
        let out = apply(&compose(&net, modes).unwrap(), &s).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert_eq!(out.photon_number(), PhotonNumber::Definite(photons));
    }

    #[test]
    fn one_photon_sector_is_the_matrix(seed in any::<u64>(), modes in 1usize..=6) {
        let mut rng = seeded(seed);
        let u = compose(&random_network(&mut rng, modes.max(2), 8), modes.max(2)).unwrap();
        let m = u.modes();
        for j in 0..m {
            let mut occ = vec![0i64; m];
            occ[j] = 1;
            let out = apply(&u, &PhotonicState::basis(&occ).unwrap()).unwrap();
            for i in 0..m {
                let mut o = vec![0u32; m];
                o[i] = 1;
                prop_assert!((out.amplitude(&o) - u.entry(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn composition_is_a_homomorphism(seed in any::<u64>(), modes in 2usize..=5, photons in 1u32..=3) {
        let mut rng = seeded(seed);
        let a = random_network(&mut rng, modes, 5);
        let b = random_network(&mut rng, modes, 5);
        let s = random_sector_state(&mut rng, modes, photons, 3);
        let both: Vec<OpticalElement> = a.iter().chain(&b).cloned().collect();
        let once = apply(&compose(&both, modes).unwrap(), &s).unwrap();
        let twice = apply(&compose(&b, modes).unwrap(), &apply(&compose(&a, modes).unwrap(), &s).unwrap()).unwrap();
        prop_assert!(diff_norm(&once, &twice) < 1e-10);
    }

    #[test]
    fn hom_dip_deepens_with_overlap(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        prop_assert!(hom_coincidence(0.5, hi).unwrap() <= hom_coincidence(0.5, lo).unwrap() + 1e-12);
        prop_assert!((hom_coincidence(0.5, x).unwrap() - (1.0 - x * x) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn permanent_matches_expansion(seed in any::<u64>(), n in 1usize..=6) {
        let m = random_matrix(&mut seeded(seed), n);
        let p = permanent(&m).unwrap();
        let q = naive_permanent(&m);
        prop_assert!((p - q).norm() < 1e-9 * q.norm().max(1.0));
    }

    #[test]
    fn readings_are_complete(seed in any::<u64>(), eta in 0.0f64..=1.0, resolving in any::<bool>()) {
        let s = random_state(seed, 3, 3).normalized().unwrap();
        let d = DetectorModel::new(eta, resolving).unwrap();
        let dist = outcome_distribution(&s, &[0, 2], &d).unwrap();
        let total: f64 = dist.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!(dist.values().all(|&p| p >= -1e-15));
    }

    #[test]
    fn click_rate_grows_with_efficiency(seed in any::<u64>(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let s = random_state(seed, 2, 3).normalized().unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let pat = HeraldPattern::new([(0, Requirement::Click)]).unwrap();
        let plo = herald(&s, &pat, &DetectorModel::new(lo, false).unwrap()).unwrap().probability;
        let phi = herald(&s, &pat, &DetectorModel::new(hi, false).unwrap()).unwrap().probability;
        prop_assert!(plo <= phi + 1e-12);
    }

    #[test]
    fn threshold_matches_resolving_below_two_photons(seed in any::<u64>()) {
        // at most one photon per mode
        let mut rng = seeded(seed);
        let basis: Vec<FockBasisState> =
            (0..=3).flat_map(|n| sector_basis(3, n)).filter(|b| b.occupations().iter().all(|&k| k <= 1)).collect();
        let terms: Vec<_> = basis.iter().map(|b| (b.clone(), random_complex(&mut rng))).collect();
        let s = PhotonicState::from_terms(3, terms).unwrap().normalized().unwrap();
        let a = outcome_distribution(&s, &[0, 1, 2], &DetectorModel::new(1.0, true).unwrap()).unwrap();
        let b = outcome_distribution(&s, &[0, 1, 2], &DetectorModel::new(1.0, false).unwrap()).unwrap();
        for (k, p) in &a {
            prop_assert!((b.get(k).copied().unwrap_or(0.0) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn postselection_is_idempotent(seed in any::<u64>(), k in 0u32..=2) {
        let s = random_state(seed, 3, 3).normalized().unwrap();
        let pat = HeraldPattern::counts(&[(1, k)]).unwrap();
        let (p, once) = postselect(&s, &pat).unwrap();
        prop_assume!(p > 1e-9);
        let (q, twice) = postselect(&once, &pat).unwrap();
        prop_assert!((q - 1.0).abs() < 1e-10);
        prop_assert!(diff_norm(&once, &twice) < 1e-10);
    }

    #[test]
    fn encoding_round_trips(seed in any::<u64>(), n in 1usize..=3, path in any::<bool>()) {
        let l = LogicalState::random(n, &mut seeded(seed));
        let e = if path { QubitEncoding::path(n) } else { QubitEncoding::polarization(n) };
        let d = decode(&encode(&l, &e).unwrap(), &e).unwrap();
        prop_assert!(d.leakage < 1e-12);
        prop_assert!(LogicalState::overlap(&d.state, &l).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn waveplates_stay_in_the_code_space(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = seeded(seed);
        let l = LogicalState::random(n, &mut rng);
        let e = QubitEncoding::polarization(n);
        let net: Vec<OpticalElement> = (0..6)
            .map(|_| {
                let pair = ModePair::polarization(rng.random_range(0..n));
                let t = rng.random_range(0.0..std::f64::consts::PI);
                if rng.random_bool(0.5) { OpticalElement::hwp(pair, t) } else { OpticalElement::qwp(pair, t) }
            })
            .collect();
        let out = apply(&compose(&net, 2 * n).unwrap(), &encode(&l, &e).unwrap()).unwrap();
        prop_assert!(decode(&out, &e).unwrap().leakage < 1e-12);
    }

    #[test]
    fn bloch_vector_properties(seed in any::<u64>(), phase in -3.0f64..3.0) {
        let l = LogicalState::random(1, &mut seeded(seed));
        let v = bloch(&l).unwrap();
        prop_assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        let ph = Complex64::from_polar(1.0, phase);
        let m = LogicalState::new(1, l.amplitudes().iter().map(|a| a * ph).collect()).unwrap();
        let w = bloch(&m).unwrap();
        prop_assert!((0..3).all(|i| (v[i] - w[i]).abs() < 1e-12));
    }

    #[test]
    fn waveplate_decomposition_reconstructs(seed in any::<u64>()) {
        let u = random_u2(&mut seeded(seed));
        let w: WaveplateSequence = decompose_su2(&u).unwrap();
        prop_assert!(phase_distance(&w.matrix(), &u) < 1e-8);
        let ind = mat_mul(&retarder(w.qwp3, std::f64::consts::FRAC_PI_2),
            &mat_mul(&retarder(w.hwp, std::f64::consts::PI), &retarder(w.qwp1, std::f64::consts::FRAC_PI_2)));
        prop_assert!(dist_up_to_phase(&ind, &u) < 1e-8);
    }

    #[test]
    fn pauli_frame_squares_to_identity(flips in proptest::collection::vec((0usize..6, any::<bool>()), 0..12)) {
        let mut f = PauliFrame::default();
        for (n, x) in flips {
            if x { f.flip_x(n) } else { f.flip_z(n) }
        }
        prop_assert!(f.compose(&f).is_trivial());
    }

    #[test]
    fn analyzer_is_complete(seed in any::<u64>()) {
        let l = LogicalState::random(2, &mut seeded(seed));
        let total: f64 = linear_optics_branches(&l, (0, 1)).unwrap().iter().map(|b| b.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn teleportation_is_identity(seed in any::<u64>(), k in 0usize..4) {
        let l = LogicalState::random(1, &mut seeded(seed));
        let t = teleport_forced(&l, BellLabel::ALL[k]).unwrap();
        prop_assert!(LogicalState::overlap(&t.output, &l).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn teleported_cnot_is_cnot(seed in any::<u64>(), k1 in 0usize..4, k2 in 0usize..4, tries in 1u64..5) {
        let mut rng = seeded(seed);
        let l = LogicalState::random(2, &mut rng);
        let mut want = l.clone();
        want.apply_cnot(0, 1).unwrap();
        let f = Forcing { succeed_on: Some(tries), labels: Some((BellLabel::ALL[k1], BellLabel::ALL[k2])) };
        let r = teleported_cnot_with(&l, &mut rng, f).unwrap();
        prop_assert_eq!(r.tally.entangled_pairs_consumed, 2 * tries);
        prop_assert!(LogicalState::overlap(&r.output, &want).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn growth_order_does_not_matter(seed in any::<u64>(), wires in 1usize..=2, columns in 2usize..=4) {
        let mut rng = seeded(seed);
        let g = brickwork(wires, columns).unwrap();
        let measured = wires * (columns - 1);
        let sched: Vec<_> = (0..measured).map(|n| MeasurementInstruction::xy(n, rng.random_range(-3.0..3.0))).collect();
        let (start, steps) = interleave(&g, &sched, &mut rng);
        let a = run_pattern(&g, &sched, &mut trial_rng(seed, 0)).unwrap();
        let b = grow_while_measuring(&start, &steps, &mut trial_rng(seed, 0)).unwrap();
        prop_assert_eq!(&a.transcript, &b.transcript);
        prop_assert!(LogicalState::overlap(&a.output, &b.output).unwrap() > 1.0 - 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn heralded_cnot_on_random_inputs(seed in any::<u64>()) {
        let l = LogicalState::random(2, &mut seeded(seed));
        let r = run_heralded(&klm_cnot(), &l, &DetectorModel::ideal()).unwrap();
        let mut want = l.clone();
        want.apply_cnot(0, 1).unwrap();
        prop_assert!((r.probability - 1.0 / 16.0).abs() < 1e-10);
        prop_assert!(LogicalState::overlap(r.logical_output.as_ref().unwrap(), &want).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn linear_cluster_inputs(seed in any::<u64>()) {
        // an arbitrary input on the first node of a chain, measured at angle 0, comes out as H|ψ⟩
        let mut rng = seeded(seed);
        let psi = LogicalState::random(1, &mut rng);
        let mut g = ClusterGraph::linear(2).unwrap();
        g.set_input(0, psi.clone()).unwrap();
        let r = run_pattern(&g, &[MeasurementInstruction::xy(0, 0.0)], &mut rng).unwrap();
        let a = psi.amplitudes();
        let want = LogicalState::new(1, apply2(&hadamard(), [a[0], a[1]]).to_vec()).unwrap();
        prop_assert!(LogicalState::overlap(&r.output, &want).unwrap() > 1.0 - 1e-10);
    }
}
