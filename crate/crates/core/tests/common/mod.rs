//! Shared generators and independent reference computations.
#![allow(dead_code)]

use std::f64::consts::PI;

use loqc::cluster::{ClusterGraph, GrowthStep, MeasurementInstruction};
use loqc::fock::{FockBasisState, PhotonicState};
use loqc::interferometer::{sector_basis, ModePair, OpticalElement};
use loqc::logical::Gate1;
use loqc::Complex64;
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

/// Permanent by expansion along the first row.
pub fn naive_permanent(m: &DMatrix<Complex64>) -> Complex64 {
    fn rec(m: &DMatrix<Complex64>, row: usize, used: &mut Vec<bool>) -> Complex64 {
        let n = m.nrows();
        if row == n {
            return c(1.0, 0.0);
        }
        let mut total = c(0.0, 0.0);
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                total += m[(row, col)] * rec(m, row + 1, used);
                used[col] = false;
            }
        }
        total
    }
    rec(m, 0, &mut vec![false; m.nrows()])
}

/// A random list of optical elements on `modes` modes.
pub fn random_network<R: Rng>(rng: &mut R, modes: usize, len: usize) -> Vec<OpticalElement> {
    (0..len)
        .map(|_| {
            let a = rng.random_range(0..modes);
            let mut b = rng.random_range(0..modes - 1);
            if b >= a {
                b += 1;
            }
            let angle = rng.random_range(0.0..PI);
            match rng.random_range(0..5) {
                0 => OpticalElement::beamsplitter(a, b, rng.random_range(0.0..=1.0)),
                1 => OpticalElement::phase(a, rng.random_range(-PI..PI)),
                2 => OpticalElement::hwp(ModePair(a, b), angle),
                3 => OpticalElement::qwp(ModePair(a, b), angle),
                _ => OpticalElement::Swap { a, b },
            }
        })
        .collect()
}

/// A random normalized state with `photons` photons on `modes` modes.
pub fn random_sector_state<R: Rng>(rng: &mut R, modes: usize, photons: u32, terms: usize) -> PhotonicState {
    let basis = sector_basis(modes, photons);
    let picks: Vec<(FockBasisState, Complex64)> =
        (0..terms).map(|_| (basis[rng.random_range(0..basis.len())].clone(), random_complex(rng))).collect();
    let s = PhotonicState::from_terms(modes, picks).unwrap();
    if s.is_empty() {
        PhotonicState::from_basis(basis[0].clone())
    } else {
        s.normalized().unwrap()
    }
}

/// Haar-random 2×2 unitary with a random global phase.
pub fn random_u2<R: Rng>(rng: &mut R) -> Gate1 {
    let s = loqc::logical::LogicalState::random(1, rng);
    let (a, b) = (s.amplitude(0), s.amplitude(1));
    let ph = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
    [[a * ph, -b.conj() * ph], [b * ph, a.conj() * ph]]
}

pub fn mat_mul(a: &Gate1, b: &Gate1) -> Gate1 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn rot(theta: f64) -> Gate1 {
    let (s, co) = theta.sin_cos();
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

/// Retarder with phase `delta` on the slow axis at angle `theta`.
pub fn retarder(theta: f64, delta: f64) -> Gate1 {
    let d = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, delta)]];
    mat_mul(&mat_mul(&rot(theta), &d), &rot(-theta))
}

/// Best-phase distance between two 2×2 matrices.
pub fn dist_up_to_phase(a: &Gate1, b: &Gate1) -> f64 {
    let mut tr = c(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            tr += b[i][j].conj() * a[i][j];
        }
    }
    let ph = if tr.norm() > 0.0 { tr / tr.norm() } else { c(1.0, 0.0) };
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - ph * b[i][j]).norm());
        }
    }
    worst
}

pub fn hadamard() -> Gate1 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
}

pub fn z_rot(phi: f64) -> Gate1 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, phi)]]
}

pub fn apply2(m: &Gate1, v: [Complex64; 2]) -> [Complex64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// Bonds in a random interleaving: all bonds of a node arrive before it is
/// measured, others are added whenever a coin says so.
pub fn interleave<R: Rng>(
    g: &ClusterGraph,
    sched: &[MeasurementInstruction],
    rng: &mut R,
) -> (ClusterGraph, Vec<GrowthStep>) {
    let mut left: Vec<(usize, usize)> = g.edges().collect();
    left.shuffle(rng);
    let mut steps = Vec::new();
    for m in sched {
        let (now, later): (Vec<_>, Vec<_>) =
            left.into_iter().partition(|&(a, b)| a == m.node || b == m.node || rng.random_bool(0.3));
        steps.extend(now.into_iter().map(|(a, b)| GrowthStep::Bond(a, b)));
        left = later;
        steps.push(GrowthStep::Measure(m.clone()));
    }
    steps.extend(left.into_iter().map(|(a, b)| GrowthStep::Bond(a, b)));
    let mut start = ClusterGraph::new(g.nodes()).unwrap();
    for (&n, s) in g.inputs() {
        start.set_input(n, s.clone()).unwrap();
    }
    (start, steps)
}
