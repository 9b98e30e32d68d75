use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two modes carrying one qubit: `.0` is the |0⟩/H rail, `.1` the |1⟩/V rail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModePair(pub usize, pub usize);

impl ModePair {
    /// H and V components of spatial mode `k`: modes `2k` and `2k + 1`.
    pub fn polarization(k: usize) -> Self {
        Self(2 * k, 2 * k + 1)
    }

    pub fn modes(self) -> [usize; 2] {
        [self.0, self.1]
    }
}

/// A linear optical component.
///
/// Angles are in radians. Beamsplitters use the symmetric convention
/// `a → t·a + i·r·b`, `b → i·r·a + t·b` with `t = √(1−R)`, `r = √R`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpticalElement {
    BeamSplitter {
        a: usize,
        b: usize,
        reflectivity: f64,
    },
    Phase {
        mode: usize,
        phi: f64,
    },
    /// Half-wave plate with fast axis at `theta` from H.
    HalfWavePlate {
        pair: ModePair,
        theta: f64,
    },
    /// Quarter-wave plate with fast axis at `theta` from H.
    QuarterWavePlate {
        pair: ModePair,
        theta: f64,
    },
    /// Transmits H, reflects V between two spatial modes.
    PolarizingBeamSplitter {
        first: ModePair,
        second: ModePair,
    },
    Swap {
        a: usize,
        b: usize,
    },
}

type Block = (Vec<usize>, Vec<Vec<Complex64>>);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl OpticalElement {
    pub fn beamsplitter(a: usize, b: usize, reflectivity: f64) -> Self {
        Self::BeamSplitter { a, b, reflectivity }
    }

    /// 50:50 beamsplitter.
    pub fn balanced(a: usize, b: usize) -> Self {
        Self::BeamSplitter { a, b, reflectivity: 0.5 }
    }

    pub fn phase(mode: usize, phi: f64) -> Self {
        Self::Phase { mode, phi }
    }

    pub fn hwp(pair: ModePair, theta: f64) -> Self {
        Self::HalfWavePlate { pair, theta }
    }

    pub fn qwp(pair: ModePair, theta: f64) -> Self {
        Self::QuarterWavePlate { pair, theta }
    }

    pub fn modes(&self) -> Vec<usize> {
        match *self {
            Self::BeamSplitter { a, b, .. } | Self::Swap { a, b } => vec![a, b],
            Self::Phase { mode, .. } => vec![mode],
            Self::HalfWavePlate { pair, .. } | Self::QuarterWavePlate { pair, .. } => pair.modes().to_vec(),
            Self::PolarizingBeamSplitter { first, second } => {
                vec![first.0, first.1, second.0, second.1]
            }
        }
    }

    pub fn validate(&self, total_modes: usize) -> Result<()> {
        let modes = self.modes();
        for (i, &m) in modes.iter().enumerate() {
            if m >= total_modes {
                return Err(Error::ModeOutOfRange { mode: m, modes: total_modes });
            }
            if modes[..i].contains(&m) {
                return Err(Error::RepeatedMode(m));
            }
        }
        match *self {
            Self::BeamSplitter { reflectivity, .. } if !(0.0..=1.0).contains(&reflectivity) => {
                Err(Error::InvalidParameter(format!("reflectivity {reflectivity} outside [0, 1]")))
            }
            Self::Phase { phi: angle, .. }
            | Self::HalfWavePlate { theta: angle, .. }
            | Self::QuarterWavePlate { theta: angle, .. }
                if !angle.is_finite() =>
            {
                Err(Error::InvalidParameter(format!("angle {angle} is not finite")))
            }
            _ => Ok(()),
        }
    }

    /// Moves the element onto other modes: local mode `k` becomes `map[k]`.
    pub fn remapped(&self, map: &[usize]) -> Self {
        let p = |pair: ModePair| ModePair(map[pair.0], map[pair.1]);
        match *self {
            Self::BeamSplitter { a, b, reflectivity } => Self::BeamSplitter { a: map[a], b: map[b], reflectivity },
            Self::Phase { mode, phi } => Self::Phase { mode: map[mode], phi },
            Self::HalfWavePlate { pair, theta } => Self::HalfWavePlate { pair: p(pair), theta },
            Self::QuarterWavePlate { pair, theta } => Self::QuarterWavePlate { pair: p(pair), theta },
            Self::PolarizingBeamSplitter { first, second } => {
                Self::PolarizingBeamSplitter { first: p(first), second: p(second) }
            }
            Self::Swap { a, b } => Self::Swap { a: map[a], b: map[b] },
        }
    }

    /// The modes the element touches and its matrix on them, `block[out][in]`.
    pub(crate) fn block(&self) -> Block {
        match *self {
            Self::BeamSplitter { a, b, reflectivity } => {
                let t = (1.0 - reflectivity).sqrt();
                let r = reflectivity.sqrt();
                (vec![a, b], vec![vec![c(t, 0.0), c(0.0, r)], vec![c(0.0, r), c(t, 0.0)]])
            }
            Self::Phase { mode, phi } => (vec![mode], vec![vec![Complex64::from_polar(1.0, phi)]]),
            Self::HalfWavePlate { pair, theta } => {
                let (s2, c2) = (2.0 * theta).sin_cos();
                (pair.modes().to_vec(), vec![vec![c(c2, 0.0), c(s2, 0.0)], vec![c(s2, 0.0), c(-c2, 0.0)]])
            }
            Self::QuarterWavePlate { pair, theta } => {
                // R(θ)·diag(1, i)·R(−θ)
                let (s, co) = theta.sin_cos();
                let off = c(s * co, -s * co);
                (pair.modes().to_vec(), vec![vec![c(co * co, s * s), off], vec![off, c(s * s, co * co)]])
            }
            Self::PolarizingBeamSplitter { first, second } => {
                // order: first.H, first.V, second.H, second.V
                let one = c(1.0, 0.0);
                let zero = c(0.0, 0.0);
                (
                    vec![first.0, first.1, second.0, second.1],
                    vec![
                        vec![one, zero, zero, zero],
                        vec![zero, zero, zero, one],
                        vec![zero, zero, one, zero],
                        vec![zero, one, zero, zero],
                    ],
                )
            }
            Self::Swap { a, b } => {
                let one = c(1.0, 0.0);
                let zero = c(0.0, 0.0);
                (vec![a, b], vec![vec![zero, one], vec![one, zero]])
            }
        }
    }
}

/// The exact Hadamard `(1/√2)[[1,1],[1,−1]]` on a dual-rail pair, built from a
/// 50:50 beamsplitter and two compensating phases.
pub fn hadamard_network(pair: ModePair) -> Vec<OpticalElement> {
    let h = [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]];
    super::synthesis::two_mode_network(pair.0, pair.1, &h)
}
