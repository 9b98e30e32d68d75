//! Dual-rail and polarization qubits on top of the Fock layer.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasisState, PhotonicState};
use crate::interferometer::{apply, compose, element_unitary, ModePair, OpticalElement};
use crate::logical::{Gate1, LogicalState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Path,
    Polarization,
}

/// Qubit `k` lives on `pairs[k]`, one photon shared between its two rails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitEncoding {
    pairs: Vec<ModePair>,
    flavor: Flavor,
}

impl QubitEncoding {
    pub fn new(pairs: Vec<ModePair>, flavor: Flavor) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for p in &pairs {
            for m in p.modes() {
                if !seen.insert(m) {
                    return Err(Error::RepeatedMode(m));
                }
            }
        }
        Ok(Self { pairs, flavor })
    }

    /// `n` polarization qubits on modes `(0,1), (2,3), …`.
    pub fn polarization(n: usize) -> Self {
        Self { pairs: (0..n).map(ModePair::polarization).collect(), flavor: Flavor::Polarization }
    }

    /// `n` path qubits on modes `(0,1), (2,3), …`.
    pub fn path(n: usize) -> Self {
        Self { pairs: (0..n).map(ModePair::polarization).collect(), flavor: Flavor::Path }
    }

    pub fn pairs(&self) -> &[ModePair] {
        &self.pairs
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn qubits(&self) -> usize {
        self.pairs.len()
    }

    /// Smallest mode count containing every rail.
    pub fn min_modes(&self) -> usize {
        self.pairs.iter().map(|p| p.0.max(p.1) + 1).max().unwrap_or(0)
    }
}

/// Maps each basis string onto one photon per pair, all other modes empty.
pub fn encode(l: &LogicalState, e: &QubitEncoding) -> Result<PhotonicState> {
    encode_into(l, e, e.min_modes())
}

/// As [`encode`], on a register of `modes` modes.
pub fn encode_into(l: &LogicalState, e: &QubitEncoding, modes: usize) -> Result<PhotonicState> {
    if l.qubits() != e.qubits() {
        return Err(Error::QubitMismatch { expected: e.qubits(), found: l.qubits() });
    }
    if modes < e.min_modes() {
        return Err(Error::ModeOutOfRange { mode: e.min_modes() - 1, modes });
    }
    let n = l.qubits();
    let terms = l.amplitudes().iter().enumerate().map(|(index, &amp)| {
        let mut occ = vec![0u32; modes];
        for (q, pair) in e.pairs.iter().enumerate() {
            let bit = (index >> (n - 1 - q)) & 1;
            occ[if bit == 0 { pair.0 } else { pair.1 }] = 1;
        }
        (FockBasisState::new(occ), amp)
    });
    PhotonicState::from_terms(modes, terms)
}

/// A logical state recovered from a photonic one.
#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub state: LogicalState,
    /// Fraction of the squared norm outside the dual-rail subspace.
    pub leakage: f64,
}

/// Amplitudes of `p` on the dual-rail basis of `e`, unnormalized, together
/// with the squared norm outside that subspace.
pub fn logical_amplitudes(p: &PhotonicState, e: &QubitEncoding) -> Result<(Vec<Complex64>, f64)> {
    if p.modes() < e.min_modes() {
        return Err(Error::ModeOutOfRange { mode: e.min_modes() - 1, modes: p.modes() });
    }
    let n = e.qubits();
    let mut rail_of = vec![None; p.modes()];
    for (q, pair) in e.pairs.iter().enumerate() {
        rail_of[pair.0] = Some((q, 0usize));
        rail_of[pair.1] = Some((q, 1usize));
    }
    let mut amps = vec![Complex64::default(); 1 << n];
    let mut outside = 0.0;
    'terms: for (b, c) in p.terms() {
        let mut index = 0usize;
        let mut filled = vec![false; n];
        for (m, &k) in b.occupations().iter().enumerate() {
            if k == 0 {
                continue;
            }
            match rail_of[m] {
                Some((q, bit)) if k == 1 && !filled[q] => {
                    filled[q] = true;
                    index |= bit << (n - 1 - q);
                }
                _ => {
                    outside += c.norm_sqr();
                    continue 'terms;
                }
            }
        }
        if filled.iter().all(|&f| f) {
            amps[index] = *c;
        } else {
            outside += c.norm_sqr();
        }
    }
    Ok((amps, outside))
}

/// Projects onto the dual-rail subspace of `e`: exactly one photon per pair
/// and none elsewhere.
pub fn decode(p: &PhotonicState, e: &QubitEncoding) -> Result<Decoded> {
    let (amps, outside) = logical_amplitudes(p, e)?;
    let total = p.norm_sqr();
    if total == 0.0 {
        return Err(Error::ZeroState);
    }
    let inside: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if inside == 0.0 {
        return Err(Error::NoLogicalContent);
    }
    Ok(Decoded { state: LogicalState::normalizing(e.qubits(), amps)?, leakage: (outside / total).clamp(0.0, 1.0) })
}

/// Bloch vector `(x, y, z)` of a one-qubit state: `|0⟩ → +z`, `|D⟩ → +x`,
/// `|R⟩ → +y`.
pub fn bloch(l: &LogicalState) -> Result<[f64; 3]> {
    if l.qubits() != 1 {
        return Err(Error::QubitMismatch { expected: 1, found: l.qubits() });
    }
    l.marginal_bloch(0)
}

/// Bloch vector of qubit `q`, refusing states where it is entangled.
pub fn pure_bloch(l: &LogicalState, q: usize) -> Result<[f64; 3]> {
    let v = l.marginal_bloch(q)?;
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len < 1.0 - 1e-9 {
        return Err(Error::Entangled);
    }
    Ok(v)
}

/// Orientations of a quarter-, half-, quarter-wave plate sequence, applied
/// in the order `qwp1`, `hwp`, `qwp3`. Radians, each in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveplateSequence {
    pub qwp1: f64,
    pub hwp: f64,
    pub qwp3: f64,
}

impl WaveplateSequence {
    pub fn elements(&self, pair: ModePair) -> Vec<OpticalElement> {
        vec![
            OpticalElement::qwp(pair, self.qwp1),
            OpticalElement::hwp(pair, self.hwp),
            OpticalElement::qwp(pair, self.qwp3),
        ]
    }

    /// The 2×2 matrix on `(H, V)`.
    pub fn matrix(&self) -> Gate1 {
        let u = compose(&self.elements(ModePair(0, 1)), 2).expect("two-mode waveplates");
        [[u.entry(0, 0), u.entry(0, 1)], [u.entry(1, 0), u.entry(1, 1)]]
    }
}

/// 2×2 matrix of a single waveplate or other two-mode element on `(0, 1)`.
pub fn element_matrix(e: &OpticalElement) -> Result<Gate1> {
    let u = element_unitary(e, 2)?;
    Ok([[u.entry(0, 0), u.entry(0, 1)], [u.entry(1, 0), u.entry(1, 1)]])
}

/// Largest entry of `a − e^{iφ}·b` with the best global phase `φ`.
pub fn phase_distance(a: &Gate1, b: &Gate1) -> f64 {
    let mut tr = Complex64::default();
    for i in 0..2 {
        for j in 0..2 {
            tr += b[i][j].conj() * a[i][j];
        }
    }
    let phase = if tr.norm() > 0.0 { tr / tr.norm() } else { Complex64::new(1.0, 0.0) };
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - phase * b[i][j]).norm());
        }
    }
    worst
}

const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;

fn pauli(k: usize) -> Gate1 {
    let o = Complex64::default();
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => [[o, one], [one, o]],
        1 => [[o, -i], [i, o]],
        _ => [[one, o], [o, -one]],
    }
}

/// Rotation of the Bloch sphere induced by `u`: `R_ij = ½ Tr(σ_i U σ_j U†)`.
fn so3(u: &Gate1) -> [[f64; 3]; 3] {
    use crate::logical::gate::{adjoint, mul};
    let ud = adjoint(u);
    let mut r = [[0.0; 3]; 3];
    for (j, col) in (0..3).map(|j| (j, mul(&mul(u, &pauli(j)), &ud))) {
        for (i, row) in r.iter_mut().enumerate() {
            let s = pauli(i);
            let mut tr = Complex64::default();
            for a in 0..2 {
                for b in 0..2 {
                    tr += s[a][b] * col[b][a];
                }
            }
            row[j] = tr.re / 2.0;
        }
    }
    r
}

fn wrap_pi(x: f64) -> f64 {
    let y = x.rem_euclid(PI);
    // rem_euclid can return π itself for tiny negative inputs
    if y >= PI - 1e-15 {
        0.0
    } else {
        y
    }
}

/// Finds plate orientations whose product equals `target` up to global phase.
///
/// A plate at angle θ rotates the Bloch sphere about `(sin 2θ, 0, cos 2θ)`,
/// by π/2 (quarter) or π (half). The sequence then equals
/// `Ry(2θ₃)·Rx(2θ₁ + 2θ₃ − 4θ₂)·Ry(−2θ₁)`, matched against a Y-X-Y Euler
/// decomposition of the target. Among valid solutions the lexicographically
/// smallest `(qwp1, hwp, qwp3)` is returned.
pub fn decompose_su2(target: &Gate1) -> Result<WaveplateSequence> {
    let m = nalgebra::DMatrix::from_fn(2, 2, |i, j| target[i][j]);
    let dev = crate::interferometer::unitarity_deviation(&m);
    if dev > crate::interferometer::UNITARITY_TOLERANCE {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let r = so3(target);
    let sb = (r[0][1].powi(2) + r[2][1].powi(2)).sqrt();
    let b = sb.atan2(r[1][1]);
    let mut eulers = Vec::new();
    if sb < 1e-9 {
        if r[1][1] > 0.0 {
            eulers.push((r[0][2].atan2(r[0][0]), 0.0, 0.0));
        } else {
            eulers.push(((-r[0][2]).atan2(r[0][0]), PI, 0.0));
        }
    } else {
        let a = r[0][1].atan2(r[2][1]);
        let c = r[1][0].atan2(-r[1][2]);
        eulers.push((a, b, c));
        eulers.push((a + PI, -b, c + PI));
    }
    let mut best: Option<WaveplateSequence> = None;
    for (a, b, c) in eulers {
        let beta = (a - b - c) / 2.0;
        for shift in [0.0, FRAC_PI_2] {
            let seq =
                WaveplateSequence { qwp1: wrap_pi(-c / 2.0), hwp: wrap_pi(beta / 2.0 + shift), qwp3: wrap_pi(a / 2.0) };
            if phase_distance(&seq.matrix(), target) >= RECONSTRUCTION_TOLERANCE {
                continue;
            }
            let key = |s: &WaveplateSequence| (s.qwp1, s.hwp, s.qwp3);
            if best.as_ref().is_none_or(|cur| key(&seq).partial_cmp(&key(cur)) == Some(std::cmp::Ordering::Less)) {
                best = Some(seq);
            }
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("no waveplate sequence reproduces the target".into()))
}

/// Converts polarization qubits to path qubits with a PBS and a half-wave
/// plate at 45° per qubit.
///
/// Two fresh modes `(h', v')` are appended for each qubit. The PBS sends V
/// from `v` to `v'`, the plate moves it on to `h'`, and the qubit ends up on
/// the path pair `(h, h')`.
pub fn pbs_convert(p: &PhotonicState, e: &QubitEncoding) -> Result<(PhotonicState, QubitEncoding)> {
    if e.flavor != Flavor::Polarization {
        return Err(Error::InvalidParameter("pbs_convert needs a polarization encoding".into()));
    }
    if p.modes() < e.min_modes() {
        return Err(Error::ModeOutOfRange { mode: e.min_modes() - 1, modes: p.modes() });
    }
    let base = p.modes();
    let total = base + 2 * e.qubits();
    let mut elements = Vec::new();
    let mut pairs = Vec::new();
    for (k, pair) in e.pairs.iter().enumerate() {
        let aux = ModePair(base + 2 * k, base + 2 * k + 1);
        elements.push(OpticalElement::PolarizingBeamSplitter { first: *pair, second: aux });
        elements.push(OpticalElement::hwp(aux, std::f64::consts::FRAC_PI_4));
        pairs.push(ModePair(pair.0, aux.0));
    }
    let extended = PhotonicState::tensor(p, &PhotonicState::vacuum(2 * e.qubits()));
    let out = apply(&compose(&elements, total)?, &extended)?;
    Ok((out, QubitEncoding::new(pairs, Flavor::Path)?))
}
