//! Dense state vectors over qubits.
//!
//! Basis index `b` has qubit 0 as its most significant bit, so the 2-qubit
//! string `10` (qubit 0 set) is index 2.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Normalization tolerance for logical states.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// A 2×2 single-qubit operator, `m[row][col]`.
pub type Gate1 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub mod gate {
    use super::*;

    pub fn identity() -> Gate1 {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
    }

    pub fn hadamard() -> Gate1 {
        let h = FRAC_1_SQRT_2;
        [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
    }

    pub fn x() -> Gate1 {
        [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
    }

    pub fn z() -> Gate1 {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64) -> Gate1 {
        [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, theta)]]
    }

    /// `a·b` as matrices (`b` acts first).
    pub fn mul(a: &Gate1, b: &Gate1) -> Gate1 {
        let mut out = [[Complex64::default(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    pub fn adjoint(a: &Gate1) -> Gate1 {
        [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
    }
}

/// State of `n` qubits as `2ⁿ` amplitudes in binary order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LogicalJson", into = "LogicalJson")]
pub struct LogicalState {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl LogicalState {
    /// Checks length and normalization.
    pub fn new(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let s = Self::unchecked(qubits, amps)?;
        let n = s.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized { norm_sqr: n });
        }
        Ok(s)
    }

    /// Normalizes the given amplitudes.
    pub fn normalizing(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::unchecked(qubits, amps)?.normalized()
    }

    pub(crate) fn unchecked(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << qubits {
            return Err(Error::InvalidParameter(format!("{} amplitudes given for {qubits} qubits", amps.len())));
        }
        Ok(Self { qubits, amps })
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::default(); 1 << qubits];
        amps[index] = c(1.0, 0.0);
        Self { qubits, amps }
    }

    /// Computational basis state from a bit string such as `"10"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                _ => return Err(Error::InvalidParameter(format!("bad bit string {bits:?}"))),
            }
        }
        Ok(Self::basis(bits.len(), index))
    }

    /// `α|0⟩ + β|1⟩`, normalized.
    pub fn qubit(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::normalizing(1, vec![alpha, beta])
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        Self { qubits: 1, amps: vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)] }
    }

    /// The state with no qubits (a single amplitude 1).
    pub fn scalar() -> Self {
        Self { qubits: 0, amps: vec![c(1.0, 0.0)] }
    }

    /// A Haar-random state.
    pub fn random<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Self {
        loop {
            let amps: Vec<Complex64> =
                (0..1usize << qubits).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
            if let Ok(s) = Self::normalizing(qubits, amps) {
                return s;
            }
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= 1e-300 || !n.is_finite() {
            return Err(Error::ZeroState);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(self)
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.qubits {
            return Err(Error::QubitOutOfRange { qubit: q, qubits: self.qubits });
        }
        Ok(())
    }

    pub fn inner(a: &Self, b: &Self) -> Result<Complex64> {
        if a.qubits != b.qubits {
            return Err(Error::QubitMismatch { expected: a.qubits, found: b.qubits });
        }
        Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
    }

    /// `|⟨a|b⟩|`, the global-phase-free overlap.
    pub fn overlap(a: &Self, b: &Self) -> Result<f64> {
        Self::inner(a, b).map(|z| z.norm())
    }

    /// `a ⊗ b` with the qubits of `a` first.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let mut amps = Vec::with_capacity(a.amps.len() * b.amps.len());
        for x in &a.amps {
            for y in &b.amps {
                amps.push(x * y);
            }
        }
        Self { qubits: a.qubits + b.qubits, amps }
    }

    /// Applies a single-qubit operator in place.
    pub fn apply_1q(&mut self, q: usize, m: &Gate1) -> Result<()> {
        self.check_qubit(q)?;
        let bit = self.bit(q);
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::InvalidParameter("controlled gate on a single qubit".into()));
        }
        let mask = self.bit(a) | self.bit(b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::InvalidParameter("controlled gate on a single qubit".into()));
        }
        let cb = self.bit(control);
        let tb = self.bit(target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
        Ok(())
    }

    /// Applies a two-qubit operator given in the basis `|q1 q2⟩` (q1 most significant).
    pub fn apply_2q(&mut self, q1: usize, q2: usize, m: &[[Complex64; 4]; 4]) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::InvalidParameter("two-qubit gate on a single qubit".into()));
        }
        let b1 = self.bit(q1);
        let b2 = self.bit(q2);
        for i in 0..self.amps.len() {
            if i & (b1 | b2) == 0 {
                let idx = [i, i | b2, i | b1, i | b1 | b2];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|s| m[r][s] * v[s]).sum();
                }
            }
        }
        Ok(())
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = self.bit(q);
        Ok(self.amps.iter().enumerate().filter(|(i, _)| i & bit != 0).map(|(_, a)| a.norm_sqr()).sum())
    }

    /// Contracts the listed qubits against `bra` (a state on those qubits, in
    /// the listed order), returning the unnormalized state of the rest.
    pub fn contract(&self, qubits: &[usize], bra: &Self) -> Result<Self> {
        if bra.qubits != qubits.len() {
            return Err(Error::QubitMismatch { expected: qubits.len(), found: bra.qubits });
        }
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return Err(Error::InvalidParameter(format!("qubit {q} listed twice")));
            }
        }
        let rest: Vec<usize> = (0..self.qubits).filter(|q| !qubits.contains(q)).collect();
        let mut out = vec![Complex64::default(); 1 << rest.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let mut sub = 0;
            for &q in qubits {
                sub = (sub << 1) | usize::from(i & self.bit(q) != 0);
            }
            let mut r = 0;
            for &q in &rest {
                r = (r << 1) | usize::from(i & self.bit(q) != 0);
            }
            out[r] += bra.amps[sub].conj() * amp;
        }
        Ok(Self { qubits: rest.len(), amps: out })
    }

    /// Reduced density matrix of one qubit.
    pub fn reduced_density(&self, q: usize) -> Result<[[Complex64; 2]; 2]> {
        self.check_qubit(q)?;
        let bit = self.bit(q);
        let mut rho = [[Complex64::default(); 2]; 2];
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                rho[0][0] += a0 * a0.conj();
                rho[0][1] += a0 * a1.conj();
                rho[1][0] += a1 * a0.conj();
                rho[1][1] += a1 * a1.conj();
            }
        }
        Ok(rho)
    }

    /// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of qubit `q`'s reduced state; shorter
    /// than 1 when `q` is entangled with the rest.
    pub fn marginal_bloch(&self, q: usize) -> Result<[f64; 3]> {
        let rho = self.reduced_density(q)?;
        let norm = (rho[0][0] + rho[1][1]).re;
        Ok([2.0 * rho[1][0].re / norm, 2.0 * rho[1][0].im / norm, (rho[0][0] - rho[1][1]).re / norm])
    }
}

#[derive(Serialize, Deserialize)]
struct LogicalJson {
    n: usize,
    amps: Vec<[f64; 2]>,
}

impl From<LogicalState> for LogicalJson {
    fn from(s: LogicalState) -> Self {
        Self { n: s.qubits, amps: s.amps.iter().map(|a| [a.re, a.im]).collect() }
    }
}

impl TryFrom<LogicalJson> for LogicalState {
    type Error = Error;

    fn try_from(j: LogicalJson) -> Result<Self> {
        Self::new(j.n, j.amps.into_iter().map(|[re, im]| c(re, im)).collect())
    }
}
