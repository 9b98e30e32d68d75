//! Teleportation, Bell analysis and the teleported CNOT.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detection::{outcome_distribution, DetectorModel};
use crate::encoding::{encode, QubitEncoding};
use crate::error::{Error, Result};
use crate::gates::{klm_cnot, transfer_matrix};
use crate::interferometer::{apply, compose, OpticalElement};
use crate::logical::{gate, LogicalState};
use crate::rng::trial_rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    /// `Φ± = (|00⟩ ± |11⟩)/√2`, `Ψ± = (|01⟩ ± |10⟩)/√2`.
    pub fn state(self) -> LogicalState {
        let s = FRAC_1_SQRT_2;
        let z = 0.0;
        let amps = match self {
            Self::PhiPlus => [s, z, z, s],
            Self::PhiMinus => [s, z, z, -s],
            Self::PsiPlus => [z, s, s, z],
            Self::PsiMinus => [z, s, -s, z],
        };
        LogicalState::new(2, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect()).expect("normalized")
    }

    /// Byproduct left on the teleported qubit: `X^x Z^z`.
    pub fn byproduct(self) -> PauliCorrection {
        match self {
            Self::PhiPlus => PauliCorrection::default(),
            Self::PhiMinus => PauliCorrection { x_flip: false, z_flip: true },
            Self::PsiPlus => PauliCorrection { x_flip: true, z_flip: false },
            Self::PsiMinus => PauliCorrection { x_flip: true, z_flip: true },
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::PhiPlus => "Phi+",
            Self::PhiMinus => "Phi-",
            Self::PsiPlus => "Psi+",
            Self::PsiMinus => "Psi-",
        }
    }
}

impl std::fmt::Display for BellLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The Pauli operator `X^x Z^z` on one qubit, up to phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliCorrection {
    pub x_flip: bool,
    pub z_flip: bool,
}

impl PauliCorrection {
    pub fn is_identity(self) -> bool {
        !self.x_flip && !self.z_flip
    }

    /// Product of two Paulis, ignoring phase.
    pub fn compose(self, other: Self) -> Self {
        Self { x_flip: self.x_flip ^ other.x_flip, z_flip: self.z_flip ^ other.z_flip }
    }

    /// Removes the byproduct `X^x Z^z` from qubit `q`.
    pub fn undo(self, state: &mut LogicalState, q: usize) -> Result<()> {
        if self.x_flip {
            state.apply_1q(q, &gate::x())?;
        }
        if self.z_flip {
            state.apply_1q(q, &gate::z())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceTally {
    pub entangled_pairs_consumed: u64,
    pub attempts: u64,
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_pair() -> LogicalState {
    BellLabel::PhiPlus.state()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BellOutcome {
    pub label: BellLabel,
    pub probability: f64,
    /// Normalized state of the unmeasured qubits, in their original order.
    pub remainder: LogicalState,
}

fn check_pair(state: &LogicalState, qubits: (usize, usize)) -> Result<()> {
    if state.qubits() < 2 {
        return Err(Error::QubitMismatch { expected: 2, found: state.qubits() });
    }
    if qubits.0 == qubits.1 {
        return Err(Error::InvalidParameter("Bell measurement on a single qubit".into()));
    }
    Ok(())
}

/// Projects `qubits` onto one Bell state.
pub fn bell_project(state: &LogicalState, qubits: (usize, usize), label: BellLabel) -> Result<BellOutcome> {
    check_pair(state, qubits)?;
    let rest = state.contract(&[qubits.0, qubits.1], &label.state())?;
    let probability = rest.norm_sqr();
    if probability < 1e-24 {
        return Err(Error::ImpossibleOutcome { outcome: label.to_string() });
    }
    Ok(BellOutcome { label, probability, remainder: rest.normalized()? })
}

/// Projective Bell measurement of two qubits.
pub fn bell_measure_ideal<R: Rng + ?Sized>(
    state: &LogicalState,
    qubits: (usize, usize),
    rng: &mut R,
) -> Result<BellOutcome> {
    check_pair(state, qubits)?;
    let branches: Vec<(BellLabel, LogicalState)> = BellLabel::ALL
        .iter()
        .map(|&l| state.contract(&[qubits.0, qubits.1], &l.state()).map(|s| (l, s)))
        .collect::<Result<_>>()?;
    let total: f64 = branches.iter().map(|(_, s)| s.norm_sqr()).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut chosen = None;
    for (l, s) in branches {
        let p = s.norm_sqr();
        if p <= 0.0 {
            continue;
        }
        acc += p;
        chosen = Some((l, s, p));
        if u < acc {
            break;
        }
    }
    let (label, s, p) = chosen.ok_or(Error::ZeroState)?;
    Ok(BellOutcome { label, probability: p / total, remainder: s.normalized()? })
}

/// What the linear-optics analyzer reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellAnalysis {
    Identified(BellLabel),
    /// Both photons left in one polarization; the analyzer has measured the
    /// two qubits in the computational basis instead.
    Failed {
        bits: (u8, u8),
    },
}

/// One detection pattern of the analyzer.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzerBranch {
    /// Counts on output modes `(cH, cV, dH, dV)`.
    pub pattern: Vec<u32>,
    pub analysis: BellAnalysis,
    pub probability: f64,
    /// Normalized state of the other qubits.
    pub remainder: LogicalState,
}

fn classify(pattern: &[u32]) -> BellAnalysis {
    let photons: Vec<(usize, usize)> =
        pattern.iter().enumerate().flat_map(|(m, &k)| std::iter::repeat_n((m / 2, m % 2), k as usize)).collect();
    let [(port1, pol1), (port2, pol2)] = photons[..] else { unreachable!("two photons enter the analyzer") };
    match (port1 == port2, pol1 == pol2) {
        (false, false) => BellAnalysis::Identified(BellLabel::PsiMinus),
        (true, false) => BellAnalysis::Identified(BellLabel::PsiPlus),
        _ => BellAnalysis::Failed { bits: (pol1 as u8, pol2 as u8) },
    }
}

/// Outcome functionals of the analyzer: for each detection pattern, the
/// amplitudes `v[j]` for two-qubit input `|j⟩`, from a photonic simulation
/// with 50:50 beamsplitters on the H and on the V modes of two
/// polarization qubits.
fn analyzer_functionals() -> &'static Vec<(Vec<u32>, [Complex64; 4])> {
    static CELL: OnceLock<Vec<(Vec<u32>, [Complex64; 4])>> = OnceLock::new();
    CELL.get_or_init(|| {
        let e = QubitEncoding::polarization(2);
        let u = compose(&[OpticalElement::balanced(0, 2), OpticalElement::balanced(1, 3)], 4).expect("valid network");
        let outs: Vec<_> = (0..4)
            .map(|j| apply(&u, &encode(&LogicalState::basis(2, j), &e).expect("two qubits")).expect("four modes"))
            .collect();
        let mut patterns = std::collections::BTreeSet::new();
        for o in &outs {
            patterns.extend(o.terms().map(|(b, _)| b.occupations().to_vec()));
        }
        patterns
            .into_iter()
            .map(|p| {
                let v = [0, 1, 2, 3].map(|j| outs[j].amplitude(&p));
                (p, v)
            })
            .collect()
    })
}

/// Every branch of the linear-optics Bell analyzer acting on `qubits`.
pub fn linear_optics_branches(state: &LogicalState, qubits: (usize, usize)) -> Result<Vec<AnalyzerBranch>> {
    check_pair(state, qubits)?;
    let mut out = Vec::new();
    for (pattern, v) in analyzer_functionals() {
        // contract conjugates the bra, so hand it conj(v)
        let bra = LogicalState::normalizing(2, v.iter().map(|a| a.conj()).collect())?;
        let scale: f64 = v.iter().map(|a| a.norm_sqr()).sum();
        let rest = state.contract(&[qubits.0, qubits.1], &bra)?;
        let probability = rest.norm_sqr() * scale;
        if probability < 1e-24 {
            continue;
        }
        out.push(AnalyzerBranch {
            pattern: pattern.clone(),
            analysis: classify(pattern),
            probability,
            remainder: rest.normalized()?,
        });
    }
    Ok(out)
}

/// Samples the linear-optics Bell analyzer.
pub fn bell_measure_linear_optics<R: Rng + ?Sized>(
    state: &LogicalState,
    qubits: (usize, usize),
    rng: &mut R,
) -> Result<AnalyzerBranch> {
    let branches = linear_optics_branches(state, qubits)?;
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for b in &branches {
        acc += b.probability;
        if u < acc {
            return Ok(b.clone());
        }
    }
    branches.last().cloned().ok_or(Error::ZeroState)
}

/// Analyzer statistics straight from the photonic simulation, for checking
/// the functional shortcut: probability of each pattern for a two-qubit
/// input.
pub fn linear_optics_pattern_distribution(state: &LogicalState) -> Result<std::collections::BTreeMap<Vec<u32>, f64>> {
    let e = QubitEncoding::polarization(2);
    let u = compose(&[OpticalElement::balanced(0, 2), OpticalElement::balanced(1, 3)], 4)?;
    let out = apply(&u, &encode(state, &e)?)?;
    outcome_distribution(&out, &[0, 1, 2, 3], &DetectorModel::ideal())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Teleported {
    pub output: LogicalState,
    pub label: BellLabel,
    pub correction: PauliCorrection,
}

fn teleport_with(
    input: &LogicalState,
    measure: impl FnOnce(&LogicalState) -> Result<BellOutcome>,
) -> Result<Teleported> {
    if input.qubits() != 1 {
        return Err(Error::QubitMismatch { expected: 1, found: input.qubits() });
    }
    let joint = LogicalState::tensor(input, &bell_pair());
    let outcome = measure(&joint)?;
    let correction = outcome.label.byproduct();
    let mut output = outcome.remainder;
    correction.undo(&mut output, 0)?;
    Ok(Teleported { output, label: outcome.label, correction })
}

/// Teleports one qubit through a fresh Bell pair and corrects the byproduct.
pub fn teleport_qubit<R: Rng + ?Sized>(input: &LogicalState, rng: &mut R) -> Result<Teleported> {
    teleport_with(input, |joint| bell_measure_ideal(joint, (0, 1), rng))
}

/// As [`teleport_qubit`] with the Bell outcome fixed.
pub fn teleport_forced(input: &LogicalState, label: BellLabel) -> Result<Teleported> {
    teleport_with(input, |joint| bell_project(joint, (0, 1), label))
}

/// The uncorrected output of the teleportation branch `label`.
pub fn teleport_uncorrected(input: &LogicalState, label: BellLabel) -> Result<LogicalState> {
    let joint = LogicalState::tensor(input, &bell_pair());
    Ok(bell_project(&joint, (0, 1), label)?.remainder)
}

/// Two Bell pairs `a1 b1 a2 b2` after the heralded CNOT on `(b1, b2)`, and
/// the herald probability.
fn gated_resource() -> &'static (LogicalState, f64) {
    static CELL: OnceLock<(LogicalState, f64)> = OnceLock::new();
    CELL.get_or_init(|| {
        let m = transfer_matrix(&klm_cnot()).expect("gate has a logical encoding");
        let mut op = [[Complex64::default(); 4]; 4];
        for (i, row) in op.iter_mut().enumerate() {
            row.copy_from_slice(&m[i]);
        }
        let mut pairs = LogicalState::tensor(&bell_pair(), &bell_pair());
        pairs.apply_2q(1, 3, &op).expect("four qubits");
        let p = pairs.norm_sqr();
        (pairs.normalized().expect("gate succeeds sometimes"), p)
    })
}

/// Herald probability of one CNOT attempt on the resource pairs.
pub fn cnot_attempt_probability() -> f64 {
    gated_resource().1
}

/// Controls for the teleported CNOT, mainly for tests.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Forcing {
    /// Succeed on exactly this attempt (1-based).
    pub succeed_on: Option<u64>,
    /// Bell outcomes for the control and target teleportations.
    pub labels: Option<(BellLabel, BellLabel)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TeleportedCnot {
    pub output: LogicalState,
    pub tally: ResourceTally,
    pub labels: (BellLabel, BellLabel),
    /// Corrections applied to the (control, target) outputs.
    pub corrections: (PauliCorrection, PauliCorrection),
}

/// CNOT by gate teleportation.
///
/// The heralded CNOT is attempted on halves of two fresh Bell pairs until it
/// succeeds. Control and target are then teleported through the gated pairs.
/// Byproducts picked up before the gate come out transformed: X on the
/// control becomes X on both outputs, Z on the target becomes Z on both.
pub fn teleported_cnot<R: Rng + ?Sized>(input: &LogicalState, rng: &mut R) -> Result<TeleportedCnot> {
    teleported_cnot_with(input, rng, Forcing::default())
}

pub fn teleported_cnot_with<R: Rng + ?Sized>(
    input: &LogicalState,
    rng: &mut R,
    forcing: Forcing,
) -> Result<TeleportedCnot> {
    if input.qubits() != 2 {
        return Err(Error::QubitMismatch { expected: 2, found: input.qubits() });
    }
    if forcing.succeed_on == Some(0) {
        return Err(Error::InvalidParameter("attempts are numbered from 1".into()));
    }
    let (resource, p) = gated_resource();
    let mut attempts = 0u64;
    loop {
        attempts += 1;
        let ok = match forcing.succeed_on {
            Some(n) => attempts == n,
            None => rng.random::<f64>() < *p,
        };
        if ok {
            break;
        }
    }
    // qubits: C T a1 b1 a2 b2
    let joint = LogicalState::tensor(input, resource);
    let (first, second) = match forcing.labels {
        Some((l1, l2)) => {
            let o1 = bell_project(&joint, (0, 2), l1)?;
            // remaining: T b1 a2 b2
            let o2 = bell_project(&o1.remainder, (0, 2), l2)?;
            (o1, o2)
        }
        None => {
            let o1 = bell_measure_ideal(&joint, (0, 2), rng)?;
            let o2 = bell_measure_ideal(&o1.remainder, (0, 2), rng)?;
            (o1, o2)
        }
    };
    let (bc, bt) = (first.label.byproduct(), second.label.byproduct());
    let control = PauliCorrection { x_flip: bc.x_flip, z_flip: bc.z_flip ^ bt.z_flip };
    let target = PauliCorrection { x_flip: bc.x_flip ^ bt.x_flip, z_flip: bt.z_flip };
    let mut output = second.remainder;
    control.undo(&mut output, 0)?;
    target.undo(&mut output, 1)?;
    Ok(TeleportedCnot {
        output,
        tally: ResourceTally { entangled_pairs_consumed: 2 * attempts, attempts },
        labels: (first.label, second.label),
        corrections: (control, target),
    })
}

/// One seeded Monte Carlo trial of the teleported CNOT.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnotTrial {
    pub trial: u64,
    pub attempts: u64,
    pub pairs: u64,
    /// `|⟨CNOT·input|output⟩|`.
    pub overlap: f64,
}

/// Runs `trials` independent teleported CNOTs, trial `k` drawing from
/// `trial_rng(seed, k)`.
pub fn teleported_cnot_trials(input: &LogicalState, trials: u64, seed: u64) -> Result<Vec<CnotTrial>> {
    let mut expected = input.clone();
    expected.apply_cnot(0, 1)?;
    (0..trials)
        .map(|k| {
            let r = teleported_cnot(input, &mut trial_rng(seed, k))?;
            Ok(CnotTrial {
                trial: k,
                attempts: r.tally.attempts,
                pairs: r.tally.entangled_pairs_consumed,
                overlap: LogicalState::overlap(&expected, &r.output)?,
            })
        })
        .collect()
}
