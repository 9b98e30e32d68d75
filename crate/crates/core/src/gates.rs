//! Heralded nondeterministic gates: the nonlinear sign gate and the CNOT
//! built from two of them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detection::{
    herald, outcome_distribution, project, DetectionRecord, DetectorModel, HeraldPattern, Requirement,
};
use crate::encoding::{decode, encode, logical_amplitudes, QubitEncoding};
use crate::error::{Error, Result};
use crate::fock::{FockBasisState, PhotonicState};
use crate::interferometer::{apply, compose, hadamard_network, synthesize, ModePair, ModeUnitary, OpticalElement};
use crate::logical::LogicalState;

/// A linear network plus ancilla photons, accepted only on a detection
/// pattern. Signal modes come first, ancilla modes after them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeraldedGate {
    pub name: String,
    network: Vec<OpticalElement>,
    signal_modes: usize,
    ancilla_input: Vec<u32>,
    herald: HeraldPattern,
    logical_io: Option<QubitEncoding>,
}

impl HeraldedGate {
    pub fn new(
        name: impl Into<String>,
        network: Vec<OpticalElement>,
        signal_modes: usize,
        ancilla_input: Vec<u32>,
        herald: HeraldPattern,
        logical_io: Option<QubitEncoding>,
    ) -> Result<Self> {
        let modes = signal_modes + ancilla_input.len();
        compose(&network, modes)?;
        for m in herald.modes() {
            if m < signal_modes || m >= modes {
                return Err(Error::InvalidParameter(format!("herald mode {m} is not an ancilla mode")));
            }
        }
        if herald.iter().any(|(_, r)| r == Requirement::Click) {
            return Err(Error::InvalidParameter("gate heralds need exact counts".into()));
        }
        if let Some(io) = &logical_io {
            if io.min_modes() > signal_modes {
                return Err(Error::ModeOutOfRange { mode: io.min_modes() - 1, modes: signal_modes });
            }
        }
        Ok(Self { name: name.into(), network, signal_modes, ancilla_input, herald, logical_io })
    }

    pub fn network(&self) -> &[OpticalElement] {
        &self.network
    }

    pub fn modes(&self) -> usize {
        self.signal_modes + self.ancilla_input.len()
    }

    pub fn signal_modes(&self) -> usize {
        self.signal_modes
    }

    pub fn ancilla_input(&self) -> &[u32] {
        &self.ancilla_input
    }

    pub fn herald(&self) -> &HeraldPattern {
        &self.herald
    }

    pub fn logical_io(&self) -> Option<&QubitEncoding> {
        self.logical_io.as_ref()
    }

    pub fn unitary(&self) -> Result<ModeUnitary> {
        compose(&self.network, self.modes())
    }

    /// Heralded counts in ascending mode order.
    fn nominal_counts(&self) -> Vec<u32> {
        self.herald
            .iter()
            .map(|(_, r)| match r {
                Requirement::Count(k) => k,
                Requirement::Click => 1,
            })
            .collect()
    }

    fn evolve(&self, signal: &PhotonicState) -> Result<PhotonicState> {
        if signal.modes() != self.signal_modes {
            return Err(Error::ModeMismatch { left: self.signal_modes, right: signal.modes() });
        }
        let ancilla = PhotonicState::from_basis(FockBasisState::new(self.ancilla_input.clone()));
        apply(&self.unitary()?, &PhotonicState::tensor(signal, &ancilla))
    }
}

/// The 3-mode real orthogonal matrix of the nonlinear sign gate. Mode 0 is
/// the signal, mode 1 carries the ancilla photon, mode 2 starts empty.
pub fn ns_matrix() -> ModeUnitary {
    let s2 = std::f64::consts::SQRT_2;
    let q = 2f64.powf(-0.25);
    let w = (3.0 / s2 - 2.0).sqrt();
    let rows = [[1.0 - s2, q, w], [q, 0.5, 0.5 - 1.0 / s2], [w, 0.5 - 1.0 / s2, s2 - 0.5]];
    let m = DMatrix::from_fn(3, 3, |i, j| Complex64::new(rows[i][j], 0.0));
    ModeUnitary::new(m).expect("orthogonal to rounding")
}

/// Nonlinear sign gate: `α₀|0⟩ + α₁|1⟩ + α₂|2⟩ → α₀|0⟩ + α₁|1⟩ − α₂|2⟩`,
/// heralded by one photon in mode 1 and none in mode 2, with probability 1/4.
pub fn ns_gate() -> HeraldedGate {
    HeraldedGate::new(
        "ns",
        synthesize(&ns_matrix()),
        1,
        vec![1, 0],
        HeraldPattern::counts(&[(1, 1), (2, 0)]).expect("distinct modes"),
        None,
    )
    .expect("valid construction")
}

/// Heralded CNOT on path qubits: control on modes (0, 1), target on (2, 3).
///
/// The |1⟩ rails of control and target meet on a 50:50 beamsplitter, each
/// output passes an NS gate, and the inverse beamsplitter recombines them:
/// a controlled-Z. Hadamards on the target rails turn it into a CNOT.
/// Ancilla modes 4..8 hold the two NS gates' helper modes.
pub fn klm_cnot() -> HeraldedGate {
    let ns = synthesize(&ns_matrix());
    let target = ModePair(2, 3);
    let mut net = hadamard_network(target);
    net.push(OpticalElement::balanced(1, 3));
    net.extend(ns.iter().map(|e| e.remapped(&[1, 4, 5])));
    net.extend(ns.iter().map(|e| e.remapped(&[3, 6, 7])));
    // inverse of the symmetric beamsplitter
    net.push(OpticalElement::phase(3, std::f64::consts::PI));
    net.push(OpticalElement::balanced(1, 3));
    net.push(OpticalElement::phase(3, std::f64::consts::PI));
    net.extend(hadamard_network(target));
    HeraldedGate::new(
        "klm_cnot",
        net,
        4,
        vec![1, 0, 1, 0],
        HeraldPattern::counts(&[(4, 1), (5, 0), (6, 1), (7, 0)]).expect("distinct modes"),
        Some(QubitEncoding::path(2)),
    )
    .expect("valid construction")
}

/// Result of running a gate on photonic input.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotonicRun {
    /// Probability that the nominal herald photons were present and all of
    /// them registered.
    pub probability: f64,
    /// Probability of the herald reading, false heralds included.
    pub apparent_probability: f64,
    /// Signal-mode state on true success, renormalized.
    pub output: Option<PhotonicState>,
    pub record: DetectionRecord,
}

/// Runs a gate on a state of its signal modes.
pub fn run_photonic(g: &HeraldedGate, signal: &PhotonicState, d: &DetectorModel) -> Result<PhotonicRun> {
    let out = g.evolve(signal)?;
    let record = herald(&out, &g.herald, d)?;
    let nominal = g.nominal_counts();
    let success = record.branches().iter().find(|b| b.true_counts == nominal);
    Ok(PhotonicRun {
        probability: success.map_or(0.0, |b| b.probability),
        apparent_probability: record.probability,
        output: success.map(|b| b.state.clone()),
        record,
    })
}

/// Outcome of a heralded gate on logical input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRunResult {
    pub success: bool,
    /// True success probability (see [`PhotonicRun::probability`]).
    pub probability: f64,
    pub apparent_probability: f64,
    pub logical_output: Option<LogicalState>,
    /// Weight outside the dual-rail subspace in the success branch.
    pub leakage: f64,
    /// Herald-mode readings other than the success pattern.
    pub failures: Vec<Reading>,
}

/// A detector reading on the herald modes, ascending mode order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reading {
    pub counts: Vec<u32>,
    pub probability: f64,
}

/// Encode, add ancillas, evolve, herald, decode.
pub fn run_heralded(g: &HeraldedGate, input: &LogicalState, d: &DetectorModel) -> Result<GateRunResult> {
    let io = g
        .logical_io
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("gate {} has no logical encoding", g.name)))?;
    if input.qubits() != io.qubits() {
        return Err(Error::QubitMismatch { expected: io.qubits(), found: input.qubits() });
    }
    let signal = crate::encoding::encode_into(input, io, g.signal_modes)?;
    let run = run_photonic(g, &signal, d)?;
    let (logical_output, leakage) = match &run.output {
        Some(p) => {
            let dec = decode(p, io)?;
            (Some(dec.state), dec.leakage)
        }
        None => (None, 0.0),
    };
    let out = g.evolve(&signal)?;
    let nominal = g.nominal_counts();
    let failures = outcome_distribution(&out, &g.herald.modes(), d)?
        .into_iter()
        .filter(|(counts, p)| *counts != nominal && *p > 0.0)
        .map(|(counts, probability)| Reading { counts, probability })
        .collect();
    Ok(GateRunResult {
        success: run.probability > 0.0,
        probability: run.probability,
        apparent_probability: run.apparent_probability,
        logical_output,
        leakage,
        failures,
    })
}

/// Heralded linear map on the logical subspace with ideal detectors:
/// column `j` is the unnormalized logical output for input `|j⟩`.
pub fn transfer_matrix(g: &HeraldedGate) -> Result<Vec<Vec<Complex64>>> {
    let io = g
        .logical_io
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("gate {} has no logical encoding", g.name)))?;
    let dim = 1usize << io.qubits();
    let mut m = vec![vec![Complex64::default(); dim]; dim];
    for j in 0..dim {
        let signal = encode(&LogicalState::basis(io.qubits(), j), io)?;
        let projected = project(&g.evolve(&signal)?, &g.herald)?;
        let (col, _) = logical_amplitudes(&projected, io)?;
        for (row, a) in m.iter_mut().zip(col) {
            row[j] = a;
        }
    }
    Ok(m)
}
