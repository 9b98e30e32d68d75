//! Measurement-based computation on qubit cluster states.
//!
//! Nodes start in `|+⟩` (or a declared input state) and are joined by CZ
//! bonds. An equatorial measurement at angle `α` projects onto
//! `(|0⟩ ± e^{−iα}|1⟩)/√2`; on a chain it leaves `X^s·H·Z(α)` on the next
//! node, `Z(α) = diag(1, e^{iα})`.
//!
//! Byproducts are tracked in a Pauli frame rather than applied. For a node
//! carrying `X^x Z^z`, measuring at `(−1)^x·α` and reading `s ⊕ z` is the
//! same as measuring the byproduct-free state at `α`. An outcome of 1 is
//! absorbed by the flow successor `f(i)`: X on `f(i)` and Z on the other
//! neighbours of `f(i)`. A Z-basis outcome of 1 puts Z on every neighbour.
//! Bonds added after a byproduct exist propagate it through the CZ.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logical::{gate, LogicalState};
use crate::teleport::PauliCorrection;

/// Largest cluster simulated densely.
pub const NODE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterGraph {
    nodes: usize,
    edges: BTreeSet<(usize, usize)>,
    /// Nodes not starting in `|+⟩`.
    inputs: BTreeMap<usize, LogicalState>,
}

impl ClusterGraph {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes > NODE_CAP {
            return Err(Error::ClusterTooLarge { nodes, cap: NODE_CAP });
        }
        Ok(Self { nodes, edges: BTreeSet::new(), inputs: BTreeMap::new() })
    }

    pub fn with_edges(nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(nodes)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// A chain `0 - 1 - … - (n−1)`.
    pub fn linear(nodes: usize) -> Result<Self> {
        let edges: Vec<_> = (1..nodes).map(|i| (i - 1, i)).collect();
        Self::with_edges(nodes, &edges)
    }

    fn check_node(&self, n: usize) -> Result<()> {
        if n >= self.nodes {
            return Err(Error::QubitOutOfRange { qubit: n, qubits: self.nodes });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_node(a)?;
        self.check_node(b)?;
        if a == b {
            return Err(Error::InvalidParameter(format!("self-edge on node {a}")));
        }
        if !self.edges.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidParameter(format!("duplicate edge {a}-{b}")));
        }
        Ok(())
    }

    /// Starts `node` in a given one-qubit state instead of `|+⟩`.
    pub fn set_input(&mut self, node: usize, state: LogicalState) -> Result<()> {
        self.check_node(node)?;
        if state.qubits() != 1 {
            return Err(Error::QubitMismatch { expected: 1, found: state.qubits() });
        }
        self.inputs.insert(node, state);
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, n: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == n {
                    Some(b)
                } else if b == n {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn init(&self, n: usize) -> LogicalState {
        self.inputs.get(&n).cloned().unwrap_or_else(LogicalState::plus)
    }

    pub fn is_plus(&self, n: usize) -> bool {
        !self.inputs.contains_key(&n)
    }

    pub fn inputs(&self) -> &BTreeMap<usize, LogicalState> {
        &self.inputs
    }
}

/// `nodes` qubits in their initial states with a CZ on every edge.
pub fn build_cluster(g: &ClusterGraph) -> Result<LogicalState> {
    let mut s = LogicalState::scalar();
    for n in 0..g.nodes {
        s = LogicalState::tensor(&s, &g.init(n));
    }
    for (a, b) in g.edges() {
        s.apply_cz(a, b)?;
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "plane")]
pub enum Basis {
    /// Equatorial basis `(|0⟩ ± e^{−iα}|1⟩)/√2`, angle in radians.
    Xy {
        angle: f64,
    },
    Z,
}

/// How the sign of an equatorial angle is chosen.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adapt {
    /// From the Pauli frame.
    #[default]
    Frame,
    /// `angle·(−1)^{⊕ outcomes of on}`, negated once more if `negate`.
    Explicit { negate: bool, on: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementInstruction {
    pub node: usize,
    pub basis: Basis,
    #[serde(default)]
    pub adapt: Adapt,
    /// Successor absorbing the X byproduct; chosen automatically if absent.
    #[serde(default)]
    pub flow: Option<usize>,
}

impl MeasurementInstruction {
    pub fn xy(node: usize, angle: f64) -> Self {
        Self { node, basis: Basis::Xy { angle }, adapt: Adapt::Frame, flow: None }
    }

    pub fn z(node: usize) -> Self {
        Self { node, basis: Basis::Z, adapt: Adapt::Frame, flow: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub node: usize,
    pub basis: String,
    /// Angle actually measured, radians (0 for the Z basis).
    pub angle: f64,
    pub outcome: u8,
    /// Outcome with the frame's flip removed.
    pub corrected: u8,
    pub flow: Option<usize>,
}

/// Pending byproducts per node.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PauliFrame(BTreeMap<usize, PauliCorrection>);

impl PauliFrame {
    pub fn get(&self, n: usize) -> PauliCorrection {
        self.0.get(&n).copied().unwrap_or_default()
    }

    pub fn flip_x(&mut self, n: usize) {
        self.0.entry(n).or_default().x_flip ^= true;
    }

    pub fn flip_z(&mut self, n: usize) {
        self.0.entry(n).or_default().z_flip ^= true;
    }

    pub fn remove(&mut self, n: usize) -> PauliCorrection {
        self.0.remove(&n).unwrap_or_default()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.values().all(|c| c.is_identity())
    }

    /// Frame product, node by node.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&n, &c) in &other.0 {
            let e = out.0.entry(n).or_default();
            *e = e.compose(c);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, PauliCorrection)> + '_ {
        self.0.iter().map(|(&n, &c)| (n, c))
    }
}

/// A cluster being measured, possibly while it is still being bonded.
#[derive(Clone, Debug)]
pub struct ClusterState {
    graph: ClusterGraph,
    /// Node ids still in `state`, ascending; position = qubit index.
    alive: Vec<usize>,
    state: LogicalState,
    frame: PauliFrame,
    outcomes: BTreeMap<usize, u8>,
    transcript: Vec<TranscriptEntry>,
}

/// Supplies outcome bits: given the node and `P(0)`, returns 0 or 1.
pub type OutcomeChooser<'a> = dyn FnMut(usize, f64) -> u8 + 'a;

impl ClusterState {
    /// Prepares `g` with its bonds.
    pub fn new(g: &ClusterGraph) -> Result<Self> {
        Ok(Self {
            state: build_cluster(g)?,
            graph: g.clone(),
            alive: (0..g.nodes).collect(),
            frame: PauliFrame::default(),
            outcomes: BTreeMap::new(),
            transcript: Vec::new(),
        })
    }

    fn position(&self, n: usize) -> Result<usize> {
        self.graph.check_node(n)?;
        self.alive.binary_search(&n).map_err(|_| Error::AlreadyMeasured(n))
    }

    pub fn graph(&self) -> &ClusterGraph {
        &self.graph
    }

    pub fn frame(&self) -> &PauliFrame {
        &self.frame
    }

    pub fn transcript(&self) -> &[TranscriptEntry] {
        &self.transcript
    }

    pub fn is_measured(&self, n: usize) -> bool {
        self.outcomes.contains_key(&n)
    }

    /// Adds a CZ bond between two unmeasured nodes.
    pub fn bond(&mut self, a: usize, b: usize) -> Result<()> {
        for n in [a, b] {
            if self.is_measured(n) {
                return Err(Error::Ordering { node: n, reason: "bond added after measurement".into() });
            }
        }
        self.graph.add_edge(a, b)?;
        let (pa, pb) = (self.position(a)?, self.position(b)?);
        self.state.apply_cz(pa, pb)?;
        // CZ·X_a·CZ = X_a·Z_b
        let (fa, fb) = (self.frame.get(a), self.frame.get(b));
        if fa.x_flip {
            self.frame.flip_z(b);
        }
        if fb.x_flip {
            self.frame.flip_z(a);
        }
        Ok(())
    }

    fn unmeasured_neighbors(&self, n: usize) -> Vec<usize> {
        self.graph.neighbors(n).into_iter().filter(|&m| !self.is_measured(m)).collect()
    }

    fn valid_flow(&self, i: usize, j: usize) -> bool {
        self.graph.has_edge(i, j)
            && !self.is_measured(j)
            && self.graph.is_plus(j)
            && self.graph.neighbors(j).iter().all(|&k| k == i || !self.is_measured(k))
    }

    fn pick_flow(&self, instr: &MeasurementInstruction) -> Result<Option<usize>> {
        let i = instr.node;
        if let Some(j) = instr.flow {
            self.graph.check_node(j)?;
            if !self.valid_flow(i, j) {
                return Err(Error::NoFlow(i));
            }
            return Ok(Some(j));
        }
        let candidates = self.unmeasured_neighbors(i);
        if candidates.is_empty() {
            // a final readout: nothing left to correct
            return Ok(None);
        }
        candidates.into_iter().find(|&j| self.valid_flow(i, j)).map(Some).ok_or(Error::NoFlow(i))
    }

    fn actual_angle(&self, instr: &MeasurementInstruction, angle: f64) -> Result<f64> {
        match &instr.adapt {
            Adapt::Frame => Ok(if self.frame.get(instr.node).x_flip { -angle } else { angle }),
            Adapt::Explicit { negate, on } => {
                let mut flip = *negate;
                for &m in on {
                    let s = self.outcomes.get(&m).ok_or_else(|| Error::Adaptivity {
                        node: instr.node,
                        reason: format!("depends on node {m}, which is not measured yet"),
                    })?;
                    flip ^= *s == 1;
                }
                Ok(if flip { -angle } else { angle })
            }
        }
    }

    /// Measures one node; `choose` picks the outcome.
    pub fn measure(
        &mut self,
        instr: &MeasurementInstruction,
        choose: &mut OutcomeChooser<'_>,
    ) -> Result<TranscriptEntry> {
        let i = instr.node;
        let pos = self.position(i)?;
        let (angle, bras) = match instr.basis {
            Basis::Xy { angle } => {
                let a = self.actual_angle(instr, angle)?;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let e = Complex64::from_polar(s, -a);
                let b0 = LogicalState::new(1, vec![Complex64::new(s, 0.0), e])?;
                let b1 = LogicalState::new(1, vec![Complex64::new(s, 0.0), -e])?;
                (a, [b0, b1])
            }
            Basis::Z => (0.0, [LogicalState::basis(1, 0), LogicalState::basis(1, 1)]),
        };
        let flow = match instr.basis {
            Basis::Xy { .. } => self.pick_flow(instr)?,
            Basis::Z => None,
        };
        let branches = [self.state.contract(&[pos], &bras[0])?, self.state.contract(&[pos], &bras[1])?];
        let p0 = branches[0].norm_sqr() / (branches[0].norm_sqr() + branches[1].norm_sqr());
        let s = choose(i, p0).min(1);
        let p = if s == 0 { p0 } else { 1.0 - p0 };
        if p < 1e-24 {
            return Err(Error::ImpossibleOutcome { outcome: format!("node {i} = {s}") });
        }
        let [b0, b1] = branches;
        self.state = if s == 0 { b0 } else { b1 }.normalized()?;
        self.alive.remove(pos);
        self.outcomes.insert(i, s);

        let own = self.frame.remove(i);
        let corrected = match instr.basis {
            Basis::Xy { .. } => s ^ u8::from(own.z_flip),
            Basis::Z => s ^ u8::from(own.x_flip),
        };
        if corrected == 1 {
            match (instr.basis, flow) {
                (Basis::Xy { .. }, Some(j)) => {
                    self.frame.flip_x(j);
                    for k in self.graph.neighbors(j) {
                        if k != i {
                            self.frame.flip_z(k);
                        }
                    }
                }
                (Basis::Z, _) => {
                    for k in self.unmeasured_neighbors(i) {
                        self.frame.flip_z(k);
                    }
                }
                (Basis::Xy { .. }, None) => {}
            }
        }
        let entry = TranscriptEntry {
            node: i,
            basis: match instr.basis {
                Basis::Xy { .. } => "xy".into(),
                Basis::Z => "z".into(),
            },
            angle,
            outcome: s,
            corrected,
            flow,
        };
        self.transcript.push(entry.clone());
        Ok(entry)
    }

    /// Applies the frame to the unmeasured nodes and returns the result.
    pub fn finish(self) -> Result<PatternRun> {
        let mut output = self.state;
        for (n, c) in self.frame.iter() {
            let pos = self.alive.binary_search(&n).expect("frame only holds unmeasured nodes");
            c.undo(&mut output, pos)?;
        }
        Ok(PatternRun { output, output_nodes: self.alive, transcript: self.transcript, frame: self.frame })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternRun {
    /// Corrected state of the unmeasured nodes, ascending node order.
    pub output: LogicalState,
    pub output_nodes: Vec<usize>,
    pub transcript: Vec<TranscriptEntry>,
    /// Frame that was applied to produce `output`.
    pub frame: PauliFrame,
}

fn sampler<R: Rng + ?Sized>(rng: &mut R) -> impl FnMut(usize, f64) -> u8 + '_ {
    move |_, p0| u8::from(rng.random::<f64>() >= p0)
}

/// Measures `schedule` in order on the full cluster.
pub fn run_pattern<R: Rng + ?Sized>(
    g: &ClusterGraph,
    schedule: &[MeasurementInstruction],
    rng: &mut R,
) -> Result<PatternRun> {
    run_pattern_with(g, schedule, &mut sampler(rng))
}

/// As [`run_pattern`] with outcomes taken from `outcomes` in order.
pub fn run_pattern_forced(
    g: &ClusterGraph,
    schedule: &[MeasurementInstruction],
    outcomes: &[u8],
) -> Result<PatternRun> {
    if outcomes.len() != schedule.len() {
        return Err(Error::InvalidParameter(format!(
            "{} outcomes for {} measurements",
            outcomes.len(),
            schedule.len()
        )));
    }
    let mut it = outcomes.iter().copied();
    run_pattern_with(g, schedule, &mut move |_, _| it.next().unwrap_or(0))
}

pub fn run_pattern_with(
    g: &ClusterGraph,
    schedule: &[MeasurementInstruction],
    choose: &mut OutcomeChooser<'_>,
) -> Result<PatternRun> {
    let mut cs = ClusterState::new(g)?;
    for instr in schedule {
        cs.measure(instr, choose)?;
    }
    cs.finish()
}

/// One step of interleaved growth and measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthStep {
    Bond(usize, usize),
    Measure(MeasurementInstruction),
}

/// Starts from `g` and interleaves new bonds with measurements. A node may
/// only be measured once every bond touching it has been added.
pub fn grow_while_measuring<R: Rng + ?Sized>(
    g: &ClusterGraph,
    steps: &[GrowthStep],
    rng: &mut R,
) -> Result<PatternRun> {
    grow_while_measuring_with(g, steps, &mut sampler(rng))
}

pub fn grow_while_measuring_with(
    g: &ClusterGraph,
    steps: &[GrowthStep],
    choose: &mut OutcomeChooser<'_>,
) -> Result<PatternRun> {
    let mut pending: BTreeMap<usize, usize> = BTreeMap::new();
    for step in steps {
        if let GrowthStep::Bond(a, b) = *step {
            *pending.entry(a).or_default() += 1;
            *pending.entry(b).or_default() += 1;
        }
    }
    let mut cs = ClusterState::new(g)?;
    for step in steps {
        match step {
            GrowthStep::Bond(a, b) => {
                cs.bond(*a, *b)?;
                for n in [a, b] {
                    *pending.get_mut(n).expect("counted above") -= 1;
                }
            }
            GrowthStep::Measure(instr) => {
                if pending.get(&instr.node).copied().unwrap_or(0) > 0 {
                    return Err(Error::Ordering { node: instr.node, reason: "a later bond touches this node".into() });
                }
                cs.measure(instr, choose)?;
            }
        }
    }
    cs.finish()
}

/// The full graph a growth sequence ends with.
pub fn grown_graph(g: &ClusterGraph, steps: &[GrowthStep]) -> Result<ClusterGraph> {
    let mut out = g.clone();
    for step in steps {
        if let GrowthStep::Bond(a, b) = *step {
            out.add_edge(a, b)?;
        }
    }
    Ok(out)
}

/// The measurements of a growth sequence, in order.
pub fn growth_schedule(steps: &[GrowthStep]) -> Vec<MeasurementInstruction> {
    steps
        .iter()
        .filter_map(|s| match s {
            GrowthStep::Measure(m) => Some(m.clone()),
            GrowthStep::Bond(..) => None,
        })
        .collect()
}

/// Brickwork lattice of `wires × columns` nodes, id `column·wires + wire`.
/// Horizontal bonds along each wire; vertical bonds between wires `w` and
/// `w+1` on columns where `column + w` is odd.
pub fn brickwork(wires: usize, columns: usize) -> Result<ClusterGraph> {
    let mut g = ClusterGraph::new(wires * columns)?;
    let id = |c: usize, w: usize| c * wires + w;
    for c in 0..columns {
        for w in 0..wires {
            if c + 1 < columns {
                g.add_edge(id(c, w), id(c + 1, w))?;
            }
            if w + 1 < wires && c > 0 && c + 1 < columns && (c + w) % 2 == 1 {
                g.add_edge(id(c, w), id(c, w + 1))?;
            }
        }
    }
    Ok(g)
}

/// `H·Z(φ)` for the chain rule of a linear cluster.
pub fn chain_step(phi: f64) -> crate::logical::Gate1 {
    gate::mul(&gate::hadamard(), &gate::phase(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_node_cluster_amplitudes() {
        let s = build_cluster(&ClusterGraph::linear(2).unwrap()).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!((a - c(w, 0.0)).norm() < 1e-15);
        }
        let one = build_cluster(&ClusterGraph::new(1).unwrap()).unwrap();
        assert_eq!(one, LogicalState::plus());
    }

    #[test]
    fn cap_and_edge_errors() {
        assert!(matches!(ClusterGraph::new(21), Err(Error::ClusterTooLarge { .. })));
        let mut g = ClusterGraph::new(3).unwrap();
        assert!(g.add_edge(1, 1).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
    }

    #[test]
    fn plus_at_zero_angle_reads_zero() {
        let g = ClusterGraph::new(1).unwrap();
        let r = run_pattern(&g, &[MeasurementInstruction::xy(0, 0.0)], &mut seeded(3)).unwrap();
        assert_eq!(r.transcript[0].outcome, 0);
        let mut g = ClusterGraph::new(1).unwrap();
        g.set_input(0, LogicalState::basis(1, 0)).unwrap();
        let r = run_pattern(&g, &[MeasurementInstruction::z(0)], &mut seeded(3)).unwrap();
        assert_eq!(r.transcript[0].outcome, 0);
        assert_eq!(r.output, LogicalState::scalar());
    }

    #[test]
    fn one_step_teleportation() {
        let g = ClusterGraph::linear(2).unwrap();
        let alpha = 0.7;
        for s in [0u8, 1] {
            let mut cs = ClusterState::new(&g).unwrap();
            cs.measure(&MeasurementInstruction::xy(0, alpha), &mut |_, _| s).unwrap();
            // raw state before correction
            let raw = cs.state.clone();
            let mut want = LogicalState::plus();
            want.apply_1q(0, &chain_step(alpha)).unwrap();
            if s == 1 {
                want.apply_1q(0, &gate::x()).unwrap();
            }
            assert!(LogicalState::overlap(&raw, &want).unwrap() > 1.0 - 1e-12);
            assert_eq!(cs.frame().get(1).x_flip, s == 1);
        }
    }

    #[test]
    fn measuring_twice_is_rejected() {
        let g = ClusterGraph::linear(3).unwrap();
        let sched = [MeasurementInstruction::xy(0, 0.0), MeasurementInstruction::xy(0, 0.0)];
        assert_eq!(run_pattern(&g, &sched, &mut seeded(0)).unwrap_err(), Error::AlreadyMeasured(0));
    }

    #[test]
    fn explicit_adaptivity_needs_measured_source() {
        let g = ClusterGraph::linear(3).unwrap();
        let mut m = MeasurementInstruction::xy(0, 0.3);
        m.adapt = Adapt::Explicit { negate: false, on: vec![1] };
        assert!(matches!(run_pattern(&g, &[m], &mut seeded(0)), Err(Error::Adaptivity { .. })));
    }

    #[test]
    fn cnot_pattern() {
        let g0 = ClusterGraph::with_edges(4, &[(1, 2), (2, 3), (0, 2)]).unwrap();
        let sched = [MeasurementInstruction::xy(1, 0.0), MeasurementInstruction::xy(2, 0.0)];
        for (ctl, tgt) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let mut g = g0.clone();
            g.set_input(0, LogicalState::basis(1, ctl)).unwrap();
            g.set_input(1, LogicalState::basis(1, tgt)).unwrap();
            for outcomes in [[0, 0], [0, 1], [1, 0], [1, 1]] {
                let r = run_pattern_forced(&g, &sched, &outcomes).unwrap();
                assert_eq!(r.output_nodes, vec![0, 3]);
                let want = LogicalState::basis(2, (ctl << 1) | (tgt ^ ctl));
                assert!(LogicalState::overlap(&r.output, &want).unwrap() > 1.0 - 1e-10, "{ctl}{tgt} {outcomes:?}");
            }
        }
    }

    #[test]
    fn frame_composes_to_identity() {
        let mut f = PauliFrame::default();
        f.flip_x(2);
        f.flip_z(5);
        assert!(f.compose(&f).is_trivial());
    }

    #[test]
    fn growth_ordering_is_enforced() {
        let g = ClusterGraph::new(3).unwrap();
        let steps =
            [GrowthStep::Bond(0, 1), GrowthStep::Measure(MeasurementInstruction::xy(1, 0.2)), GrowthStep::Bond(1, 2)];
        assert!(matches!(grow_while_measuring(&g, &steps, &mut seeded(0)), Err(Error::Ordering { node: 1, .. })));
    }

    #[test]
    fn brickwork_shape() {
        let g = brickwork(2, 5).unwrap();
        assert_eq!(g.nodes(), 10);
        assert!(g.has_edge(2, 3)); // column 1, wires 0-1
        assert!(!g.has_edge(4, 5));
    }
}
