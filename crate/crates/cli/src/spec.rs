//! Parsed form of an experiment file, and its canonical text rendering.

use std::fmt::{self, Display, Write};

use loqc::detection::Requirement;
use loqc::encoding::Flavor;

/// A value tagged with the source line it came from. Equality ignores the
/// line so a re-serialized spec compares equal to the original.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub line: usize,
    pub item: T,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.item == other.item
    }
}

/// Optical element as written, angles in degrees. Pair indices name
/// polarization pairs `(2k, 2k+1)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ElementSpec {
    Bs { a: usize, b: usize, r: f64 },
    Phase { mode: usize, deg: f64 },
    Hwp { pair: usize, deg: f64 },
    Qwp { pair: usize, deg: f64 },
    Pbs { p1: usize, p2: usize },
    Swap { a: usize, b: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    KlmCnot,
    TeleportedCnot,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::KlmCnot => "klm_cnot",
            GateKind::TeleportedCnot => "teleported_cnot",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Element(ElementSpec),
    Gate { kind: GateKind, control: usize, target: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorSpec {
    pub eta: f64,
    pub resolving: bool,
}

impl Default for DetectorSpec {
    fn default() -> Self {
        Self { eta: 1.0, resolving: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeInit {
    Zero,
    One,
    Plus,
    Minus,
}

impl NodeInit {
    pub fn token(self) -> &'static str {
        match self {
            NodeInit::Zero => "0",
            NodeInit::One => "1",
            NodeInit::Plus => "+",
            NodeInit::Minus => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdaptSpec {
    Frame,
    /// `+on(..)` or `-on(..)`.
    Explicit {
        negate: bool,
        on: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    pub node: usize,
    /// Equatorial angle in degrees, `None` for the Z basis.
    pub angle_deg: Option<f64>,
    pub adapt: AdaptSpec,
    pub flow: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClusterSpec {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub inputs: Vec<(usize, NodeInit)>,
    pub measurements: Vec<Located<MeasureSpec>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Overlap,
    Eta,
    /// Reflectivity of the first beamsplitter.
    Reflectivity,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Overlap => "overlap",
            SweepParam::Eta => "eta",
            SweepParam::Reflectivity => "R",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sweep {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.from + (self.to - self.from) * i as f64 / last).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum RunMode {
    #[default]
    Single,
    Sweep(Sweep),
    MonteCarlo {
        trials: u64,
    },
}

impl RunMode {
    pub fn name(&self) -> &'static str {
        match self {
            RunMode::Single => "single",
            RunMode::Sweep(_) => "sweep",
            RunMode::MonteCarlo { .. } => "monte_carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Photonic,
    Logical,
    Cluster,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Photonic => "photonic",
            ExperimentKind::Logical => "logical",
            ExperimentKind::Cluster => "cluster",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub modes: Option<usize>,
    pub input: Option<Vec<u32>>,
    pub qubits: Option<(usize, Flavor)>,
    /// Computational-basis input, qubit 0 first.
    pub logical: Option<String>,
    pub detector: Option<DetectorSpec>,
    pub overlap: Option<f64>,
    pub steps: Vec<Located<Step>>,
    pub herald: Vec<(usize, Requirement)>,
    pub cluster: Option<ClusterSpec>,
    pub run: RunMode,
    pub seed: Option<u64>,
    pub emit: Option<Format>,
}

impl ExperimentSpec {
    pub fn kind(&self) -> ExperimentKind {
        if self.cluster.is_some() {
            ExperimentKind::Cluster
        } else if self.qubits.is_some() {
            ExperimentKind::Logical
        } else {
            ExperimentKind::Photonic
        }
    }

    pub fn detector(&self) -> DetectorSpec {
        self.detector.unwrap_or_default()
    }

    /// Total number of modes in play.
    pub fn mode_count(&self) -> usize {
        match (self.modes, self.qubits) {
            (Some(m), _) => m,
            (None, Some((q, _))) => 2 * q,
            _ => 0,
        }
    }
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Path => "path",
        Flavor::Polarization => "polarization",
    }
}

fn requirement(r: Requirement) -> String {
    match r {
        Requirement::Click => "click".into(),
        Requirement::Count(k) => k.to_string(),
    }
}

fn join<T: Display>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

impl Display for ElementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementSpec::Bs { a, b, r } => write!(f, "bs {a} {b} {r}"),
            ElementSpec::Phase { mode, deg } => write!(f, "phase {mode} {deg}"),
            ElementSpec::Hwp { pair, deg } => write!(f, "hwp {pair} {deg}"),
            ElementSpec::Qwp { pair, deg } => write!(f, "qwp {pair} {deg}"),
            ElementSpec::Pbs { p1, p2 } => write!(f, "pbs {p1} {p2}"),
            ElementSpec::Swap { a, b } => write!(f, "swap {a} {b}"),
        }
    }
}

impl Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Element(e) => e.fmt(f),
            Step::Gate { kind, control, target } => {
                write!(f, "gate {} control=q{control} target=q{target}", kind.name())
            }
        }
    }
}

impl Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "measure {}", self.node)?;
        match self.angle_deg {
            Some(a) => write!(f, " angle {a}")?,
            None => f.write_str(" z")?,
        }
        if let AdaptSpec::Explicit { negate, on } = &self.adapt {
            write!(f, " adapt {}on({})", if *negate { '-' } else { '+' }, join(on, ","))?;
        }
        if let Some(n) = self.flow {
            write!(f, " flow {n}")?;
        }
        Ok(())
    }
}

impl Display for ExperimentSpec {
    /// Canonical text; parsing it yields an equal spec.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if let Some(m) = self.modes {
            writeln!(out, "modes {m}")?;
        }
        if let Some((q, flavor)) = self.qubits {
            writeln!(out, "qubits {q} {}", flavor_name(flavor))?;
        }
        if let Some(input) = &self.input {
            writeln!(out, "input {}", join(input, " "))?;
        }
        if let Some(bits) = &self.logical {
            writeln!(out, "logical {bits}")?;
        }
        if let Some(d) = self.detector {
            writeln!(out, "detector eta={} {}", d.eta, if d.resolving { "resolving" } else { "threshold" })?;
        }
        if let Some(x) = self.overlap {
            writeln!(out, "overlap {x}")?;
        }
        for s in &self.steps {
            writeln!(out, "{}", s.item)?;
        }
        if !self.herald.is_empty() {
            let parts: Vec<String> = self.herald.iter().map(|&(m, r)| format!("{m}={}", requirement(r))).collect();
            writeln!(out, "herald {}", parts.join(" "))?;
        }
        if let Some(c) = &self.cluster {
            out.push_str("cluster {\n");
            writeln!(out, "  nodes {}", c.nodes)?;
            if !c.edges.is_empty() {
                let e: Vec<String> = c.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                writeln!(out, "  edges {}", e.join(" "))?;
            }
            for (n, init) in &c.inputs {
                writeln!(out, "  input {n} {}", init.token())?;
            }
            for m in &c.measurements {
                writeln!(out, "  {}", m.item)?;
            }
            out.push_str("}\n");
        }
        match (self.run, self.seed) {
            (RunMode::Sweep(s), _) => {
                writeln!(out, "sweep {} from {} to {} steps {}", s.param.name(), s.from, s.to, s.steps)?;
            }
            (RunMode::MonteCarlo { trials }, Some(seed)) => writeln!(out, "trials {trials} seed {seed}")?,
            (RunMode::MonteCarlo { trials }, None) => writeln!(out, "trials {trials}")?,
            (RunMode::Single, _) => {}
        }
        match (self.run, self.seed) {
            (RunMode::MonteCarlo { .. }, _) | (_, None) => {}
            (_, Some(seed)) => writeln!(out, "seed {seed}")?,
        }
        if let Some(e) = self.emit {
            writeln!(out, "emit {}", e.name())?;
        }
        f.write_str(&out)
    }
}
