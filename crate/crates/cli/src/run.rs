//! Executes a parsed spec against the simulator.

use std::collections::{BTreeMap, HashMap};

use loqc::cluster::{Adapt, Basis, ClusterGraph, ClusterState, MeasurementInstruction};
use loqc::detection::{herald, DetectorModel, HeraldPattern, Requirement, Residual};
use loqc::encoding::{decode, encode, QubitEncoding};
use loqc::fock::{FockBasisState, PhotonicState};
use loqc::gates::{klm_cnot, run_heralded, GateRunResult, HeraldedGate};
use loqc::interferometer::{apply, compose, partially_distinguishable_distribution, ModePair, OpticalElement};
use loqc::logical::LogicalState;
use loqc::rng::{seeded, trial_rng, SimRng};
use loqc::teleport::teleported_cnot;
use loqc::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::parse::{parse, ParseError};
use crate::report::{Report, Table, Value};
use crate::spec::*;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error("line {line}: {source}")]
    Located { line: usize, source: loqc::Error },
    #[error(transparent)]
    Sim(#[from] loqc::Error),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// A command-line override that contradicts the spec.
    #[error("{0}")]
    Override(String),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for problems with the spec itself, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Override(_) => 2,
            CliError::Run(_) | CliError::Io { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub format: Option<Format>,
}

fn at(line: usize) -> impl FnOnce(loqc::Error) -> RunError {
    move |source| RunError::Located { line, source }
}

/// The spec with command-line overrides folded in.
pub fn apply_overrides(spec: &ExperimentSpec, o: &Overrides) -> Result<ExperimentSpec, CliError> {
    let mut s = spec.clone();
    if let Some(seed) = o.seed {
        s.seed = Some(seed);
    }
    if let Some(trials) = o.trials {
        match s.run {
            RunMode::Sweep(_) => {
                return Err(CliError::Override(
                    "--trials conflicts with the spec's sweep; a spec has one run mode".into(),
                ));
            }
            _ if trials == 0 || trials > crate::parse::MAX_TRIALS => {
                return Err(CliError::Override(format!("--trials must be in 1..={}", crate::parse::MAX_TRIALS)));
            }
            _ => s.run = RunMode::MonteCarlo { trials },
        }
    }
    if let Some(f) = o.format {
        s.emit = Some(f);
    }
    Ok(s)
}

/// Runs `spec` after applying `overrides`.
pub fn run(spec: &ExperimentSpec, overrides: &Overrides) -> Result<Report, CliError> {
    let spec = apply_overrides(spec, overrides)?;
    let seed = spec.seed.unwrap_or(0);
    let tables = match spec.kind() {
        ExperimentKind::Photonic => photonic(&spec, seed)?,
        ExperimentKind::Logical => logical(&spec, seed)?,
        ExperimentKind::Cluster => cluster(&spec, seed)?,
    };
    Ok(Report {
        version: VERSION.into(),
        seed,
        mode: spec.run.name().into(),
        experiment: spec.kind().name().into(),
        tables,
    })
}

/// Parses, runs and renders in the requested (or declared, or JSON) format.
pub fn run_text(text: &str, overrides: &Overrides) -> Result<String, CliError> {
    let spec = parse(text)?;
    let report = run(&spec, overrides)?;
    let format = overrides.format.or(spec.emit).unwrap_or(Format::Json);
    Ok(render(&report, format))
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    }
}

fn element(e: &ElementSpec) -> OpticalElement {
    match *e {
        ElementSpec::Bs { a, b, r } => OpticalElement::beamsplitter(a, b, r),
        ElementSpec::Phase { mode, deg } => OpticalElement::phase(mode, deg.to_radians()),
        ElementSpec::Hwp { pair, deg } => OpticalElement::hwp(ModePair::polarization(pair), deg.to_radians()),
        ElementSpec::Qwp { pair, deg } => OpticalElement::qwp(ModePair::polarization(pair), deg.to_radians()),
        ElementSpec::Pbs { p1, p2 } => OpticalElement::PolarizingBeamSplitter {
            first: ModePair::polarization(p1),
            second: ModePair::polarization(p2),
        },
        ElementSpec::Swap { a, b } => OpticalElement::Swap { a, b },
    }
}

/// Elements in order, with the sweep value substituted where it applies.
fn network(steps: &[Located<Step>], modes: usize, reflectivity: Option<f64>) -> Result<Vec<OpticalElement>, RunError> {
    let mut out = Vec::new();
    let mut first_bs = true;
    for s in steps {
        if let Step::Element(e) = &s.item {
            let mut el = element(e);
            if let (OpticalElement::BeamSplitter { reflectivity: r, .. }, Some(v)) = (&mut el, reflectivity) {
                if first_bs {
                    *r = v;
                }
            }
            if matches!(el, OpticalElement::BeamSplitter { .. }) {
                first_bs = false;
            }
            el.validate(modes).map_err(at(s.line))?;
            out.push(el);
        }
    }
    Ok(out)
}

fn detector(d: DetectorSpec, eta: Option<f64>) -> Result<DetectorModel, RunError> {
    Ok(DetectorModel::new(eta.unwrap_or(d.eta), d.resolving)?)
}

fn occupation_label(occ: &[u32]) -> String {
    occ.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn bits_label(index: usize, width: usize) -> String {
    if width == 0 {
        return "-".into();
    }
    format!("{index:0width$b}")
}

/// Readings per detector for one configuration of true photon counts.
fn reading_options(n: u32, d: &DetectorModel) -> Vec<(u32, f64)> {
    let opts: Vec<(u32, f64)> = if d.number_resolving() {
        (0..=n).map(|k| (k, d.response(n, Requirement::Count(k)))).collect()
    } else {
        vec![(0, d.response(n, Requirement::Count(0))), (1, d.response(n, Requirement::Click))]
    };
    opts.into_iter().filter(|&(_, p)| p > 0.0).collect()
}

fn reading_distribution(truth: &BTreeMap<FockBasisState, f64>, d: &DetectorModel) -> BTreeMap<Vec<u32>, f64> {
    let mut out = BTreeMap::new();
    for (b, &p) in truth {
        let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), p)];
        for &n in b.occupations() {
            let opts = reading_options(n, d);
            partial = partial
                .into_iter()
                .flat_map(|(r, q)| {
                    opts.iter().map(move |&(k, w)| {
                        let mut r = r.clone();
                        r.push(k);
                        (r, q * w)
                    })
                })
                .collect();
        }
        for (r, q) in partial {
            *out.entry(r).or_insert(0.0) += q;
        }
    }
    out
}

fn herald_probability(
    truth: &BTreeMap<FockBasisState, f64>,
    pattern: &[(usize, Requirement)],
    d: &DetectorModel,
) -> f64 {
    truth
        .iter()
        .map(|(b, &p)| p * pattern.iter().map(|&(m, r)| d.response(b.occupations()[m], r)).product::<f64>())
        .sum()
}

struct PhotonicOutcome {
    truth: BTreeMap<FockBasisState, f64>,
    pure: Option<PhotonicState>,
}

fn evolve(spec: &ExperimentSpec, overlap: Option<f64>, reflectivity: Option<f64>) -> Result<PhotonicOutcome, RunError> {
    let modes = spec.mode_count();
    let net = network(&spec.steps, modes, reflectivity)?;
    let u = compose(&net, modes)?;
    let input = FockBasisState::new(spec.input.clone().unwrap_or_default());
    match overlap {
        Some(x) if x < 1.0 => {
            Ok(PhotonicOutcome { truth: partially_distinguishable_distribution(&u, &input, x)?, pure: None })
        }
        _ => {
            let out = apply(&u, &PhotonicState::from_basis(input))?;
            let truth = out.terms().map(|(b, a)| (b.clone(), a.norm_sqr())).filter(|&(_, p)| p > 0.0).collect();
            Ok(PhotonicOutcome { truth, pure: Some(out) })
        }
    }
}

fn sample_map<'a, K, R: Rng + ?Sized>(dist: impl IntoIterator<Item = (&'a K, &'a f64)>, rng: &mut R) -> Option<&'a K> {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = None;
    for (k, &p) in dist {
        acc += p;
        last = Some(k);
        if u < acc {
            return last;
        }
    }
    last
}

fn photonic(spec: &ExperimentSpec, seed: u64) -> Result<Vec<Table>, RunError> {
    let d = detector(spec.detector(), None)?;
    match spec.run {
        RunMode::Single => {
            let out = evolve(spec, spec.overlap, None)?;
            let mut summary = Table::new("summary", &["value"]);
            let photons: u32 = spec.input.iter().flatten().sum();
            summary.push("modes", vec![spec.mode_count().into()]);
            summary.push("photons", vec![u64::from(photons).into()]);
            if !spec.herald.is_empty() {
                summary.push("herald_probability", vec![herald_probability(&out.truth, &spec.herald, &d).into()]);
            }
            let mut readings = Table::new("readings", &["probability"]);
            for (r, p) in reading_distribution(&out.truth, &d) {
                readings.push(occupation_label(&r), vec![p.into()]);
            }
            let mut tables = vec![summary, readings];
            if let (Some(state), false) = (&out.pure, spec.herald.is_empty()) {
                let pattern = HeraldPattern::new(spec.herald.iter().copied())?;
                let rec = herald(state, &pattern, &d)?;
                if let Residual::Pure(res) = &rec.residual {
                    let mut t = Table::new("heralded_state", &["re", "im"]);
                    for (b, a) in res.terms() {
                        t.push(occupation_label(b.occupations()), vec![a.re.into(), a.im.into()]);
                    }
                    tables.push(t);
                }
            }
            Ok(tables)
        }
        RunMode::Sweep(sw) => {
            let mut t = Table::new("sweep", &[sw.param.name(), "probability"]);
            for (i, v) in sw.values().into_iter().enumerate() {
                let (overlap, r, dd) = match sw.param {
                    SweepParam::Overlap => (Some(v), None, d),
                    SweepParam::Reflectivity => (spec.overlap, Some(v), d),
                    SweepParam::Eta => (spec.overlap, None, detector(spec.detector(), Some(v))?),
                };
                let out = evolve(spec, overlap, r)?;
                t.push(i.to_string(), vec![v.into(), herald_probability(&out.truth, &spec.herald, &dd).into()]);
            }
            Ok(vec![t])
        }
        RunMode::MonteCarlo { trials } => {
            let out = evolve(spec, spec.overlap, None)?;
            let mut per = Table::new("trials", &["reading", "heralded"]);
            let mut hits = 0u64;
            for k in 0..trials {
                let mut rng = trial_rng(seed, k);
                let truth = sample_map(&out.truth, &mut rng).ok_or(loqc::Error::ZeroState)?;
                let reading: Vec<u32> = truth
                    .occupations()
                    .iter()
                    .map(|&n| {
                        let kept = (0..n).filter(|_| rng.random::<f64>() < d.efficiency()).count() as u32;
                        if d.number_resolving() {
                            kept
                        } else {
                            kept.min(1)
                        }
                    })
                    .collect();
                let ok = spec.herald.iter().all(|&(m, r)| match r {
                    Requirement::Click => reading[m] >= 1,
                    Requirement::Count(c) if !d.number_resolving() => reading[m] == c.min(1),
                    Requirement::Count(c) => reading[m] == c,
                });
                hits += u64::from(ok);
                per.push(k.to_string(), vec![occupation_label(&reading).into(), ok.into()]);
            }
            let mut agg = Table::new("aggregate", &["value"]);
            agg.push("trials", vec![trials.into()]);
            agg.push("herald_frequency", vec![(hits as f64 / trials as f64).into()]);
            agg.push("herald_probability", vec![herald_probability(&out.truth, &spec.herald, &d).into()]);
            Ok(vec![per, agg])
        }
    }
}

/// The KLM CNOT acting on qubits `control`, `target` of a `qubits`-qubit register.
fn embedded_cnot(control: usize, target: usize, qubits: usize, e: &QubitEncoding) -> Result<HeraldedGate, loqc::Error> {
    let base = klm_cnot();
    let signal = 2 * qubits;
    let mut map = vec![2 * control, 2 * control + 1, 2 * target, 2 * target + 1];
    map.extend((0..base.ancilla_input().len()).map(|k| signal + k));
    let net = base.network().iter().map(|el| el.remapped(&map)).collect();
    let pattern = HeraldPattern::new(base.herald().iter().map(|(m, r)| (map[m], r)))?;
    HeraldedGate::new("klm_cnot", net, signal, base.ancilla_input().to_vec(), pattern, Some(e.clone()))
}

fn swap_qubits(l: &LogicalState) -> LogicalState {
    let a = l.amplitudes();
    LogicalState::new(2, vec![a[0], a[2], a[1], a[3]]).expect("permutation keeps the norm")
}

#[derive(Default)]
struct Chain {
    output: Option<LogicalState>,
    ideal: Option<LogicalState>,
    probability: f64,
    apparent: f64,
    leakage: f64,
    attempts: u64,
    pairs: u64,
    failures: Vec<(usize, Vec<u32>, f64)>,
}

struct LogicalRunner<'a> {
    spec: &'a ExperimentSpec,
    encoding: QubitEncoding,
    qubits: usize,
    gates: HashMap<usize, HeraldedGate>,
    cache: HashMap<usize, (LogicalState, GateRunResult)>,
}

impl<'a> LogicalRunner<'a> {
    fn new(spec: &'a ExperimentSpec) -> Result<Self, RunError> {
        let (qubits, flavor) = spec.qubits.expect("logical experiments declare qubits");
        let pairs = (0..qubits).map(|k| ModePair(2 * k, 2 * k + 1)).collect();
        let encoding = QubitEncoding::new(pairs, flavor)?;
        let mut gates = HashMap::new();
        for (i, s) in spec.steps.iter().enumerate() {
            if let Step::Gate { kind: GateKind::KlmCnot, control, target } = s.item {
                gates.insert(i, embedded_cnot(control, target, qubits, &encoding).map_err(at(s.line))?);
            }
        }
        Ok(Self { spec, encoding, qubits, gates, cache: HashMap::new() })
    }

    fn input(&self) -> Result<LogicalState, RunError> {
        match &self.spec.logical {
            Some(bits) => Ok(LogicalState::from_bits(bits)?),
            None => Ok(LogicalState::basis(self.qubits, 0)),
        }
    }

    fn elements(
        &self,
        state: &LogicalState,
        els: &[OpticalElement],
        line: usize,
    ) -> Result<(LogicalState, f64), RunError> {
        let u = compose(els, 2 * self.qubits).map_err(at(line))?;
        let out = apply(&u, &encode(state, &self.encoding)?).map_err(at(line))?;
        let d = decode(&out, &self.encoding).map_err(at(line))?;
        Ok((d.state, d.leakage))
    }

    /// Runs the step list. With `rng`, heralds are sampled instead of
    /// reporting the success branch.
    fn chain(&mut self, d: &DetectorModel, rng: &mut SimRng, sample: bool) -> Result<Chain, RunError> {
        let mut state = self.input()?;
        let mut ideal = state.clone();
        let mut c = Chain { probability: 1.0, apparent: 1.0, ..Chain::default() };
        let mut kept = 1.0;
        let mut pending: Vec<OpticalElement> = Vec::new();
        let mut pending_line = 0;
        let steps = &self.spec.steps;
        for i in 0..=steps.len() {
            let gate = steps.get(i).and_then(|s| match s.item {
                Step::Gate { kind, control, target } => Some((kind, control, target, s.line)),
                Step::Element(ref e) => {
                    if pending.is_empty() {
                        pending_line = s.line;
                    }
                    pending.push(element(e));
                    None
                }
            });
            if (gate.is_some() || i == steps.len()) && !pending.is_empty() {
                let (s, leak) = self.elements(&state, &pending, pending_line)?;
                let (t, _) = self.elements(&ideal, &pending, pending_line)?;
                state = s;
                ideal = t;
                kept *= 1.0 - leak;
                pending.clear();
            }
            let Some((kind, control, target, line)) = gate else { continue };
            ideal.apply_cnot(control, target).map_err(at(line))?;
            match kind {
                GateKind::KlmCnot => {
                    let r = match self.cache.get(&i) {
                        Some((input, r)) if *input == state => r.clone(),
                        _ => {
                            let r = run_heralded(&self.gates[&i], &state, d).map_err(at(line))?;
                            self.cache.insert(i, (state.clone(), r.clone()));
                            r
                        }
                    };
                    c.probability *= r.probability;
                    c.apparent *= r.apparent_probability;
                    kept *= 1.0 - r.leakage;
                    c.failures.extend(r.failures.iter().map(|f| (line, f.counts.clone(), f.probability)));
                    let success = if sample { rng.random::<f64>() < r.probability } else { r.probability > 0.0 };
                    match (success, r.logical_output) {
                        (true, Some(out)) => state = out,
                        _ => {
                            c.leakage = 1.0 - kept;
                            return Ok(c);
                        }
                    }
                }
                GateKind::TeleportedCnot => {
                    let flip = control > target;
                    let input = if flip { swap_qubits(&state) } else { state.clone() };
                    let r = teleported_cnot(&input, rng).map_err(at(line))?;
                    state = if flip { swap_qubits(&r.output) } else { r.output };
                    c.attempts += r.tally.attempts;
                    c.pairs += r.tally.entangled_pairs_consumed;
                }
            }
        }
        c.leakage = 1.0 - kept;
        c.output = Some(state);
        c.ideal = Some(ideal);
        Ok(c)
    }
}

fn amplitude_table(name: &str, l: &LogicalState) -> Table {
    let mut t = Table::new(name, &["re", "im", "probability"]);
    for (i, a) in l.amplitudes().iter().enumerate() {
        t.push(bits_label(i, l.qubits()), vec![a.re.into(), a.im.into(), a.norm_sqr().into()]);
    }
    t
}

fn overlap_of(c: &Chain) -> Result<f64, RunError> {
    match (&c.output, &c.ideal) {
        (Some(a), Some(b)) => Ok(LogicalState::overlap(a, b)?),
        _ => Ok(0.0),
    }
}

fn sample_basis<R: Rng + ?Sized>(l: &LogicalState, rng: &mut R) -> usize {
    let probs: Vec<(usize, f64)> = l.amplitudes().iter().map(Complex64::norm_sqr).enumerate().collect();
    let map: BTreeMap<usize, f64> = probs.into_iter().collect();
    sample_map(&map, rng).copied().unwrap_or(0)
}

fn logical(spec: &ExperimentSpec, seed: u64) -> Result<Vec<Table>, RunError> {
    let mut runner = LogicalRunner::new(spec)?;
    let d = detector(spec.detector(), None)?;
    let has_teleport = spec.steps.iter().any(|s| matches!(s.item, Step::Gate { kind: GateKind::TeleportedCnot, .. }));
    match spec.run {
        RunMode::Single => {
            let c = runner.chain(&d, &mut seeded(seed), false)?;
            let mut summary = Table::new("summary", &["value"]);
            summary.push("success_probability", vec![c.probability.into()]);
            summary.push("apparent_probability", vec![c.apparent.into()]);
            summary.push("leakage", vec![c.leakage.into()]);
            summary.push("overlap", vec![overlap_of(&c)?.into()]);
            if has_teleport {
                summary.push("attempts", vec![c.attempts.into()]);
                summary.push("pairs_consumed", vec![c.pairs.into()]);
            }
            let mut tables = vec![summary];
            if let Some(out) = &c.output {
                tables.push(amplitude_table("logical_output", out));
            }
            if !c.failures.is_empty() {
                let mut t = Table::new("herald_failures", &["line", "probability"]);
                for (line, counts, p) in &c.failures {
                    t.push(occupation_label(counts), vec![(*line).into(), (*p).into()]);
                }
                tables.push(t);
            }
            Ok(tables)
        }
        RunMode::Sweep(sw) => {
            let mut t = Table::new("sweep", &[sw.param.name(), "probability"]);
            for (i, v) in sw.values().into_iter().enumerate() {
                let dd = match sw.param {
                    SweepParam::Eta => detector(spec.detector(), Some(v))?,
                    _ => d,
                };
                let mut swept = spec.clone();
                if sw.param == SweepParam::Reflectivity {
                    if let Some(Step::Element(ElementSpec::Bs { r, .. })) = swept
                        .steps
                        .iter_mut()
                        .map(|s| &mut s.item)
                        .find(|s| matches!(s, Step::Element(ElementSpec::Bs { .. })))
                    {
                        *r = v;
                    }
                }
                let mut r = LogicalRunner::new(&swept)?;
                let c = r.chain(&dd, &mut seeded(seed), false)?;
                t.push(i.to_string(), vec![v.into(), c.probability.into()]);
            }
            Ok(vec![t])
        }
        RunMode::MonteCarlo { trials } => {
            let mut per = Table::new("trials", &["success", "attempts", "pairs", "overlap", "outcome"]);
            let (mut successes, mut attempts, mut pairs) = (0u64, 0u64, 0u64);
            let mut min_overlap = f64::INFINITY;
            for k in 0..trials {
                let mut rng = trial_rng(seed, k);
                let c = runner.chain(&d, &mut rng, true)?;
                let ok = c.output.is_some();
                let f = overlap_of(&c)?;
                let outcome = match &c.output {
                    Some(out) => bits_label(sample_basis(out, &mut rng), out.qubits()),
                    None => "-".into(),
                };
                if ok {
                    successes += 1;
                    min_overlap = min_overlap.min(f);
                }
                attempts += c.attempts;
                pairs += c.pairs;
                per.push(k.to_string(), vec![ok.into(), c.attempts.into(), c.pairs.into(), f.into(), outcome.into()]);
            }
            let n = trials as f64;
            let mut agg = Table::new("aggregate", &["value"]);
            agg.push("trials", vec![trials.into()]);
            agg.push("success_rate", vec![(successes as f64 / n).into()]);
            agg.push("mean_attempts", vec![(attempts as f64 / n).into()]);
            agg.push("mean_pairs", vec![(pairs as f64 / n).into()]);
            agg.push("min_overlap", vec![(if successes > 0 { min_overlap } else { 0.0 }).into()]);
            Ok(vec![per, agg])
        }
    }
}

fn node_state(init: NodeInit) -> LogicalState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let amps = match init {
        NodeInit::Zero => [1.0, 0.0],
        NodeInit::One => [0.0, 1.0],
        NodeInit::Plus => [s, s],
        NodeInit::Minus => [s, -s],
    };
    LogicalState::new(1, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect()).expect("unit vector")
}

fn instruction(m: &MeasureSpec) -> MeasurementInstruction {
    MeasurementInstruction {
        node: m.node,
        basis: match m.angle_deg {
            Some(a) => Basis::Xy { angle: a.to_radians() },
            None => Basis::Z,
        },
        adapt: match &m.adapt {
            AdaptSpec::Frame => Adapt::Frame,
            AdaptSpec::Explicit { negate, on } => Adapt::Explicit { negate: *negate, on: on.clone() },
        },
        flow: m.flow,
    }
}

fn cluster_once(c: &ClusterSpec, rng: &mut SimRng) -> Result<loqc::cluster::PatternRun, RunError> {
    let mut g = ClusterGraph::with_edges(c.nodes, &c.edges)?;
    for &(n, init) in &c.inputs {
        g.set_input(n, node_state(init))?;
    }
    let mut cs = ClusterState::new(&g)?;
    let mut choose = |_: usize, p0: f64| u8::from(rng.random::<f64>() >= p0);
    for m in &c.measurements {
        cs.measure(&instruction(&m.item), &mut choose).map_err(at(m.line))?;
    }
    Ok(cs.finish()?)
}

fn cluster(spec: &ExperimentSpec, seed: u64) -> Result<Vec<Table>, RunError> {
    let c = spec.cluster.as_ref().expect("cluster experiments carry a block");
    match spec.run {
        RunMode::MonteCarlo { trials } => {
            let mut per = Table::new("trials", &["outcomes"]);
            let mut ones: BTreeMap<usize, u64> = BTreeMap::new();
            for k in 0..trials {
                let r = cluster_once(c, &mut trial_rng(seed, k))?;
                let s: String = r.transcript.iter().map(|e| char::from(b'0' + e.outcome)).collect();
                for e in &r.transcript {
                    *ones.entry(e.node).or_default() += u64::from(e.outcome);
                }
                per.push(k.to_string(), vec![s.into()]);
            }
            let mut agg = Table::new("aggregate", &["p_one"]);
            for m in &c.measurements {
                let n = ones.get(&m.item.node).copied().unwrap_or(0);
                agg.push(format!("node {}", m.item.node), vec![(n as f64 / trials as f64).into()]);
            }
            Ok(vec![per, agg])
        }
        _ => {
            let r = cluster_once(c, &mut seeded(seed))?;
            let mut t = Table::new("transcript", &["node", "basis", "angle_deg", "outcome", "corrected", "flow"]);
            for (i, e) in r.transcript.iter().enumerate() {
                let flow = e.flow.map_or(Value::Text("-".into()), Value::from);
                t.push(
                    i.to_string(),
                    vec![
                        e.node.into(),
                        e.basis.clone().into(),
                        e.angle.to_degrees().into(),
                        e.outcome.into(),
                        e.corrected.into(),
                        flow,
                    ],
                );
            }
            let mut summary = Table::new("summary", &["value"]);
            let nodes: Vec<String> = r.output_nodes.iter().map(ToString::to_string).collect();
            summary.push("output_nodes", vec![nodes.join(" ").into()]);
            Ok(vec![summary, t, amplitude_table("output", &r.output)])
        }
    }
}
