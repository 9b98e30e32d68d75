//! Line-oriented experiment DSL.
//!
//! One directive per line (or per `;`-separated statement). `#` starts a
//! comment. Angles are in degrees. Declarations may appear in any order;
//! indices are checked once the whole file has been read.

use std::collections::{BTreeSet, HashMap};

use loqc::detection::Requirement;
use loqc::encoding::Flavor;
use thiserror::Error;

use crate::spec::*;

pub const MAX_MODES: usize = 32;
pub const MAX_PHOTONS: u64 = 12;
pub const MAX_QUBITS: usize = 4;
pub const MAX_NODES: usize = loqc::cluster::NODE_CAP;
pub const MAX_SWEEP_STEPS: usize = 100_000;
pub const MAX_TRIALS: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`{directive}` expects {expected} argument(s), found {found}")]
    Arity { directive: String, expected: String, found: usize },
    #[error("{what} {index} is not declared ({declared} available)")]
    UndeclaredIndex { what: &'static str, index: usize, declared: usize },
    #[error("`{0}` sets a second run mode; choose one of single, sweep, trials")]
    DuplicateRunMode(String),
    #[error("expected {expected}, found `{token}`")]
    InvalidValue { token: String, expected: String },
    #[error("`{0}` given more than once")]
    Duplicate(String),
    #[error("{0}")]
    Structure(String),
    #[error("{0}")]
    Conflict(String),
    #[error("missing {0}")]
    Missing(String),
    #[error("{what} {value} exceeds the limit of {limit}")]
    Limit { what: &'static str, value: u64, limit: u64 },
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

impl Token {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.col, kind }
    }

    fn invalid(&self, expected: &str) -> ParseError {
        self.err(ParseErrorKind::InvalidValue { token: self.text.clone(), expected: expected.into() })
    }
}

enum Item {
    Stmt(Vec<Token>),
    Open(Token),
    Close(Token),
}

fn lex(text: &str) -> (Vec<Item>, usize) {
    let mut items = Vec::new();
    for (ln, raw) in text.split('\n').enumerate() {
        let mut stmt: Vec<Token> = Vec::new();
        let mut word = String::new();
        let mut start = 0;
        let flush_word = |word: &mut String, start: usize, stmt: &mut Vec<Token>| {
            if !word.is_empty() {
                stmt.push(Token { text: std::mem::take(word), line: ln + 1, col: start });
            }
        };
        for (ci, ch) in raw.chars().enumerate() {
            let col = ci + 1;
            if ch == '#' {
                break;
            }
            match ch {
                '{' | '}' | ';' => {
                    flush_word(&mut word, start, &mut stmt);
                    if !stmt.is_empty() {
                        items.push(Item::Stmt(std::mem::take(&mut stmt)));
                    }
                    let t = Token { text: ch.to_string(), line: ln + 1, col };
                    match ch {
                        '{' => items.push(Item::Open(t)),
                        '}' => items.push(Item::Close(t)),
                        _ => {}
                    }
                }
                c if c.is_whitespace() => flush_word(&mut word, start, &mut stmt),
                c => {
                    if word.is_empty() {
                        start = col;
                    }
                    word.push(c);
                }
            }
        }
        flush_word(&mut word, start, &mut stmt);
        if !stmt.is_empty() {
            items.push(Item::Stmt(stmt));
        }
    }
    (items, text.lines().count().max(1))
}

#[derive(Clone, Copy)]
enum RefKind {
    Mode,
    Pair,
    Qubit,
    Node,
}

struct Ref {
    kind: RefKind,
    index: usize,
    at: (usize, usize),
}

#[derive(Default)]
struct Parser {
    spec: Option<ExperimentSpec>,
    refs: Vec<Ref>,
    first: HashMap<&'static str, (usize, usize)>,
    input_at: Option<(usize, usize, usize)>,
    logical_at: Option<(usize, usize)>,
    run_at: Option<(usize, usize)>,
}

fn located(at: (usize, usize), kind: ParseErrorKind) -> ParseError {
    ParseError { line: at.0, column: at.1, kind }
}

fn arity(stmt: &[Token], expected: usize) -> Result<(), ParseError> {
    arity_range(stmt, expected, expected, &expected.to_string())
}

fn arity_range(stmt: &[Token], lo: usize, hi: usize, label: &str) -> Result<(), ParseError> {
    let found = stmt.len() - 1;
    if found < lo || found > hi {
        let at = stmt.get(hi + 1).unwrap_or(&stmt[0]);
        return Err(at.err(ParseErrorKind::Arity { directive: stmt[0].text.clone(), expected: label.into(), found }));
    }
    Ok(())
}

fn uint(t: &Token) -> Result<usize, ParseError> {
    t.text.parse().map_err(|_| t.invalid("a non-negative integer"))
}

fn u64_of(t: &Token) -> Result<u64, ParseError> {
    t.text.parse().map_err(|_| t.invalid("a non-negative integer"))
}

fn real_str(t: &Token, s: &str) -> Result<f64, ParseError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(t.invalid("a finite number")),
    }
}

fn real(t: &Token) -> Result<f64, ParseError> {
    real_str(t, &t.text)
}

fn unit(t: &Token, v: f64) -> Result<f64, ParseError> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(t.invalid("a number in [0, 1]"))
    }
}

fn key_value<'a>(t: &'a Token, key: &str) -> Result<&'a str, ParseError> {
    match t.text.split_once('=') {
        Some((k, v)) if k == key => Ok(v),
        _ => Err(t.invalid(&format!("`{key}=...`"))),
    }
}

fn qubit_ref(t: &Token, v: &str) -> Result<usize, ParseError> {
    v.strip_prefix('q').and_then(|n| n.parse().ok()).ok_or_else(|| t.invalid("a qubit like `q0`"))
}

fn limit(t: &Token, what: &'static str, value: u64, max: u64) -> Result<(), ParseError> {
    if value > max {
        return Err(t.err(ParseErrorKind::Limit { what, value, limit: max }));
    }
    Ok(())
}

impl Parser {
    fn spec(&mut self) -> &mut ExperimentSpec {
        self.spec.get_or_insert_with(|| ExperimentSpec {
            modes: None,
            input: None,
            qubits: None,
            logical: None,
            detector: None,
            overlap: None,
            steps: Vec::new(),
            herald: Vec::new(),
            cluster: None,
            run: RunMode::Single,
            seed: None,
            emit: None,
        })
    }

    fn reference(&mut self, kind: RefKind, t: &Token, index: usize) {
        self.refs.push(Ref { kind, index, at: (t.line, t.col) });
    }

    fn once(&mut self, t: &Token, name: &'static str, taken: bool) -> Result<(), ParseError> {
        if taken {
            return Err(t.err(ParseErrorKind::Duplicate(name.into())));
        }
        self.first.entry(name).or_insert((t.line, t.col));
        Ok(())
    }

    fn mark(&mut self, name: &'static str, t: &Token) {
        self.first.entry(name).or_insert((t.line, t.col));
    }

    fn set_run(&mut self, t: &Token, mode: RunMode) -> Result<(), ParseError> {
        if self.run_at.is_some() {
            return Err(t.err(ParseErrorKind::DuplicateRunMode(t.text.clone())));
        }
        self.run_at = Some((t.line, t.col));
        self.spec().run = mode;
        Ok(())
    }

    fn element(&mut self, s: &[Token]) -> Result<ElementSpec, ParseError> {
        let name = s[0].text.as_str();
        arity(s, if name == "bs" { 3 } else { 2 })?;
        let e = match name {
            "bs" => {
                let (a, b) = (uint(&s[1])?, uint(&s[2])?);
                self.reference(RefKind::Mode, &s[1], a);
                self.reference(RefKind::Mode, &s[2], b);
                if a == b {
                    return Err(s[2].invalid("a second, different mode"));
                }
                ElementSpec::Bs { a, b, r: unit(&s[3], real(&s[3])?)? }
            }
            "phase" => {
                let mode = uint(&s[1])?;
                self.reference(RefKind::Mode, &s[1], mode);
                ElementSpec::Phase { mode, deg: real(&s[2])? }
            }
            "hwp" | "qwp" => {
                let pair = uint(&s[1])?;
                self.reference(RefKind::Pair, &s[1], pair);
                let deg = real(&s[2])?;
                if name == "hwp" {
                    ElementSpec::Hwp { pair, deg }
                } else {
                    ElementSpec::Qwp { pair, deg }
                }
            }
            "pbs" => {
                let (p1, p2) = (uint(&s[1])?, uint(&s[2])?);
                self.reference(RefKind::Pair, &s[1], p1);
                self.reference(RefKind::Pair, &s[2], p2);
                if p1 == p2 {
                    return Err(s[2].invalid("a second, different pair"));
                }
                ElementSpec::Pbs { p1, p2 }
            }
            _ => {
                let (a, b) = (uint(&s[1])?, uint(&s[2])?);
                self.reference(RefKind::Mode, &s[1], a);
                self.reference(RefKind::Mode, &s[2], b);
                if a == b {
                    return Err(s[2].invalid("a second, different mode"));
                }
                ElementSpec::Swap { a, b }
            }
        };
        Ok(e)
    }

    fn directive(&mut self, s: &[Token]) -> Result<(), ParseError> {
        let head = &s[0];
        match head.text.as_str() {
            "modes" => {
                arity(s, 1)?;
                let taken = self.spec().modes.is_some();
                self.once(head, "modes", taken)?;
                let m = uint(&s[1])?;
                limit(&s[1], "mode count", m as u64, MAX_MODES as u64)?;
                if m == 0 {
                    return Err(s[1].invalid("at least one mode"));
                }
                self.spec().modes = Some(m);
            }
            "input" => {
                arity_range(s, 1, usize::MAX - 1, "one per mode")?;
                let taken = self.spec().input.is_some();
                self.once(head, "input", taken)?;
                let mut occ = Vec::new();
                let mut total = 0u64;
                for t in &s[1..] {
                    let n: u32 = t.text.parse().map_err(|_| t.invalid("a photon count"))?;
                    total += u64::from(n);
                    limit(t, "photon count", total, MAX_PHOTONS)?;
                    occ.push(n);
                }
                self.input_at = Some((head.line, head.col, occ.len()));
                self.spec().input = Some(occ);
            }
            "qubits" => {
                arity_range(s, 1, 2, "1 or 2")?;
                let taken = self.spec().qubits.is_some();
                self.once(head, "qubits", taken)?;
                let q = uint(&s[1])?;
                limit(&s[1], "qubit count", q as u64, MAX_QUBITS as u64)?;
                if q == 0 {
                    return Err(s[1].invalid("at least one qubit"));
                }
                let flavor = match s.get(2).map(|t| t.text.as_str()) {
                    None | Some("path") => Flavor::Path,
                    Some("polarization") => Flavor::Polarization,
                    Some(_) => return Err(s[2].invalid("`path` or `polarization`")),
                };
                self.spec().qubits = Some((q, flavor));
            }
            "logical" => {
                arity(s, 1)?;
                let taken = self.spec().logical.is_some();
                self.once(head, "logical", taken)?;
                let bits = &s[1].text;
                if !bits.chars().all(|c| c == '0' || c == '1') {
                    return Err(s[1].invalid("a bit string"));
                }
                self.logical_at = Some((s[1].line, s[1].col));
                self.spec().logical = Some(bits.clone());
            }
            "detector" => {
                arity_range(s, 1, 2, "1 or 2")?;
                let taken = self.spec().detector.is_some();
                self.once(head, "detector", taken)?;
                let eta = unit(&s[1], real_str(&s[1], key_value(&s[1], "eta")?)?)?;
                let resolving = match s.get(2).map(|t| t.text.as_str()) {
                    None | Some("resolving") => true,
                    Some("threshold") => false,
                    Some(_) => return Err(s[2].invalid("`resolving` or `threshold`")),
                };
                self.spec().detector = Some(DetectorSpec { eta, resolving });
            }
            "overlap" => {
                arity(s, 1)?;
                let taken = self.spec().overlap.is_some();
                self.once(head, "overlap", taken)?;
                let x = unit(&s[1], real(&s[1])?)?;
                self.spec().overlap = Some(x);
            }
            "bs" | "phase" | "hwp" | "qwp" | "pbs" | "swap" => {
                let e = self.element(s)?;
                if matches!(e, ElementSpec::Bs { .. }) {
                    self.mark("bs", head);
                }
                self.mark("element", head);
                self.spec().steps.push(Located { line: head.line, item: Step::Element(e) });
            }
            "gate" => {
                arity(s, 3)?;
                let kind = match s[1].text.as_str() {
                    "klm_cnot" => GateKind::KlmCnot,
                    "teleported_cnot" => GateKind::TeleportedCnot,
                    _ => return Err(s[1].invalid("`klm_cnot` or `teleported_cnot`")),
                };
                let control = qubit_ref(&s[2], key_value(&s[2], "control")?)?;
                let target = qubit_ref(&s[3], key_value(&s[3], "target")?)?;
                self.reference(RefKind::Qubit, &s[2], control);
                self.reference(RefKind::Qubit, &s[3], target);
                if control == target {
                    return Err(s[3].invalid("a target different from the control"));
                }
                self.mark("gate", head);
                if kind == GateKind::TeleportedCnot {
                    self.mark("teleported_cnot", head);
                }
                self.spec().steps.push(Located { line: head.line, item: Step::Gate { kind, control, target } });
            }
            "herald" => {
                arity_range(s, 1, usize::MAX - 1, "at least 1")?;
                let taken = !self.spec().herald.is_empty();
                self.once(head, "herald", taken)?;
                let mut seen = BTreeSet::new();
                let mut pattern = Vec::new();
                for t in &s[1..] {
                    let (m, v) = t.text.split_once('=').ok_or_else(|| t.invalid("`mode=count` or `mode=click`"))?;
                    let m: usize = m.parse().map_err(|_| t.invalid("`mode=count` or `mode=click`"))?;
                    let req = match v {
                        "click" => Requirement::Click,
                        _ => Requirement::Count(v.parse().map_err(|_| t.invalid("`mode=count` or `mode=click`"))?),
                    };
                    if !seen.insert(m) {
                        return Err(t.invalid("each mode at most once"));
                    }
                    self.reference(RefKind::Mode, t, m);
                    pattern.push((m, req));
                }
                self.spec().herald = pattern;
            }
            "sweep" => {
                arity(s, 7)?;
                let param = match s[1].text.as_str() {
                    "overlap" => SweepParam::Overlap,
                    "eta" => SweepParam::Eta,
                    "R" => SweepParam::Reflectivity,
                    _ => return Err(s[1].invalid("`overlap`, `eta` or `R`")),
                };
                for (i, kw) in [(2, "from"), (4, "to"), (6, "steps")] {
                    if s[i].text != kw {
                        return Err(s[i].invalid(&format!("`{kw}`")));
                    }
                }
                let from = unit(&s[3], real(&s[3])?)?;
                let to = unit(&s[5], real(&s[5])?)?;
                let steps = uint(&s[7])?;
                limit(&s[7], "sweep steps", steps as u64, MAX_SWEEP_STEPS as u64)?;
                if steps == 0 {
                    return Err(s[7].invalid("at least one step"));
                }
                self.mark("sweep", head);
                self.set_run(head, RunMode::Sweep(Sweep { param, from, to, steps }))?;
            }
            "trials" => {
                if s.len() != 2 && s.len() != 4 {
                    return Err(head.err(ParseErrorKind::Arity {
                        directive: "trials".into(),
                        expected: "1 or 3".into(),
                        found: s.len() - 1,
                    }));
                }
                let trials = u64_of(&s[1])?;
                limit(&s[1], "trial count", trials, MAX_TRIALS)?;
                if trials == 0 {
                    return Err(s[1].invalid("at least one trial"));
                }
                if s.len() == 4 {
                    if s[2].text != "seed" {
                        return Err(s[2].invalid("`seed`"));
                    }
                    let taken = self.spec().seed.is_some();
                    self.once(&s[2], "seed", taken)?;
                    let seed = u64_of(&s[3])?;
                    self.spec().seed = Some(seed);
                }
                self.set_run(head, RunMode::MonteCarlo { trials })?;
            }
            "seed" => {
                arity(s, 1)?;
                let taken = self.spec().seed.is_some();
                self.once(head, "seed", taken)?;
                let seed = u64_of(&s[1])?;
                self.spec().seed = Some(seed);
            }
            "emit" => {
                arity(s, 1)?;
                let taken = self.spec().emit.is_some();
                self.once(head, "emit", taken)?;
                let f = match s[1].text.as_str() {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => return Err(s[1].invalid("`json` or `csv`")),
                };
                self.spec().emit = Some(f);
            }
            "nodes" | "edges" | "measure" => {
                return Err(
                    head.err(ParseErrorKind::Structure(format!("`{}` belongs inside a cluster block", head.text)))
                );
            }
            other => return Err(head.err(ParseErrorKind::UnknownDirective(other.into()))),
        }
        Ok(())
    }

    fn cluster_directive(&mut self, c: &mut ClusterSpec, nodes_seen: &mut bool, s: &[Token]) -> Result<(), ParseError> {
        let head = &s[0];
        match head.text.as_str() {
            "nodes" => {
                arity(s, 1)?;
                if *nodes_seen {
                    return Err(head.err(ParseErrorKind::Duplicate("nodes".into())));
                }
                let n = uint(&s[1])?;
                limit(&s[1], "node count", n as u64, MAX_NODES as u64)?;
                if n == 0 {
                    return Err(s[1].invalid("at least one node"));
                }
                *nodes_seen = true;
                c.nodes = n;
            }
            "edges" => {
                arity_range(s, 1, usize::MAX - 1, "at least 1")?;
                for t in &s[1..] {
                    let (a, b) = t
                        .text
                        .split_once('-')
                        .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                        .ok_or_else(|| t.invalid("an edge like `0-1`"))?;
                    if a == b {
                        return Err(t.invalid("an edge between two different nodes"));
                    }
                    let key = (a.min(b), a.max(b));
                    if c.edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == key) {
                        return Err(t.err(ParseErrorKind::Duplicate(format!("edge {a}-{b}"))));
                    }
                    self.reference(RefKind::Node, t, a.max(b));
                    c.edges.push((a, b));
                }
            }
            "input" => {
                arity(s, 2)?;
                let n = uint(&s[1])?;
                self.reference(RefKind::Node, &s[1], n);
                if c.inputs.iter().any(|&(m, _)| m == n) {
                    return Err(head.err(ParseErrorKind::Duplicate(format!("input for node {n}"))));
                }
                let init = match s[2].text.as_str() {
                    "0" => NodeInit::Zero,
                    "1" => NodeInit::One,
                    "+" => NodeInit::Plus,
                    "-" => NodeInit::Minus,
                    _ => return Err(s[2].invalid("`0`, `1`, `+` or `-`")),
                };
                c.inputs.push((n, init));
            }
            "measure" => {
                arity_range(s, 2, usize::MAX - 1, "at least 2")?;
                let node = uint(&s[1])?;
                self.reference(RefKind::Node, &s[1], node);
                if c.measurements.iter().any(|m| m.item.node == node) {
                    return Err(s[1].err(ParseErrorKind::Duplicate(format!("measurement of node {node}"))));
                }
                let (angle_deg, mut i) = match s[2].text.as_str() {
                    "z" => (None, 3),
                    "angle" => {
                        let t = s.get(3).ok_or_else(|| {
                            head.err(ParseErrorKind::Arity {
                                directive: "measure".into(),
                                expected: "an angle after `angle`".into(),
                                found: s.len() - 1,
                            })
                        })?;
                        (Some(real(t)?), 4)
                    }
                    _ => return Err(s[2].invalid("`angle` or `z`")),
                };
                let mut adapt = AdaptSpec::Frame;
                let mut flow = None;
                let (mut adapt_seen, mut flow_seen) = (false, false);
                while i < s.len() {
                    let kw = &s[i];
                    let Some(v) = s.get(i + 1) else {
                        return Err(kw.err(ParseErrorKind::Arity {
                            directive: "measure".into(),
                            expected: format!("a value after `{}`", kw.text),
                            found: s.len() - 1,
                        }));
                    };
                    match kw.text.as_str() {
                        "adapt" if !adapt_seen => {
                            adapt_seen = true;
                            let mut text = v.text.clone();
                            i += 2;
                            while text.contains('(') && !text.ends_with(')') && i < s.len() {
                                text.push_str(&s[i].text);
                                i += 1;
                            }
                            adapt = self.adapt(v, &text)?;
                        }
                        "flow" if !flow_seen => {
                            flow_seen = true;
                            let f = uint(v)?;
                            self.reference(RefKind::Node, v, f);
                            flow = Some(f);
                            i += 2;
                        }
                        "adapt" | "flow" => return Err(kw.err(ParseErrorKind::Duplicate(kw.text.clone()))),
                        _ => return Err(kw.invalid("`adapt` or `flow`")),
                    }
                }
                if angle_deg.is_none() && adapt != AdaptSpec::Frame {
                    return Err(s[2].invalid("an equatorial `angle` for adaptive signs"));
                }
                c.measurements.push(Located { line: head.line, item: MeasureSpec { node, angle_deg, adapt, flow } });
            }
            other => {
                return Err(head.err(ParseErrorKind::UnknownDirective(other.into())));
            }
        }
        Ok(())
    }

    fn adapt(&mut self, t: &Token, text: &str) -> Result<AdaptSpec, ParseError> {
        const WANT: &str = "`frame`, `+on(..)` or `-on(..)`";
        if text == "frame" {
            return Ok(AdaptSpec::Frame);
        }
        let (negate, rest) = match text.chars().next() {
            Some('+') | Some('±') => (false, &text[text.chars().next().map_or(0, char::len_utf8)..]),
            Some('-') => (true, &text[1..]),
            _ => return Err(t.invalid(WANT)),
        };
        let inner = rest.strip_prefix("on(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| t.invalid(WANT))?;
        let mut on = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let n: usize = part.parse().map_err(|_| t.invalid(WANT))?;
            self.reference(RefKind::Node, t, n);
            on.push(n);
        }
        Ok(AdaptSpec::Explicit { negate, on })
    }

    fn finish(mut self, eof: (usize, usize)) -> Result<ExperimentSpec, ParseError> {
        let Some(spec) = self.spec.take() else {
            return Err(located(eof, ParseErrorKind::Missing("an experiment (the file has no directives)".into())));
        };
        let kind = spec.kind();
        let at = |name: &str| self.first.get(name).copied().unwrap_or(eof);

        match kind {
            ExperimentKind::Cluster => {
                for name in ["modes", "input", "qubits", "logical", "detector", "overlap", "element", "gate", "herald"]
                {
                    if let Some(&p) = self.first.get(name) {
                        return Err(located(
                            p,
                            ParseErrorKind::Conflict(format!("`{name}` cannot be combined with a cluster block")),
                        ));
                    }
                }
                if let RunMode::Sweep(_) = spec.run {
                    return Err(located(
                        at("sweep"),
                        ParseErrorKind::Conflict("cluster experiments cannot be swept".into()),
                    ));
                }
            }
            ExperimentKind::Logical => {
                let q = spec.qubits.map_or(0, |(q, _)| q);
                for name in ["input", "herald", "overlap"] {
                    if let Some(&p) = self.first.get(name) {
                        return Err(located(
                            p,
                            ParseErrorKind::Conflict(format!(
                                "`{name}` applies to photonic experiments; this one declares qubits"
                            )),
                        ));
                    }
                }
                if let Some(m) = spec.modes {
                    if m != 2 * q {
                        return Err(located(
                            at("modes"),
                            ParseErrorKind::Conflict(format!("{q} qubits occupy {} modes, not {m}", 2 * q)),
                        ));
                    }
                }
                if let (Some(bits), Some(p)) = (&spec.logical, self.logical_at) {
                    if bits.len() != q {
                        return Err(located(
                            p,
                            ParseErrorKind::InvalidValue { token: bits.clone(), expected: format!("{q} bits") },
                        ));
                    }
                }
                if self.first.contains_key("teleported_cnot") && q != 2 {
                    return Err(located(
                        at("teleported_cnot"),
                        ParseErrorKind::Conflict("`teleported_cnot` needs exactly 2 qubits".into()),
                    ));
                }
            }
            ExperimentKind::Photonic => {
                for name in ["gate", "logical"] {
                    if let Some(&p) = self.first.get(name) {
                        return Err(located(
                            p,
                            ParseErrorKind::Conflict(format!("`{name}` needs a `qubits` declaration")),
                        ));
                    }
                }
                if spec.detector.is_some_and(|d| !d.resolving) {
                    if let Some(&(m, _)) =
                        spec.herald.iter().find(|(_, r)| matches!(r, Requirement::Count(k) if *k > 1))
                    {
                        return Err(located(
                            at("herald"),
                            ParseErrorKind::Conflict(format!(
                                "threshold detectors cannot herald more than one photon (mode {m})"
                            )),
                        ));
                    }
                }
            }
        }
        if let RunMode::Sweep(s) = spec.run {
            let bad = match s.param {
                SweepParam::Overlap if kind != ExperimentKind::Photonic => {
                    Some("`overlap` sweeps need a photonic experiment")
                }
                SweepParam::Reflectivity if !self.first.contains_key("bs") => Some("`R` sweeps need a beamsplitter"),
                _ => None,
            };
            if let Some(msg) = bad {
                return Err(located(at("sweep"), ParseErrorKind::Conflict(msg.into())));
            }
        }

        let modes = spec.mode_count();
        let qubits = spec.qubits.map_or(0, |(q, _)| q);
        let nodes = spec.cluster.as_ref().map_or(0, |c| c.nodes);
        for r in &self.refs {
            let (what, declared, ok) = match r.kind {
                RefKind::Mode => ("mode", modes, r.index < modes),
                RefKind::Pair => ("polarization pair", modes / 2, r.index < modes / 2),
                RefKind::Qubit => ("qubit", qubits, r.index < qubits),
                RefKind::Node => ("node", nodes, r.index < nodes),
            };
            if !ok {
                return Err(located(r.at, ParseErrorKind::UndeclaredIndex { what, index: r.index, declared }));
            }
        }
        if kind == ExperimentKind::Photonic {
            let Some(m) = spec.modes else {
                return Err(located(eof, ParseErrorKind::Missing("`modes` declaration".into())));
            };
            match self.input_at {
                None => return Err(located(eof, ParseErrorKind::Missing("`input` declaration".into()))),
                Some((l, c, n)) if n != m => {
                    return Err(located(
                        (l, c),
                        ParseErrorKind::Arity { directive: "input".into(), expected: m.to_string(), found: n },
                    ));
                }
                _ => {}
            }
        }
        Ok(spec)
    }
}

/// Parses experiment text. Every failure carries a 1-based line and column.
pub fn parse(text: &str) -> Result<ExperimentSpec, ParseError> {
    let (items, lines) = lex(text);
    let mut p = Parser::default();
    let mut iter = items.into_iter().peekable();
    while let Some(item) = iter.next() {
        match item {
            Item::Stmt(s) if s[0].text == "cluster" => {
                let head = s[0].clone();
                if s.len() > 1 {
                    return Err(s[1].invalid("`{`"));
                }
                if !matches!(iter.next(), Some(Item::Open(_))) {
                    return Err(head.err(ParseErrorKind::Structure("`cluster` must be followed by `{`".into())));
                }
                let taken = p.spec().cluster.is_some();
                p.once(&head, "cluster", taken)?;
                let mut c = ClusterSpec::default();
                let mut nodes_seen = false;
                loop {
                    match iter.next() {
                        Some(Item::Stmt(s)) => p.cluster_directive(&mut c, &mut nodes_seen, &s)?,
                        Some(Item::Close(_)) => break,
                        Some(Item::Open(t)) => {
                            return Err(t.err(ParseErrorKind::Structure("nested `{` inside a cluster block".into())));
                        }
                        None => return Err(head.err(ParseErrorKind::Structure("cluster block is never closed".into()))),
                    }
                }
                if !nodes_seen {
                    return Err(head.err(ParseErrorKind::Missing("`nodes` in the cluster block".into())));
                }
                p.spec().cluster = Some(c);
            }
            Item::Stmt(s) => p.directive(&s)?,
            Item::Open(t) | Item::Close(t) => {
                return Err(t.err(ParseErrorKind::Structure(format!("unexpected `{}`", t.text))));
            }
        }
    }
    p.finish((lines, 1))
}
