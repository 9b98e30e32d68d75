//! Multimode bosonic states in the photon-number basis.
//!
//! A [`PhotonicState`] is a sparse superposition of [`FockBasisState`]s. Terms
//! are kept in lexicographic order of their occupation vectors, and amplitudes
//! whose magnitude falls to [`PRUNE_THRESHOLD`] or below are dropped.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Amplitudes with magnitude at or below this value are removed.
pub const PRUNE_THRESHOLD: f64 = 1e-12;

/// Photons per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockBasisState(Vec<u32>);

impl FockBasisState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    /// Builds a basis state from signed input, rejecting negative entries.
    pub fn from_signed(occupations: &[i64]) -> Result<Self> {
        occupations
            .iter()
            .enumerate()
            .map(|(mode, &value)| u32::try_from(value).map_err(|_| Error::NegativeOccupation { mode, value }))
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(vec![0; modes])
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photon_number(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Occupations of `self` followed by those of `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut occ = Vec::with_capacity(self.0.len() + other.0.len());
        occ.extend_from_slice(&self.0);
        occ.extend_from_slice(&other.0);
        Self(occ)
    }

    /// Product of the factorials of the occupations.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n)).product()
    }
}

impl From<Vec<u32>> for FockBasisState {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "⟩")
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// The photon-number content of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhotonNumber {
    /// Every term carries this many photons.
    Definite(u32),
    /// Terms span more than one photon-number sector.
    Mixed,
    /// The state has no terms.
    Empty,
}

/// Sparse complex superposition of Fock basis states over a fixed number of
/// modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateJson", into = "StateJson")]
pub struct PhotonicState {
    modes: usize,
    terms: BTreeMap<FockBasisState, Complex64>,
}

impl PhotonicState {
    /// The zero vector on `modes` modes.
    pub fn zero(modes: usize) -> Self {
        Self { modes, terms: BTreeMap::new() }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::from_basis(FockBasisState::vacuum(modes))
    }

    /// Single-term state with amplitude 1.
    pub fn basis(occupations: &[i64]) -> Result<Self> {
        FockBasisState::from_signed(occupations).map(Self::from_basis)
    }

    pub fn from_basis(state: FockBasisState) -> Self {
        let modes = state.modes();
        let mut terms = BTreeMap::new();
        terms.insert(state, Complex64::new(1.0, 0.0));
        Self { modes, terms }
    }

    /// Sums the given terms. Repeated basis states accumulate.
    pub fn from_terms<I>(modes: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FockBasisState, Complex64)>,
    {
        let mut acc: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
        for (b, c) in terms {
            if b.modes() != modes {
                return Err(Error::ModeMismatch { left: modes, right: b.modes() });
            }
            *acc.entry(b).or_default() += c;
        }
        Ok(Self::pruned(modes, acc))
    }

    pub(crate) fn pruned(modes: usize, mut terms: BTreeMap<FockBasisState, Complex64>) -> Self {
        terms.retain(|_, c| c.norm() > PRUNE_THRESHOLD);
        Self { modes, terms }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Terms in lexicographic occupation order.
    pub fn terms(&self) -> impl Iterator<Item = (&FockBasisState, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, occupations: &[u32]) -> Complex64 {
        self.terms.get(&FockBasisState(occupations.to_vec())).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= PRUNE_THRESHOLD {
            return Err(Error::ZeroState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let terms = self.terms.iter().map(|(b, c)| (b.clone(), c * factor)).collect();
        Self::pruned(self.modes, terms)
    }

    /// `ca·a + cb·b`.
    pub fn superpose(a: &Self, ca: Complex64, b: &Self, cb: Complex64) -> Result<Self> {
        if a.modes != b.modes {
            return Err(Error::ModeMismatch { left: a.modes, right: b.modes });
        }
        let mut acc = BTreeMap::new();
        for (s, c) in &a.terms {
            *acc.entry(s.clone()).or_insert(Complex64::default()) += c * ca;
        }
        for (s, c) in &b.terms {
            *acc.entry(s.clone()).or_insert(Complex64::default()) += c * cb;
        }
        Ok(Self::pruned(a.modes, acc))
    }

    /// `⟨a|b⟩`, conjugate-linear in `a`.
    pub fn inner(a: &Self, b: &Self) -> Result<Complex64> {
        if a.modes != b.modes {
            return Err(Error::ModeMismatch { left: a.modes, right: b.modes });
        }
        // iterate the smaller map
        let (small, large, conj_small) = if a.terms.len() <= b.terms.len() { (a, b, true) } else { (b, a, false) };
        let mut sum = Complex64::default();
        for (s, c) in &small.terms {
            if let Some(d) = large.terms.get(s) {
                sum += if conj_small { c.conj() * d } else { d.conj() * c };
            }
        }
        Ok(sum)
    }

    /// `a ⊗ b`: modes of `a` first.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (sa, ca) in &a.terms {
            for (sb, cb) in &b.terms {
                terms.insert(sa.concat(sb), ca * cb);
            }
        }
        Self::pruned(a.modes + b.modes, terms)
    }

    pub fn photon_number(&self) -> PhotonNumber {
        let mut it = self.terms.keys().map(FockBasisState::photon_number);
        match it.next() {
            None => PhotonNumber::Empty,
            Some(n) if it.all(|m| m == n) => PhotonNumber::Definite(n),
            Some(_) => PhotonNumber::Mixed,
        }
    }

    /// Splits the state into photon-number sectors.
    pub fn sectors(&self) -> BTreeMap<u32, Vec<(&FockBasisState, Complex64)>> {
        let mut out: BTreeMap<u32, Vec<_>> = BTreeMap::new();
        for (b, c) in &self.terms {
            out.entry(b.photon_number()).or_default().push((b, *c));
        }
        out
    }
}

impl fmt::Display for PhotonicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", c.re, c.im, b)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    occ: Vec<u32>,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    modes: usize,
    terms: Vec<TermJson>,
}

impl From<PhotonicState> for StateJson {
    fn from(s: PhotonicState) -> Self {
        Self {
            modes: s.modes,
            terms: s.terms.into_iter().map(|(b, c)| TermJson { occ: b.0, re: c.re, im: c.im }).collect(),
        }
    }
}

impl TryFrom<StateJson> for PhotonicState {
    type Error = Error;

    fn try_from(j: StateJson) -> Result<Self> {
        Self::from_terms(j.modes, j.terms.into_iter().map(|t| (FockBasisState(t.occ), Complex64::new(t.re, t.im))))
    }
}
