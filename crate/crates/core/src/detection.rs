//! Photon counting, heralding and detector imperfections.
//!
//! Detector inefficiency is a binomial thinning of the true photon counts:
//! each photon reaching a detector registers independently with probability
//! `η`. Threshold detectors only report whether at least one photon registered.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasisState, PhotonicState, PRUNE_THRESHOLD};

/// Efficiency and counting behaviour shared by all detectors in a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectorModel {
    efficiency: f64,
    number_resolving: bool,
}

impl DetectorModel {
    pub fn new(efficiency: f64, number_resolving: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(Error::InvalidParameter(format!("efficiency {efficiency} outside [0, 1]")));
        }
        Ok(Self { efficiency, number_resolving })
    }

    /// Unit efficiency, number resolving.
    pub fn ideal() -> Self {
        Self { efficiency: 1.0, number_resolving: true }
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn number_resolving(&self) -> bool {
        self.number_resolving
    }

    /// Probability that `true_count` photons produce the reading `req`.
    pub fn response(&self, true_count: u32, req: Requirement) -> f64 {
        let eta = self.efficiency;
        let none = (1.0 - eta).powi(true_count as i32);
        match req {
            Requirement::Click => 1.0 - none,
            Requirement::Count(0) => none,
            Requirement::Count(_) if !self.number_resolving => 1.0 - none,
            Requirement::Count(k) => binomial_pmf(true_count, k, eta),
        }
    }
}

fn binomial_pmf(n: u32, k: u32, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut coeff = 1.0;
    for i in 0..k {
        coeff *= f64::from(n - i) / f64::from(i + 1);
    }
    coeff * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// What a detector must report for a herald to succeed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    /// Exactly this many photons (number-resolving), or click/no-click for
    /// counts 1 and 0 on threshold detectors.
    Count(u32),
    /// At least one photon.
    Click,
}

impl Requirement {
    fn admits(self, n: u32) -> bool {
        match self {
            Self::Count(k) => n == k,
            Self::Click => n >= 1,
        }
    }

    fn reported(self) -> u32 {
        match self {
            Self::Count(k) => k,
            Self::Click => 1,
        }
    }
}

/// Required detector readings on a set of modes.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HeraldPattern(BTreeMap<usize, Requirement>);

impl HeraldPattern {
    /// Builds a pattern, rejecting repeated modes.
    pub fn new<I: IntoIterator<Item = (usize, Requirement)>>(items: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (mode, req) in items {
            if map.insert(mode, req).is_some() {
                return Err(Error::RepeatedMode(mode));
            }
        }
        Ok(Self(map))
    }

    /// Exact counts on each listed mode.
    pub fn counts(items: &[(usize, u32)]) -> Result<Self> {
        Self::new(items.iter().map(|&(m, k)| (m, Requirement::Count(k))))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Measured modes in ascending order.
    pub fn modes(&self) -> Vec<usize> {
        self.0.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Requirement)> + '_ {
        self.0.iter().map(|(&m, &r)| (m, r))
    }

    fn validate(&self, modes: usize, detector: Option<&DetectorModel>) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::EmptyPattern);
        }
        for (&m, &req) in &self.0 {
            if m >= modes {
                return Err(Error::ModeOutOfRange { mode: m, modes });
            }
            if let (Some(d), Requirement::Count(k)) = (detector, req) {
                if !d.number_resolving && k > 1 {
                    return Err(Error::InvalidParameter(format!(
                        "threshold detector on mode {m} cannot report {k} photons"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One true-count configuration compatible with a herald.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    /// Actual photons on the measured modes, ascending mode order.
    pub true_counts: Vec<u32>,
    /// Joint probability of this configuration and the herald firing.
    pub probability: f64,
    /// Normalized state of the unmeasured modes.
    pub state: PhotonicState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedState {
    pub weight: f64,
    pub state: PhotonicState,
}

/// State left on the unmeasured modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Residual {
    Pure(PhotonicState),
    /// Distinct true counts on the measured modes led to the same reading;
    /// the conditional state is an incoherent mixture of these.
    Mixed {
        mixture: Vec<WeightedState>,
    },
    /// The herald cannot fire.
    None,
}

/// Outcome of a herald.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionRecord {
    pub outcome: BTreeMap<usize, u32>,
    #[serde(rename = "prob")]
    pub probability: f64,
    pub residual: Residual,
    #[serde(skip)]
    branches: Vec<Branch>,
}

impl DetectionRecord {
    pub fn is_possible(&self) -> bool {
        self.probability > 0.0
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// The residual state when it is pure.
    pub fn pure_residual(&self) -> Option<&PhotonicState> {
        match &self.residual {
            Residual::Pure(s) => Some(s),
            _ => None,
        }
    }
}

/// Groups terms by their occupations on `measured`, returning the
/// unnormalized state of the remaining modes for each group.
fn split_by_measured(s: &PhotonicState, measured: &[usize]) -> BTreeMap<Vec<u32>, PhotonicState> {
    let kept: Vec<usize> = (0..s.modes()).filter(|m| !measured.contains(m)).collect();
    let mut groups: BTreeMap<Vec<u32>, Vec<(FockBasisState, Complex64)>> = BTreeMap::new();
    for (b, c) in s.terms() {
        let occ = b.occupations();
        let key = measured.iter().map(|&m| occ[m]).collect();
        let rest = FockBasisState::new(kept.iter().map(|&m| occ[m]).collect());
        groups.entry(key).or_default().push((rest, *c));
    }
    groups
        .into_iter()
        .map(|(k, terms)| {
            let state = PhotonicState::from_terms(kept.len(), terms).expect("consistent mode count");
            (k, state)
        })
        .collect()
}

/// Measures the pattern's modes and conditions on the herald.
pub fn herald(s: &PhotonicState, pattern: &HeraldPattern, detector: &DetectorModel) -> Result<DetectionRecord> {
    pattern.validate(s.modes(), Some(detector))?;
    let measured = pattern.modes();
    let reqs: Vec<Requirement> = pattern.iter().map(|(_, r)| r).collect();
    let outcome = pattern.iter().map(|(m, r)| (m, r.reported())).collect();

    let mut branches = Vec::new();
    for (counts, state) in split_by_measured(s, &measured) {
        let response: f64 = counts.iter().zip(&reqs).map(|(&n, &r)| detector.response(n, r)).product();
        let p = response * state.norm_sqr();
        if p > 0.0 && !state.is_empty() {
            branches.push(Branch { true_counts: counts, probability: p, state: state.normalized()? });
        }
    }
    let probability: f64 = branches.iter().map(|b| b.probability).sum();
    let residual = match branches.len() {
        0 => Residual::None,
        1 => Residual::Pure(branches[0].state.clone()),
        _ => Residual::Mixed {
            mixture: branches
                .iter()
                .map(|b| WeightedState { weight: b.probability / probability, state: b.state.clone() })
                .collect(),
        },
    };
    Ok(DetectionRecord { outcome, probability, residual, branches })
}

/// Ideal projection onto the pattern, keeping every mode. Returns the
/// probability and the renormalized state (empty when the probability is 0).
pub fn postselect(s: &PhotonicState, pattern: &HeraldPattern) -> Result<(f64, PhotonicState)> {
    pattern.validate(s.modes(), None)?;
    let kept = s
        .terms()
        .filter(|(b, _)| pattern.iter().all(|(m, r)| r.admits(b.occupations()[m])))
        .map(|(b, c)| (b.clone(), *c));
    let projected = PhotonicState::from_terms(s.modes(), kept)?;
    let p = projected.norm_sqr();
    if projected.is_empty() {
        return Ok((0.0, projected));
    }
    Ok((p, projected.normalized()?))
}

/// Ideal number-resolving projection onto exact counts, dropping the measured
/// modes. The result is unnormalized; its squared norm is the herald
/// probability.
pub fn project(s: &PhotonicState, pattern: &HeraldPattern) -> Result<PhotonicState> {
    pattern.validate(s.modes(), None)?;
    let mut wanted = Vec::new();
    for (m, r) in pattern.iter() {
        match r {
            Requirement::Count(k) => wanted.push(k),
            Requirement::Click => {
                return Err(Error::InvalidParameter(format!("click on mode {m} has no coherent projection")))
            }
        }
    }
    let kept = s.modes() - wanted.len();
    Ok(split_by_measured(s, &pattern.modes()).remove(&wanted).unwrap_or_else(|| PhotonicState::zero(kept)))
}

/// Distribution of detector readings on `modes` (ascending order is not
/// required; readings follow the given order). Threshold detectors report
/// 0 or 1.
pub fn outcome_distribution(
    s: &PhotonicState,
    modes: &[usize],
    detector: &DetectorModel,
) -> Result<BTreeMap<Vec<u32>, f64>> {
    for (i, &m) in modes.iter().enumerate() {
        if m >= s.modes() {
            return Err(Error::ModeOutOfRange { mode: m, modes: s.modes() });
        }
        if modes[..i].contains(&m) {
            return Err(Error::RepeatedMode(m));
        }
    }
    let mut out: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for (counts, state) in split_by_measured(s, modes) {
        let w = state.norm_sqr();
        // readings per mode with their conditional probabilities
        let per_mode: Vec<Vec<(u32, f64)>> = counts
            .iter()
            .map(|&n| {
                let reads: Vec<u32> = if detector.number_resolving { (0..=n).collect() } else { vec![0, 1] };
                reads
                    .into_iter()
                    .map(|k| (k, detector.response(n, Requirement::Count(k))))
                    .filter(|&(_, p)| p > 0.0)
                    .collect()
            })
            .collect();
        let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::new(), w)];
        for options in &per_mode {
            partial = partial
                .into_iter()
                .flat_map(|(prefix, p)| {
                    options.iter().map(move |&(k, q)| {
                        let mut v = prefix.clone();
                        v.push(k);
                        (v, p * q)
                    })
                })
                .collect();
        }
        for (reading, p) in partial {
            *out.entry(reading).or_default() += p;
        }
    }
    Ok(out)
}

const NORMALIZATION_TOLERANCE: f64 = 1e-10;

/// Samples a full occupation vector with probability `|amplitude|²`.
pub fn measure_all<R: Rng + ?Sized>(s: &PhotonicState, rng: &mut R) -> Result<(FockBasisState, f64)> {
    let n = s.norm_sqr();
    if (n - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Unnormalized { norm_sqr: n });
    }
    let u: f64 = rng.random::<f64>() * n;
    let mut acc = 0.0;
    let mut last = None;
    for (b, c) in s.terms() {
        let p = c.norm_sqr();
        acc += p;
        last = Some((b, p));
        if u < acc {
            return Ok((b.clone(), p));
        }
    }
    // u landed in the rounding gap above the final cumulative sum
    let (b, p) = last.ok_or(Error::ZeroState)?;
    Ok((b.clone(), p))
}

/// Photon-number-resolving readout sampled with the given detector model:
/// each photon survives with probability `η`.
pub fn sample_readout<R: Rng + ?Sized>(s: &PhotonicState, detector: &DetectorModel, rng: &mut R) -> Result<Vec<u32>> {
    let (b, _) = measure_all(s, rng)?;
    Ok(b.occupations()
        .iter()
        .map(|&n| {
            let seen = (0..n).filter(|_| rng.random::<f64>() < detector.efficiency).count() as u32;
            if detector.number_resolving {
                seen
            } else {
                seen.min(1)
            }
        })
        .collect())
}

/// Pruning threshold squared: probabilities below this are rounding debris.
pub const PROBABILITY_FLOOR: f64 = PRUNE_THRESHOLD * PRUNE_THRESHOLD;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{apply, element_unitary, OpticalElement};
    use crate::rng::seeded;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(occ: &[i64]) -> PhotonicState {
        PhotonicState::basis(occ).unwrap()
    }

    fn hom_output() -> PhotonicState {
        let bs = element_unitary(&OpticalElement::balanced(0, 1), 2).unwrap();
        apply(&bs, &ket(&[1, 1])).unwrap()
    }

    #[test]
    fn hom_coincidence_is_impossible() {
        let rec =
            herald(&hom_output(), &HeraldPattern::counts(&[(0, 1), (1, 1)]).unwrap(), &DetectorModel::ideal()).unwrap();
        assert_eq!(rec.probability, 0.0);
        assert!(!rec.is_possible());
        assert_eq!(rec.residual, Residual::None);
    }

    #[test]
    fn vacuum_herald_passes_state_through() {
        let psi =
            PhotonicState::superpose(&ket(&[1, 0]), Complex64::new(0.6, 0.0), &ket(&[0, 1]), Complex64::new(0.0, 0.8))
                .unwrap();
        let s = PhotonicState::tensor(&PhotonicState::vacuum(1), &psi);
        let rec = herald(&s, &HeraldPattern::counts(&[(0, 0)]).unwrap(), &DetectorModel::ideal()).unwrap();
        assert!((rec.probability - 1.0).abs() < 1e-15);
        let res = rec.pure_residual().unwrap();
        assert!((PhotonicState::inner(res, &psi).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inefficient_detector_scales_linearly() {
        let d = DetectorModel::new(0.7, true).unwrap();
        let rec = herald(&ket(&[1]), &HeraldPattern::counts(&[(0, 1)]).unwrap(), &d).unwrap();
        assert!((rec.probability - 0.7).abs() < 1e-15);
        let d = DetectorModel::new(0.7, false).unwrap();
        let rec = herald(&ket(&[1]), &HeraldPattern::new([(0, Requirement::Click)]).unwrap(), &d).unwrap();
        assert!((rec.probability - 0.7).abs() < 1e-15);
    }

    #[test]
    fn herald_errors() {
        let s = ket(&[1, 0]);
        assert_eq!(herald(&s, &HeraldPattern::default(), &DetectorModel::ideal()), Err(Error::EmptyPattern));
        assert_eq!(
            herald(&s, &HeraldPattern::counts(&[(3, 1)]).unwrap(), &DetectorModel::ideal()),
            Err(Error::ModeOutOfRange { mode: 3, modes: 2 })
        );
        let thr = DetectorModel::new(1.0, false).unwrap();
        assert!(herald(&s, &HeraldPattern::counts(&[(0, 2)]).unwrap(), &thr).is_err());
        assert!(DetectorModel::new(1.2, true).is_err());
        assert_eq!(HeraldPattern::counts(&[(0, 1), (0, 0)]), Err(Error::RepeatedMode(0)));
    }

    #[test]
    fn threshold_click_mixes_photon_numbers() {
        // (|1,0⟩ + |2,1⟩)/√2 on a click in mode 0: two true counts, two residual components
        let s = PhotonicState::superpose(
            &ket(&[1, 0]),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            &ket(&[2, 1]),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        )
        .unwrap();
        let d = DetectorModel::new(1.0, false).unwrap();
        let rec = herald(&s, &HeraldPattern::new([(0, Requirement::Click)]).unwrap(), &d).unwrap();
        assert!((rec.probability - 1.0).abs() < 1e-15);
        assert!(matches!(rec.residual, Residual::Mixed { ref mixture } if mixture.len() == 2));
        assert_eq!(rec.branches().len(), 2);
    }

    #[test]
    fn sampling_is_seeded() {
        let s = PhotonicState::superpose(
            &ket(&[2, 0]),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            &ket(&[0, 2]),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        )
        .unwrap();
        let draw = |seed| {
            let mut rng = seeded(seed);
            (0..20).map(|_| measure_all(&s, &mut rng).unwrap().0).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        let (b, p) = measure_all(&ket(&[1, 0]), &mut seeded(0)).unwrap();
        assert_eq!(b.occupations(), &[1, 0]);
        assert_eq!(p, 1.0);
        assert!(matches!(
            measure_all(&s.scaled(Complex64::new(2.0, 0.0)), &mut seeded(0)),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn record_json_shape() {
        let rec = herald(&ket(&[0, 1]), &HeraldPattern::counts(&[(0, 0)]).unwrap(), &DetectorModel::ideal()).unwrap();
        let j = serde_json::to_value(&rec).unwrap();
        assert_eq!(j["outcome"]["0"], 0);
        assert_eq!(j["prob"], 1.0);
        assert_eq!(j["residual"]["modes"], 1);
    }
}
