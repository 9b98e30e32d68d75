//! Linear optical networks and multi-photon evolution.
//!
//! A [`ModeUnitary`] `U` maps input creation operators to outputs,
//! `a†ᵢ → Σⱼ U[j][i] a†ⱼ`, so column `i` is the image of input mode `i` and a
//! single photon's amplitude vector transforms as `ψ → U·ψ`. The amplitude
//! for input occupation `S` to reach output `T` is
//! `perm(U[T,S]) / √(Πᵢ Sᵢ! · Πⱼ Tⱼ!)`, where `U[T,S]` repeats row `j` `Tⱼ`
//! times and column `i` `Sᵢ` times.

mod element;
mod permanent;
pub mod synthesis;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasisState, PhotonicState};

pub use element::{hadamard_network, ModePair, OpticalElement};
pub use permanent::permanent;
pub(crate) use permanent::ryser;
pub use synthesis::synthesize;

/// Tolerance for `U·U† = I`.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// A unitary on optical modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct ModeUnitary(DMatrix<Complex64>);

impl ModeUnitary {
    pub fn identity(modes: usize) -> Self {
        Self(DMatrix::identity(modes, modes))
    }

    /// Wraps a matrix after checking it is square and unitary.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare { rows: matrix.nrows(), cols: matrix.ncols() });
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    pub fn modes(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// `U[output][input]`.
    pub fn entry(&self, output: usize, input: usize) -> Complex64 {
        self.0[(output, input)]
    }

    /// The network `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if self.modes() != next.modes() {
            return Err(Error::ModeMismatch { left: self.modes(), right: next.modes() });
        }
        Ok(Self(&next.0 * &self.0))
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn deviation_from_unitary(&self) -> f64 {
        unitarity_deviation(&self.0)
    }
}

/// Largest elementwise deviation of `m·m†` from the identity.
pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let p = m * m.adjoint();
    let mut worst: f64 = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((p[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

impl From<ModeUnitary> for Vec<Vec<[f64; 2]>> {
    fn from(u: ModeUnitary) -> Self {
        (0..u.modes()).map(|i| (0..u.modes()).map(|j| [u.0[(i, j)].re, u.0[(i, j)].im]).collect()).collect()
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for ModeUnitary {
    type Error = Error;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        let flat: Vec<Complex64> = rows.iter().flatten().map(|[re, im]| Complex64::new(*re, *im)).collect();
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }
}

/// The unitary of one element embedded in `total_modes` modes.
pub fn element_unitary(e: &OpticalElement, total_modes: usize) -> Result<ModeUnitary> {
    e.validate(total_modes)?;
    let (modes, block) = e.block();
    let mut m = DMatrix::identity(total_modes, total_modes);
    for (bi, &oi) in modes.iter().enumerate() {
        for (bj, &oj) in modes.iter().enumerate() {
            m[(oi, oj)] = block[bi][bj];
        }
    }
    Ok(ModeUnitary(m))
}

/// Product of the element unitaries; the first element acts first.
pub fn compose(elements: &[OpticalElement], total_modes: usize) -> Result<ModeUnitary> {
    let mut u = DMatrix::identity(total_modes, total_modes);
    for e in elements {
        e.validate(total_modes)?;
        let (modes, block) = e.block();
        // left-multiply by the element: only rows in `modes` change
        let old: Vec<Vec<Complex64>> = modes.iter().map(|&r| (0..total_modes).map(|k| u[(r, k)]).collect()).collect();
        for (bi, &r) in modes.iter().enumerate() {
            for k in 0..total_modes {
                u[(r, k)] = block[bi].iter().zip(&old).map(|(b, row)| b * row[k]).sum();
            }
        }
    }
    let u = ModeUnitary(u);
    let deviation = u.deviation_from_unitary();
    if deviation > UNITARITY_TOLERANCE {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(u)
}

/// All occupation vectors with `photons` photons over `modes` modes, in
/// lexicographic order.
pub fn sector_basis(modes: usize, photons: u32) -> Vec<FockBasisState> {
    fn fill(prefix: &mut Vec<u32>, modes: usize, left: u32, out: &mut Vec<FockBasisState>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(FockBasisState::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for n in 0..=left {
            prefix.push(n);
            fill(prefix, modes, left - n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes == 0 {
        if photons == 0 {
            out.push(FockBasisState::new(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(modes), modes, photons, &mut out);
    out
}

fn expand(occ: &FockBasisState) -> Vec<usize> {
    occ.occupations().iter().enumerate().flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize)).collect()
}

/// Transition amplitude `⟨output| U |input⟩`.
pub fn transition_amplitude(u: &ModeUnitary, input: &FockBasisState, output: &FockBasisState) -> Complex64 {
    if input.photon_number() != output.photon_number() {
        return Complex64::default();
    }
    let cols = expand(input);
    let rows = expand(output);
    let n = cols.len();
    let mut buf = Vec::with_capacity(n * n);
    for &r in &rows {
        for &c in &cols {
            buf.push(u.0[(r, c)]);
        }
    }
    ryser(&buf, n) / (input.factorial_product() * output.factorial_product()).sqrt()
}

/// Evolves a state through `u`. Each photon-number sector evolves independently.
pub fn apply(u: &ModeUnitary, s: &PhotonicState) -> Result<PhotonicState> {
    let m = u.modes();
    if s.modes() != m {
        return Err(Error::ModeMismatch { left: m, right: s.modes() });
    }
    let mut acc: BTreeMap<FockBasisState, Complex64> = BTreeMap::new();
    let mut buf = Vec::new();
    for (photons, inputs) in s.sectors() {
        let outputs = sector_basis(m, photons);
        let n = photons as usize;
        for (input, amp) in inputs {
            let cols = expand(input);
            let in_norm = input.factorial_product();
            for output in &outputs {
                buf.clear();
                for (mode, &count) in output.occupations().iter().enumerate() {
                    for _ in 0..count {
                        buf.extend(cols.iter().map(|&c| u.0[(mode, c)]));
                    }
                }
                let a = ryser(&buf, n) / (in_norm * output.factorial_product()).sqrt();
                if a != Complex64::default() {
                    *acc.entry(output.clone()).or_default() += amp * a;
                }
            }
        }
    }
    Ok(PhotonicState::pruned(m, acc))
}

/// Output distribution for a basis input when the photons are fully
/// distinguishable: `P(T) = perm(|U[T,S]|²) / (ΠSᵢ! · ΠTⱼ!)`.
pub fn distinguishable_distribution(u: &ModeUnitary, input: &FockBasisState) -> Result<BTreeMap<FockBasisState, f64>> {
    if input.modes() != u.modes() {
        return Err(Error::ModeMismatch { left: u.modes(), right: input.modes() });
    }
    let cols = expand(input);
    let n = cols.len();
    let mut out = BTreeMap::new();
    let mut buf = Vec::with_capacity(n * n);
    for output in sector_basis(u.modes(), input.photon_number()) {
        buf.clear();
        for r in expand(&output) {
            buf.extend(cols.iter().map(|&c| Complex64::new(u.0[(r, c)].norm_sqr(), 0.0)));
        }
        let p = ryser(&buf, n).re / (input.factorial_product() * output.factorial_product());
        if p > 0.0 {
            out.insert(output, p);
        }
    }
    Ok(out)
}

/// Output distribution for a basis input whose photons have pairwise
/// wavepacket overlap `overlap`: a mixture of the indistinguishable
/// (weight `overlap²`) and fully distinguishable (weight `1 − overlap²`)
/// distributions.
pub fn partially_distinguishable_distribution(
    u: &ModeUnitary,
    input: &FockBasisState,
    overlap: f64,
) -> Result<BTreeMap<FockBasisState, f64>> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidParameter(format!("overlap {overlap} outside [0, 1]")));
    }
    let w = overlap * overlap;
    let quantum = apply(u, &PhotonicState::from_basis(input.clone()))?;
    let mut out: BTreeMap<FockBasisState, f64> = BTreeMap::new();
    if w > 0.0 {
        for (b, a) in quantum.terms() {
            *out.entry(b.clone()).or_default() += w * a.norm_sqr();
        }
    }
    if w < 1.0 {
        for (b, p) in distinguishable_distribution(u, input)? {
            *out.entry(b).or_default() += (1.0 - w) * p;
        }
    }
    out.retain(|_, p| *p > 0.0);
    Ok(out)
}

/// Coincidence probability for one photon in each input of a beamsplitter
/// with reflectivity `reflectivity` and wavepacket overlap `overlap`.
pub fn hom_coincidence(reflectivity: f64, overlap: f64) -> Result<f64> {
    let bs = element_unitary(&OpticalElement::beamsplitter(0, 1, reflectivity), 2)?;
    let input = FockBasisState::new(vec![1, 1]);
    let dist = partially_distinguishable_distribution(&bs, &input, overlap)?;
    Ok(dist.get(&input).copied().unwrap_or(0.0))
}
