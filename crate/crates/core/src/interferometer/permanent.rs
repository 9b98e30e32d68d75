//! Matrix permanent by Ryser's inclusion–exclusion formula.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Permanent of a square complex matrix.
///
/// Uses Ryser's formula with Gray-code subset iteration, O(2ⁿ·n).
/// The permanent of the empty matrix is 1.
pub fn permanent(m: &DMatrix<Complex64>) -> Result<Complex64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    let mut row_major = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            row_major.push(m[(i, j)]);
        }
    }
    Ok(ryser(&row_major, n))
}

/// Ryser on an `n×n` row-major buffer.
pub(crate) fn ryser(a: &[Complex64], n: usize) -> Complex64 {
    debug_assert_eq!(a.len(), n * n);
    match n {
        0 => return Complex64::new(1.0, 0.0),
        1 => return a[0],
        2 => return a[0] * a[3] + a[1] * a[2],
        _ => {}
    }

    // row_sums[i] = Σ_{j ∈ S} a[i][j] for the current subset S
    let mut row_sums = vec![Complex64::default(); n];
    let mut in_subset = vec![false; n];
    let mut total = Complex64::default();
    let mut gray: u64 = 0;

    for k in 1u64..(1u64 << n) {
        let next = k ^ (k >> 1);
        let col = (next ^ gray).trailing_zeros() as usize;
        gray = next;
        let sign = if in_subset[col] { -1.0 } else { 1.0 };
        in_subset[col] = !in_subset[col];
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += a[i * n + col] * sign;
        }
        let prod: Complex64 = row_sums.iter().product();
        // (-1)^{n - |S|}
        if (n as u32 - next.count_ones()).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    total
}
