//! Decomposition of mode unitaries into beamsplitters and phase shifters.
//!
//! Works by nulling the sub-diagonal of the target with nearest-neighbour
//! two-mode rotations, leaving a diagonal of phases. Each rotation is then
//! realized as `phases · BS(R) · phases`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ModeUnitary, OpticalElement};

const EPS: f64 = 1e-14;

fn wrap(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

fn push_phase(out: &mut Vec<OpticalElement>, mode: usize, phi: f64) {
    let phi = wrap(phi);
    if phi.abs() > EPS {
        out.push(OpticalElement::phase(mode, phi));
    }
}

/// Elements on modes `(a, b)` realizing the 2×2 unitary `v` (`v[out][in]`).
pub fn two_mode_network(a: usize, b: usize, v: &[[Complex64; 2]; 2]) -> Vec<OpticalElement> {
    let t = v[0][0].norm();
    let r = v[0][1].norm();
    let mut out = Vec::new();
    if r < 1e-12 {
        push_phase(&mut out, a, v[0][0].arg());
        push_phase(&mut out, b, v[1][1].arg());
        return out;
    }
    if t < 1e-12 {
        out.push(OpticalElement::beamsplitter(a, b, 1.0));
        push_phase(&mut out, a, v[0][1].arg() - FRAC_PI_2);
        push_phase(&mut out, b, v[1][0].arg() - FRAC_PI_2);
        return out;
    }
    // v = diag(e^{iα}, e^{iβ}) · BS(R) · diag(1, e^{iδ})
    let alpha = v[0][0].arg();
    let delta = v[0][1].arg() - alpha - FRAC_PI_2;
    let beta = v[1][0].arg() - FRAC_PI_2;
    let reflectivity = (r * r / (r * r + t * t)).clamp(0.0, 1.0);
    push_phase(&mut out, b, delta);
    out.push(OpticalElement::beamsplitter(a, b, reflectivity));
    push_phase(&mut out, a, alpha);
    push_phase(&mut out, b, beta);
    out
}

/// An element list whose composition equals `u`.
pub fn synthesize(u: &ModeUnitary) -> Vec<OpticalElement> {
    let m = u.modes();
    let mut w: DMatrix<Complex64> = u.matrix().clone();
    // rotations applied to w from the left, in order
    let mut rotations: Vec<(usize, [[Complex64; 2]; 2])> = Vec::new();
    for j in 0..m.saturating_sub(1) {
        for i in (j + 1..m).rev() {
            let x = w[(i - 1, j)];
            let y = w[(i, j)];
            if y.norm() < EPS {
                continue;
            }
            let rho = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let g = [[x.conj() / rho, y.conj() / rho], [-y / rho, x / rho]];
            for k in 0..m {
                let top = w[(i - 1, k)];
                let bot = w[(i, k)];
                w[(i - 1, k)] = g[0][0] * top + g[0][1] * bot;
                w[(i, k)] = g[1][0] * top + g[1][1] * bot;
            }
            rotations.push((i - 1, g));
        }
    }

    // u = G₁† G₂† … G_k† D, so D acts first and G₁† last.
    let mut out = Vec::new();
    for k in 0..m {
        push_phase(&mut out, k, w[(k, k)].arg());
    }
    for (top, g) in rotations.iter().rev() {
        let gd = [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]];
        out.extend(two_mode_network(*top, top + 1, &gd));
    }
    out
}
