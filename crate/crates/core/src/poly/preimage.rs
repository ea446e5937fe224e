//! Solutions of `q(z) = w` for a root-form polynomial `q`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::RootConfiguration;
use crate::error::{LemniError, Result};

const RESIDUAL_TOL: f64 = 1e-12;
const MAX_ITER: usize = 500;

/// All `deg q` solutions of `q(z) = w`, repeated by multiplicity.
///
/// When `q = (z - c)^d` the solutions are the radicals `c + w^{1/d} ζ_k`.
/// Otherwise Aberth–Ehrlich iteration is run on `q(z) - w`, using
/// `q'/q = Σ m_k/(z - r_k)` so coefficients are never formed.
pub(super) fn solve_preimages(q: &RootConfiguration, w: Complex64) -> Result<Vec<Complex64>> {
    let d = q.degree() as usize;
    if q.roots().len() == 1 {
        let c = q.roots()[0].location;
        if w == Complex64::new(0.0, 0.0) {
            return Ok(vec![c; d]);
        }
        let rho = w.norm().powf(1.0 / d as f64);
        let phi = w.arg() / d as f64;
        return Ok((0..d)
            .map(|k| c + Complex64::from_polar(rho, phi + TAU * k as f64 / d as f64))
            .collect());
    }
    aberth(q, w)
}

fn aberth(q: &RootConfiguration, w: Complex64) -> Result<Vec<Complex64>> {
    let d = q.degree() as usize;
    let total: f64 = q.roots().iter().map(|r| r.mult as f64).sum();
    let center = q
        .roots()
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, r| acc + r.location * r.mult as f64)
        / total;
    let spread = q
        .roots()
        .iter()
        .map(|r| (r.location - center).norm())
        .fold(0.0, f64::max);
    // Every solution lies within |w|^{1/d} of some root of q.
    let radius = spread + w.norm().powf(1.0 / d as f64) + 1e-3;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| center + Complex64::from_polar(radius, 0.4 + TAU * k as f64 / d as f64))
        .collect();

    let scale = 1.0 + w.norm();
    for _ in 0..MAX_ITER {
        let mut max_step = 0.0f64;
        for j in 0..d {
            let zj = z[j];
            let qv = q.eval(zj);
            let f = qv - w;
            let mut log_deriv = Complex64::new(0.0, 0.0);
            let mut at_root = false;
            for r in q.roots() {
                let diff = zj - r.location;
                if diff.norm() == 0.0 {
                    at_root = true;
                    break;
                }
                log_deriv += r.mult as f64 / diff;
            }
            if at_root {
                z[j] += Complex64::new(1e-8, 1e-8) * radius;
                max_step = f64::INFINITY;
                continue;
            }
            let fp = qv * log_deriv;
            if fp.norm() == 0.0 {
                z[j] += Complex64::new(1e-8, -1e-8) * radius;
                max_step = f64::INFINITY;
                continue;
            }
            let newton = f / fp;
            let repulsion: Complex64 = z
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &zk)| {
                    let diff = zj - zk;
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        1.0 / diff
                    }
                })
                .sum();
            let step = newton / (Complex64::new(1.0, 0.0) - newton * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[j] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        let residual = z.iter().map(|&zj| (q.eval(zj) - w).norm()).fold(0.0, f64::max);
        let stalled = max_step <= 1e-16 * (1.0 + radius);
        if residual <= RESIDUAL_TOL * scale || (stalled && residual <= 1e-9 * scale) {
            return Ok(z);
        }
    }
    Err(LemniError::RootFinding {
        target: w,
        iterations: MAX_ITER,
    })
}
