//! Small-area polynomials on the circle from the generator `E(z) = exp(exp z)`.
//!
//! The Taylor coefficients of `E(R + w)/E(R) - 1 = exp(e^R (e^w - 1)) - 1` are
//! `b_k = a_k(R)/E(R)`. They define the band-limited density
//! `v = 1 + 2 Σ μ̂(k) cos kθ` with `μ̂(k) = k b_k (R/2)^k / A`,
//! `A = 4 Σ k b_k (R/2)^k`, whose equal-mass discretization into
//! `M = ⌈16 R A⌉` atoms gives the polynomial.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::potential::{equal_mass_partition, AtomPlacement, CircleMeasure};
use crate::poly::RootConfiguration;

const MAX_TERMS: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WagnerParams {
    #[serde(rename = "R")]
    pub r: f64,
    /// Bound on `Σ_{k>N} b_k (R/2)^k`; fixes `N`.
    pub truncation_tolerance: f64,
    /// Level exponent: the polynomial is paired with `t_M = (log M)^α`.
    pub alpha: f64,
    /// Largest `M` that will be built.
    pub degree_cap: u64,
}

impl WagnerParams {
    pub fn new(r: f64) -> Self {
        Self {
            r,
            truncation_tolerance: 1e-12,
            alpha: 1.0,
            degree_cap: 1_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.r > 1.0 && self.r.is_finite()) {
            return Err(LemniError::InvalidArgument(format!("R must be > 1, got {}", self.r)));
        }
        if !(self.truncation_tolerance > 0.0) {
            return Err(LemniError::InvalidArgument("truncation tolerance must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(LemniError::InvalidArgument("alpha must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WagnerCoefficients {
    /// `b_1..b_N`.
    pub b: Vec<f64>,
    /// `b_k (R/2)^k`, computed directly (no division by `(R/2)^k`).
    pub scaled: Vec<f64>,
    /// Upper estimate of the dropped tail `Σ_{k>N} b_k (R/2)^k`.
    pub tail_bound: f64,
    /// `A_{R,N}/E(R) = 4 Σ k b_k (R/2)^k`.
    pub a_ratio: f64,
    /// `M = ⌈16 R A_{R,N}/E(R)⌉`.
    pub m: u64,
}

impl WagnerCoefficients {
    pub fn n(&self) -> usize {
        self.b.len()
    }
}

/// Taylor coefficients of `exp(x(e^w - 1)) - 1` at `w = 0`, scaled by `s^k`,
/// from `k f_k = Σ_{j=1}^k j g_j f_{k-j}` with `g_j = x s^j / j!`.
fn scaled_series(x: f64, s: f64, tol: f64) -> Result<(Vec<f64>, f64)> {
    let mut g = vec![0.0];
    let mut f = vec![1.0];
    let mut term = x;
    for k in 1..=MAX_TERMS {
        term *= s / k as f64;
        g.push(term);
        let acc: f64 = (1..=k).map(|j| j as f64 * g[j] * f[k - j]).sum();
        let fk = acc / k as f64;
        if !fk.is_finite() {
            return Err(LemniError::CoefficientOverflow { k });
        }
        f.push(fk);
        // Past the peak the terms fall faster than geometrically; stop once
        // the geometric tail from here is far below the tolerance.
        if k >= 2 && fk < f[k - 1] {
            let ratio = fk / f[k - 1];
            if ratio < 0.5 && fk / (1.0 - ratio) < 1e-6 * tol {
                break;
            }
        }
    }
    let ratio_tail = {
        let n = f.len() - 1;
        let ratio = f[n] / f[n - 1];
        f[n] * ratio / (1.0 - ratio)
    };
    f.remove(0);
    Ok((f, ratio_tail))
}

/// Normalized coefficients `b_k = a_k(R)/E(R)`, truncated at the smallest `N`
/// whose tail is below the tolerance.
pub fn wagner_coefficients(params: &WagnerParams) -> Result<WagnerCoefficients> {
    params.validate()?;
    let x = params.r.exp();
    let s = 0.5 * params.r;
    let (all, beyond) = scaled_series(x, s, params.truncation_tolerance)?;
    // Suffix sums, including the geometric estimate past the last term.
    let mut suffix = vec![0.0; all.len() + 1];
    suffix[all.len()] = beyond;
    for k in (0..all.len()).rev() {
        suffix[k] = suffix[k + 1] + all[k];
    }
    let n = (1..=all.len())
        .find(|&n| suffix[n] <= params.truncation_tolerance)
        .ok_or(LemniError::CoefficientOverflow { k: all.len() })?;
    let scaled = all[..n].to_vec();
    let b = scaled
        .iter()
        .enumerate()
        .map(|(i, c)| c / s.powi(i as i32 + 1))
        .collect();
    let weighted: f64 = scaled.iter().enumerate().map(|(i, c)| (i + 1) as f64 * c).sum();
    let a_ratio = 4.0 * weighted;
    let m = (16.0 * params.r * a_ratio).ceil();
    if !m.is_finite() {
        return Err(LemniError::CoefficientOverflow { k: n });
    }
    Ok(WagnerCoefficients {
        b,
        scaled,
        tail_bound: suffix[n],
        a_ratio,
        m: m as u64,
    })
}

/// `μ̂(k) = k b_k (R/2)^k / A`.
pub fn wagner_measure(coeffs: &WagnerCoefficients) -> Result<CircleMeasure> {
    CircleMeasure::from_coefficients(
        coeffs
            .scaled
            .iter()
            .enumerate()
            .map(|(i, c)| Complex64::new((i + 1) as f64 * c / coeffs.a_ratio, 0.0))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WagnerPolynomial {
    pub config: RootConfiguration,
    /// `t_M = (log M)^α`.
    pub level: f64,
    pub m: u64,
    pub n: usize,
    pub a_ratio: f64,
    pub tail_bound: f64,
    pub measure: CircleMeasure,
    /// Largest `|E(R + w)|` over `{|w| <= R, π/2 <= |Im w| <= 3π/2}`, where the
    /// construction needs `E` bounded; `None` when that region is empty.
    pub generator_bound: Option<f64>,
}

/// `p_M(z) = Π (z - e^{iθ_j})` over the equal-mass atoms of the Wagner measure.
pub fn wagner_polynomial(params: &WagnerParams) -> Result<WagnerPolynomial> {
    let coeffs = wagner_coefficients(params)?;
    if coeffs.m > params.degree_cap {
        return Err(LemniError::DegreeCap {
            required: coeffs.m,
            cap: params.degree_cap,
        });
    }
    let measure = wagner_measure(&coeffs)?;
    let atoms = equal_mass_partition(&measure, coeffs.m as usize, AtomPlacement::LeftEndpoint)?;
    let config = atoms.to_configuration()?;
    let level = (coeffs.m as f64).ln().powf(params.alpha);
    Ok(WagnerPolynomial {
        config,
        level,
        m: coeffs.m,
        n: coeffs.n(),
        a_ratio: coeffs.a_ratio,
        tail_bound: coeffs.tail_bound,
        measure,
        generator_bound: generator_bound(params.r),
    })
}

/// `sup |E(R + w)|` on a grid of the strip region, `|E(z)| = exp(e^{Re z} cos Im z)`.
pub fn generator_bound(r: f64) -> Option<f64> {
    let lo = std::f64::consts::FRAC_PI_2;
    if r < lo {
        return None;
    }
    let hi = r.min(3.0 * lo);
    let mut best = f64::NEG_INFINITY;
    for i in 0..=200 {
        let y = lo + (hi - lo) * i as f64 / 200.0;
        let xmax = (r * r - y * y).max(0.0).sqrt();
        for j in 0..=200 {
            let x = -xmax + 2.0 * xmax * j as f64 / 200.0;
            let z = Complex64::new(r + x, y);
            best = best.max((z.re.exp() * z.im.cos()).exp());
        }
    }
    Some(best)
}
