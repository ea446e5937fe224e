//! Logarithmic potentials `U_μ(z) = ∫ log|z - w| dμ(w)` of root measures and of
//! band-limited measures on the unit circle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::poly::{ConstraintTag, Root, RootConfiguration};

/// Distance from the unit circle below which the series potential is refused.
pub const CIRCLE_EXCLUSION: f64 = 1e-9;

/// Probability measure `v(θ) dθ/2π` on the unit circle with
/// `v(θ) = 1 + 2 Re Σ_{k=1}^N μ̂(k) e^{ikθ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureRepr", into = "MeasureRepr")]
pub struct CircleMeasure {
    /// `μ̂(k)` at index `k - 1`.
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffRepr {
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

/// `{"coeffs": [{"k": 1, "re": .., "im": ..}, ..]}`; absent `k` are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRepr {
    pub coeffs: Vec<CoeffRepr>,
}

impl TryFrom<MeasureRepr> for CircleMeasure {
    type Error = LemniError;

    fn try_from(r: MeasureRepr) -> Result<Self> {
        let n = r.coeffs.iter().map(|c| c.k).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for c in r.coeffs {
            if c.k == 0 {
                return Err(LemniError::InvalidConfig(
                    "μ̂(0) = 1 is implied; coefficients start at k = 1".into(),
                ));
            }
            coeffs[c.k - 1] += Complex64::new(c.re, c.im);
        }
        CircleMeasure::from_coefficients(coeffs)
    }
}

impl From<CircleMeasure> for MeasureRepr {
    fn from(m: CircleMeasure) -> Self {
        MeasureRepr {
            coeffs: m
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| CoeffRepr {
                    k: i + 1,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl CircleMeasure {
    /// Normalized arc length, the equilibrium measure of the circle.
    pub fn uniform() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(LemniError::InvalidConfig("non-finite Fourier coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn bandwidth(&self) -> usize {
        self.coeffs.len()
    }

    /// `μ̂(k)`; `μ̂(0) = 1` and `μ̂(-k) = conj μ̂(k)`.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        match k {
            0 => Complex64::new(1.0, 0.0),
            k if k > 0 => self.coeffs.get(k as usize - 1).copied().unwrap_or_default(),
            k => self.coefficient(-k).conj(),
        }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn density(&self, theta: f64) -> f64 {
        let step = Complex64::from_polar(1.0, theta);
        let mut e = step;
        let mut s = 0.0;
        for c in &self.coeffs {
            s += (c * e).re;
            e *= step;
        }
        1.0 + 2.0 * s
    }

    /// Minimum of the density over `grid` equispaced angles.
    pub fn min_density(&self, grid: usize) -> f64 {
        (0..grid)
            .map(|j| self.density(TAU * j as f64 / grid as f64))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_density(&self, grid: usize) -> f64 {
        (0..grid)
            .map(|j| self.density(TAU * j as f64 / grid as f64))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `μ([0, θ))`, integrated term by term:
    /// `θ/2π + (1/π) Re Σ μ̂(k) (e^{ikθ} - 1)/(ik)`.
    pub fn cdf(&self, theta: f64) -> f64 {
        let step = Complex64::from_polar(1.0, theta);
        let mut e = step;
        let mut s = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = (i + 1) as f64;
            s += (c * (e - 1.0) / Complex64::new(0.0, k)).re;
            e *= step;
        }
        theta / TAU + s / PI
    }

    /// `μ` of the arc from `a` to `b` (counter-clockwise, `a <= b <= a + 2π`).
    pub fn arc_mass(&self, a: f64, b: f64) -> f64 {
        self.cdf(b) - self.cdf(a)
    }

    /// `θ ∈ [0, 2π]` with `F(θ) = mass`, by Newton steps kept inside a
    /// shrinking bracket.
    fn inverse_cdf(&self, mass: f64, guess: f64, tol: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, TAU);
        let mut th = guess.clamp(lo, hi);
        for _ in 0..200 {
            let f = self.cdf(th) - mass;
            if f.abs() <= tol {
                return th;
            }
            if f < 0.0 {
                lo = th;
            } else {
                hi = th;
            }
            let d = self.density(th) / TAU;
            let newton = th - f / d;
            th = if d > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-15 {
                break;
            }
        }
        th
    }
}

/// Where an atom sits inside its equal-mass arc.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AtomPlacement {
    #[default]
    LeftEndpoint,
    Midpoint,
}

/// `(1/M) Σ δ_{e^{iθ_j}}` with strictly increasing `θ_j ∈ [0, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCircleMeasure {
    angles: Vec<f64>,
}

impl DiscreteCircleMeasure {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(LemniError::InvalidConfig("no atoms".into()));
        }
        if angles.iter().any(|a| !(0.0..TAU).contains(a)) {
            return Err(LemniError::InvalidConfig("atom angles must lie in [0, 2π)".into()));
        }
        if angles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LemniError::InvalidConfig("atom angles must be strictly increasing".into()));
        }
        Ok(Self { angles })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Monic polynomial with a simple root at every atom.
    pub fn to_configuration(&self) -> Result<RootConfiguration> {
        RootConfiguration::new(
            self.angles
                .iter()
                .map(|&a| Root {
                    location: Complex64::from_polar(1.0, a),
                    mult: 1,
                })
                .collect(),
            ConstraintTag::UnitCircle,
        )
    }

    /// `U_ν(z) = (1/M) Σ log|z - e^{iθ_j}|`.
    pub fn potential(&self, z: Complex64) -> f64 {
        let s: f64 = self
            .angles
            .iter()
            .map(|&a| (z - Complex64::from_polar(1.0, a)).norm_sqr().ln())
            .sum();
        0.5 * s / self.angles.len() as f64
    }

    /// Largest gap between consecutive atoms, cyclically.
    pub fn max_gap(&self) -> f64 {
        let n = self.angles.len();
        (0..n)
            .map(|j| {
                let next = if j + 1 < n { self.angles[j + 1] } else { self.angles[0] + TAU };
                next - self.angles[j]
            })
            .fold(0.0, f64::max)
    }
}

/// Potential of the root-counting measure, `(1/n) log|p(z)|`.
pub fn discrete_potential(config: &RootConfiguration, z: Complex64) -> f64 {
    config.normalized_log_abs(z)
}

/// `U_μ(z)` from the Fourier series:
/// `-Re Σ μ̂(k) z^k / k` for `|z| < 1`, and
/// `log|z| - Re Σ conj(μ̂(k)) z^{-k} / k` for `|z| > 1`.
///
/// Within [`CIRCLE_EXCLUSION`] of the circle the inner series is used only when
/// `accept_near_circle` is set.
pub fn series_potential(measure: &CircleMeasure, z: Complex64, accept_near_circle: bool) -> Result<f64> {
    let r = z.norm();
    if (r - 1.0).abs() < CIRCLE_EXCLUSION {
        if !accept_near_circle {
            return Err(LemniError::Domain(format!(
                "|z| = {r} is within {CIRCLE_EXCLUSION:e} of the unit circle"
            )));
        }
        log::warn!("series potential evaluated on the unit circle at z = {z}");
    }
    let inside = r <= 1.0;
    let w = if inside { z } else { 1.0 / z };
    let mut pw = w;
    let mut s = 0.0;
    for (i, c) in measure.coeffs.iter().enumerate() {
        let c = if inside { *c } else { c.conj() };
        s += (c * pw).re / (i + 1) as f64;
        pw *= w;
    }
    Ok(if inside { -s } else { r.ln() - s })
}

/// Atoms splitting the circle into `m` arcs of mass `1/m` each, starting at
/// angle 0.
///
/// Each arc endpoint solves `F(θ) = j/m` to `1e-13` in mass, using the exact
/// term-by-term integral of the density.
pub fn equal_mass_partition(
    measure: &CircleMeasure,
    m: usize,
    placement: AtomPlacement,
) -> Result<DiscreteCircleMeasure> {
    if m == 0 {
        return Err(LemniError::InvalidArgument("M must be >= 1".into()));
    }
    let grid = (64 * measure.bandwidth()).max(1024);
    let vmin = measure.min_density(grid);
    if !(vmin > 0.0) {
        return Err(LemniError::Domain(format!(
            "density is not positive (min {vmin:.3e} on a {grid}-point grid)"
        )));
    }
    let offset = match placement {
        AtomPlacement::LeftEndpoint => 0.0,
        AtomPlacement::Midpoint => 0.5,
    };
    let mut angles = Vec::with_capacity(m);
    let mut guess = 0.0;
    for j in 0..m {
        let mass = (j as f64 + offset) / m as f64;
        let th = if mass == 0.0 { 0.0 } else { measure.inverse_cdf(mass, guess, 1e-13) };
        guess = th + TAU / (m as f64 * measure.density(th).max(vmin));
        angles.push(th);
    }
    DiscreteCircleMeasure::new(angles)
}
