//! Monte Carlo area of lemniscates on randomly shifted and rotated lattices.
//!
//! Each trial draws one lattice placement (or one batch of uniform points)
//! inside the disc of radius `r`, counts the points that fall in `Λ_p(t)`, and
//! reports `π r² · hits / points`. Trials use independent ChaCha streams of
//! the master seed, so an estimate is a pure function of `(spec, config)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::poly::LevelSetSpec;

const PAR_MIN_LEN: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SamplerKind {
    SquareLattice,
    TriangularLattice,
    UniformRandom,
}

impl SamplerKind {
    pub fn label(self) -> &'static str {
        match self {
            SamplerKind::SquareLattice => "square",
            SamplerKind::TriangularLattice => "triangular",
            SamplerKind::UniformRandom => "uniform",
        }
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = LemniError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "square" | "square_lattice" => Ok(SamplerKind::SquareLattice),
            "triangular" | "triangular_lattice" | "hex" => Ok(SamplerKind::TriangularLattice),
            "uniform" | "uniform_random" => Ok(SamplerKind::UniformRandom),
            other => Err(LemniError::InvalidArgument(format!(
                "unknown sampler kind {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub target_points: u64,
    pub trials: u32,
    pub seed: u64,
    #[serde(default)]
    pub bounding_radius_override: Option<f64>,
}

impl SamplerConfig {
    pub fn new(kind: SamplerKind, target_points: u64, trials: u32, seed: u64) -> Result<Self> {
        let cfg = Self {
            kind,
            target_points,
            trials,
            seed,
            bounding_radius_override: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn triangular(target_points: u64, trials: u32, seed: u64) -> Result<Self> {
        Self::new(SamplerKind::TriangularLattice, target_points, trials, seed)
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(LemniError::InvalidArgument(format!(
                "bounding radius must be positive, got {radius}"
            )));
        }
        self.bounding_radius_override = Some(radius);
        Ok(self)
    }

    /// Same sampler with `factor` times as many points per trial.
    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            target_points: self.target_points * factor,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_points < 100 {
            return Err(LemniError::InvalidArgument(format!(
                "target_points must be >= 100, got {}",
                self.target_points
            )));
        }
        if self.trials < 1 {
            return Err(LemniError::InvalidArgument("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Mean and spread of the per-trial area estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub mean: f64,
    pub stddev: f64,
    pub trials: u32,
    /// Average number of sample points per trial (lattice counts fluctuate
    /// around the target by `O(√p)`).
    pub points_per_trial: u64,
    pub bounding_radius: f64,
    pub seed: u64,
}

impl AreaEstimate {
    fn from_trials(areas: &[f64], points: &[usize], radius: f64, seed: u64) -> Self {
        let t = areas.len() as f64;
        let mean = areas.iter().sum::<f64>() / t;
        let stddev = if areas.len() > 1 {
            (areas.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (t - 1.0)).sqrt()
        } else {
            0.0
        };
        let total: usize = points.iter().sum();
        AreaEstimate {
            mean,
            stddev,
            trials: areas.len() as u32,
            points_per_trial: (total as f64 / t).round() as u64,
            bounding_radius: radius,
            seed,
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        self.stddev / (self.trials as f64).sqrt()
    }
}

/// Radius `r` with `Λ_p(t) ⊂ r·D`.
///
/// For roots in the closed unit disc `|p(z)| >= (|z| - 1)^n`, so
/// `r = 1 + t^{1/n}` works; it is floored at 1.05.
pub fn bounding_radius(spec: &LevelSetSpec, radius_override: Option<f64>) -> Result<f64> {
    if let Some(r) = radius_override {
        if !(r > 0.0 && r.is_finite()) {
            return Err(LemniError::InvalidArgument(format!(
                "bounding radius must be positive, got {r}"
            )));
        }
        return Ok(r);
    }
    if !spec.config.tag().is_disc_bounded() {
        return Err(LemniError::MissingBoundingRadius);
    }
    let n = spec.degree() as f64;
    Ok((1.0 + (spec.log_level() / n).exp()).max(1.05))
}

fn trial_rng(seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng
}

/// Sample points of one trial, all strictly inside the disc of `radius`.
///
/// Lattice kinds are scaled analytically so the expected in-disc count is
/// `target_points`; shift (uniform in the fundamental cell) and rotation
/// (uniform in `[0, 2π)`) come from the trial's stream.
pub fn lattice_points(cfg: &SamplerConfig, radius: f64, trial_index: u64) -> Vec<Complex64> {
    let mut rng = trial_rng(cfg.seed, trial_index);
    let p = cfg.target_points as f64;
    let r2 = radius * radius;
    match cfg.kind {
        SamplerKind::UniformRandom => (0..cfg.target_points)
            .map(|_| {
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                Complex64::from_polar(radius * u.sqrt(), TAU * v)
            })
            .collect(),
        SamplerKind::SquareLattice => {
            let s = (PI * r2 / p).sqrt();
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            let rot = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
            let jmax = (radius / s).ceil() as i64 + 1;
            let mut out = Vec::with_capacity(cfg.target_points as usize + 64);
            for j in -jmax..=jmax {
                let y = s * (j as f64 + v);
                if y * y >= r2 {
                    continue;
                }
                let half = (r2 - y * y).sqrt();
                let ilo = (-half / s - u).floor() as i64;
                let ihi = (half / s - u).ceil() as i64;
                for i in ilo..=ihi {
                    let x = s * (i as f64 + u);
                    if x * x + y * y < r2 {
                        out.push(Complex64::new(x, y) * rot);
                    }
                }
            }
            out
        }
        SamplerKind::TriangularLattice => {
            let h = 3f64.sqrt() / 2.0;
            let s = (PI * r2 / (p * h)).sqrt();
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            let rot = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
            let jmax = (radius / (s * h)).ceil() as i64 + 1;
            let mut out = Vec::with_capacity(cfg.target_points as usize + 64);
            for j in -jmax..=jmax {
                let jv = j as f64 + v;
                let y = s * h * jv;
                if y * y >= r2 {
                    continue;
                }
                let half = (r2 - y * y).sqrt();
                let ilo = (-half / s - u - jv / 2.0).floor() as i64;
                let ihi = (half / s - u - jv / 2.0).ceil() as i64;
                for i in ilo..=ihi {
                    let x = s * (i as f64 + u + jv / 2.0);
                    if x * x + y * y < r2 {
                        out.push(Complex64::new(x, y) * rot);
                    }
                }
            }
            out
        }
    }
}

/// Pre-drawn sample points for every trial of a sampler.
///
/// Reusing one plan across many configurations gives common random numbers:
/// every candidate is measured on the same point sets.
#[derive(Clone, Debug)]
pub struct SamplePlan {
    cfg: SamplerConfig,
    radius: f64,
    trials: Vec<Vec<Complex64>>,
}

impl SamplePlan {
    pub fn new(cfg: &SamplerConfig, radius: f64) -> Result<Self> {
        cfg.validate()?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(LemniError::InvalidArgument(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let trials = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|k| lattice_points(cfg, radius, k))
            .collect();
        Ok(Self {
            cfg: cfg.clone(),
            radius,
            trials,
        })
    }

    /// Plan sized for `spec` (radius from [`bounding_radius`]).
    pub fn for_spec(spec: &LevelSetSpec, cfg: &SamplerConfig) -> Result<Self> {
        let r = bounding_radius(spec, cfg.bounding_radius_override)?;
        Self::new(cfg, r)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    pub fn trial_points(&self) -> &[Vec<Complex64>] {
        &self.trials
    }

    /// Area of `Λ_p(t)`; the caller must ensure the plan's disc contains it.
    pub fn estimate(&self, spec: &LevelSetSpec) -> AreaEstimate {
        self.estimate_where(spec, |_| true)
    }

    /// Area of `Λ_p(t) ∩ D̄`.
    pub fn estimate_inside_disc(&self, spec: &LevelSetSpec) -> AreaEstimate {
        self.estimate_where(spec, |z| z.norm_sqr() <= 1.0)
    }

    fn estimate_where(&self, spec: &LevelSetSpec, keep: impl Fn(Complex64) -> bool + Sync) -> AreaEstimate {
        let disc = PI * self.radius * self.radius;
        let log_t = spec.log_level();
        let mut areas = Vec::with_capacity(self.trials.len());
        let mut counts = Vec::with_capacity(self.trials.len());
        for pts in &self.trials {
            let hits = pts
                .par_iter()
                .with_min_len(PAR_MIN_LEN)
                .filter(|&&z| keep(z) && spec.config.log_abs_eval(z) < log_t)
                .count();
            areas.push(disc * hits as f64 / pts.len().max(1) as f64);
            counts.push(pts.len());
        }
        AreaEstimate::from_trials(&areas, &counts, self.radius, self.cfg.seed)
    }
}

/// Monte Carlo estimate of `m(Λ_p(t))`.
pub fn estimate_area(spec: &LevelSetSpec, cfg: &SamplerConfig) -> Result<AreaEstimate> {
    Ok(SamplePlan::for_spec(spec, cfg)?.estimate(spec))
}

/// Monte Carlo estimate of `m(Λ_p(t) ∩ D̄)`.
pub fn estimate_area_inside_disc(spec: &LevelSetSpec, cfg: &SamplerConfig) -> Result<AreaEstimate> {
    Ok(SamplePlan::for_spec(spec, cfg)?.estimate_inside_disc(spec))
}

/// Area of the Erdős lemniscate `{|z^n - 1| < 1}`:
/// `R(n) = 2^{2/n} √π Γ(1/2 + 1/n) / (2 Γ(1 + 1/n))`.
pub fn erdos_area_closed_form(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(LemniError::InvalidArgument("n must be >= 1".into()));
    }
    use statrs::function::gamma::ln_gamma;
    let x = 1.0 / n as f64;
    let log_r = 2.0 * x * std::f64::consts::LN_2 + 0.5 * PI.ln() + ln_gamma(0.5 + x)
        - std::f64::consts::LN_2
        - ln_gamma(1.0 + x);
    Ok(log_r.exp())
}
