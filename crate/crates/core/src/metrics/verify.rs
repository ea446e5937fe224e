//! Numerical checks of inequalities that every lemniscate must satisfy.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{default_window, inradius_estimate, perimeter_estimate, sign_changes};
use crate::area::{estimate_area, AreaEstimate, SamplerConfig};
use crate::error::Result;
use crate::poly::{LevelSetSpec, RootConfiguration};

/// Outcome of one check. `margin` is oriented so that `margin >= -tolerance`
/// means the inequality holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl VerifyReport {
    fn new(check: &str, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        Self {
            check: check.to_string(),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }
}

fn area(spec: &LevelSetSpec, sampler: &SamplerConfig) -> Result<AreaEstimate> {
    if spec.config.tag().is_disc_bounded() || sampler.bounding_radius_override.is_some() {
        estimate_area(spec, sampler)
    } else {
        estimate_area(spec, &sampler.clone().with_radius(default_window(spec))?)
    }
}

/// `ρ >= √A / (72π√π·n)`; tolerance is the inradius grid error.
pub fn verify_inradius_area(spec: &LevelSetSpec, resolution: usize, sampler: &SamplerConfig) -> Result<VerifyReport> {
    let rho = inradius_estimate(spec, resolution)?;
    let a = area(spec, sampler)?;
    let rhs = a.mean.sqrt() / (72.0 * PI * PI.sqrt() * spec.degree() as f64);
    Ok(VerifyReport::new("inradius_area", rho.value, rhs, rho.value - rhs, rho.error_bound))
}

/// `L <= 4n√π·√A`, with relative tolerance `rel_tol` on the right side.
pub fn verify_perimeter_area(
    spec: &LevelSetSpec,
    resolution: usize,
    sampler: &SamplerConfig,
    rel_tol: f64,
) -> Result<VerifyReport> {
    let l = perimeter_estimate(spec, resolution)?;
    let a = area(spec, sampler)?;
    let rhs = 4.0 * spec.degree() as f64 * PI.sqrt() * a.mean.sqrt();
    Ok(VerifyReport::new("perimeter_area", l, rhs, rhs - l, rel_tol * rhs))
}

/// `A <= 18π·ρ·L`, with relative tolerance `rel_tol` on the right side.
pub fn verify_area_inradius_perimeter(
    spec: &LevelSetSpec,
    resolution: usize,
    sampler: &SamplerConfig,
    rel_tol: f64,
) -> Result<VerifyReport> {
    let rho = inradius_estimate(spec, resolution)?;
    let l = perimeter_estimate(spec, resolution)?;
    let a = area(spec, sampler)?;
    let rhs = 18.0 * PI * rho.value * l;
    Ok(VerifyReport::new("area_inradius_perimeter", a.mean, rhs, rhs - a.mean, rel_tol * rhs))
}

/// `|p(r e^{iθ})| <= |p((2 - r) e^{iθ})|` at `samples` random `(r, θ)`,
/// `r ∈ (0, 1)`. `lhs` is the violation count (beyond `1e-12` in the log
/// domain); `margin` is the smallest log-gap seen.
pub fn verify_reflection(config: &RootConfiguration, samples: usize, seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for _ in 0..samples {
        let r: f64 = rng.random();
        let th: f64 = rng.random::<f64>() * std::f64::consts::TAU;
        let inner = config.log_abs_eval(Complex64::from_polar(r, th));
        let outer = config.log_abs_eval(Complex64::from_polar(2.0 - r, th));
        let gap = outer - inner;
        if gap.is_nan() {
            continue;
        }
        if gap < -1e-12 {
            violations += 1;
        }
        worst = worst.min(gap);
    }
    let mut rep = VerifyReport::new("reflection", violations as f64, 0.0, worst, 1e-12);
    rep.pass = violations == 0;
    rep
}

/// `m(Λ_{p∘q}(t)) <= π (m(Λ_p(t))/π)^{1/d}` with `d = deg q`; tolerance is four
/// standard deviations of the composite estimate.
pub fn verify_crane(
    outer: &RootConfiguration,
    inner: &RootConfiguration,
    t: f64,
    sampler: &SamplerConfig,
) -> Result<VerifyReport> {
    let composite = LevelSetSpec::new(outer.compose_with_generator(inner)?, t)?;
    let base = LevelSetSpec::new(outer.clone(), t)?;
    let a_comp = area(&composite, sampler)?;
    let a_base = area(&base, sampler)?;
    let d = inner.degree() as f64;
    let rhs = PI * (a_base.mean / PI).powf(1.0 / d);
    Ok(VerifyReport::new("crane", a_comp.mean, rhs, rhs - a_comp.mean, 4.0 * a_comp.stddev))
}

/// Sign changes of `log|p/t|` on a circle are at most `2n`.
pub fn verify_sign_change_bound(
    config: &RootConfiguration,
    t: f64,
    center: Complex64,
    radius: f64,
    angular_samples: usize,
) -> Result<VerifyReport> {
    let s = sign_changes(config, t, center, radius, angular_samples)? as f64;
    let bound = 2.0 * config.degree() as f64;
    Ok(VerifyReport::new("sign_changes", s, bound, bound - s, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::SamplerKind;

    fn sampler() -> SamplerConfig {
        SamplerConfig::new(SamplerKind::TriangularLattice, 20_000, 4, 1).unwrap()
    }

    fn erdos(n: u64, t: f64) -> LevelSetSpec {
        LevelSetSpec::new(RootConfiguration::roots_of_unity(n).unwrap(), t).unwrap()
    }

    #[test]
    fn inradius_bound_examples() {
        let rep = verify_inradius_area(&erdos(8, 1.0), 512, &sampler()).unwrap();
        assert!(rep.pass, "{rep:?}");
        let disc = LevelSetSpec::new(
            RootConfiguration::from_points(&[Complex64::new(0.0, 0.0)]).unwrap(),
            1.0,
        )
        .unwrap();
        let rep = verify_inradius_area(&disc, 512, &sampler()).unwrap();
        assert!((rep.rhs - 1.0 / (72.0 * PI)).abs() < 1e-4);
        assert!(rep.margin > 0.9);
    }

    #[test]
    fn perimeter_and_chain() {
        let spec = erdos(3, 1.0);
        assert!(verify_perimeter_area(&spec, 1024, &sampler(), 0.05).unwrap().pass);
        assert!(verify_area_inradius_perimeter(&spec, 1024, &sampler(), 0.1).unwrap().pass);
    }

    #[test]
    fn reflection_examples() {
        let e3 = RootConfiguration::roots_of_unity(3).unwrap();
        let rep = verify_reflection(&e3, 100_000, 3);
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.pass);
        let z = RootConfiguration::from_points(&[Complex64::new(0.0, 0.0)]).unwrap();
        assert!(verify_reflection(&z, 1000, 3).pass);
        let out = RootConfiguration::from_points(&[Complex64::new(1.5, 0.0)]).unwrap();
        let rep = verify_reflection(&out, 1000, 3);
        assert!(rep.lhs > 0.0 && !rep.pass);
    }

    #[test]
    fn crane_for_squares() {
        let inner = RootConfiguration::from_points(&[Complex64::new(0.0, 0.0); 2]).unwrap().merged();
        let rep = verify_crane(&RootConfiguration::roots_of_unity(4).unwrap(), &inner, 1.0, &sampler()).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
