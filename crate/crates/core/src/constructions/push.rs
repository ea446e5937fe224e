//! Moving the zeros of `p ∈ 𝒫_n(D̄)` onto the unit circle while keeping
//! `(1/L) log|q| >= log|p|` on the shrunken disc `(1-ε)D̄`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::poly::{blaschke_map, ConstraintTag, Root, RootConfiguration};

/// Polar test grid resolution (radii x angles) for the comparison margin.
pub const MARGIN_GRID: usize = 200;

/// How `6/ε²` is rounded to the integer `L`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rounding {
    #[default]
    Floor,
    Ceil,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PushResult {
    pub pushed: RootConfiguration,
    #[serde(rename = "L")]
    pub l: u64,
    pub epsilon: f64,
    /// `min (1/L) log|q(z)| - log|p(z)|` over the polar grid of `(1-ε)D̄`.
    pub comparison_margin: f64,
    /// Number of zeros with `|w| <= 1 - ε` (with multiplicity).
    pub inner_zeros: u64,
    /// Hoeffding bound on the per-point bad event; random pushes only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad_event_bound: Option<f64>,
}

/// `L = ⌊6/ε²⌋` (or the ceiling).
pub fn push_multiplier(epsilon: f64, rounding: Rounding) -> Result<u64> {
    check_epsilon(epsilon)?;
    let x = 6.0 / (epsilon * epsilon);
    let l = match rounding {
        Rounding::Floor => x.floor(),
        Rounding::Ceil => x.ceil(),
    };
    Ok((l as u64).max(1))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(LemniError::InvalidArgument(format!("ε must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

fn check_disc(config: &RootConfiguration) -> Result<()> {
    if !config.tag().is_disc_bounded() {
        return Err(LemniError::InvalidConfig(
            "zero pushing needs every root in the closed unit disc".into(),
        ));
    }
    Ok(())
}

fn on_circle(z: Complex64) -> Complex64 {
    z / z.norm()
}

/// Replacement roots for one zero `w` of multiplicity `m`.
fn push_one(
    w: Complex64,
    m: u64,
    epsilon: f64,
    l: u64,
    mut inner: impl FnMut(Complex64) -> Result<Vec<Complex64>>,
) -> Result<Vec<Root>> {
    if w.norm() > 1.0 - epsilon {
        Ok(vec![Root {
            location: on_circle(w),
            mult: m * l,
        }])
    } else {
        Ok(inner(w)?
            .into_iter()
            .map(|location| Root { location, mult: m })
            .collect())
    }
}

/// Deterministic pushing: a zero `w` with `|w| <= 1 - ε` becomes the `L`
/// points `B_{-w}(ζ_k)`, `ζ_k^L = 1`; a zero with `|w| > 1 - ε` moves radially
/// to `w/|w|` with multiplicity scaled by `L`.
pub fn push_zeros_deterministic(config: &RootConfiguration, epsilon: f64, rounding: Rounding) -> Result<PushResult> {
    check_disc(config)?;
    let l = push_multiplier(epsilon, rounding)?;
    let mut roots = Vec::new();
    let mut inner_zeros = 0;
    for r in config.roots() {
        roots.extend(push_one(r.location, r.mult, epsilon, l, |w| {
            inner_zeros += r.mult;
            (0..l)
                .map(|k| {
                    let zeta = Complex64::from_polar(1.0, TAU * k as f64 / l as f64);
                    blaschke_map(-w, zeta).map(on_circle)
                })
                .collect()
        })?);
    }
    finish(config, roots, l, epsilon, inner_zeros, None)
}

/// Random pushing: each inner zero `w` becomes `L` independent samples of the
/// harmonic measure at `w`, drawn as `B_{-w}(e^{2πiU})`. Failure (a negative
/// margin) is possible and is reported, not raised.
pub fn push_zeros_probabilistic(config: &RootConfiguration, epsilon: f64, l: u64, seed: u64) -> Result<PushResult> {
    check_disc(config)?;
    check_epsilon(epsilon)?;
    if l == 0 {
        return Err(LemniError::InvalidArgument("L must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Vec::new();
    let mut inner_zeros = 0;
    for r in config.roots() {
        roots.extend(push_one(r.location, r.mult, epsilon, l, |w| {
            inner_zeros += r.mult;
            (0..l)
                .map(|_| harmonic_sample(w, &mut rng))
                .collect()
        })?);
    }
    let bad = hoeffding_bad_event_bound(l, inner_zeros, epsilon);
    finish(config, roots, l, epsilon, inner_zeros, Some(bad))
}

/// One draw from the harmonic measure of the disc seen from `w`.
pub fn harmonic_sample(w: Complex64, rng: &mut impl Rng) -> Result<Complex64> {
    let zeta = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
    blaschke_map(-w, zeta).map(on_circle)
}

/// `exp(-L a_n ε⁴ / (128 (log ε)²))` with `a_n` the number of inner zeros.
pub fn hoeffding_bad_event_bound(l: u64, inner_zeros: u64, epsilon: f64) -> f64 {
    let le = epsilon.ln();
    (-(l as f64) * inner_zeros as f64 * epsilon.powi(4) / (128.0 * le * le)).exp()
}

fn finish(
    original: &RootConfiguration,
    roots: Vec<Root>,
    l: u64,
    epsilon: f64,
    inner_zeros: u64,
    bad_event_bound: Option<f64>,
) -> Result<PushResult> {
    let pushed = RootConfiguration::new(roots, ConstraintTag::UnitCircle)?;
    debug_assert_eq!(pushed.degree(), original.degree() * l);
    let comparison_margin = comparison_margin(original, &pushed, l, 1.0 - epsilon);
    Ok(PushResult {
        pushed,
        l,
        epsilon,
        comparison_margin,
        inner_zeros,
        bad_event_bound,
    })
}

/// Points of the polar test grid: `MARGIN_GRID` radii from 0 to `radius`
/// inclusive times `MARGIN_GRID` equispaced angles.
pub fn margin_grid(radius: f64) -> Vec<Complex64> {
    let g = MARGIN_GRID;
    (0..g)
        .flat_map(|i| {
            let r = radius * i as f64 / (g - 1) as f64;
            (0..g).map(move |j| Complex64::from_polar(r, TAU * j as f64 / g as f64))
        })
        .collect()
}

/// `min_z (1/L) log|q(z)| - log|p(z)|` over [`margin_grid`].
pub fn comparison_margin(p: &RootConfiguration, q: &RootConfiguration, l: u64, radius: f64) -> f64 {
    margin_grid(radius)
        .into_par_iter()
        .map(|z| q.log_abs_eval(z) / l as f64 - p.log_abs_eval(z))
        .filter(|m| !m.is_nan())
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_disc_config(n: usize, seed: u64) -> RootConfiguration {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<_> = (0..n)
            .map(|_| Complex64::from_polar(rng.random::<f64>().sqrt(), TAU * rng.random::<f64>()))
            .collect();
        RootConfiguration::from_points(&pts).unwrap()
    }

    #[test]
    fn multiplier() {
        assert_eq!(push_multiplier(0.3, Rounding::Floor).unwrap(), 66);
        assert_eq!(push_multiplier(0.3, Rounding::Ceil).unwrap(), 67);
        assert_eq!(push_multiplier(0.5, Rounding::Floor).unwrap(), 24);
        assert!(push_multiplier(1.0, Rounding::Floor).is_err());
    }

    #[test]
    fn origin_becomes_roots_of_unity() {
        let p = RootConfiguration::from_points(&[Complex64::new(0.0, 0.0)]).unwrap();
        let res = push_zeros_deterministic(&p, 0.5, Rounding::Floor).unwrap();
        assert_eq!(res.l, 24);
        let mut got = res.pushed.sorted_angles();
        got.dedup();
        for (k, a) in got.iter().enumerate() {
            assert_abs_diff_eq!(*a, TAU * k as f64 / 24.0, epsilon = 1e-12);
        }
        let z = Complex64::new(0.5, 0.0);
        let m = res.pushed.log_abs_eval(z) / 24.0 - p.log_abs_eval(z);
        assert_abs_diff_eq!(m, (1.0 - 0.5f64.powi(24)).ln() / 24.0 - 0.5f64.ln(), epsilon = 1e-12);
        assert!(m > 0.693);
        assert!(res.comparison_margin >= 0.0);
    }

    #[test]
    fn circle_root_stays_put() {
        let a = Complex64::from_polar(1.0, 0.7);
        let p = RootConfiguration::from_points(&[a]).unwrap();
        let res = push_zeros_deterministic(&p, 0.3, Rounding::Floor).unwrap();
        assert_eq!(res.pushed.roots().len(), 1);
        assert_eq!(res.pushed.roots()[0].mult, 66);
        assert!((res.pushed.roots()[0].location - a).norm() < 1e-15);
    }

    #[test]
    fn degree_scales_by_l() {
        let p = random_disc_config(7, 1);
        let res = push_zeros_deterministic(&p, 0.3, Rounding::Floor).unwrap();
        assert_eq!(res.pushed.degree(), 462);
        assert!(res.comparison_margin >= 0.0);
    }

    #[test]
    fn rejects_roots_outside_disc() {
        let p = RootConfiguration::from_points(&[Complex64::new(1.5, 0.0)]).unwrap();
        assert!(push_zeros_deterministic(&p, 0.3, Rounding::Floor).is_err());
        assert!(push_zeros_probabilistic(&p, 0.3, 10, 0).is_err());
    }

    #[test]
    fn harmonic_samples_from_origin_are_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 20_000;
        let mut bins = [0usize; 8];
        for _ in 0..n {
            let z = harmonic_sample(Complex64::new(0.0, 0.0), &mut rng).unwrap();
            bins[(crate::poly::normalize_angle(z.arg()) / TAU * 8.0) as usize % 8] += 1;
        }
        for b in bins {
            assert!((b as f64 - n as f64 / 8.0).abs() < 5.0 * (n as f64 / 8.0).sqrt());
        }
    }

    #[test]
    fn expectation_identity() {
        let w = Complex64::new(0.3, -0.5);
        let z = Complex64::new(-0.2, 0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| (z - harmonic_sample(w, &mut rng).unwrap()).norm().ln())
            .collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        let stderr = (var / xs.len() as f64).sqrt();
        let exact = (Complex64::new(1.0, 0.0) - w.conj() * z).norm().ln();
        assert!((mean - exact).abs() <= 3.0 * stderr, "{mean} vs {exact} ± {stderr}");
    }

    #[test]
    fn hoeffding_bound_value() {
        let b = hoeffding_bad_event_bound(264, 20, 0.3);
        let expect = (-264.0 * 20.0 * 0.3f64.powi(4) / (128.0 * 0.3f64.ln().powi(2))).exp();
        assert_abs_diff_eq!(b, expect, epsilon = 1e-15);
        assert!(b > 0.0 && b < 1.0);
    }

    #[test]
    fn probabilistic_push_shapes() {
        let p = random_disc_config(10, 2);
        let a = push_zeros_probabilistic(&p, 0.3, 50, 9).unwrap();
        let b = push_zeros_probabilistic(&p, 0.3, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.pushed.degree(), 500);
        assert!(a.bad_event_bound.is_some());
        assert_eq!(a.pushed.tag(), ConstraintTag::UnitCircle);
    }

    #[test]
    fn grouped_margin_equals_direct_product() {
        // The margin is a sum over the original zeros of per-zero gaps.
        let p = random_disc_config(5, 3);
        let res = push_zeros_deterministic(&p, 0.3, Rounding::Floor).unwrap();
        let l = res.l as f64;
        for z in margin_grid(0.7).into_iter().step_by(997) {
            let mut grouped = 0.0;
            for r in p.roots() {
                let w = r.location;
                let part = if w.norm() > 0.7 {
                    (z - w / w.norm()).norm().ln() * l
                } else {
                    (0..res.l)
                        .map(|k| {
                            let zeta = Complex64::from_polar(1.0, TAU * k as f64 / l);
                            (z - (zeta + w) / (1.0 + w.conj() * zeta)).norm().ln()
                        })
                        .sum()
                };
                grouped += r.mult as f64 * (part / l - (z - w).norm().ln());
            }
            let direct = res.pushed.log_abs_eval(z) / l - p.log_abs_eval(z);
            assert_abs_diff_eq!(grouped, direct, epsilon = 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn deterministic_margin_nonnegative(seed in 0u64..1000, n in 1usize..12) {
            let p = random_disc_config(n, seed);
            let res = push_zeros_deterministic(&p, 0.3, Rounding::Floor).unwrap();
            prop_assert!(res.comparison_margin >= 0.0);
            prop_assert_eq!(res.pushed.degree(), 66 * n as u64);
        }
    }
}
