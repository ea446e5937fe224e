//! The level function restricted to circles.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::poly::{normalize_angle, ConstraintTag, LevelSetSpec, RootConfiguration};

/// An arc `{e^{iθ} : θ ∈ (start, end)}`, read counter-clockwise; `end < start`
/// when the arc passes through angle 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
    pub length: f64,
}

impl Arc {
    pub fn midpoint(&self) -> f64 {
        normalize_angle(self.start + 0.5 * self.length)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ArcList {
    pub arcs: Vec<Arc>,
}

impl ArcList {
    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length).sum()
    }

    pub fn sum_of_squares(&self) -> f64 {
        self.arcs.iter().map(|a| a.length * a.length).sum()
    }
}

/// Maximal arcs of the unit circle on which `|p| < t`.
///
/// The level function is sampled at `angular_samples` equispaced angles and
/// every sign change is refined by bisection to `bisection_tol`.
pub fn circle_arc_intersections(
    spec: &LevelSetSpec,
    angular_samples: usize,
    bisection_tol: f64,
) -> Result<ArcList> {
    let need = 8 * spec.degree().max(1) as usize;
    if angular_samples < need {
        return Err(LemniError::InvalidArgument(format!(
            "angular_samples must be >= 8·degree = {need}, got {angular_samples}"
        )));
    }
    if !(bisection_tol > 0.0) {
        return Err(LemniError::InvalidArgument("bisection_tol must be positive".into()));
    }
    let k = angular_samples;
    let theta = |j: usize| TAU * j as f64 / k as f64;
    let g = |th: f64| spec.level_function(Complex64::from_polar(1.0, th));
    let neg: Vec<bool> = (0..k).map(|j| g(theta(j)) < 0.0).collect();
    if neg.iter().all(|&b| b) {
        return Ok(ArcList {
            arcs: vec![Arc {
                start: 0.0,
                end: 0.0,
                length: TAU,
            }],
        });
    }

    // (angle, entering) for each transition between consecutive samples.
    let mut cuts: Vec<(f64, bool)> = Vec::new();
    for j in 0..k {
        let next = (j + 1) % k;
        if neg[j] == neg[next] {
            continue;
        }
        let (mut lo, mut hi) = (theta(j), theta(j) + TAU / k as f64);
        while hi - lo > bisection_tol {
            let mid = 0.5 * (lo + hi);
            if (g(mid) < 0.0) == neg[j] {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cuts.push((0.5 * (lo + hi), !neg[j]));
    }
    let Some(first_enter) = cuts.iter().position(|c| c.1) else {
        return Ok(ArcList::default());
    };
    let mut arcs = Vec::with_capacity(cuts.len() / 2);
    let c = cuts.len();
    for s in (0..c).map(|o| (first_enter + o) % c).step_by(2) {
        let (a, _) = cuts[s];
        let (b, _) = cuts[(s + 1) % c];
        let length = (b - a).rem_euclid(TAU);
        arcs.push(Arc {
            start: normalize_angle(a),
            end: normalize_angle(b),
            length,
        });
    }
    arcs.sort_by(|x, y| x.start.total_cmp(&y.start));
    Ok(ArcList { arcs })
}

/// Cyclic sign alternations of `log|p(c + r e^{iθ})| - log t` over
/// `angular_samples` equispaced angles.
///
/// Samples with `|h| <= 1e-12·(1 + deg)` are treated as zero and skipped; a
/// circle on which `h` vanishes identically has no sign changes. A root on the
/// circle makes `h = -∞` there, which is simply negative.
pub fn sign_changes(
    config: &RootConfiguration,
    t: f64,
    center: Complex64,
    radius: f64,
    angular_samples: usize,
) -> Result<usize> {
    if !(t > 0.0 && t.is_finite()) || !(radius > 0.0 && radius.is_finite()) {
        return Err(LemniError::InvalidArgument(format!(
            "need t > 0 and radius > 0, got t={t}, radius={radius}"
        )));
    }
    if angular_samples < 3 {
        return Err(LemniError::InvalidArgument("need at least 3 angular samples".into()));
    }
    let log_t = t.ln();
    let zero = 1e-12 * (1.0 + config.degree() as f64);
    let signs: Vec<bool> = (0..angular_samples)
        .filter_map(|j| {
            let z = center + Complex64::from_polar(radius, TAU * j as f64 / angular_samples as f64);
            let h = config.log_abs_eval(z) - log_t;
            (h.abs() > zero).then_some(h > 0.0)
        })
        .collect();
    if signs.is_empty() {
        return Ok(0);
    }
    Ok((0..signs.len())
        .filter(|&j| signs[j] != signs[(j + 1) % signs.len()])
        .count())
}

/// `β = log(sup_D |v| / sup_{D/2} |v|)` for `v(z) = log|p(shrink·z)|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublingExponent {
    pub beta: f64,
    /// `sup_D v` (no absolute value).
    pub max_disc: f64,
    pub sup_disc: f64,
    pub sup_half_disc: f64,
    /// Largest gain of the local refinement over the raw grid maximum; a
    /// proxy for the grid error.
    pub refinement_gain: f64,
}

/// Doubling exponent of `log|p(shrink·z)|` on the unit disc.
///
/// With every root on the unit circle, `v` is harmonic on a neighbourhood of
/// the closed disc, so both suprema of `|v|` are attained on the boundary
/// circles `|z| = 1` and `|z| = 1/2`. Each circle is sampled at `grid` angles
/// and the best sample is refined by golden-section search.
pub fn doubling_exponent(config: &RootConfiguration, shrink: f64, grid: usize) -> Result<DoublingExponent> {
    if config.tag() != ConstraintTag::UnitCircle {
        return Err(LemniError::Domain(
            "doubling exponent needs every root on the unit circle".into(),
        ));
    }
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(LemniError::InvalidArgument(format!("shrink must lie in (0, 1), got {shrink}")));
    }
    if grid < 8 {
        return Err(LemniError::InvalidArgument("grid must be >= 8".into()));
    }
    let (sup_disc, gain_outer) = circle_sup(config, shrink, grid);
    let (sup_half_disc, gain_inner) = circle_sup(config, 0.5 * shrink, grid);
    let max_disc = (0..grid)
        .map(|j| config.log_abs_eval(Complex64::from_polar(shrink, TAU * j as f64 / grid as f64)))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(DoublingExponent {
        beta: (sup_disc / sup_half_disc).ln(),
        max_disc,
        sup_disc,
        sup_half_disc,
        refinement_gain: gain_outer.max(gain_inner),
    })
}

fn circle_sup(config: &RootConfiguration, r: f64, grid: usize) -> (f64, f64) {
    let f = |th: f64| config.log_abs_eval(Complex64::from_polar(r, th)).abs();
    let step = TAU / grid as f64;
    let (best_j, best) = (0..grid)
        .map(|j| (j, f(step * j as f64)))
        .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let refined = golden_max(&f, step * (best_j as f64 - 1.0), step * (best_j as f64 + 1.0), 1e-13);
    let sup = best.max(refined);
    (sup, sup - best)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}
