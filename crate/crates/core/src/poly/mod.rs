//! Monic polynomials stored as root multisets, and log-domain evaluation.
//!
//! A polynomial is never expanded into coefficients: `log|p(z)|` is always
//! accumulated as `Σ m_k log|z - w_k|`, which keeps degree-10⁶ products in
//! floating range.
//!
//! Lemniscates are taken open throughout: `Λ_p(t) = {z : |p(z)| < t}`. The
//! boundary `|p| = t` has zero area, so every area statement is unaffected by
//! the choice; points exactly on the boundary count as outside.

mod json;
mod preimage;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};

pub use json::{AnglesShorthand, ConfigRepr, RootRepr};

/// Slack used when checking `|w| <= 1` for disc-constrained roots.
pub const DISC_TOL: f64 = 1e-12;
/// Slack used when checking `|w| == 1` for circle-constrained roots.
pub const CIRCLE_TOL: f64 = 1e-12;

/// A finite point of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(LemniError::InvalidArgument(format!(
                "non-finite point ({re}, {im})"
            )));
        }
        Ok(Self { re, im })
    }

    pub fn from_c64(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_c64()
    }
}

/// Where the roots of a configuration are promised to lie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstraintTag {
    UnitDisc,
    UnitCircle,
    #[default]
    None,
}

impl ConstraintTag {
    /// The tightest tag that holds for every point in `points`.
    pub fn infer<'a>(points: impl IntoIterator<Item = &'a Complex64>) -> Self {
        let mut on_circle = true;
        let mut in_disc = true;
        for z in points {
            let r = z.norm();
            on_circle &= (r - 1.0).abs() <= CIRCLE_TOL;
            in_disc &= r <= 1.0 + DISC_TOL;
        }
        if on_circle {
            ConstraintTag::UnitCircle
        } else if in_disc {
            ConstraintTag::UnitDisc
        } else {
            ConstraintTag::None
        }
    }

    fn admits(self, z: Complex64) -> bool {
        match self {
            ConstraintTag::UnitDisc => z.norm() <= 1.0 + DISC_TOL,
            ConstraintTag::UnitCircle => (z.norm() - 1.0).abs() <= CIRCLE_TOL,
            ConstraintTag::None => true,
        }
    }

    /// True when every root is known to lie in the closed unit disc.
    pub fn is_disc_bounded(self) -> bool {
        matches!(self, ConstraintTag::UnitDisc | ConstraintTag::UnitCircle)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub mult: u64,
}

/// Root multiset of a monic polynomial, with multiplicities kept explicit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRepr", into = "ConfigRepr")]
pub struct RootConfiguration {
    roots: Vec<Root>,
    tag: ConstraintTag,
    degree: u64,
}

impl RootConfiguration {
    pub fn new(roots: Vec<Root>, tag: ConstraintTag) -> Result<Self> {
        if roots.is_empty() {
            return Err(LemniError::InvalidConfig("no roots (degree 0)".into()));
        }
        let mut degree = 0u64;
        for r in &roots {
            if r.mult == 0 {
                return Err(LemniError::InvalidConfig(format!(
                    "root {} has multiplicity 0",
                    r.location
                )));
            }
            if !r.location.re.is_finite() || !r.location.im.is_finite() {
                return Err(LemniError::InvalidConfig(format!(
                    "non-finite root {}",
                    r.location
                )));
            }
            if !tag.admits(r.location) {
                return Err(LemniError::InvalidConfig(format!(
                    "root {} (modulus {}) violates tag {:?}",
                    r.location,
                    r.location.norm(),
                    tag
                )));
            }
            degree = degree
                .checked_add(r.mult)
                .ok_or_else(|| LemniError::InvalidConfig("degree overflow".into()))?;
        }
        Ok(Self { roots, tag, degree })
    }

    /// Simple roots at the given points, tagged with the tightest tag that holds.
    pub fn from_points(points: &[Complex64]) -> Result<Self> {
        let tag = ConstraintTag::infer(points);
        Self::new(
            points
                .iter()
                .map(|&location| Root { location, mult: 1 })
                .collect(),
            tag,
        )
    }

    /// Like [`RootConfiguration::new`] but with the tag inferred from the roots.
    pub fn with_inferred_tag(roots: Vec<Root>) -> Result<Self> {
        let tag = ConstraintTag::infer(roots.iter().map(|r| &r.location));
        Self::new(roots, tag)
    }

    /// Roots `e^{2πi a_k}` with multiplicities `mults[k]` (all 1 if `None`).
    pub fn from_angles_over_2pi(angles: &[f64], mults: Option<&[u64]>) -> Result<Self> {
        if let Some(m) = mults {
            if m.len() != angles.len() {
                return Err(LemniError::InvalidConfig(format!(
                    "{} angles but {} multiplicities",
                    angles.len(),
                    m.len()
                )));
            }
        }
        let roots = angles
            .iter()
            .enumerate()
            .map(|(k, &a)| {
                if !a.is_finite() {
                    return Err(LemniError::InvalidConfig(format!("non-finite angle {a}")));
                }
                Ok(Root {
                    location: Complex64::from_polar(1.0, TAU * a),
                    mult: mults.map_or(1, |m| m[k]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(roots, ConstraintTag::UnitCircle)
    }

    /// The `n`-th roots of unity, i.e. the roots of `z^n - 1`.
    pub fn roots_of_unity(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(LemniError::InvalidArgument("n must be positive".into()));
        }
        let angles: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        Self::from_angles_over_2pi(&angles, None)
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn tag(&self) -> ConstraintTag {
        self.tag
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Re-tag, validating the new constraint.
    pub fn retagged(&self, tag: ConstraintTag) -> Result<Self> {
        Self::new(self.roots.clone(), tag)
    }

    /// `log|p(z)| = Σ m_k log|z - w_k|`; `-∞` exactly at a root.
    ///
    /// Squared distances of simple roots are multiplied in batches and the
    /// logarithm is taken only when the running product leaves
    /// `[1e-200, 1e200]`, so the result cannot overflow.
    pub fn log_abs_eval(&self, z: impl Into<Complex64>) -> f64 {
        let z = z.into();
        let mut acc = 0.0f64;
        let mut prod = 1.0f64;
        for r in &self.roots {
            let d2 = (z - r.location).norm_sqr();
            if d2 == 0.0 {
                return f64::NEG_INFINITY;
            }
            if r.mult == 1 && d2 > 1e-100 && d2 < 1e100 {
                prod *= d2;
                if !(1e-200..=1e200).contains(&prod) {
                    acc += prod.ln();
                    prod = 1.0;
                }
            } else {
                acc += r.mult as f64 * d2.ln();
            }
        }
        0.5 * (acc + prod.ln())
    }

    /// `(1/n) log|p(z)|`, the logarithmic potential of the root-counting measure.
    pub fn normalized_log_abs(&self, z: impl Into<Complex64>) -> f64 {
        self.log_abs_eval(z) / self.degree as f64
    }

    /// Roots of `p^k`: same locations, multiplicities scaled by `k`.
    pub fn power(&self, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(LemniError::InvalidArgument("power must be >= 1".into()));
        }
        let roots = self
            .roots
            .iter()
            .map(|r| {
                r.mult
                    .checked_mul(k)
                    .map(|mult| Root {
                        location: r.location,
                        mult,
                    })
                    .ok_or_else(|| LemniError::InvalidConfig("multiplicity overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(roots, self.tag)
    }

    /// Roots of `p(z)·r(z)`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut roots = self.roots.clone();
        roots.extend_from_slice(&other.roots);
        let tag = match (self.tag, other.tag) {
            (ConstraintTag::UnitCircle, ConstraintTag::UnitCircle) => ConstraintTag::UnitCircle,
            (a, b) if a.is_disc_bounded() && b.is_disc_bounded() => ConstraintTag::UnitDisc,
            _ => ConstraintTag::None,
        };
        Self::new(roots, tag)
    }

    /// Every root multiplied by `e^{iθ}`.
    pub fn rotated(&self, theta: f64) -> Self {
        let w = Complex64::from_polar(1.0, theta);
        let roots = self
            .roots
            .iter()
            .map(|r| Root {
                location: r.location * w,
                mult: r.mult,
            })
            .collect();
        Self {
            roots,
            tag: self.tag,
            degree: self.degree,
        }
    }

    /// Every root replaced by its complex conjugate.
    pub fn conjugated(&self) -> Self {
        let roots = self
            .roots
            .iter()
            .map(|r| Root {
                location: r.location.conj(),
                mult: r.mult,
            })
            .collect();
        Self {
            roots,
            tag: self.tag,
            degree: self.degree,
        }
    }

    /// Exact duplicate locations merged into one root.
    pub fn merged(&self) -> Self {
        let mut roots: Vec<Root> = Vec::with_capacity(self.roots.len());
        for r in &self.roots {
            match roots.iter_mut().find(|q| q.location == r.location) {
                Some(q) => q.mult += r.mult,
                None => roots.push(*r),
            }
        }
        Self {
            roots,
            tag: self.tag,
            degree: self.degree,
        }
    }

    /// Root arguments in `[0, 2π)` repeated by multiplicity, sorted ascending.
    pub fn sorted_angles(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.degree.min(1 << 24) as usize);
        for r in &self.roots {
            let a = normalize_angle(r.location.arg());
            for _ in 0..r.mult {
                out.push(a);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Location of every root repeated by multiplicity.
    pub fn expanded_points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.degree.min(1 << 24) as usize);
        for r in &self.roots {
            for _ in 0..r.mult {
                out.push(r.location);
            }
        }
        out
    }

    /// Roots of `p(q(z))` where `self = p` and `inner = q`: for each root `w`
    /// of `p` with multiplicity `m`, every solution of `q(z) = w` with
    /// multiplicity `m`.
    pub fn compose_with_generator(&self, inner: &RootConfiguration) -> Result<Self> {
        let mut roots: Vec<Root> = Vec::new();
        for r in &self.roots {
            for z in preimage::solve_preimages(inner, r.location)? {
                match roots.iter_mut().find(|q| q.location == z) {
                    Some(q) => q.mult += r.mult,
                    None => roots.push(Root {
                        location: z,
                        mult: r.mult,
                    }),
                }
            }
        }
        Self::with_inferred_tag(roots)
    }

    /// Evaluates `q(z) = Π (z - w_k)^{m_k}` directly. Only meaningful for
    /// small degree; overflow is not guarded.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.roots.iter().fold(Complex64::new(1.0, 0.0), |acc, r| {
            acc * (z - r.location).powu(r.mult as u32)
        })
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// `Λ_p(t)`: a configuration together with a level `t > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LevelSetRepr")]
pub struct LevelSetSpec {
    pub config: RootConfiguration,
    level: f64,
    #[serde(skip)]
    log_level: f64,
}

#[derive(Deserialize)]
struct LevelSetRepr {
    config: RootConfiguration,
    level: f64,
}

impl TryFrom<LevelSetRepr> for LevelSetSpec {
    type Error = LemniError;

    fn try_from(r: LevelSetRepr) -> Result<Self> {
        LevelSetSpec::new(r.config, r.level)
    }
}

impl LevelSetSpec {
    pub fn new(config: RootConfiguration, level: f64) -> Result<Self> {
        if !(level > 0.0 && level.is_finite()) {
            return Err(LemniError::InvalidArgument(format!(
                "level must be positive and finite, got {level}"
            )));
        }
        Ok(Self {
            config,
            level,
            log_level: level.ln(),
        })
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn log_level(&self) -> f64 {
        self.log_level
    }

    pub fn degree(&self) -> u64 {
        self.config.degree()
    }

    /// `|p(z)| < t`, tested in the log domain.
    pub fn membership(&self, z: impl Into<Complex64>) -> bool {
        self.config.log_abs_eval(z) < self.log_level
    }

    /// `log|p(z)| - log t`; negative exactly on the lemniscate.
    pub fn level_function(&self, z: impl Into<Complex64>) -> f64 {
        self.config.log_abs_eval(z) - self.log_level
    }
}

/// `n` simple roots drawn uniformly from the closed unit disc.
pub fn random_disc_configuration(n: usize, seed: u64) -> Result<RootConfiguration> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(rng.random::<f64>().sqrt(), TAU * rng.random::<f64>()))
        .collect();
    RootConfiguration::new(
        points.into_iter().map(|location| Root { location, mult: 1 }).collect(),
        ConstraintTag::UnitDisc,
    )
}

/// The Blaschke factor `B_a(z) = (z - a)/(1 - ā z)`.
pub fn blaschke_map(a: Complex64, z: Complex64) -> Result<Complex64> {
    if a.norm() >= 1.0 {
        return Err(LemniError::Domain(format!("|a| = {} is not < 1", a.norm())));
    }
    if z.norm() > 1.0 + 1e-9 {
        return Err(LemniError::Domain(format!(
            "|z| = {} exceeds the closed disc",
            z.norm()
        )));
    }
    let den = Complex64::new(1.0, 0.0) - a.conj() * z;
    if den.norm() == 0.0 {
        return Err(LemniError::Domain(format!("pole of B_a at z = {z}")));
    }
    Ok((z - a) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_root_at_origin() {
        let p = RootConfiguration::from_points(&[c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(p.log_abs_eval(c(2.0, 0.0)), 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn roots_of_unity_at_origin_is_zero() {
        let p = RootConfiguration::roots_of_unity(5).unwrap();
        assert_abs_diff_eq!(p.log_abs_eval(c(0.0, 0.0)), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn double_root_and_pair_at_origin() {
        let roots = vec![
            Root {
                location: c(1.0, 0.0),
                mult: 2,
            },
            Root {
                location: Complex64::from_polar(1.0, 3.0 * PI / 4.0),
                mult: 1,
            },
            Root {
                location: Complex64::from_polar(1.0, -3.0 * PI / 4.0),
                mult: 1,
            },
        ];
        let p = RootConfiguration::new(roots, ConstraintTag::UnitCircle).unwrap();
        // Every root has modulus one, so the product of distances to 0 is 1.
        assert_abs_diff_eq!(p.log_abs_eval(c(0.0, 0.0)), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_root_gives_negative_infinity() {
        let p = RootConfiguration::roots_of_unity(3).unwrap();
        assert_eq!(p.log_abs_eval(c(1.0, 0.0)), f64::NEG_INFINITY);
        assert!(p.log_abs_eval(c(1.0 + 1e-12, 0.0)).is_finite());
    }

    #[test]
    fn huge_degree_does_not_overflow() {
        let p = RootConfiguration::new(
            vec![Root {
                location: c(0.0, 0.0),
                mult: 10_000_000,
            }],
            ConstraintTag::UnitDisc,
        )
        .unwrap();
        let v = p.log_abs_eval(c(10.0, 0.0));
        assert_abs_diff_eq!(v, 1e7 * 10f64.ln(), epsilon = 1e-6);

        let q = RootConfiguration::roots_of_unity(100_000).unwrap();
        let v = q.log_abs_eval(c(10.0, 0.0));
        // |z^n - 1| ≈ 10^n
        assert_abs_diff_eq!(v, 100_000.0 * 10f64.ln(), epsilon = 1e-6);
        let v = q.log_abs_eval(c(0.1, 0.0));
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn membership_examples() {
        let disc = LevelSetSpec::new(RootConfiguration::from_points(&[c(0.0, 0.0)]).unwrap(), 1.0)
            .unwrap();
        assert!(disc.membership(c(0.5, 0.0)));
        assert!(!disc.membership(c(2.0, 0.0)));
        let cube = LevelSetSpec::new(RootConfiguration::roots_of_unity(3).unwrap(), 1.0).unwrap();
        assert!(cube.membership(c(1.0, 0.0)));
        // boundary excluded
        assert!(!disc.membership(c(1.0, 0.0)));
    }

    #[test]
    fn level_must_be_positive() {
        let p = RootConfiguration::roots_of_unity(3).unwrap();
        assert!(LevelSetSpec::new(p.clone(), 0.0).is_err());
        assert!(LevelSetSpec::new(p, f64::NAN).is_err());
    }

    #[test]
    fn invalid_configurations_rejected() {
        assert!(RootConfiguration::new(vec![], ConstraintTag::None).is_err());
        assert!(RootConfiguration::new(
            vec![Root {
                location: c(0.0, 0.0),
                mult: 0
            }],
            ConstraintTag::None
        )
        .is_err());
        assert!(RootConfiguration::new(
            vec![Root {
                location: c(1.5, 0.0),
                mult: 1
            }],
            ConstraintTag::UnitDisc
        )
        .is_err());
        assert!(RootConfiguration::new(
            vec![Root {
                location: c(0.5, 0.0),
                mult: 1
            }],
            ConstraintTag::UnitCircle
        )
        .is_err());
        assert!(ComplexPoint::new(f64::NAN, 0.0).is_err());
        assert!(ComplexPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn blaschke_examples() {
        let z = c(0.3, -0.4);
        assert_eq!(blaschke_map(c(0.0, 0.0), z).unwrap(), z);
        assert_abs_diff_eq!(blaschke_map(c(0.5, 0.0), c(0.5, 0.0)).unwrap().norm(), 0.0);
        let one = blaschke_map(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(one.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(one.im, 0.0, epsilon = 1e-15);
        assert!(blaschke_map(c(1.0, 0.0), z).is_err());
        assert!(blaschke_map(c(0.5, 0.0), c(2.0, 0.0)).is_err());
    }

    #[test]
    fn blaschke_preserves_circle() {
        let a = c(0.3, 0.6);
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, k as f64 * TAU / 64.0);
            assert_abs_diff_eq!(blaschke_map(a, z).unwrap().norm(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn power_examples() {
        let p = RootConfiguration::from_points(&[c(1.0, 0.0)]).unwrap();
        let p3 = p.power(3).unwrap();
        assert_eq!(p3.degree(), 3);
        assert_eq!(p3.roots()[0].mult, 3);
        let q = RootConfiguration::from_points(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(q.power(1).unwrap(), q);
        assert!(q.power(0).is_err());
    }

    #[test]
    fn power_level_set_identity_on_grid() {
        // Λ_{p^k}(t^k) = Λ_p(t)
        let p = RootConfiguration::from_points(&[c(0.3, 0.2), c(-0.5, 0.1), c(0.0, -0.9)]).unwrap();
        for &(k, t) in &[(2u64, 0.7), (5, 1.0), (3, 1.6)] {
            let a = LevelSetSpec::new(p.clone(), t).unwrap();
            let b = LevelSetSpec::new(p.power(k).unwrap(), f64::powi(t, k as i32)).unwrap();
            let mut agree = 0;
            let n = 80;
            for i in 0..n {
                for j in 0..n {
                    let z = c(-2.0 + 4.0 * (i as f64 + 0.37) / n as f64, -2.0 + 4.0 * (j as f64 + 0.61) / n as f64);
                    if a.membership(z) == b.membership(z) {
                        agree += 1;
                    }
                }
            }
            assert_eq!(agree, n * n);
        }
    }

    #[test]
    fn compose_examples() {
        let z2 = RootConfiguration::new(
            vec![Root {
                location: c(0.0, 0.0),
                mult: 2,
            }],
            ConstraintTag::UnitDisc,
        )
        .unwrap();
        let lin = RootConfiguration::from_points(&[c(1.0, 0.0)]).unwrap();
        let comp = lin.compose_with_generator(&z2).unwrap();
        assert_eq!(comp.degree(), 2);
        let mut pts = comp.expanded_points();
        pts.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_abs_diff_eq!(pts[0].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pts[1].re, 1.0, epsilon = 1e-15);

        let zero = RootConfiguration::from_points(&[c(0.0, 0.0)]).unwrap();
        let comp = zero.compose_with_generator(&z2).unwrap();
        assert_eq!(comp.roots().len(), 1);
        assert_eq!(comp.roots()[0].mult, 2);
        assert_eq!(comp.roots()[0].location, c(0.0, 0.0));

        // z^3 inner, z^2 - 1 outer: cube roots of ±1
        let z3 = RootConfiguration::new(
            vec![Root {
                location: c(0.0, 0.0),
                mult: 3,
            }],
            ConstraintTag::UnitDisc,
        )
        .unwrap();
        let outer = RootConfiguration::from_points(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let comp = outer.compose_with_generator(&z3).unwrap();
        assert_eq!(comp.degree(), 6);
        assert_eq!(comp.tag(), ConstraintTag::UnitCircle);
        // the sixth roots of unity
        let mut angles = comp.sorted_angles();
        angles.iter_mut().for_each(|a| *a *= 6.0 / TAU);
        for (k, a) in angles.iter().enumerate() {
            assert_abs_diff_eq!(*a, k as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn compose_general_inner_uses_iterative_solver() {
        // q(z) = (z - 0.5)(z + 0.5i)(z + 0.2), distinct roots, so the radical
        // shortcut does not apply.
        let q = RootConfiguration::from_points(&[c(0.5, 0.0), c(0.0, -0.5), c(-0.2, 0.0)]).unwrap();
        let p = RootConfiguration::from_points(&[c(0.3, 0.4), c(-1.0, 0.0)]).unwrap();
        let comp = p.compose_with_generator(&q).unwrap();
        assert_eq!(comp.degree(), 6);
        for r in comp.roots() {
            let v = q.eval(r.location);
            let d0 = (v - c(0.3, 0.4)).norm();
            let d1 = (v - c(-1.0, 0.0)).norm();
            assert!(d0.min(d1) < 1e-11, "residual {}", d0.min(d1));
        }
        // membership equivalence: z ∈ Λ_{p∘q}(t) ⇔ q(z) ∈ Λ_p(t)
        let t = 0.8;
        let outer = LevelSetSpec::new(p, t).unwrap();
        let composed = LevelSetSpec::new(comp, t).unwrap();
        let mut disagreements = 0;
        for i in 0..100 {
            for j in 0..100 {
                let z = c(-1.5 + 3.0 * (i as f64 + 0.5) / 100.0, -1.5 + 3.0 * (j as f64 + 0.5) / 100.0);
                let lhs = composed.level_function(z);
                let rhs = outer.level_function(q.eval(z));
                assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()));
                if composed.membership(z) != outer.membership(q.eval(z)) {
                    disagreements += 1;
                }
            }
        }
        assert_eq!(disagreements, 0);
    }

    #[test]
    fn json_forms() {
        let p = RootConfiguration::from_angles_over_2pi(&[0.0, 0.25], Some(&[2, 1])).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"tag\":\"UNIT_CIRCLE\""));
        let back: RootConfiguration = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        let short: RootConfiguration =
            serde_json::from_str(r#"{"angles_over_2pi":[0],"mults":[1]}"#).unwrap();
        assert_eq!(short.degree(), 1);
        assert_eq!(short.tag(), ConstraintTag::UnitCircle);

        let bad = serde_json::from_str::<RootConfiguration>(
            r#"{"roots":[{"re":2.0,"im":0,"mult":1}],"tag":"UNIT_DISC"}"#,
        );
        assert!(bad.is_err());
        let err = serde_json::from_str::<RootConfiguration>("{\"roots\": [").unwrap_err();
        assert!(err.line() >= 1);

        let spec = LevelSetSpec::new(p, 0.5).unwrap();
        let back: LevelSetSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back.log_level(), 0.5f64.ln());
        assert!(serde_json::from_str::<LevelSetSpec>(
            r#"{"config":{"angles_over_2pi":[0]},"level":-1.0}"#
        )
        .is_err());
    }

    fn arb_config(max_deg: usize) -> impl Strategy<Value = RootConfiguration> {
        prop::collection::vec((0.0f64..1.0, 0.0f64..TAU, 1u64..4), 1..max_deg).prop_map(|v| {
            let roots = v
                .into_iter()
                .map(|(r, a, m)| Root {
                    location: Complex64::from_polar(r.sqrt(), a),
                    mult: m,
                })
                .collect();
            RootConfiguration::new(roots, ConstraintTag::UnitDisc).unwrap()
        })
    }

    fn arb_point() -> impl Strategy<Value = Complex64> {
        (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(x, y)| c(x, y))
    }

    proptest! {
        #[test]
        fn additive_over_concatenation(a in arb_config(8), b in arb_config(8), z in arb_point()) {
            let ab = a.concat(&b).unwrap();
            let lhs = ab.log_abs_eval(z);
            let rhs = a.log_abs_eval(z) + b.log_abs_eval(z);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * ab.degree() as f64 * (1.0 + rhs.abs()));
        }

        #[test]
        fn rotation_equivariance(a in arb_config(10), z in arb_point(), theta in 0.0f64..TAU) {
            let w = Complex64::from_polar(1.0, theta);
            let lhs = a.rotated(theta).log_abs_eval(z * w);
            let rhs = a.log_abs_eval(z);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * a.degree() as f64 * (1.0 + rhs.abs()));
        }

        #[test]
        fn conjugation_symmetry(a in arb_config(10), z in arb_point(), t in 0.1f64..3.0) {
            let s = LevelSetSpec::new(a.clone(), t).unwrap();
            let sc = LevelSetSpec::new(a.conjugated(), t).unwrap();
            let v = s.level_function(z);
            // skip points numerically on the boundary
            prop_assume!(v.abs() > 1e-9);
            prop_assert_eq!(s.membership(z), sc.membership(z.conj()));
        }

        #[test]
        fn power_scales_log_exactly(a in arb_config(10), z in arb_point(), k in 1u64..50) {
            let lhs = a.power(k).unwrap().log_abs_eval(z);
            let rhs = k as f64 * a.log_abs_eval(z);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (k * a.degree()) as f64 * (1.0 + rhs.abs()));
        }
    }
}
