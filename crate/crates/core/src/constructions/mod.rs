//! Explicit configurations: the Wagner-type small-area polynomials, zero
//! pushing onto the circle, and the named examples.

mod push;
mod wagner;

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::poly::{ConstraintTag, Root, RootConfiguration};

pub use push::{
    comparison_margin, harmonic_sample, hoeffding_bad_event_bound, margin_grid, push_multiplier,
    push_zeros_deterministic, push_zeros_probabilistic, PushResult, Rounding, MARGIN_GRID,
};
pub use wagner::{
    generator_bound, wagner_coefficients, wagner_measure, wagner_polynomial, WagnerCoefficients,
    WagnerParams, WagnerPolynomial,
};

/// `C_{n,h}`: the `n`-th roots of unity with `e^{2πik/n}`, `0 <= k < h`,
/// merged into one root of multiplicity `h` at `e^{πi(h-1)/n}`.
pub fn c_nh(n: u64, h: u64) -> Result<RootConfiguration> {
    if n == 0 || h == 0 || h > n {
        return Err(LemniError::InvalidArgument(format!(
            "need 1 <= h <= n, got n={n}, h={h}"
        )));
    }
    let mut roots = vec![Root {
        location: Complex64::from_polar(1.0, PI * (h - 1) as f64 / n as f64),
        mult: h,
    }];
    roots.extend((h..n).map(|k| Root {
        location: Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64),
        mult: 1,
    }));
    RootConfiguration::new(roots, ConstraintTag::UnitCircle)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyKind {
    /// `z^n - 1`.
    Erdos,
    /// `(z^n - 1)/(z - 1)`.
    ErdosDeflated,
    /// `q_n(z^d)` with `q_n` the deflated polynomial and `d = ⌈ln n⌉`.
    Stretched,
}

impl FromStr for FamilyKind {
    type Err = LemniError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "erdos" => Ok(Self::Erdos),
            "erdos_deflated" | "deflated" => Ok(Self::ErdosDeflated),
            "stretched" => Ok(Self::Stretched),
            other => Err(LemniError::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

pub fn stretch_exponent(n: u64) -> u64 {
    ((n as f64).ln().ceil() as u64).max(1)
}

pub fn named_family(kind: FamilyKind, n: u64) -> Result<RootConfiguration> {
    if n < 2 {
        return Err(LemniError::InvalidArgument(format!("n must be >= 2, got {n}")));
    }
    let deflated = || {
        let angles: Vec<f64> = (1..n).map(|k| k as f64 / n as f64).collect();
        RootConfiguration::from_angles_over_2pi(&angles, None)
    };
    match kind {
        FamilyKind::Erdos => RootConfiguration::roots_of_unity(n),
        FamilyKind::ErdosDeflated => deflated(),
        FamilyKind::Stretched => {
            let power = RootConfiguration::new(
                vec![Root {
                    location: Complex64::new(0.0, 0.0),
                    mult: stretch_exponent(n),
                }],
                ConstraintTag::UnitDisc,
            )?;
            deflated()?.compose_with_generator(&power)
        }
    }
}
