//! Arc discrepancy of a root configuration on the unit circle.

use std::f64::consts::TAU;

use crate::error::{LemniError, Result};
use crate::poly::{ConstraintTag, RootConfiguration};

/// `sup_{0 <= α < β <= 2π} | #{k : α < arg w_k < β}/n - (β - α)/2π |`.
pub fn discrepancy(config: &RootConfiguration) -> Result<f64> {
    if config.tag() != ConstraintTag::UnitCircle {
        return Err(LemniError::Domain("discrepancy needs every root on the unit circle".into()));
    }
    let mut groups: Vec<(f64, u64)> = config
        .roots()
        .iter()
        .map(|r| (crate::poly::normalize_angle(r.location.arg()) / TAU, r.mult))
        .collect();
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(sweep(&groups, config.degree()))
}

/// Same supremum for raw angles in `[0, 1)` (fractions of a turn), each with
/// unit mass.
pub fn discrepancy_of_angles(turns: &[f64]) -> Result<f64> {
    if turns.is_empty() || turns.iter().any(|u| !(0.0..1.0).contains(u)) {
        return Err(LemniError::InvalidArgument("angles must be non-empty and lie in [0, 1)".into()));
    }
    let mut groups: Vec<(f64, u64)> = turns.iter().map(|&u| (u, 1)).collect();
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(sweep(&groups, turns.len() as u64))
}

/// Sorted `(position, mass)` pairs; positions at 0 can never lie in an open
/// arc and are dropped.
fn sweep(sorted: &[(f64, u64)], n: u64) -> f64 {
    let mut pos: Vec<f64> = Vec::new();
    let mut cum: Vec<f64> = vec![0.0];
    for &(u, m) in sorted {
        if u <= 0.0 {
            continue;
        }
        if pos.last() == Some(&u) {
            *cum.last_mut().unwrap() += m as f64;
        } else {
            pos.push(u);
            cum.push(cum.last().unwrap() + m as f64);
        }
    }
    let n = n as f64;
    let d = pos.len();
    // e_0 = 0, e_1..e_d = positions, e_{d+1} = 1; cum[g] = mass in (0, e_g].
    let e = |g: usize| -> f64 {
        if g == 0 {
            0.0
        } else if g <= d {
            pos[g - 1]
        } else {
            1.0
        }
    };

    // Excess mass: arcs hugging the groups a..=b.
    let mut over = f64::NEG_INFINITY;
    let mut best_left = f64::NEG_INFINITY;
    for b in 1..=d {
        best_left = best_left.max(e(b) - cum[b - 1] / n);
        over = over.max(cum[b] / n - e(b) + best_left);
    }
    // Excess length: open gaps between endpoints e_a < e_b.
    let mut under = f64::NEG_INFINITY;
    let mut min_left = f64::INFINITY;
    for b in 1..=d + 1 {
        min_left = min_left.min(e(b - 1) - cum[b - 1] / n);
        under = under.max(e(b) - cum[b - 1] / n - min_left);
    }
    over.max(under).max(0.0)
}
