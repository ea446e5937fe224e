//! Geometry of a lemniscate on a pixel grid, on circles, and of its roots.

mod circle;
mod contour;
mod discrepancy;
mod verify;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LemniError, Result};
use crate::poly::LevelSetSpec;

pub use circle::{
    circle_arc_intersections, doubling_exponent, sign_changes, Arc, ArcList, DoublingExponent,
};
pub use contour::{perimeter_estimate, trace_contour, Contour};
pub use discrepancy::{discrepancy, discrepancy_of_angles};
pub use verify::{
    verify_area_inradius_perimeter, verify_crane, verify_inradius_area, verify_perimeter_area,
    verify_reflection, verify_sign_change_bound, VerifyReport,
};

pub const MIN_RESOLUTION: usize = 64;

/// Half-width of a square window that contains `Λ_p(t)` with a little room.
///
/// `|p(z)| >= (|z| - max|w_k|)^n` gives containment in the disc of radius
/// `max|w_k| + t^{1/n}`; the radius is taken at least as large as
/// [`crate::area::bounding_radius`] for disc-bounded configurations.
pub fn default_window(spec: &LevelSetSpec) -> f64 {
    let far = spec
        .config
        .roots()
        .iter()
        .map(|r| r.location.norm())
        .fold(1.0, f64::max);
    let r = (far + (spec.log_level() / spec.degree() as f64).exp()).max(1.05);
    1.02 * r
}

/// Membership of cell centres of an `N x N` grid over `[-W, W]²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMask {
    pub resolution: usize,
    pub window_radius: f64,
    bits: Vec<bool>,
}

impl GridMask {
    pub fn build(spec: &LevelSetSpec, resolution: usize, window_radius: Option<f64>) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(LemniError::InvalidArgument(format!(
                "grid resolution must be >= {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let w = window_radius.unwrap_or_else(|| default_window(spec));
        if !(w > 0.0 && w.is_finite()) {
            return Err(LemniError::InvalidArgument(format!("bad window radius {w}")));
        }
        let n = resolution;
        let h = 2.0 * w / n as f64;
        let mut bits = vec![false; n * n];
        bits.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
            let y = -w + (j as f64 + 0.5) * h;
            for (i, b) in row.iter_mut().enumerate() {
                let x = -w + (i as f64 + 0.5) * h;
                *b = spec.membership(Complex64::new(x, y));
            }
        });
        Ok(Self {
            resolution,
            window_radius: w,
            bits,
        })
    }

    pub fn cell_size(&self) -> f64 {
        2.0 * self.window_radius / self.resolution as f64
    }

    /// Column `i`, row `j`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.resolution + i]
    }

    pub fn cell_center(&self, i: usize, j: usize) -> Complex64 {
        let h = self.cell_size();
        Complex64::new(
            -self.window_radius + (i as f64 + 0.5) * h,
            -self.window_radius + (j as f64 + 0.5) * h,
        )
    }

    pub fn inside_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Pixel-count area.
    pub fn area(&self) -> f64 {
        self.inside_count() as f64 * self.cell_size().powi(2)
    }

    /// Squared distance, in cells, from each cell centre to the nearest
    /// outside cell centre. Cells beyond the window count as outside.
    pub fn squared_distance_to_outside(&self) -> Vec<f64> {
        let n = self.resolution;
        let m = n + 2;
        let big = 1e20;
        let mut f = vec![0.0; m * m];
        for j in 0..n {
            for i in 0..n {
                if self.get(i, j) {
                    f[(j + 1) * m + i + 1] = big;
                }
            }
        }
        let mut buf = vec![0.0; m];
        let mut out = vec![0.0; m];
        let mut v = vec![0usize; m];
        let mut z = vec![0.0; m + 1];
        for i in 0..m {
            for j in 0..m {
                buf[j] = f[j * m + i];
            }
            edt_1d(&buf, &mut out, &mut v, &mut z);
            for j in 0..m {
                f[j * m + i] = out[j];
            }
        }
        for j in 0..m {
            buf.copy_from_slice(&f[j * m..(j + 1) * m]);
            edt_1d(&buf, &mut out, &mut v, &mut z);
            f[j * m..(j + 1) * m].copy_from_slice(&out);
        }
        let mut d = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                d[j * n + i] = f[(j + 1) * m + i + 1];
            }
        }
        d
    }

    /// Number of 4-connected components of inside cells.
    pub fn component_count(&self) -> usize {
        let n = self.resolution;
        let mut dsu = Dsu::new(n * n);
        for j in 0..n {
            for i in 0..n {
                if !self.get(i, j) {
                    continue;
                }
                if i + 1 < n && self.get(i + 1, j) {
                    dsu.union(j * n + i, j * n + i + 1);
                }
                if j + 1 < n && self.get(i, j + 1) {
                    dsu.union(j * n + i, (j + 1) * n + i);
                }
            }
        }
        (0..n * n)
            .filter(|&k| self.bits[k] && dsu.find(k) == k)
            .count()
    }
}

/// Squared distance transform of a sampled function (lower envelope of
/// parabolas).
fn edt_1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        let fq = f[q] + (q * q) as f64;
        loop {
            let p = v[k];
            let s = (fq - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate().take(n) {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let dist = q as f64 - v[k] as f64;
        *dq = dist * dist + f[v[k]];
    }
}

struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Inradius with its grid error bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InradiusEstimate {
    pub value: f64,
    /// Two cell diagonals.
    pub error_bound: f64,
    pub cell_size: f64,
}

/// Largest inscribed disc, from the exact distance transform of the mask.
///
/// The distance from an inside centre to the nearest outside centre
/// overshoots the distance to the boundary by up to one cell; half a cell is
/// subtracted.
pub fn inradius_estimate(spec: &LevelSetSpec, resolution: usize) -> Result<InradiusEstimate> {
    let mask = GridMask::build(spec, resolution, None)?;
    Ok(inradius_from_mask(&mask))
}

pub fn inradius_from_mask(mask: &GridMask) -> InradiusEstimate {
    let h = mask.cell_size();
    let d2max = mask
        .squared_distance_to_outside()
        .into_iter()
        .fold(0.0, f64::max);
    let value = if d2max == 0.0 {
        0.0
    } else {
        (d2max.sqrt() * h - 0.5 * h).max(0.0)
    };
    InradiusEstimate {
        value,
        error_bound: 2.0 * h * std::f64::consts::SQRT_2,
        cell_size: h,
    }
}

/// Connected components of `Λ_p(t)` at grid scale.
pub fn component_count(spec: &LevelSetSpec, resolution: usize) -> Result<usize> {
    Ok(GridMask::build(spec, resolution, None)?.component_count())
}
