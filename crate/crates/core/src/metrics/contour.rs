//! Marching squares on `log|p| - log t`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{default_window, MIN_RESOLUTION};
use crate::error::{LemniError, Result};
use crate::poly::LevelSetSpec;

/// Values are clamped so that roots (`-∞`) still interpolate.
const CLAMP: f64 = 50.0;

/// Boundary polylines of `Λ_p(t)` inside a square window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub window_radius: f64,
    pub resolution: usize,
    /// Each loop lists its vertices; closed loops do not repeat the first one.
    pub loops: Vec<Vec<Complex64>>,
    pub closed: Vec<bool>,
    pub length: f64,
}

impl Contour {
    /// One `<path>` per loop.
    pub fn to_svg(&self, size_px: u32) -> String {
        let w = self.window_radius;
        let scale = size_px as f64 / (2.0 * w);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size_px}" height="{size_px}" viewBox="0 0 {size_px} {size_px}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for (pts, &closed) in self.loops.iter().zip(&self.closed) {
            let mut d = String::new();
            for (k, z) in pts.iter().enumerate() {
                let x = (z.re + w) * scale;
                let y = (w - z.im) * scale;
                let _ = write!(d, "{}{:.3},{:.3} ", if k == 0 { "M" } else { "L" }, x, y);
            }
            if closed {
                d.push('Z');
            }
            let _ = writeln!(
                s,
                r#"<path d="{}" fill="none" stroke="black" stroke-width="1"/>"#,
                d.trim_end()
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Marching-squares contour of `{log|p| = log t}` on an `N x N` cell grid.
///
/// Saddle cells are split according to the sign of the level function at the
/// cell centre.
pub fn trace_contour(spec: &LevelSetSpec, resolution: usize, window_radius: Option<f64>) -> Result<Contour> {
    if resolution < MIN_RESOLUTION {
        return Err(LemniError::InvalidArgument(format!(
            "grid resolution must be >= {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let w = window_radius.unwrap_or_else(|| default_window(spec));
    let n = resolution;
    let h = 2.0 * w / n as f64;
    let stride = n + 1;
    let node = |i: usize, j: usize| Complex64::new(-w + i as f64 * h, -w + j as f64 * h);

    let mut f = vec![0.0; stride * stride];
    f.par_chunks_mut(stride).enumerate().for_each(|(j, row)| {
        for (i, v) in row.iter_mut().enumerate() {
            *v = spec.level_function(node(i, j)).clamp(-CLAMP, CLAMP);
        }
    });
    let val = |i: usize, j: usize| f[j * stride + i];

    // Edge ids: horizontal (i,j)-(i+1,j) then vertical (i,j)-(i,j+1).
    let h_id = |i: usize, j: usize| j * n + i;
    let v_id = |i: usize, j: usize| n * stride + j * stride + i;
    let crossing = |id: usize| -> Complex64 {
        let (a, b) = if id < n * stride {
            let (i, j) = (id % n, id / n);
            ((i, j), (i + 1, j))
        } else {
            let k = id - n * stride;
            let (i, j) = (k % stride, k / stride);
            ((i, j), (i, j + 1))
        };
        let (fa, fb) = (val(a.0, a.1), val(b.0, b.1));
        let s = fa / (fa - fb);
        node(a.0, a.1) + (node(b.0, b.1) - node(a.0, a.1)) * s
    };

    let mut segments: Vec<(usize, usize)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let inside = [
                val(i, j) < 0.0,
                val(i + 1, j) < 0.0,
                val(i + 1, j + 1) < 0.0,
                val(i, j + 1) < 0.0,
            ];
            // e0 bottom, e1 right, e2 top, e3 left; corner k touches e_{k-1}, e_k.
            let edges = [h_id(i, j), v_id(i + 1, j), h_id(i, j + 1), v_id(i, j)];
            let cut: Vec<usize> = (0..4).filter(|&e| inside[e] != inside[(e + 1) % 4]).collect();
            match cut.len() {
                0 => {}
                2 => segments.push((edges[cut[0]], edges[cut[1]])),
                4 => {
                    let c = Complex64::new(-w + (i as f64 + 0.5) * h, -w + (j as f64 + 0.5) * h);
                    let centre_inside = spec.level_function(c) < 0.0;
                    if centre_inside == inside[0] {
                        // Corners 0 and 2 are joined through the centre; cut off 1 and 3.
                        segments.push((edges[0], edges[1]));
                        segments.push((edges[2], edges[3]));
                    } else {
                        segments.push((edges[3], edges[0]));
                        segments.push((edges[1], edges[2]));
                    }
                }
                _ => unreachable!("a square has an even number of sign changes"),
            }
        }
    }
    if segments.is_empty() {
        return Err(LemniError::NoContour(format!(
            "level set is empty or fills the window at resolution {resolution}"
        )));
    }

    let mut points: HashMap<usize, Complex64> = HashMap::new();
    let mut at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        points.entry(a).or_insert_with(|| crossing(a));
        points.entry(b).or_insert_with(|| crossing(b));
        at.entry(a).or_default().push(k);
        at.entry(b).or_default().push(k);
    }
    let length: f64 = segments.iter().map(|(a, b)| (points[a] - points[b]).norm()).sum();

    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    let mut closed = Vec::new();
    // Open chains first start at edges touched once, then the remaining loops.
    let mut starts: Vec<usize> = at
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    starts.sort_unstable();
    let loop_starts: Vec<usize> = (0..segments.len()).map(|k| segments[k].0).collect();
    for (start, is_open) in starts
        .into_iter()
        .map(|e| (e, true))
        .chain(loop_starts.into_iter().map(|e| (e, false)))
    {
        let Some(&first) = at[&start].iter().find(|&&k| !used[k]) else {
            continue;
        };
        let mut chain = vec![points[&start]];
        let mut edge = start;
        let mut seg = first;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            edge = if a == edge { b } else { a };
            if edge == start {
                break;
            }
            chain.push(points[&edge]);
            match at[&edge].iter().find(|&&k| !used[k]) {
                Some(&k) => seg = k,
                None => break,
            }
        }
        closed.push(!is_open && edge == start);
        loops.push(chain);
    }

    Ok(Contour {
        window_radius: w,
        resolution,
        loops,
        closed,
        length,
    })
}

/// Total length of the marching-squares boundary of `Λ_p(t)`.
pub fn perimeter_estimate(spec: &LevelSetSpec, resolution: usize) -> Result<f64> {
    Ok(trace_contour(spec, resolution, None)?.length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{Root, RootConfiguration};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    fn origin(mult: u64, t: f64) -> LevelSetSpec {
        LevelSetSpec::new(
            RootConfiguration::with_inferred_tag(vec![Root {
                location: Complex64::new(0.0, 0.0),
                mult,
            }])
            .unwrap(),
            t,
        )
        .unwrap()
    }

    #[test]
    fn unit_circle_perimeter() {
        assert_abs_diff_eq!(perimeter_estimate(&origin(1, 1.0), 1024).unwrap(), TAU, epsilon = 0.01);
        assert_abs_diff_eq!(perimeter_estimate(&origin(2, 1.0), 1024).unwrap(), TAU, epsilon = 0.01);
    }

    #[test]
    fn loops_are_closed_and_counted() {
        let spec = LevelSetSpec::new(RootConfiguration::roots_of_unity(4).unwrap(), 0.5).unwrap();
        let c = trace_contour(&spec, 512, None).unwrap();
        assert_eq!(c.loops.len(), 4);
        assert!(c.closed.iter().all(|&b| b));
        let polyline: f64 = c
            .loops
            .iter()
            .map(|l| (0..l.len()).map(|k| (l[(k + 1) % l.len()] - l[k]).norm()).sum::<f64>())
            .sum();
        assert_abs_diff_eq!(polyline, c.length, epsilon = 1e-9);
        let svg = c.to_svg(400);
        assert_eq!(svg.matches("<path").count(), 4);
    }

    #[test]
    fn erdos_three_perimeter_bound() {
        let spec = LevelSetSpec::new(RootConfiguration::roots_of_unity(3).unwrap(), 1.0).unwrap();
        let l = perimeter_estimate(&spec, 2048).unwrap();
        assert!(l.is_finite() && l > 0.0);
        assert!(l <= 4.0 * 3.0 * PI.sqrt() * 1.77829f64.sqrt());
    }

    #[test]
    fn circle_of_radius_r_at_other_levels() {
        for t in [0.25, 0.5, 1.5] {
            let l = perimeter_estimate(&origin(1, t), 1024).unwrap();
            assert_abs_diff_eq!(l, TAU * t, epsilon = 0.01);
        }
    }

    #[test]
    fn empty_and_full_sets_have_no_contour() {
        assert!(matches!(
            perimeter_estimate(&origin(1, 1e-9), 129),
            Err(LemniError::NoContour(_))
        ));
        assert!(matches!(
            trace_contour(&origin(1, 1.0), 128, Some(0.5)),
            Err(LemniError::NoContour(_))
        ));
    }

    #[test]
    fn saddle_cells_are_split_consistently() {
        // At the critical level of z^2 - 1 (t = 1) the two lobes touch at 0.
        let spec = LevelSetSpec::new(RootConfiguration::roots_of_unity(2).unwrap(), 1.0).unwrap();
        let c = trace_contour(&spec, 256, None).unwrap();
        assert!(c.closed.iter().all(|&b| b));
        // Lemniscate of Bernoulli with a = √2; length 2ϖa.
        let oracle = 2.0 * 2.622_057_554_292_119 * std::f64::consts::SQRT_2;
        assert_abs_diff_eq!(c.length, oracle, epsilon = 0.05);
    }
}
