//! Searches for small-area configurations on the circle: exhaustive subset
//! search over a grid, cyclic coordinate descent, and the `C_{n,h}` family.
//!
//! Every candidate in one search is scored on the same [`SamplePlan`], so the
//! ranking is a deterministic function of the space, the level and the seed.

mod report;

use std::f64::consts::{PI, TAU};
use std::path::Path;

use itertools::Itertools;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::area::{bounding_radius, AreaEstimate, SamplePlan, SamplerConfig};
use crate::constructions::c_nh;
use crate::error::{LemniError, Result};
use crate::poly::{normalize_angle, ConstraintTag, LevelSetSpec, Root, RootConfiguration};

pub use report::{
    argmin_of_trace, compare_angles, format_angles, read_trace, write_trace, SearchKind, SearchReport,
    Tie, TraceRow, MAX_TIES,
};
use report::{better, collect_ties};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Symmetry {
    /// `q` roots at 1, `s` at −1 and `r` conjugate pairs from the upper
    /// half-circle grid `{e^{iπj/m} : 1 <= j < m}`, with `q + s + 2r = n`.
    ConjugateSymmetric,
    /// `n`-point multisets of the `m`-th roots of unity.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub n: u64,
    pub m: u64,
    pub symmetry: Symmetry,
    /// Force a root at 1 (`q >= 1` in the symmetric space).
    pub anchor_one: bool,
    /// Largest multiplicity at one grid point. Without symmetry the default
    /// is 1 (plain subsets); with symmetry it bounds `q` and `s`, and pairs
    /// are always distinct.
    #[serde(default)]
    pub multiplicity_cap: Option<u64>,
    /// Largest number of conjugate pairs `r` (symmetric space only).
    #[serde(default)]
    pub max_pairs: Option<u64>,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

struct Candidate {
    config: RootConfiguration,
    q: Option<u64>,
    s: Option<u64>,
    r: Option<u64>,
}

/// Points at 0, π and 2π are placed exactly so that merged roots coincide.
fn circle_point(theta: f64) -> Complex64 {
    if theta == 0.0 || theta == TAU {
        Complex64::new(1.0, 0.0)
    } else if theta == PI {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, theta)
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

impl SearchSpace {
    pub fn symmetric(n: u64, m: u64) -> Self {
        Self {
            n,
            m,
            symmetry: Symmetry::ConjugateSymmetric,
            anchor_one: false,
            multiplicity_cap: None,
            max_pairs: None,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn unrestricted(n: u64, m: u64) -> Self {
        Self {
            symmetry: Symmetry::None,
            ..Self::symmetric(n, m)
        }
    }

    fn cap(&self) -> u64 {
        match self.symmetry {
            Symmetry::ConjugateSymmetric => self.multiplicity_cap.unwrap_or(self.n),
            Symmetry::None => self.multiplicity_cap.unwrap_or(1),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(LemniError::InvalidArgument("n must be positive".into()));
        }
        if self.m < 2 {
            return Err(LemniError::InvalidArgument(format!("m must be >= 2, got {}", self.m)));
        }
        if self.cap() == 0 {
            return Err(LemniError::InvalidArgument("multiplicity cap must be positive".into()));
        }
        Ok(())
    }

    fn splits(&self) -> Vec<(u64, u64, u64)> {
        let cap = self.cap();
        let max_r = (self.n / 2).min(self.max_pairs.unwrap_or(u64::MAX));
        let mut out = Vec::new();
        for r in 0..=max_r {
            let rest = self.n - 2 * r;
            for q in u64::from(self.anchor_one)..=rest {
                let s = rest - q;
                if q <= cap && s <= cap {
                    out.push((q, s, r));
                }
            }
        }
        out
    }

    /// Number of configurations the search will score.
    pub fn candidate_count(&self) -> Result<u128> {
        self.validate()?;
        Ok(match self.symmetry {
            Symmetry::ConjugateSymmetric => self
                .splits()
                .iter()
                .map(|&(_, _, r)| binomial(self.m - 1, r))
                .fold(0u128, u128::saturating_add),
            Symmetry::None => {
                // ways[j] = multisets of size j over the points seen so far.
                let (n, cap) = (self.n as usize, self.cap() as usize);
                let mut ways = vec![0u128; n + 1];
                ways[0] = 1;
                for k in 0..self.m {
                    let lo = if k == 0 && self.anchor_one { 1 } else { 0 };
                    let mut next = vec![0u128; n + 1];
                    for (j, &w) in ways.iter().enumerate() {
                        if w == 0 {
                            continue;
                        }
                        for c in lo..=cap.min(n - j) {
                            next[j + c] = next[j + c].saturating_add(w);
                        }
                    }
                    ways = next;
                }
                ways[n]
            }
        })
    }

    fn for_each_candidate(&self, mut f: impl FnMut(Candidate) -> Result<()>) -> Result<()> {
        match self.symmetry {
            Symmetry::ConjugateSymmetric => {
                for (q, s, r) in self.splits() {
                    for js in (1..self.m).combinations(r as usize) {
                        let mut roots = Vec::with_capacity(2 + 2 * js.len());
                        if q > 0 {
                            roots.push(Root { location: Complex64::new(1.0, 0.0), mult: q });
                        }
                        if s > 0 {
                            roots.push(Root { location: Complex64::new(-1.0, 0.0), mult: s });
                        }
                        for j in js {
                            let w = Complex64::from_polar(1.0, PI * j as f64 / self.m as f64);
                            roots.push(Root { location: w, mult: 1 });
                            roots.push(Root { location: w.conj(), mult: 1 });
                        }
                        f(Candidate {
                            config: RootConfiguration::new(roots, ConstraintTag::UnitCircle)?,
                            q: Some(q),
                            s: Some(s),
                            r: Some(r),
                        })?;
                    }
                }
                Ok(())
            }
            Symmetry::None => {
                let mut counts = vec![0u64; self.m as usize];
                self.multisets(0, self.n, &mut counts, &mut f)
            }
        }
    }

    fn multisets(
        &self,
        k: usize,
        remaining: u64,
        counts: &mut [u64],
        f: &mut impl FnMut(Candidate) -> Result<()>,
    ) -> Result<()> {
        if remaining == 0 {
            let roots = counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, &c)| Root {
                    location: circle_point(TAU * i as f64 / self.m as f64),
                    mult: c,
                })
                .collect();
            return f(Candidate {
                config: RootConfiguration::new(roots, ConstraintTag::UnitCircle)?,
                q: None,
                s: None,
                r: None,
            });
        }
        if k == counts.len() {
            return Ok(());
        }
        let lo = if k == 0 && self.anchor_one { 1 } else { 0 };
        for c in (lo..=self.cap().min(remaining)).rev() {
            counts[k] = c;
            self.multisets(k + 1, remaining - c, counts, f)?;
        }
        counts[k] = 0;
        Ok(())
    }
}

fn plan_for(n: u64, level: f64, sampler: &SamplerConfig) -> Result<SamplePlan> {
    sampler.validate()?;
    let probe = LevelSetSpec::new(RootConfiguration::roots_of_unity(n)?, level)?;
    let radius = bounding_radius(&probe, sampler.bounding_radius_override)?;
    SamplePlan::new(sampler, radius)
}

fn score(plan: &SamplePlan, config: &RootConfiguration, level: f64) -> Result<AreaEstimate> {
    Ok(plan.estimate(&LevelSetSpec::new(config.clone(), level)?))
}

fn refine(best: &RootConfiguration, level: f64, sampler: &SamplerConfig, radius: f64) -> Result<AreaEstimate> {
    let plan = SamplePlan::new(&sampler.scaled(10), radius)?;
    score(&plan, best, level)
}

/// Scores every candidate of `space` at level `t` and returns the smallest
/// mean area; exact ties go to the lexicographically smallest sorted angle list.
pub fn exhaustive_search(space: &SearchSpace, level: f64, sampler: &SamplerConfig) -> Result<SearchReport> {
    let count = space.candidate_count()?;
    if count > space.budget as u128 {
        return Err(LemniError::BudgetExceeded {
            count,
            budget: space.budget as u128,
        });
    }
    if count == 0 {
        return Err(LemniError::InvalidArgument("search space is empty".into()));
    }
    let plan = plan_for(space.n, level, sampler)?;
    let mut trace = Vec::with_capacity(count.min(1 << 20) as usize);
    let mut best: Option<(usize, Vec<f64>, RootConfiguration, AreaEstimate)> = None;
    space.for_each_candidate(|c| {
        let est = score(&plan, &c.config, level)?;
        let angles = c.config.sorted_angles();
        trace.push(TraceRow {
            candidate_id: trace.len() as u64,
            angles: format_angles(&angles),
            q: c.q,
            s: c.s,
            r: c.r,
            area_mean: est.mean,
            area_std: est.stddev,
        });
        let wins = match &best {
            None => true,
            Some((_, a, _, e)) => better(est.mean, &angles, e.mean, a),
        };
        if wins {
            best = Some((trace.len() - 1, angles, c.config, est));
        }
        Ok(())
    })?;
    let (idx, _, config, est) = best.expect("non-empty space");
    log::info!("exhaustive search: {} candidates, best area {:.6}", trace.len(), est.mean);
    let (ties, ties_truncated) = collect_ties(&trace, idx)?;
    let refined = refine(&config, level, sampler, plan.radius())?;
    Ok(SearchReport {
        kind: SearchKind::Exhaustive,
        n: space.n,
        level,
        seed: sampler.seed,
        best: config,
        best_area: est,
        refined_area: Some(refined),
        evaluated: trace.len() as u64,
        ties,
        ties_truncated,
        cycles: None,
        converged: None,
        trace_file: None,
        trace,
    })
}

fn config_from_angles(angles: &[f64]) -> Result<RootConfiguration> {
    let roots = angles
        .iter()
        .map(|&a| Root {
            location: circle_point(a),
            mult: 1,
        })
        .collect();
    Ok(RootConfiguration::new(roots, ConstraintTag::UnitCircle)?.merged())
}

/// The closed arc `[lo, hi]` discretized on the fixed grid `2πj/grid`, plus
/// both endpoints.
fn arc_candidates(lo: f64, hi: f64, grid: usize) -> Vec<f64> {
    let step = TAU / grid as f64;
    let mut out = vec![lo];
    let first = (lo / step).floor() as usize + 1;
    out.extend((first..=grid).map(|j| j as f64 * step).take_while(|&w| w < hi));
    if hi > lo {
        out.push(hi);
    }
    out
}

/// Cyclic coordinate descent with `z_0` pinned at 1.
///
/// Root `z_k` is moved to the best point of the closed arc between its
/// neighbours, taken from the fixed grid of `grid` points per full turn (plus
/// the arc's endpoints), but only if that strictly lowers the area. Stops
/// after a full cycle without a move or after `max_cycles`.
pub fn local_search(
    initial: &RootConfiguration,
    level: f64,
    sampler: &SamplerConfig,
    grid: usize,
    max_cycles: u32,
) -> Result<SearchReport> {
    if initial.tag() != ConstraintTag::UnitCircle {
        return Err(LemniError::InvalidArgument("local search needs a UNIT_CIRCLE configuration".into()));
    }
    if grid < 2 {
        return Err(LemniError::InvalidArgument("grid must be >= 2".into()));
    }
    let n = initial.degree();
    let mut theta = initial.sorted_angles();
    let shift = theta[0];
    for a in theta.iter_mut() {
        *a = if *a == shift { 0.0 } else { *a - shift };
    }
    let plan = plan_for(n, level, sampler)?;
    let mut trace = Vec::new();
    let mut record = |angles: &[f64], est: &AreaEstimate| {
        let mut sorted = angles.iter().map(|&a| normalize_angle(a)).collect::<Vec<_>>();
        sorted.sort_by(f64::total_cmp);
        trace.push(TraceRow {
            candidate_id: trace.len() as u64,
            angles: format_angles(&sorted),
            q: None,
            s: None,
            r: None,
            area_mean: est.mean,
            area_std: est.stddev,
        });
    };
    let mut current = score(&plan, &config_from_angles(&theta)?, level)?;
    record(&theta, &current);
    let mut cycles = 0;
    let mut converged = false;
    while cycles < max_cycles {
        cycles += 1;
        let mut moved = false;
        for k in 1..theta.len() {
            let lo = theta[k - 1];
            let hi = if k + 1 < theta.len() { theta[k + 1] } else { TAU };
            let mut step_best: Option<(f64, AreaEstimate)> = None;
            for w in arc_candidates(lo, hi, grid) {
                if w == theta[k] {
                    continue;
                }
                let mut trial = theta.clone();
                trial[k] = w;
                let est = score(&plan, &config_from_angles(&trial)?, level)?;
                record(&trial, &est);
                if step_best.as_ref().is_none_or(|(_, b)| est.mean < b.mean) {
                    step_best = Some((w, est));
                }
            }
            if let Some((w, est)) = step_best {
                if est.mean < current.mean {
                    theta[k] = w;
                    current = est;
                    moved = true;
                }
            }
        }
        if !moved {
            converged = true;
            break;
        }
    }
    let best = config_from_angles(&theta)?;
    let refined = refine(&best, level, sampler, plan.radius())?;
    Ok(SearchReport {
        kind: SearchKind::Local,
        n,
        level,
        seed: sampler.seed,
        best,
        best_area: current,
        refined_area: Some(refined),
        evaluated: trace.len() as u64,
        ties: Vec::new(),
        ties_truncated: false,
        cycles: Some(cycles),
        converged: Some(converged),
        trace_file: None,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnhRow {
    pub n: u64,
    /// Areas of `C_{n,1}, ..., C_{n,n}`.
    pub areas: Vec<AreaEstimate>,
    pub best_h: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnhTable {
    pub level: f64,
    pub seed: u64,
    pub rows: Vec<CnhRow>,
}

impl CnhTable {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| LemniError::csv(path, e))?;
        w.write_record(["n", "h", "area_mean", "area_std", "best"])
            .map_err(|e| LemniError::csv(path, e))?;
        for row in &self.rows {
            for (i, a) in row.areas.iter().enumerate() {
                let h = i as u64 + 1;
                w.write_record([
                    row.n.to_string(),
                    h.to_string(),
                    a.mean.to_string(),
                    a.stddev.to_string(),
                    (h == row.best_h).to_string(),
                ])
                .map_err(|e| LemniError::csv(path, e))?;
            }
        }
        w.flush().map_err(|e| LemniError::io(path, e))?;
        Ok(())
    }
}

/// Areas of `C_{n,h}` for every `h` and every `n` in range; the smallest `h`
/// wins exact ties.
pub fn cnh_sweep(n_min: u64, n_max: u64, level: f64, sampler: &SamplerConfig) -> Result<CnhTable> {
    if n_min < 1 || n_min > n_max {
        return Err(LemniError::InvalidArgument(format!("bad range {n_min}..={n_max}")));
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let plan = plan_for(n, level, sampler)?;
        let areas = (1..=n)
            .map(|h| score(&plan, &c_nh(n, h)?, level))
            .collect::<Result<Vec<_>>>()?;
        let best_h = areas
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
            .map(|(i, _)| i as u64 + 1)
            .expect("n >= 1");
        rows.push(CnhRow { n, areas, best_h });
    }
    Ok(CnhTable {
        level,
        seed: sampler.seed,
        rows,
    })
}

/// Angles measured from `anchor`, sorted, with values within `tol` of a full
/// turn folded to 0.
fn relative_angles(angles: &[f64], anchor: f64, tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = angles
        .iter()
        .map(|a| {
            let d = (a - anchor).rem_euclid(TAU);
            if TAU - d <= tol {
                0.0
            } else {
                d
            }
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Whether `b` is a rotation of `a` or of its conjugate, root by root within `tol` radians.
pub fn equivalent_up_to_symmetry(a: &RootConfiguration, b: &RootConfiguration, tol: f64) -> bool {
    if a.degree() != b.degree()
        || a.tag() != ConstraintTag::UnitCircle
        || b.tag() != ConstraintTag::UnitCircle
    {
        return false;
    }
    let tb = b.sorted_angles();
    for candidate in [a.clone(), a.conjugated()] {
        let ta = candidate.sorted_angles();
        let ra = relative_angles(&ta, ta[0], tol);
        for &anchor in &tb {
            let rb = relative_angles(&tb, anchor, tol);
            if ra.iter().zip(&rb).all(|(x, y)| (x - y).abs() <= tol) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::area::estimate_area;
    use proptest::prelude::*;

    fn sampler(p: u64, trials: u32, seed: u64) -> SamplerConfig {
        SamplerConfig::triangular(p, trials, seed).unwrap()
    }

    fn count_by_enumeration(space: &SearchSpace) -> u128 {
        let mut k = 0u128;
        space
            .for_each_candidate(|c| {
                assert_eq!(c.config.degree(), space.n);
                k += 1;
                Ok(())
            })
            .unwrap();
        k
    }

    #[test]
    fn counts_match_enumeration() {
        let mut spaces = vec![
            SearchSpace::symmetric(5, 10),
            SearchSpace::symmetric(6, 7),
            SearchSpace::unrestricted(3, 9),
            SearchSpace::unrestricted(4, 8),
        ];
        spaces.push(SearchSpace { anchor_one: true, ..SearchSpace::symmetric(4, 6) });
        spaces.push(SearchSpace { anchor_one: true, ..SearchSpace::unrestricted(3, 7) });
        spaces.push(SearchSpace { multiplicity_cap: Some(2), ..SearchSpace::unrestricted(4, 5) });
        spaces.push(SearchSpace { multiplicity_cap: Some(1), max_pairs: Some(1), ..SearchSpace::symmetric(4, 9) });
        for s in &spaces {
            assert_eq!(s.candidate_count().unwrap(), count_by_enumeration(s), "{s:?}");
        }
        assert_eq!(SearchSpace::unrestricted(3, 9).candidate_count().unwrap(), 84);
        // q+s+2r = 4 with m=10: 5 + 3·9 + 1·36.
        assert_eq!(SearchSpace::symmetric(4, 10).candidate_count().unwrap(), 68);
    }

    #[test]
    fn symmetric_candidates_are_conjugation_invariant() {
        SearchSpace::symmetric(5, 8)
            .for_each_candidate(|c| {
                let mut a = c.config.sorted_angles();
                let mut b = c.config.conjugated().sorted_angles();
                a.iter_mut().chain(b.iter_mut()).for_each(|x| *x = (*x * 1e9).round());
                assert_eq!(a, b);
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn budget_guard() {
        let space = SearchSpace { budget: 100, ..SearchSpace::unrestricted(5, 20) };
        match exhaustive_search(&space, 1.0, &sampler(1000, 1, 1)) {
            Err(LemniError::BudgetExceeded { count, budget }) => {
                assert_eq!(count, 15504);
                assert_eq!(budget, 100);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn antipodal_pair_wins_for_n2() {
        let report = exhaustive_search(&SearchSpace::unrestricted(2, 8), 1.0, &sampler(20_000, 2, 3)).unwrap();
        assert_eq!(report.evaluated, 28);
        let pair = RootConfiguration::roots_of_unity(2).unwrap();
        assert!(equivalent_up_to_symmetry(&report.best, &pair, 1e-9));
        let min = report.trace.iter().map(|r| r.area_mean).fold(f64::INFINITY, f64::min);
        assert_eq!(report.best_area.mean, min);
        let refined = report.refined_area.unwrap();
        assert!(refined.points_per_trial > 9 * report.best_area.points_per_trial);
    }

    #[test]
    fn cube_roots_win_for_n3() {
        let report = exhaustive_search(&SearchSpace::symmetric(3, 24), 1.0, &sampler(20_000, 4, 11)).unwrap();
        let cube = RootConfiguration::roots_of_unity(3).unwrap();
        assert!(equivalent_up_to_symmetry(&report.best, &cube, 1e-9), "{:?}", report.best.sorted_angles());
    }

    #[test]
    fn ties_and_ranking_are_consistent() {
        let report = exhaustive_search(&SearchSpace::symmetric(4, 12), 1.0, &sampler(5_000, 3, 5)).unwrap();
        let b = &report.best_area;
        for t in &report.ties {
            assert!(t.area_mean >= b.mean);
            assert!(t.area_mean - b.mean <= (b.stddev.powi(2) + t.area_std.powi(2)).sqrt());
        }
        let idx = argmin_of_trace(&report.trace).unwrap().unwrap();
        assert_eq!(report.trace[idx].area_mean, b.mean);
        assert_eq!(report.trace[idx].parsed_angles().unwrap(), report.best.sorted_angles());
    }

    #[test]
    fn same_seed_same_report() {
        let space = SearchSpace::symmetric(3, 10);
        let a = exhaustive_search(&space, 1.0, &sampler(3_000, 2, 9)).unwrap();
        let b = exhaustive_search(&space, 1.0, &sampler(3_000, 2, 9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trace, b.trace);
    }

    #[test]
    fn persistence_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        let mut report = exhaustive_search(&SearchSpace::symmetric(4, 8), 1.0, &sampler(2_000, 2, 4)).unwrap();
        let trace_path = report.save(&path).unwrap();
        assert!(trace_path.ends_with("run.trace.csv"));
        let loaded = SearchReport::load(&path).unwrap();
        assert_eq!(loaded, report);
        assert_eq!(loaded.trace.len() as u64, loaded.evaluated);
        let rows = read_trace(&trace_path).unwrap();
        let idx = argmin_of_trace(&rows).unwrap().unwrap();
        assert_eq!(rows[idx].parsed_angles().unwrap(), report.best.sorted_angles());
        let missing = SearchReport::load(&dir.path().join("absent.json"));
        assert!(matches!(missing, Err(LemniError::Io { ref path, .. }) if path.ends_with("absent.json")));
    }

    #[test]
    fn local_search_stays_at_local_minimum() {
        let start = RootConfiguration::from_angles_over_2pi(&[0.0, 0.5], Some(&[2, 1])).unwrap();
        let report = local_search(&start, 1.0, &sampler(20_000, 4, 2), 24, 20).unwrap();
        assert_eq!(report.converged, Some(true));
        // {1,−1,−1} is the same configuration turned by π, so a noise-level
        // move between the two is still "staying there".
        assert!(equivalent_up_to_symmetry(&report.best, &start, 1e-12));
    }

    #[test]
    fn local_search_keeps_cube_roots() {
        let start = RootConfiguration::roots_of_unity(3).unwrap();
        let report = local_search(&start, 1.0, &sampler(20_000, 4, 2), 24, 20).unwrap();
        assert_eq!(report.cycles, Some(1));
        assert!(equivalent_up_to_symmetry(&report.best, &start, 1e-12));
    }

    #[test]
    fn local_search_from_random_starts_is_fast() {
        use rand::{Rng, SeedableRng};
        for seed in 0..20u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let turns: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
            let start = RootConfiguration::from_angles_over_2pi(&turns, None).unwrap();
            let report = local_search(&start, 1.0, &sampler(20_000, 4, seed), 24, 50).unwrap();
            assert_eq!(report.converged, Some(true));
            assert!(report.cycles.unwrap() <= 5, "seed {seed}: {:?}", report.cycles);
            assert!(report.best_area.mean <= report.trace[0].area_mean);
        }
    }

    #[test]
    fn arc_grid() {
        let step = TAU / 8.0;
        assert_eq!(arc_candidates(0.0, PI, 8), vec![0.0, step, 2.0 * step, 3.0 * step, PI]);
        let c = arc_candidates(0.1, 0.2, 8);
        assert_eq!(c, vec![0.1, 0.2]);
        let full = arc_candidates(PI, TAU, 4);
        assert_eq!(full, vec![PI, 1.5 * PI, TAU]);
    }

    #[test]
    fn cnh_sweep_small() {
        let table = cnh_sweep(2, 5, 1.0, &sampler(20_000, 4, 8)).unwrap();
        assert_eq!(table.rows.len(), 4);
        assert_eq!(table.rows[1].areas.len(), 3);
        assert_eq!(table.rows[1].best_h, 1);
        assert_eq!(table.rows[3].best_h, 2);
        // C_{n,n} is a single root of multiplicity n: area π.
        let full = table.rows[3].areas.last().unwrap();
        assert!((full.mean - PI).abs() < 4.0 * full.stddev.max(1e-3));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cnh.csv");
        table.write_csv(&path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 + 3 + 4 + 5);
    }

    #[test]
    fn no_symmetry_agrees_on_tiny_instances() {
        for (n, m) in [(2u64, 12u64), (3, 12)] {
            let cfg = sampler(20_000, 4, 21);
            let a = exhaustive_search(&SearchSpace::symmetric(n, m), 1.0, &cfg).unwrap();
            let b = exhaustive_search(&SearchSpace::unrestricted(n, m), 1.0, &cfg).unwrap();
            let tol = 2.0 * (a.best_area.stddev.powi(2) + b.best_area.stddev.powi(2)).sqrt();
            assert!((a.best_area.mean - b.best_area.mean).abs() <= tol.max(1e-3));
        }
    }

    #[test]
    fn symmetric_search_dominates_family() {
        let cfg = sampler(5_000, 2, 13);
        let report = exhaustive_search(&SearchSpace::symmetric(4, 8), 1.0, &cfg).unwrap();
        // Both C_{4,h} representatives lie in this space after rotation; score them on the same plan.
        let plan = plan_for(4, 1.0, &cfg).unwrap();
        let family_min = (1..=4)
            .map(|h| {
                let c = c_nh(4, h).unwrap();
                let a = c.sorted_angles()[0];
                score(&plan, &c.rotated(-a), 1.0).unwrap().mean
            })
            .fold(f64::INFINITY, f64::min);
        assert!(report.best_area.mean <= family_min + 1e-12);
        let direct = estimate_area(&LevelSetSpec::new(report.best.clone(), 1.0).unwrap(), &cfg).unwrap();
        assert_eq!(direct.mean, report.best_area.mean);
    }

    #[test]
    fn equivalence_examples() {
        let a = RootConfiguration::from_angles_over_2pi(&[0.0, 0.375, 0.625], Some(&[2, 1, 1])).unwrap();
        assert!(equivalent_up_to_symmetry(&a, &c_nh(4, 2).unwrap(), 1e-9));
        let b = RootConfiguration::from_angles_over_2pi(&[0.0, 0.3, 0.5], None).unwrap();
        assert!(equivalent_up_to_symmetry(&b, &b.conjugated().rotated(1.0), 1e-9));
        assert!(!equivalent_up_to_symmetry(&b, &RootConfiguration::roots_of_unity(3).unwrap(), 1e-6));
    }

    proptest! {
        #[test]
        fn rotation_and_conjugation_are_equivalences(
            turns in proptest::collection::vec(0.0f64..1.0, 1..7),
            rot in -10.0f64..10.0,
            flip in any::<bool>(),
        ) {
            let a = RootConfiguration::from_angles_over_2pi(&turns, None).unwrap();
            let b = if flip { a.conjugated() } else { a.clone() }.rotated(rot);
            prop_assert!(equivalent_up_to_symmetry(&a, &b, 1e-9));
        }
    }
}
