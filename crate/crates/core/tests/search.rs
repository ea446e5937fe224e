use lemnikit::search::{argmin_of_trace, equivalent_up_to_symmetry, read_trace};
use lemnikit::*;

fn tri(p: u64, trials: u32, seed: u64) -> SamplerConfig {
    SamplerConfig::triangular(p, trials, seed).unwrap()
}

#[test]
fn n4_minimizer_is_c42() {
    let report = exhaustive_search(&SearchSpace::symmetric(4, 24), 1.0, &tri(20_000, 4, 1)).unwrap();
    let expected = RootConfiguration::from_angles_over_2pi(&[0.0, 0.375, 0.625], Some(&[2, 1, 1])).unwrap();
    assert!(equivalent_up_to_symmetry(&report.best, &expected, 1e-9));
    assert!(equivalent_up_to_symmetry(&report.best, &c_nh(4, 2).unwrap(), 1e-9));
}

#[test]
fn anchored_unrestricted_search_agrees_with_symmetric() {
    let cfg = tri(20_000, 4, 3);
    let sym = exhaustive_search(&SearchSpace::symmetric(3, 12), 1.0, &cfg).unwrap();
    let space = SearchSpace { anchor_one: true, ..SearchSpace::unrestricted(3, 12) };
    let free = exhaustive_search(&space, 1.0, &cfg).unwrap();
    assert_eq!(free.evaluated, 55);
    assert!(equivalent_up_to_symmetry(&sym.best, &free.best, 1e-9));
}

#[test]
fn saved_trace_reproduces_winner() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n5.json");
    let mut report = exhaustive_search(&SearchSpace::symmetric(5, 10), 1.0, &tri(5_000, 2, 6)).unwrap();
    let trace = report.save(&path).unwrap();
    let rows = read_trace(&trace).unwrap();
    assert_eq!(rows.len() as u64, report.evaluated);
    let i = argmin_of_trace(&rows).unwrap().unwrap();
    assert_eq!(rows[i].area_mean, report.best_area.mean);
    assert_eq!(SearchReport::load(&path).unwrap(), report);
}

#[test]
fn exhaustive_beats_local_minimum_significantly() {
    let cfg = tri(20_000, 4, 1);
    let start = RootConfiguration::from_angles_over_2pi(&[0.0, 0.5], Some(&[2, 1])).unwrap();
    let local = local_search(&start, 1.0, &cfg, 24, 20).unwrap();
    let global = exhaustive_search(&SearchSpace::symmetric(3, 24), 1.0, &cfg).unwrap();
    let combined = (local.best_area.stddev.powi(2) + global.best_area.stddev.powi(2)).sqrt();
    assert!(local.best_area.mean - global.best_area.mean > 5.0 * combined);
}
