//! Criterion benchmarks for lemnikit; see `benches/`.

use lemnikit::{LevelSetSpec, RootConfiguration};

pub fn erdos_spec(n: u64) -> LevelSetSpec {
    LevelSetSpec::new(RootConfiguration::roots_of_unity(n).unwrap(), 1.0).unwrap()
}
