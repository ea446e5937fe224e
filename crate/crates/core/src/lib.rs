//! Numerical laboratory for polynomial lemniscates `Λ_p(t) = {z : |p(z)| < t}`.

pub mod area;
pub mod constructions;
pub mod error;
pub mod metrics;
pub mod parallel;
pub mod poly;
pub mod potential;
pub mod search;

pub use area::{
    bounding_radius, erdos_area_closed_form, estimate_area, estimate_area_inside_disc, AreaEstimate,
    SamplePlan, SamplerConfig, SamplerKind,
};
pub use error::{LemniError, Result};
pub use num_complex::Complex64;
pub use poly::{blaschke_map, random_disc_configuration, ComplexPoint, ConstraintTag, LevelSetSpec, Root, RootConfiguration};
pub use constructions::{
    c_nh, named_family, push_zeros_deterministic, push_zeros_probabilistic, wagner_coefficients,
    wagner_polynomial, FamilyKind, PushResult, WagnerParams, WagnerPolynomial,
};
pub use potential::{equal_mass_partition, CircleMeasure, DiscreteCircleMeasure};
pub use search::{
    cnh_sweep, exhaustive_search, local_search, CnhTable, SearchReport, SearchSpace, Symmetry,
};
