use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "lemnikit", version, about = "Numerical laboratory for polynomial lemniscates")]
pub struct Cli {
    /// Seed for every sampler and random draw.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads (defaults to LEMNIKIT_THREADS, then to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Primary output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Monte Carlo area of one lemniscate.
    Area(AreaArgs),
    /// Sampler errors against the closed form for z^n - 1.
    BenchSamplers(BenchArgs),
    /// Scaled-down exhaustive searches, found vs expected minimizers.
    TableMinimizers(TableArgs),
    /// Run one inequality or construction check.
    Verify(VerifyArgs),
    #[command(subcommand)]
    Construct(ConstructCommand),
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    /// erdos, erdos-deflated, stretched or cnh.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "n")]
    pub n: Option<u64>,
    /// Merge parameter for `--family cnh`.
    #[arg(long = "h")]
    pub h: Option<u64>,
    /// Configuration JSON, or `@path` to read it from a file.
    #[arg(long)]
    pub roots: Option<String>,
    /// Level t of the lemniscate {|p| < t}.
    #[arg(long = "t", default_value_t = 1.0)]
    pub t: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerArg {
    Triangular,
    Square,
    Uniform,
}

#[derive(Args, Debug, Clone)]
pub struct SamplerArgs {
    /// Target number of sample points per trial inside the bounding disc.
    #[arg(long = "p", default_value_t = 100_000)]
    pub p: u64,
    #[arg(long, default_value_t = 6)]
    pub trials: u32,
    #[arg(long, value_enum, default_value_t = SamplerArg::Triangular)]
    pub sampler: SamplerArg,
    /// Bounding radius; required for configurations with roots off the disc.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct AreaArgs {
    #[command(flatten)]
    pub target: Target,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write the contour as SVG.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 10)]
    pub n_max: u64,
    #[arg(long = "p", default_value_t = 100_000)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u32,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 6)]
    pub n_max: u64,
    #[arg(long = "p", default_value_t = 20_000)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub trials: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Inradius,
    Perimeter,
    Chain,
    Reflection,
    Crane,
    SignChanges,
    Pushing,
    Wagner,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub check: Check,
    #[command(flatten)]
    pub target: Target,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Grid resolution for inradius and perimeter.
    #[arg(long, default_value_t = 1024)]
    pub resolution: usize,
    /// Relative tolerance for the perimeter and chain checks.
    #[arg(long, default_value_t = 0.05)]
    pub rel_tol: f64,
    /// Samples for the reflection check.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Random circles for the sign-change check.
    #[arg(long, default_value_t = 100)]
    pub circles: usize,
    /// Inner polynomial for the Crane check, `z^d` or configuration JSON.
    #[arg(long)]
    pub inner: Option<String>,
    /// Outer family for the Crane check (same names as --family).
    #[arg(long)]
    pub outer_family: Option<String>,
    #[arg(long, default_value_t = 0.3)]
    pub eps: f64,
    /// Use a random configuration of this degree in the closed disc.
    #[arg(long)]
    pub random_degree: Option<usize>,
    /// Probabilistic pushing with this many samples per inner zero.
    #[arg(long = "L")]
    pub l: Option<u64>,
    #[arg(long = "R", default_value_t = 1.1)]
    pub r: f64,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCommand {
    /// Small-area polynomial from the Wagner-type measure.
    Wagner(WagnerArgs),
    /// Push zeros of a disc configuration onto the circle.
    Push(PushArgs),
    /// One of the named example families.
    Family(FamilyArgs),
}

#[derive(Args, Debug)]
pub struct WagnerArgs {
    #[arg(long = "R")]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
}

#[derive(Args, Debug)]
pub struct PushArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub random_degree: Option<usize>,
    /// Sample replacements from harmonic measure instead of Blaschke images.
    #[arg(long)]
    pub prob: bool,
    #[arg(long = "L")]
    pub l: Option<u64>,
    /// Round 6/ε² up instead of down.
    #[arg(long)]
    pub ceil: bool,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// erdos, erdos-deflated, stretched or cnh.
    #[arg(long)]
    pub kind: String,
    #[arg(long = "n")]
    pub n: u64,
    #[arg(long = "h")]
    pub h: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum SearchCommand {
    /// Score every configuration of a grid search space.
    Exhaustive(ExhaustiveArgs),
    /// Cyclic coordinate descent from a starting configuration.
    Local(LocalArgs),
    /// Areas of C_{n,h} for all h.
    Cnh(CnhArgs),
}

#[derive(Args, Debug)]
pub struct ExhaustiveArgs {
    #[arg(long = "n")]
    pub n: u64,
    #[arg(long = "m")]
    pub m: u64,
    #[arg(long = "t", default_value_t = 1.0)]
    pub t: f64,
    #[arg(long = "p", default_value_t = 20_000)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub trials: u32,
    /// Search n-subsets of the m-th roots of unity instead of conjugate-symmetric sets.
    #[arg(long)]
    pub no_symmetry: bool,
    #[arg(long)]
    pub anchor_one: bool,
    #[arg(long)]
    pub multiplicity_cap: Option<u64>,
    #[arg(long)]
    pub max_pairs: Option<u64>,
    #[arg(long, default_value_t = lemnikit::search::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LocalArgs {
    /// Starting configuration JSON file.
    #[arg(long)]
    pub init: PathBuf,
    /// Grid points per full turn used to discretize each arc.
    #[arg(long, default_value_t = 24)]
    pub arc_steps: usize,
    #[arg(long, default_value_t = 50)]
    pub max_cycles: u32,
    #[arg(long = "t", default_value_t = 1.0)]
    pub t: f64,
    #[arg(long = "p", default_value_t = 20_000)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub trials: u32,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CnhArgs {
    #[arg(long)]
    pub n_min: u64,
    #[arg(long)]
    pub n_max: u64,
    #[arg(long = "t", default_value_t = 1.0)]
    pub t: f64,
    #[arg(long = "p", default_value_t = 20_000)]
    pub p: u64,
    #[arg(long, default_value_t = 4)]
    pub trials: u32,
}
