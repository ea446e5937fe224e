use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use lemnikit::constructions::{push_multiplier, Rounding};
use lemnikit::metrics::{
    discrepancy, trace_contour, verify_area_inradius_perimeter, verify_crane, verify_inradius_area,
    verify_perimeter_area, verify_reflection, verify_sign_change_bound, VerifyReport,
};
use lemnikit::search::equivalent_up_to_symmetry;
use lemnikit::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::args::*;
use crate::manifest::Recorder;

pub struct Ctx {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub rec: Recorder,
}

impl Ctx {
    /// Writes the primary output to `--out` or stdout.
    fn emit(&mut self, text: &str) -> Result<()> {
        match self.out.clone() {
            Some(p) => self.write_file(&p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn write_file(&mut self, path: &Path, text: &str) -> Result<()> {
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        self.rec.output(path);
        Ok(())
    }

    fn read_input(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.rec.input(path);
        Ok(text)
    }

    fn sampler(&self, args: &SamplerArgs) -> Result<SamplerConfig> {
        let kind = match args.sampler {
            SamplerArg::Triangular => SamplerKind::TriangularLattice,
            SamplerArg::Square => SamplerKind::SquareLattice,
            SamplerArg::Uniform => SamplerKind::UniformRandom,
        };
        let cfg = SamplerConfig::new(kind, args.p, args.trials, self.seed)?;
        Ok(match args.radius {
            Some(r) => cfg.with_radius(r)?,
            None => cfg,
        })
    }

    fn triangular(&self, p: u64, trials: u32) -> Result<SamplerConfig> {
        Ok(SamplerConfig::triangular(p, trials, self.seed)?)
    }

    fn parse_config(&mut self, spec: &str) -> Result<RootConfiguration> {
        let text = match spec.strip_prefix('@') {
            Some(path) => self.read_input(Path::new(path))?,
            None => spec.to_string(),
        };
        serde_json::from_str(&text).context("parsing configuration JSON")
    }

    fn target_config(&mut self, target: &Target) -> Result<RootConfiguration> {
        match (&target.roots, &target.family) {
            (Some(roots), None) => self.parse_config(roots),
            (None, Some(family)) => {
                let n = target.n.ok_or_else(|| anyhow!("--family needs --n"))?;
                family_config(family, n, target.h)
            }
            (Some(_), Some(_)) => bail!("give either --roots or --family, not both"),
            (None, None) => bail!("no configuration: give --family/--n or --roots"),
        }
    }

    fn svg(&mut self, path: &Path, config: &RootConfiguration, t: f64) -> Result<()> {
        let spec = LevelSetSpec::new(config.clone(), t)?;
        let svg = trace_contour(&spec, 512, None)?.to_svg(600);
        self.write_file(path, &svg)
    }
}

fn family_config(name: &str, n: u64, h: Option<u64>) -> Result<RootConfiguration> {
    if name.eq_ignore_ascii_case("cnh") {
        let h = h.ok_or_else(|| anyhow!("--family cnh needs --h"))?;
        return Ok(c_nh(n, h)?);
    }
    Ok(named_family(FamilyKind::from_str(name)?, n)?)
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    Ok(String::from_utf8(w.into_inner().map_err(|e| anyhow!("{e}"))?)?)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

pub fn area(ctx: &mut Ctx, args: &AreaArgs) -> Result<bool> {
    let config = ctx.target_config(&args.target)?;
    let spec = LevelSetSpec::new(config.clone(), args.target.t)?;
    let est = estimate_area(&spec, &ctx.sampler(&args.sampler)?)?;
    let text = match args.format {
        Format::Json => json(&est)?,
        Format::Csv => csv_text(|w| Ok(w.serialize(&est)?))?,
    };
    ctx.emit(&text)?;
    if let Some(path) = &args.svg {
        ctx.svg(path, &config, args.target.t)?;
    }
    Ok(true)
}

#[derive(Serialize)]
struct BenchRow {
    n: u64,
    closed_form: f64,
    square_err: f64,
    triangular_err: f64,
    uniform_err: f64,
}

pub fn bench_samplers(ctx: &mut Ctx, args: &BenchArgs) -> Result<bool> {
    let mut rows = Vec::new();
    for n in 2..=args.n_max {
        let spec = LevelSetSpec::new(RootConfiguration::roots_of_unity(n)?, 1.0)?;
        let exact = erdos_area_closed_form(n)?;
        let err = |kind| -> Result<f64> {
            let cfg = SamplerConfig::new(kind, args.p, args.trials, ctx.seed)?;
            Ok(estimate_area(&spec, &cfg)?.mean - exact)
        };
        rows.push(BenchRow {
            n,
            closed_form: exact,
            square_err: err(SamplerKind::SquareLattice)?,
            triangular_err: err(SamplerKind::TriangularLattice)?,
            uniform_err: err(SamplerKind::UniformRandom)?,
        });
    }
    let max = |f: fn(&BenchRow) -> f64| rows.iter().map(|r| f(r).abs()).fold(0.0, f64::max);
    log::info!(
        "max |err|: square {:.2e}, triangular {:.2e}, uniform {:.2e}",
        max(|r| r.square_err),
        max(|r| r.triangular_err),
        max(|r| r.uniform_err)
    );
    let text = csv_text(|w| {
        for r in &rows {
            w.serialize(r)?;
        }
        Ok(())
    })?;
    ctx.emit(&text)?;
    Ok(true)
}

/// Grid and expected minimizer per degree. n = 7, 8 use the 2n-th roots of
/// unity (m = n) and five times the points, since the competing C_{n,h} are
/// within a few thousandths of each other there.
fn minimizer_plan(n: u64) -> Option<(u64, u64)> {
    match n {
        3 => Some((24, 1)),
        4 => Some((24, 2)),
        5 => Some((20, 2)),
        6 => Some((24, 2)),
        7 => Some((7, 2)),
        8 => Some((8, 3)),
        _ => None,
    }
}

#[derive(Serialize)]
struct MinimizerRow {
    n: u64,
    m: u64,
    expected: String,
    found: String,
    matches: bool,
    area_mean: f64,
    area_std: f64,
    discrepancy: f64,
}

fn describe(config: &RootConfiguration, n: u64) -> String {
    for h in 1..=n {
        if c_nh(n, h).is_ok_and(|c| equivalent_up_to_symmetry(config, &c, 1e-9)) {
            return format!("C_{{{n},{h}}}");
        }
    }
    config
        .sorted_angles()
        .iter()
        .map(|a| format!("{:.4}pi", a / PI))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn table_minimizers(ctx: &mut Ctx, args: &TableArgs) -> Result<bool> {
    let mut rows = Vec::new();
    for n in 3..=args.n_max {
        let (m, h) = minimizer_plan(n).ok_or_else(|| anyhow!("no minimizer table entry for n={n} (3..=8)"))?;
        let sampler = if n >= 7 {
            ctx.triangular(args.p * 5, args.trials.max(6))?
        } else {
            ctx.triangular(args.p, args.trials)?
        };
        let report = exhaustive_search(&SearchSpace::symmetric(n, m), 1.0, &sampler)?;
        let expected = c_nh(n, h)?;
        rows.push(MinimizerRow {
            n,
            m,
            expected: format!("C_{{{n},{h}}}"),
            found: describe(&report.best, n),
            matches: equivalent_up_to_symmetry(&report.best, &expected, 1e-9),
            area_mean: report.best_area.mean,
            area_std: report.best_area.stddev,
            discrepancy: discrepancy(&report.best)?,
        });
    }
    let pass = rows.iter().all(|r| r.matches);
    let text = csv_text(|w| {
        for r in &rows {
            w.serialize(r)?;
        }
        Ok(())
    })?;
    ctx.emit(&text)?;
    Ok(pass)
}

#[derive(Serialize)]
struct VerifyOutput {
    check: String,
    pass: bool,
    failures: Vec<String>,
    reports: Vec<VerifyReport>,
}

fn report(check: &str, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> VerifyReport {
    VerifyReport {
        check: check.to_string(),
        lhs,
        rhs,
        margin,
        tolerance,
        pass: margin >= -tolerance,
    }
}

fn parse_inner(ctx: &mut Ctx, spec: Option<&str>) -> Result<RootConfiguration> {
    let spec = spec.unwrap_or("z^2").trim();
    let power = match spec {
        "z" => Some(1),
        s => s.strip_prefix("z^").map(|d| d.trim().parse::<u64>()).transpose()?,
    };
    match power {
        Some(d) => Ok(RootConfiguration::new(
            vec![Root { location: Complex64::new(0.0, 0.0), mult: d }],
            ConstraintTag::UnitDisc,
        )?),
        None => ctx.parse_config(spec),
    }
}

fn verify_config(ctx: &mut Ctx, args: &VerifyArgs) -> Result<RootConfiguration> {
    match args.random_degree {
        Some(n) => Ok(random_disc_configuration(n, ctx.seed)?),
        None => ctx.target_config(&args.target),
    }
}

pub fn verify(ctx: &mut Ctx, args: &VerifyArgs) -> Result<bool> {
    let t = args.target.t;
    let sampler = ctx.sampler(&args.sampler)?;
    let reports = match args.check {
        Check::Inradius => {
            let spec = LevelSetSpec::new(verify_config(ctx, args)?, t)?;
            vec![verify_inradius_area(&spec, args.resolution, &sampler)?]
        }
        Check::Perimeter => {
            let spec = LevelSetSpec::new(verify_config(ctx, args)?, t)?;
            vec![verify_perimeter_area(&spec, args.resolution, &sampler, args.rel_tol)?]
        }
        Check::Chain => {
            let spec = LevelSetSpec::new(verify_config(ctx, args)?, t)?;
            vec![verify_area_inradius_perimeter(&spec, args.resolution, &sampler, args.rel_tol)?]
        }
        Check::Reflection => vec![verify_reflection(&verify_config(ctx, args)?, args.samples, ctx.seed)],
        Check::Crane => {
            let inner = parse_inner(ctx, args.inner.as_deref())?;
            let outer = match &args.outer_family {
                Some(f) => family_config(f, args.target.n.ok_or_else(|| anyhow!("--outer-family needs --n"))?, args.target.h)?,
                None => verify_config(ctx, args)?,
            };
            vec![verify_crane(&outer, &inner, t, &sampler)?]
        }
        Check::SignChanges => {
            let config = verify_config(ctx, args)?;
            let samples = (64 * config.degree() as usize).max(512);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut out = Vec::with_capacity(args.circles);
            for _ in 0..args.circles {
                let center = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                let radius = rng.random_range(0.05..2.0);
                out.push(verify_sign_change_bound(&config, t, center, radius, samples)?);
            }
            out
        }
        Check::Pushing => {
            let config = verify_config(ctx, args)?;
            let result = match args.l {
                Some(l) => push_zeros_probabilistic(&config, args.eps, l, ctx.seed)?,
                None => push_zeros_deterministic(&config, args.eps, Rounding::Floor)?,
            };
            let expected_degree = result.l * config.degree();
            vec![
                report("pushing_margin", result.comparison_margin, 0.0, result.comparison_margin, 0.0),
                report(
                    "pushing_degree",
                    result.pushed.degree() as f64,
                    expected_degree as f64,
                    -((result.pushed.degree() as f64) - expected_degree as f64).abs(),
                    0.0,
                ),
            ]
        }
        Check::Wagner => {
            let w = wagner_polynomial(&WagnerParams::new(args.r))?;
            let vmin = w.measure.min_density(10_000);
            let vmax = w.measure.max_density(10_000);
            let log_level = w.level.ln();
            let worst = (0..1000)
                .map(|k| w.config.log_abs_eval(Complex64::from_polar(3.0, TAU * k as f64 / 1000.0)))
                .fold(f64::INFINITY, f64::min);
            vec![
                report("density_lower", vmin, 0.5, vmin - 0.5, 1e-12),
                report("density_upper", vmax, 1.5, 1.5 - vmax, 1e-12),
                report("containment_radius_3", worst, log_level, worst - log_level, 0.0),
            ]
        }
    };
    let failures: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| r.check.clone()).collect();
    let pass = failures.is_empty();
    let out = VerifyOutput {
        check: format!("{:?}", args.check).to_lowercase(),
        pass,
        failures,
        reports,
    };
    ctx.emit(&json(&out)?)?;
    Ok(pass)
}

/// Primary output gets the configuration; the report goes next to it, or both
/// go to stdout as one document.
fn emit_construction<R: Serialize>(ctx: &mut Ctx, config: &RootConfiguration, report: &R) -> Result<()> {
    match ctx.out.clone() {
        Some(path) => {
            ctx.write_file(&path, &json(config)?)?;
            ctx.write_file(&with_suffix(&path, ".report.json"), &json(report)?)
        }
        None => {
            #[derive(Serialize)]
            struct Both<'a, R> {
                configuration: &'a RootConfiguration,
                report: &'a R,
            }
            ctx.emit(&json(&Both { configuration: config, report })?)
        }
    }
}

#[derive(Serialize)]
struct WagnerReport {
    #[serde(rename = "R")]
    r: f64,
    alpha: f64,
    m: u64,
    n: usize,
    a_ratio: f64,
    tail_bound: f64,
    level: f64,
    generator_bound: Option<f64>,
    density_min: f64,
    density_max: f64,
    min_log_abs_on_radius_3: f64,
    pass: bool,
}

pub fn construct(ctx: &mut Ctx, cmd: &ConstructCommand) -> Result<bool> {
    match cmd {
        ConstructCommand::Wagner(a) => {
            let params = WagnerParams {
                r: a.r,
                truncation_tolerance: a.tol,
                alpha: a.alpha,
                degree_cap: a.cap,
            };
            let w = wagner_polynomial(&params)?;
            let density_min = w.measure.min_density(10_000);
            let density_max = w.measure.max_density(10_000);
            let min_log = (0..1000)
                .map(|k| w.config.log_abs_eval(Complex64::from_polar(3.0, TAU * k as f64 / 1000.0)))
                .fold(f64::INFINITY, f64::min);
            let pass = density_min >= 0.5 - 1e-12 && density_max <= 1.5 + 1e-12 && min_log > w.level.ln();
            let report = WagnerReport {
                r: a.r,
                alpha: a.alpha,
                m: w.m,
                n: w.n,
                a_ratio: w.a_ratio,
                tail_bound: w.tail_bound,
                level: w.level,
                generator_bound: w.generator_bound,
                density_min,
                density_max,
                min_log_abs_on_radius_3: min_log,
                pass,
            };
            emit_construction(ctx, &w.config, &report)?;
            Ok(pass)
        }
        ConstructCommand::Push(a) => {
            let config = match a.random_degree {
                Some(n) => random_disc_configuration(n, ctx.seed)?,
                None => ctx.target_config(&a.target)?,
            };
            let rounding = if a.ceil { Rounding::Ceil } else { Rounding::Floor };
            let result = if a.prob {
                let l = match a.l {
                    Some(l) => l,
                    None => push_multiplier(a.eps, rounding)?,
                };
                push_zeros_probabilistic(&config, a.eps, l, ctx.seed)?
            } else {
                push_zeros_deterministic(&config, a.eps, rounding)?
            };
            #[derive(Serialize)]
            struct PushReport {
                #[serde(rename = "L")]
                l: u64,
                epsilon: f64,
                comparison_margin: f64,
                inner_zeros: u64,
                bad_event_bound: Option<f64>,
                degree: u64,
                pass: bool,
            }
            let pass = result.comparison_margin >= 0.0;
            let report = PushReport {
                l: result.l,
                epsilon: result.epsilon,
                comparison_margin: result.comparison_margin,
                inner_zeros: result.inner_zeros,
                bad_event_bound: result.bad_event_bound,
                degree: result.pushed.degree(),
                pass,
            };
            emit_construction(ctx, &result.pushed, &report)?;
            Ok(pass)
        }
        ConstructCommand::Family(a) => {
            let config = family_config(&a.kind, a.n, a.h)?;
            ctx.emit(&json(&config)?)?;
            Ok(true)
        }
    }
}

fn finish_search(ctx: &mut Ctx, mut report: SearchReport, svg: Option<&Path>) -> Result<()> {
    match ctx.out.clone() {
        Some(path) => {
            let trace = report.save(&path)?;
            ctx.rec.output(&path);
            ctx.rec.output(&trace);
        }
        None => ctx.emit(&json(&report)?)?,
    }
    if let Some(svg) = svg {
        ctx.svg(svg, &report.best, report.level)?;
    }
    Ok(())
}

pub fn search(ctx: &mut Ctx, cmd: &SearchCommand) -> Result<bool> {
    match cmd {
        SearchCommand::Exhaustive(a) => {
            let space = SearchSpace {
                n: a.n,
                m: a.m,
                symmetry: if a.no_symmetry { Symmetry::None } else { Symmetry::ConjugateSymmetric },
                anchor_one: a.anchor_one,
                multiplicity_cap: a.multiplicity_cap,
                max_pairs: a.max_pairs,
                budget: a.budget,
            };
            let report = exhaustive_search(&space, a.t, &ctx.triangular(a.p, a.trials)?)?;
            finish_search(ctx, report, a.svg.as_deref())?;
        }
        SearchCommand::Local(a) => {
            let text = ctx.read_input(&a.init)?;
            let init: RootConfiguration = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", a.init.display()))?;
            let report = local_search(&init, a.t, &ctx.triangular(a.p, a.trials)?, a.arc_steps, a.max_cycles)?;
            finish_search(ctx, report, a.svg.as_deref())?;
        }
        SearchCommand::Cnh(a) => {
            let table = cnh_sweep(a.n_min, a.n_max, a.t, &ctx.triangular(a.p, a.trials)?)?;
            match ctx.out.clone() {
                Some(path) => {
                    table.write_csv(&path)?;
                    ctx.rec.output(&path);
                }
                None => {
                    let text = csv_text(|w| {
                        w.write_record(["n", "h", "area_mean", "area_std", "best"])?;
                        for row in &table.rows {
                            for (i, e) in row.areas.iter().enumerate() {
                                let h = i as u64 + 1;
                                w.write_record([
                                    row.n.to_string(),
                                    h.to_string(),
                                    e.mean.to_string(),
                                    e.stddev.to_string(),
                                    (h == row.best_h).to_string(),
                                ])?;
                            }
                        }
                        Ok(())
                    })?;
                    ctx.emit(&text)?;
                }
            }
        }
    }
    Ok(true)
}
