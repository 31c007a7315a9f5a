use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use nullity_core::capacity::{
    ball_scaling_exponent, build_grid, constant_norm_sq, fd_slope, solve_Cap, solve_cap, trial_cubicgap, trial_quadratic, ConstraintMask,
    GridConfig, MaskKind, SolveReport, SolverConfig,
};
use nullity_core::fractal::{fat_cantor_cheese, make_swiss_cheese, Domain, RationalParam};
use nullity_core::nullity::{cheese_report, check_curve, classify_cantor, threshold_curve as sample_curve, CheeseConstants, CurveSource};
use nullity_core::numeric::rational_to_f64;
use nullity_core::spectral::{gap_sum_terms, hs2_norm_sq_cantor, QuadratureConfig};
use nullity_core::{make_cantor, zoo, BallCloud, CantorSpec, Family, SobolevIndex};

use crate::table::{int, num, text, Table};
use crate::CliError;

pub struct Context {
    pub seed: u64,
}

pub type Outcome = Result<(Table, Result<(), CliError>), CliError>;

fn parse<T: DeserializeOwned>(raw: &str) -> Result<T, CliError> {
    serde_json::from_str(raw).map_err(|e| CliError::Config(e.to_string()))
}

fn f64s(raw: &[RationalParam]) -> Vec<f64> {
    raw.iter().map(|r| rational_to_f64(&r.0)).collect()
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ZooConfig {
    /// CSV in the golden-table layout; the committed table when absent.
    golden: Option<std::path::PathBuf>,
}

pub fn zoo(raw: &str) -> Outcome {
    let cfg: ZooConfig = parse(raw)?;
    let cases = match &cfg.golden {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            zoo::parse_cases(&text)?
        }
        None => zoo::golden_cases()?,
    };
    let results = cases.par_iter().map(zoo::run_case).collect::<nullity_core::Result<Vec<_>>>()?;
    let mut t = Table::new(&["family", "d", "n", "p_star", "s", "p", "expected", "verdict", "justification", "match"]);
    let mut first_bad = None;
    for r in &results {
        let c = &r.case;
        if !r.matches() && first_bad.is_none() {
            first_bad = Some(format!("{} n={} s={} p={}: expected {}, got {}", c.label(), c.n, c.s, c.p, c.verdict, r.got));
        }
        t.push(vec![
            text(c.family.clone()),
            text(c.d.clone()),
            int(c.n),
            text(c.p_star.clone()),
            num(c.s),
            num(c.p),
            text(c.verdict.as_str()),
            text(r.got.as_str()),
            text(r.justification.as_str()),
            serde_json::Value::Bool(r.matches()),
        ]);
    }
    let verdict = match first_bad {
        Some(row) => Err(CliError::Mismatch(row)),
        None => Ok(()),
    };
    Ok((t, verdict))
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ClassifyConfig {
    spec: CantorSpec,
    s: Vec<f64>,
    p: Vec<f64>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            spec: make_cantor(
                Family::Geometric {
                    ratio: nullity_core::numeric::rational(1, 3),
                },
                1,
            )
            .expect("ternary set"),
            s: vec![-0.5, -0.25, 0.0],
            p: vec![2.0],
        }
    }
}

pub fn classify(raw: &str) -> Outcome {
    let cfg: ClassifyConfig = parse(raw)?;
    let label = cfg.spec.family().label();
    let mut grid = Vec::new();
    for &p in &cfg.p {
        for &s in &cfg.s {
            grid.push((s, p));
        }
    }
    let rows = grid
        .par_iter()
        .map(|&(s, p)| SobolevIndex::new(s, p).map(|idx| (s, p, classify_cantor(&cfg.spec, &idx))))
        .collect::<nullity_core::Result<Vec<_>>>()?;
    let mut t = Table::new(&["family", "n", "s", "p", "verdict", "justification", "detail"]);
    for (s, p, v) in rows {
        t.push(vec![
            text(label.clone()),
            int(cfg.spec.n()),
            num(s),
            num(p),
            text(v.verdict().as_str()),
            text(v.justification().as_str()),
            text(v.detail()),
        ]);
    }
    Ok((t, Ok(())))
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct NormSweepConfig {
    alpha: RationalParam,
    beta: RationalParam,
    s: Vec<f64>,
    depth_min: usize,
    depth_max: usize,
    quadrature: QuadratureConfig,
}

impl Default for NormSweepConfig {
    fn default() -> Self {
        NormSweepConfig {
            alpha: RationalParam(nullity_core::numeric::rational(1, 4)),
            beta: RationalParam(nullity_core::numeric::rational(1, 4)),
            s: vec![0.0, 0.2, 0.25],
            depth_min: 2,
            depth_max: 8,
            quadrature: QuadratureConfig::default(),
        }
    }
}

pub fn norm_sweep(raw: &str) -> Outcome {
    let cfg: NormSweepConfig = parse(raw)?;
    if cfg.depth_min < 1 || cfg.depth_min > cfg.depth_max {
        return Err(CliError::Config(format!("need 1 <= depth_min <= depth_max, got {}..{}", cfg.depth_min, cfg.depth_max)));
    }
    cfg.quadrature.validate()?;
    let spec = make_cantor(
        Family::FatCantor {
            alpha: cfg.alpha.0.clone(),
            beta: cfg.beta.0.clone(),
        },
        1,
    )?
    .with_depth_cap(cfg.depth_max.max(32));
    let mut jobs = Vec::new();
    for &s in &cfg.s {
        for j in cfg.depth_min..=cfg.depth_max {
            jobs.push((s, j));
        }
    }
    let gaps: Vec<Option<nullity_core::spectral::GapSum>> = cfg
        .s
        .iter()
        .map(|&s| if s > 0.0 && cfg.depth_max >= 2 { gap_sum_terms(&spec, s, cfg.depth_max).ok() } else { None })
        .collect();
    let norms = jobs
        .par_iter()
        .map(|&(s, j)| hs2_norm_sq_cantor(&spec, j, s, &cfg.quadrature))
        .collect::<Vec<_>>();
    let mut t = Table::new(&[
        "alpha",
        "beta",
        "s",
        "depth",
        "norm_sq",
        "tail_bound",
        "tail_mean",
        "gap_partial_sum",
        "gap_ratio",
    ]);
    for (k, res) in norms.into_iter().enumerate() {
        let (s, j) = jobs[k];
        let (value, bound, mean) = match res {
            Ok(v) => (num(v.value), num(v.tail_bound), num(v.tail_mean)),
            Err(nullity_core::Error::Divergent { .. }) => (text("inf"), text(""), text("")),
            Err(e) => return Err(e.into()),
        };
        let gi = cfg.s.iter().position(|x| *x == s).unwrap();
        let (partial, ratio) = match &gaps[gi] {
            Some(g) if j >= 2 => {
                let partial = num(g.partial_sums[j - 2]);
                let ratio = if j >= 3 { num(g.terms[j - 2].1 / g.terms[j - 3].1) } else { text("") };
                (partial, ratio)
            }
            _ => (text(""), text("")),
        };
        t.push(vec![
            text(cfg.alpha.0.to_string()),
            text(cfg.beta.0.to_string()),
            num(s),
            int(j as i64),
            value,
            bound,
            mean,
            partial,
            ratio,
        ]);
    }
    Ok((t, Ok(())))
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CapacityConfig {
    half_width: f64,
    n: usize,
    s: f64,
    intervals: Vec<[f64; 2]>,
    padding: usize,
    solver: SolverConfig,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig {
            half_width: 16.0,
            n: 1 << 14,
            s: 2.0,
            intervals: vec![[-1.0, 1.0]],
            padding: 1,
            solver: SolverConfig::default(),
        }
    }
}

const REPORT_COLUMNS: [&str; 8] = ["problem", "value", "iterations", "residual", "active_set_size", "half_width", "n", "s"];

fn report_row(problem: &str, r: &SolveReport) -> Vec<serde_json::Value> {
    vec![
        text(problem),
        num(r.value),
        int(r.iterations as i64),
        num(r.residual),
        int(r.active_set_size as i64),
        num(r.half_width),
        int(r.n as i64),
        num(r.s),
    ]
}

pub fn capacity(raw: &str) -> Outcome {
    let cfg: CapacityConfig = parse(raw)?;
    if cfg.intervals.is_empty() {
        return Err(CliError::Config("need at least one interval".into()));
    }
    let grid = build_grid(cfg.half_width, cfg.n, cfg.s)?;
    let mut mask: Option<ConstraintMask> = None;
    for [a, b] in &cfg.intervals {
        let m = ConstraintMask::interval(&grid, *a, *b, MaskKind::EqualOne, cfg.padding)?;
        mask = Some(match mask {
            Some(prev) => prev.union(&m)?,
            None => m,
        });
    }
    let eq = mask.unwrap();
    let ge = eq.clone().with_kind(MaskKind::AtLeastOne);
    let big = solve_Cap(&grid, &eq, &cfg.solver)?;
    let small = solve_cap(&grid, &ge, &cfg.solver)?;
    let mut t = Table::new(&REPORT_COLUMNS);
    t.push(report_row("Cap", &big));
    t.push(report_row("cap", &small));
    Ok((t, Ok(())))
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ScalingConfig {
    s: f64,
    radii: Vec<f64>,
    grid: GridConfig,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            s: 0.25,
            radii: (1..=5).map(|k| 0.5f64.powi(k)).collect(),
            grid: GridConfig::default(),
        }
    }
}

pub fn scaling(raw: &str) -> Outcome {
    let cfg: ScalingConfig = parse(raw)?;
    let fit = ball_scaling_exponent(cfg.s, &cfg.radii, &cfg.grid)?;
    let mut t = Table::new(&["s", "radius", "capacity", "iterations", "residual", "fitted_exponent", "fitted_intercept"]);
    for ((r, c), rep) in fit.radii.iter().zip(&fit.capacities).zip(&fit.reports) {
        t.push(vec![
            num(cfg.s),
            num(*r),
            num(*c),
            int(rep.iterations as i64),
            num(rep.residual),
            num(fit.exponent),
            num(fit.intercept),
        ]);
    }
    Ok((t, Ok(())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Ball {
    center: Vec<f64>,
    radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum CloudConfig {
    Explicit { domain: Domain, balls: Vec<Ball>, inner_ball: Ball },
    FatCantor { alpha: f64, beta: f64, depth: usize },
    /// Uniform centers in (0, 1), log-uniform radii; drawn from --seed.
    Random { balls: usize, min_radius: f64, max_radius: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CheeseConfig {
    s: f64,
    p: f64,
    constants: CheeseConstants,
    cloud: CloudConfig,
}

impl Default for CheeseConfig {
    fn default() -> Self {
        CheeseConfig {
            s: 0.125,
            p: 2.0,
            constants: CheeseConstants::Power { ratio_ab: 1.0 },
            cloud: CloudConfig::FatCantor {
                alpha: 0.25,
                beta: 0.01,
                depth: 40,
            },
        }
    }
}

fn build_cloud(cfg: CloudConfig, seed: u64) -> Result<BallCloud, CliError> {
    Ok(match cfg {
        CloudConfig::Explicit { domain, balls, inner_ball } => {
            let (centers, radii) = balls.into_iter().map(|b| (b.center, b.radius)).unzip();
            make_swiss_cheese(domain, centers, radii, (inner_ball.center, inner_ball.radius))?
        }
        CloudConfig::FatCantor { alpha, beta, depth } => fat_cantor_cheese(alpha, beta, depth)?,
        CloudConfig::Random {
            balls,
            min_radius,
            max_radius,
        } => {
            if !(0.0 < min_radius && min_radius <= max_radius && max_radius < 0.5) {
                return Err(CliError::Config("need 0 < min_radius <= max_radius < 1/2".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (lo, hi) = (min_radius.ln(), max_radius.ln());
            let mut centers = Vec::with_capacity(balls);
            let mut radii = Vec::with_capacity(balls);
            for _ in 0..balls {
                let r = if lo < hi { rng.gen_range(lo..hi).exp() } else { min_radius };
                centers.push(vec![rng.gen_range(r..1.0 - r)]);
                radii.push(r);
            }
            make_swiss_cheese(Domain::unit_interval(), centers, radii, (vec![0.5], 0.5))?
        }
    })
}

pub fn cheese(raw: &str, ctx: &Context) -> Outcome {
    let cfg: CheeseConfig = parse(raw)?;
    let index = SobolevIndex::new(cfg.s, cfg.p)?;
    let cloud = build_cloud(cfg.cloud, ctx.seed)?;
    let rep = cheese_report(&cloud, &index, &cfg.constants)?;
    let mut t = Table::new(&["s", "p", "balls", "positive_measure", "lhs", "rhs", "certified"]);
    t.push(vec![
        num(cfg.s),
        num(cfg.p),
        int(cloud.ball_count() as i64),
        serde_json::Value::Bool(cloud.positive_measure()),
        num(rep.lhs),
        num(rep.rhs),
        serde_json::Value::Bool(rep.certified),
    ]);
    Ok((t, Ok(())))
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct AppendixBConfig {
    a: Vec<i64>,
    half_width: f64,
    n: usize,
    slope_eps: f64,
    solver: SolverConfig,
}

impl Default for AppendixBConfig {
    fn default() -> Self {
        AppendixBConfig {
            a: vec![1, 2],
            half_width: 16.0,
            n: 1 << 14,
            slope_eps: 1e-4,
            solver: SolverConfig::default(),
        }
    }
}

pub fn appendix_b(raw: &str) -> Outcome {
    let cfg: AppendixBConfig = parse(raw)?;
    let mut t = Table::new(&[
        "a",
        "Cap_exact",
        "trial",
        "best_eps",
        "best_trial_value",
        "trial_slope",
        "Cap_grid_value",
        "cap_grid_value",
        "margin",
    ]);
    for &a in &cfg.a {
        if a < 1 {
            return Err(CliError::Config(format!("a must be a positive integer, got {a}")));
        }
        let exact = constant_norm_sq(&nullity_core::numeric::rational(a, 1))?;
        let af = a as f64;
        let (name, trial): (&str, fn(f64, f64) -> nullity_core::Result<f64>) =
            if af * af < 3.0 { ("quadratic", trial_quadratic) } else { ("cubic_gap", trial_cubicgap) };
        let mut best = (f64::NAN, f64::INFINITY);
        for k in 0..=8 {
            let eps = 10f64.powi(-k);
            let v = trial(af, eps)?;
            if v < best.1 {
                best = (eps, v);
            }
        }
        let slope = fd_slope(trial, af, cfg.slope_eps)?;
        let grid = build_grid(cfg.half_width, cfg.n, 2.0)?;
        let eq = ConstraintMask::interval(&grid, -af, af, MaskKind::EqualOne, 1)?;
        let big = solve_Cap(&grid, &eq, &cfg.solver)?;
        let small = solve_cap(&grid, &eq.with_kind(MaskKind::AtLeastOne), &cfg.solver)?;
        let exact_f = rational_to_f64(&exact);
        t.push(vec![
            int(a),
            text(exact.to_string()),
            text(name),
            num(best.0),
            num(best.1),
            num(slope),
            num(big.value),
            num(small.value),
            num(exact_f - small.value),
        ]);
    }
    Ok((t, Ok(())))
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CurveConfig {
    source: CurveSource,
    n: u32,
    samples: Vec<RationalParam>,
}

impl Default for CurveConfig {
    fn default() -> Self {
        CurveConfig {
            source: CurveSource::Dimension { d: 0.5 },
            n: 1,
            samples: (1..20).map(|k| RationalParam(nullity_core::numeric::rational(k, 20))).collect(),
        }
    }
}

pub fn threshold_curve(raw: &str) -> Outcome {
    let cfg: CurveConfig = parse(raw)?;
    let curve = threshold_curve_rows(&cfg)?;
    let check = check_curve(&curve, cfg.n);
    let mut t = Table::new(&["r", "threshold", "non_decreasing", "slopes_in_range", "no_sign_crossing"]);
    for (r, v) in &curve {
        t.push(vec![
            num(*r),
            num(*v),
            serde_json::Value::Bool(check.non_decreasing),
            serde_json::Value::Bool(check.slopes_in_range),
            serde_json::Value::Bool(check.no_sign_crossing),
        ]);
    }
    let verdict = if check.ok() { Ok(()) } else { Err(CliError::Mismatch(format!("curve shape check failed: {check:?}"))) };
    Ok((t, verdict))
}

fn threshold_curve_rows(cfg: &CurveConfig) -> Result<Vec<(f64, f64)>, CliError> {
    Ok(sample_curve(cfg.source, cfg.n, &f64s(&cfg.samples))?)
}
