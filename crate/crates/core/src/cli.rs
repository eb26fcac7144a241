//! The `llab` command line.
//!
//! Settings are taken from the defaults, then the configuration file
//! (`--config`, else `LLAB_CONFIG`), then the flags. Reports go to `--out`
//! or standard output. Exit codes: 0 when every check passes, 1 when a check
//! or classification fails, 2 for a malformed command line or configuration,
//! 3 for a violated precondition or an input outside the domain, 4 for a
//! numerical failure (escaped trajectory, exhausted budget), 5 for I/O.
//! Every nonzero exit prints a failure JSON record on standard output.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::blowup::{
    blowup_pullback_residual, chart_overlap_residual, enumerate_bubble_decompositions, omega_lambda_residual,
    packing_obstruction, sample_shell, BlowupChartPoint, BubbleMode, HomologyClass,
};
use crate::bundle::{karshon_model, BaseForm, BundleParams, BundlePoint, Cutoff, EllipsoidChart, LiouvilleSpec, Potential, PotentialTerm, Trig};
use crate::config::{Format, RunConfig};
use crate::error::{Error, Result};
use crate::flow::desingular::{rescaled_time, ConjugationMap, DesingularizedField, RescaleProblem};
use crate::flow::inflation::{point_distance, Germ, InflationSetup};
use crate::flow::liouville::{flow_closed_form, flow_scaling_residual, integrate_trajectory, FlowRequest};
use crate::flow::pullback::FdOptions;
use crate::rational::{format_q, parse_q, to_f64, Q};
use crate::reeb::{orbits_up_to_action, Axis, EllipsoidSpec};
use crate::report::{
    exit_code, fmt_real, records_table, to_json, trajectory_table, write_text, CheckRecord, FailureReport, Report,
    Table, SCHEMA,
};
use crate::sft::{
    classify_conic_degeneration, classify_line_degeneration, enumerate_buildings, virtdim_inside, virtdim_outside,
    EnumerationRequest, FilterConfig, Orbit, Puncture,
};

#[derive(Debug, Parser)]
#[command(name = "llab", version, about = "Liouville flows, ellipsoid Reeb data and building enumeration")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Configuration file; defaults to $LLAB_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Ellipsoid areas `a_plus,a_minus` as rationals.
    #[arg(long, global = true)]
    spec: Option<String>,
    /// Bundle degree.
    #[arg(long, global = true)]
    k: Option<u32>,
    /// Tolerance of every residual check.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Grid points per coordinate.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write the output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed of the sampling generator
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reeb orbits of the ellipsoid boundary up to an action.
    Reeb {
        /// Action bound in units of π.
        #[arg(long, default_value = "2")]
        cap: String,
    },
    /// Virtual dimension of a punctured sphere inside or outside the ellipsoid.
    Virtdim {
        #[arg(long, value_enum)]
        side: Side,
        /// Asymptotic orbits, e.g. `γ-,2γ+` (also `g-`, `2g+`).
        #[arg(long, default_value = "")]
        orbits: String,
        /// Point constraints.
        #[arg(long, default_value_t = 0)]
        points: u32,
        /// Degree of an outside component.
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Enumerates building candidates.
    Buildings {
        #[arg(long, default_value_t = 1)]
        degree: u32,
        #[arg(long, default_value_t = 1)]
        inside: u32,
        #[arg(long, default_value_t = 1)]
        outside: u32,
        #[arg(long)]
        mult_cap: Option<u32>,
        /// Enables the ball-capacity filter with this capacity.
        #[arg(long)]
        ball_capacity: Option<String>,
        /// Enables the symplectization index rule.
        #[arg(long)]
        symplectization_index: bool,
    },
    /// Classifies the limit of lines or conics.
    Classify {
        #[arg(long, conflicts_with = "conic", required_unless_present = "conic")]
        line: bool,
        #[arg(long)]
        conic: bool,
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Integrates a Liouville trajectory.
    Flow {
        #[arg(long)]
        time: Option<f64>,
        /// Start point `s,theta,A,phi`.
        #[arg(long)]
        start: Option<String>,
    },
    /// Runs residual checks of the charts and flows.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        map: MapArg,
        /// Number of sample points.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Residual checks of the blow-up map.
    BlowupVerify {
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
        /// Width of the sampled shell above the removed ball.
        #[arg(long, default_value = "1/2")]
        shell: String,
    },
    /// Decompositions of `L − E` into curve classes.
    Bubbles {
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum, default_value = "family")]
        mode: ModeArg,
        #[arg(long, default_value_t = 4)]
        max_m: i64,
        #[arg(long, default_value_t = 4)]
        max_parts: usize,
    },
    /// Two-ball packing test of the projective plane.
    Packing {
        /// Squared radius (capacity) of the first ball.
        #[arg(long)]
        r1: String,
        #[arg(long)]
        r2: String,
    },
    /// The two-chart packing model of the degree-one bundle over the sphere.
    Karshon,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    Inside,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapArg {
    All,
    EllipsoidChart,
    FlowScaling,
    Conjugation,
    Rescale,
    Inflation,
    StepSweep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Family,
    General,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reeb { .. } => "reeb",
            Command::Virtdim { .. } => "virtdim",
            Command::Buildings { .. } => "buildings",
            Command::Classify { .. } => "classify",
            Command::Flow { .. } => "flow",
            Command::Verify { .. } => "verify",
            Command::BlowupVerify { .. } => "blowup-verify",
            Command::Bubbles { .. } => "bubbles",
            Command::Packing { .. } => "packing",
            Command::Karshon => "karshon",
        }
    }
}

/// Output of a command: the artifact and whether every check passed.
struct Output {
    text: String,
    pass: bool,
}

impl Output {
    fn report(r: Report) -> Self {
        Output { pass: r.pass, text: r.to_json() }
    }

    fn csv(t: &Table, pass: bool) -> Result<Self> {
        Ok(Output { text: t.to_csv()?, pass })
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = emit(&e.to_string());
                return 0;
            }
            eprint!("{e}");
            let err = Error::Config(format!("usage: {}", e.kind()));
            let _ = emit(&to_json(&FailureReport::from_error("llab", &err)));
            return 2;
        }
    };
    let name = cli.command.name();
    let out = cli.global.out.clone();
    let result = settings(&cli.global).and_then(|cfg| {
        let out = cfg.out.clone();
        execute(&cli.command, &cfg).map(|o| (o, out))
    });
    match result {
        Ok((o, cfg_out)) => {
            let dest = out.or(cfg_out);
            let written = match &dest {
                Some(path) => write_text(path, &o.text),
                None => match emit(&o.text) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::from(e)),
                    _ => Ok(()),
                },
            };
            match written {
                Ok(()) if o.pass => 0,
                Ok(()) => {
                    if dest.is_some() {
                        let err = Error::Classification { message: "some checks failed".into(), survivors: vec![] };
                        let _ = emit(&to_json(&FailureReport::from_error(name, &err)));
                    }
                    1
                }
                Err(e) => fail(name, &e),
            }
        }
        Err(e) => fail(name, &e),
    }
}

fn emit(text: &str) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()
}

fn fail(name: &str, e: &Error) -> i32 {
    eprintln!("llab {name}: {e}");
    let _ = emit(&to_json(&FailureReport::from_error(name, e)));
    exit_code(e)
}

fn settings(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::resolve(g.config.as_deref())?;
    if let Some(s) = &g.spec {
        let qs = crate::rational::parse_q_list(s)?;
        match qs.as_slice() {
            [p, m] => cfg.spec = EllipsoidSpec { a_plus: *p, a_minus: *m },
            _ => return Err(Error::Config(format!("--spec expects \"a_plus,a_minus\", got {s:?}"))),
        }
    }
    if let Some(k) = g.k {
        cfg.bundle.k = k;
    }
    if let Some(t) = g.tol {
        let tl = &mut cfg.tolerances;
        tl.pullback = t;
        tl.chart = t;
        tl.flow = t;
        tl.conjugation = t;
    }
    if let Some(n) = g.grid {
        cfg.grid = n;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(f) = g.format {
        cfg.format = Some(match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        });
    }
    cfg.validate()?;
    Ok(cfg)
}

fn format_or(cfg: &RunConfig, default: Format) -> Format {
    cfg.format.unwrap_or(default)
}

fn json_only(cfg: &RunConfig, name: &str) -> Result<()> {
    if cfg.format == Some(Format::Csv) {
        return Err(Error::Config(format!("{name} has no CSV output")));
    }
    Ok(())
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    match cmd {
        Command::Reeb { cap } => reeb(cfg, parse_q(cap)?),
        Command::Virtdim { side, orbits, points, m } => virtdim(cfg, *side, orbits, *points, *m),
        Command::Buildings { degree, inside, outside, mult_cap, ball_capacity, symplectization_index } => {
            let filters = FilterConfig {
                ball_capacity: ball_capacity.as_deref().map(parse_q).transpose()?,
                symplectization_index: *symplectization_index,
            };
            let mut req = EnumerationRequest::new(*degree, *inside, *outside).with_filters(filters);
            if let Some(c) = mult_cap {
                req = req.with_mult_cap(*c);
            }
            buildings(cfg, &req)
        }
        Command::Classify { line, conic: _, epsilon } => {
            json_only(cfg, "classify")?;
            let eps = epsilon.as_deref().map(parse_q).transpose()?.or(cfg.epsilon);
            classify(cfg, *line, eps)
        }
        Command::Flow { time, start } => {
            let start = match start {
                Some(s) => parse_point(s)?,
                None => cfg.start,
            };
            flow(cfg, start, time.unwrap_or(cfg.time))
        }
        Command::Verify { map, samples } => verify(cfg, *map, samples.unwrap_or(cfg.samples)),
        Command::BlowupVerify { lambda, samples, shell } => {
            let lam = lambda.as_deref().map(parse_q).transpose()?.unwrap_or(cfg.lambda);
            blowup_verify(cfg, lam, parse_q(shell)?, samples.unwrap_or(cfg.samples))
        }
        Command::Bubbles { lambda, t, mode, max_m, max_parts } => {
            let lam = lambda.as_deref().map(parse_q).transpose()?.unwrap_or(cfg.lambda);
            let t = t.as_deref().map(parse_q).transpose()?.unwrap_or(cfg.t);
            let mode = match mode {
                ModeArg::Family => BubbleMode::Family,
                ModeArg::General => BubbleMode::General { max_m: *max_m, max_parts: *max_parts },
            };
            bubbles(cfg, lam, t, mode)
        }
        Command::Packing { r1, r2 } => {
            json_only(cfg, "packing")?;
            let (a, b) = (parse_q(r1)?, parse_q(r2)?);
            let verdict = packing_obstruction(a, b)?;
            let data = json!({"r1_sq": format_q(&a), "r2_sq": format_q(&b), "sum": format_q(&(a + b)), "packing": verdict});
            Ok(Output::report(Report::new("packing", vec![], data)))
        }
        Command::Karshon => karshon(cfg),
    }
}

/// Parses an orbit label: `γ-`, `3γ+`, `g-`, `2g+`.
pub fn parse_orbit(text: &str) -> Result<Orbit> {
    let t = text.trim();
    let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = t[digits.len()..].trim_start_matches(['γ', 'g']);
    let mult = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| Error::Config(format!("bad orbit {t:?}")))? };
    let axis = match rest {
        "-" => Axis::Minus,
        "+" => Axis::Plus,
        _ => return Err(Error::Config(format!("bad orbit {t:?}: expected e.g. γ- or 2γ+"))),
    };
    if mult == 0 {
        return Err(Error::Config(format!("bad orbit {t:?}: multiplicity must be positive")));
    }
    Ok(Orbit::new(axis, mult))
}

fn parse_point(text: &str) -> Result<BundlePoint> {
    let xs: Vec<f64> = text
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad coordinate {x:?}"))))
        .collect::<Result<_>>()?;
    match xs.as_slice() {
        [s, th, a, ph] => Ok(BundlePoint::new(*s, *th, *a, *ph)),
        _ => Err(Error::Config(format!("--start expects s,theta,A,phi, got {text:?}"))),
    }
}

fn reeb(cfg: &RunConfig, cap: Q) -> Result<Output> {
    let orbits = orbits_up_to_action(&cfg.spec, cap)?;
    match format_or(cfg, Format::Csv) {
        Format::Csv => {
            let mut t = Table::new(&["axis", "mult", "action", "cz"]);
            for o in &orbits {
                t.push(vec![o.axis.as_str().into(), o.mult.to_string(), format_q(&o.action), o.cz.to_string()]);
            }
            Output::csv(&t, true)
        }
        Format::Json => {
            let data = json!({"spec": cfg.spec, "cap": format_q(&cap), "orbits": orbits});
            Ok(Output::report(Report::new("reeb", vec![], data)))
        }
    }
}

fn virtdim(cfg: &RunConfig, side: Side, orbits: &str, points: u32, m: u32) -> Result<Output> {
    json_only(cfg, "virtdim")?;
    cfg.spec.validate()?;
    let list: Vec<Orbit> =
        orbits.split(',').filter(|s| !s.trim().is_empty()).map(parse_orbit).collect::<Result<_>>()?;
    let (value, side_name) = match side {
        Side::Inside => {
            let p: Vec<Puncture> = list.iter().map(|o| Puncture::positive(*o)).collect();
            (virtdim_inside(&cfg.spec, &p, points)?, "inside")
        }
        Side::Outside => {
            let p: Vec<Puncture> = list.iter().map(|o| Puncture::negative(*o)).collect();
            (virtdim_outside(&cfg.spec, &p, points, m)?, "outside")
        }
    };
    let labels: Vec<String> = list.iter().map(Orbit::to_string).collect();
    let mut data = json!({"spec": cfg.spec, "side": side_name, "orbits": labels, "points": points, "virtdim": value});
    if let Side::Outside = side {
        data["m"] = json!(m);
    }
    Ok(Output::report(Report::new("virtdim", vec![], data)))
}

#[derive(Serialize)]
struct CandidateRecord {
    components: Vec<String>,
    areas: Vec<String>,
    dims: Vec<Option<i64>>,
    verdict: &'static str,
    killed_by: Option<String>,
    reason: Option<String>,
}

#[derive(Serialize)]
struct BuildingsReport {
    schema: u32,
    command: &'static str,
    pass: bool,
    spec: EllipsoidSpec,
    degree: u32,
    points_inside: u32,
    points_outside: u32,
    mult_cap: u32,
    cap_limited: bool,
    filters: FilterConfig,
    candidates: Vec<CandidateRecord>,
}

fn buildings(cfg: &RunConfig, req: &EnumerationRequest) -> Result<Output> {
    json_only(cfg, "buildings")?;
    let res = enumerate_buildings(&cfg.spec, req)?;
    let mut candidates: Vec<CandidateRecord> = res
        .survivors
        .iter()
        .map(|s| CandidateRecord {
            components: s.candidate.components.iter().map(|c| c.to_string()).collect(),
            areas: s.areas.clone(),
            dims: s.dims.clone(),
            verdict: "survivor",
            killed_by: None,
            reason: None,
        })
        .collect();
    candidates.extend(res.trace.iter().map(|t| CandidateRecord {
        components: vec![t.candidate.clone()],
        areas: vec![],
        dims: vec![],
        verdict: "killed",
        killed_by: Some(t.killed_by.to_string()),
        reason: Some(t.reason.clone()),
    }));
    let rep = BuildingsReport {
        schema: SCHEMA,
        command: "buildings",
        pass: true,
        spec: res.spec,
        degree: res.degree,
        points_inside: res.points_inside,
        points_outside: res.points_outside,
        mult_cap: res.mult_cap,
        cap_limited: res.cap_limited,
        filters: res.filters,
        candidates,
    };
    Ok(Output { text: to_json(&rep), pass: true })
}

fn classify(cfg: &RunConfig, line: bool, eps: Option<Q>) -> Result<Output> {
    let (rep, claim) = if line {
        (
            classify_line_degeneration(&cfg.spec)?,
            "a line through one point on each side of an ellipsoid with a_+ < 1 has outside part a single disk asymptotic to γ-",
        )
    } else {
        (
            classify_conic_degeneration(&cfg.spec, eps)?,
            "a conic through five points inside has a unique limit: an outside degree-2 disk asymptotic to γ+ and an inside plane through the points, with no intermediate level",
        )
    };
    let check = CheckRecord::exact(
        "classification",
        claim,
        vec![cfg.spec.to_string()],
        rep.outside_configuration.clone(),
        rep.outside_configuration.clone(),
    );
    Ok(Output::report(Report::new("classify", vec![check], serde_json::to_value(&rep)?)))
}

fn flow(cfg: &RunConfig, start: BundlePoint, time: f64) -> Result<Output> {
    let req = FlowRequest::new(cfg.bundle.clone(), cfg.liouville.clone(), start, time).with_tol(cfg.tolerances.integrator);
    let traj = integrate_trajectory(&req)?;
    match format_or(cfg, Format::Csv) {
        Format::Csv => Output::csv(&trajectory_table(&traj), true),
        Format::Json => {
            let mut checks = vec![];
            let end = traj.last().map(|s| s.point).unwrap_or(start);
            if cfg.liouville.is_unperturbed() {
                let exact = flow_closed_form(&cfg.bundle, time, &start)?;
                checks.push(CheckRecord::residual(
                    "flow-closed-form",
                    "the integrated flow of the standard Liouville field matches its closed form",
                    &start.to_array(),
                    (end.s - exact.s).abs(),
                    1e-8,
                ));
            }
            let data = json!({"start": start, "time": fmt_real(time), "end": end, "steps": traj.len()});
            Ok(Output::report(Report::new("flow", checks, data)))
        }
    }
}

/// Uniform random points of the bundle chart with `s ∈ [s_lo, s_hi]/k`.
fn bundle_samples(params: &BundleParams, rng: &mut ChaCha8Rng, n: usize, s_lo: f64, s_hi: f64) -> Vec<BundlePoint> {
    let (k, a) = (params.kf(), params.base_area_f64());
    (0..n)
        .map(|_| {
            BundlePoint::new(
                rng.gen_range(s_lo..s_hi) / k,
                rng.gen_range(0.0..std::f64::consts::TAU),
                a * rng.gen_range(0.05..0.95),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

/// The small closed perturbation used when the configuration has none.
pub fn default_perturbation() -> LiouvilleSpec {
    LiouvilleSpec::standard().with_mu(Potential::new(vec![
        PotentialTerm::new(0.02).r(1).theta(1, Trig::Cos),
        PotentialTerm::new(0.01).r(2).area(1).phi(1, Trig::Sin),
    ]))
}

fn max_record(check: &str, claim: &str, values: &[(Vec<f64>, f64)], tol: f64) -> CheckRecord {
    let worst = values.iter().fold((vec![], f64::NEG_INFINITY), |acc, (p, v)| {
        if v.is_nan() || *v > acc.1 {
            (p.clone(), if v.is_nan() { f64::INFINITY } else { *v })
        } else {
            acc
        }
    });
    CheckRecord::residual(check, claim, &worst.0, worst.1, tol)
}

fn verify(cfg: &RunConfig, map: MapArg, n: usize) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let params = &cfg.bundle;
    let tl = &cfg.tolerances;
    let want = |m: MapArg| map == MapArg::All || map == m;
    let mut checks = vec![];
    let mut series: Option<Table> = None;

    if want(MapArg::EllipsoidChart) {
        let chart = EllipsoidChart::new(params)?;
        let mut vals = vec![];
        for p in bundle_samples(params, &mut rng, n, 0.0, 0.95) {
            vals.push((p.to_array().to_vec(), chart.pullback_residual(&p, cfg.step)?));
        }
        checks.push(max_record(
            "ellipsoid-chart",
            "the action-angle chart of the bundle onto the ellipsoid pulls ω_std back to ω₀",
            &vals,
            tl.chart,
        ));
    }
    if want(MapArg::FlowScaling) {
        let mut vals = vec![];
        for p in bundle_samples(params, &mut rng, n.min(100), 0.02, 0.5) {
            let req = FlowRequest::new(params.clone(), cfg.liouville.clone(), p, 1.0).with_tol(tl.integrator);
            vals.push((p.to_array().to_vec(), flow_scaling_residual(&req, cfg.step)?));
        }
        checks.push(max_record(
            "flow-scaling",
            "the time-1 Liouville flow scales ω₀ by e^{-1}",
            &vals,
            tl.flow,
        ));
    }
    if want(MapArg::Conjugation) {
        let spec = if cfg.liouville.mu_extra.is_some() { cfg.liouville.clone() } else { default_perturbation() };
        let psi = ConjugationMap::new(params, &spec).with_tol(tl.integrator * 1e-2);
        let mut vals = vec![];
        for p in bundle_samples(params, &mut rng, n.min(20), 0.05, 0.5) {
            vals.push((p.to_array().to_vec(), psi.symplectic_residual(&p, cfg.step)?));
        }
        checks.push(max_record(
            "conjugation-symplectic",
            "the conjugation map between two Liouville forms is symplectic",
            &vals,
            tl.conjugation,
        ));
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        let mut last = 0.0;
        for s in [1e-2, 1e-4, 1e-6] {
            let dev = (psi.radial_ratio(&BundlePoint::new(s, 1.0, 0.2 * params.base_area_f64(), 2.0))? - 1.0).abs();
            monotone &= dev <= prev;
            prev = dev;
            last = dev;
        }
        let mut rec = CheckRecord::residual(
            "conjugation-radial-ratio",
            "the conjugation map is tangent to the identity along the zero-section: r(Ψ(p))/r(p) → 1",
            &[1e-6],
            last,
            0.05,
        );
        rec.pass &= monotone;
        checks.push(rec);
    }
    if want(MapArg::Rescale) {
        let spec = if cfg.liouville.mu_extra.is_some() { cfg.liouville.clone() } else { default_perturbation() };
        let field = DesingularizedField::new(params, &spec);
        let t = 1e-6;
        let problem = RescaleProblem::new(1.0, 0.2 * params.base_area_f64(), 2.0, t)?;
        let tau = rescaled_time(&problem, &field, tl.root_find)?;
        let rel = (tau / (2.0 * (params.kf() * t).sqrt()) - 1.0).abs();
        checks.push(CheckRecord::residual(
            "rescale-sqrt-scaling",
            "the rescaled time of the desingularized flow grows like 2√(kt) for small t",
            &[t],
            rel,
            0.01,
        ));
    }
    if want(MapArg::Inflation) {
        let source = LiouvilleSpec::with_vartheta(BaseForm::rotation(0.01));
        let h = Potential::new(vec![
            PotentialTerm::new(0.02).r(2).theta(1, Trig::Sin),
            PotentialTerm::new(0.01).area(1).phi(1, Trig::Cos),
        ])
        .with_fiber_cutoff(Cutoff::new(0.3 / params.kf(), 0.4 / params.kf())?);
        let target = source.clone().with_mu(h);
        let setup = InflationSetup::new(params.clone(), source, target, Germ::FiberRotation(0.3), 0.05 / params.kf())?;
        let mut vals = vec![];
        for x in bundle_samples(params, &mut rng, n.min(100), 0.1, 0.28) {
            let (lo, hi) = setup.admissible_times(&x)?.ok_or_else(|| Error::domain("sample inside the germ domain"))?;
            let a = setup.embed(&x, Some(lo + 0.2 * (hi - lo)))?;
            let b = setup.embed(&x, Some(lo + 0.8 * (hi - lo)))?;
            vals.push((x.to_array().to_vec(), point_distance(&a, &b)));
        }
        checks.push(max_record(
            "inflation-time-independence",
            "the inflation embedding does not depend on the intermediate time",
            &vals,
            tl.pullback,
        ));
    }
    if want(MapArg::StepSweep) {
        let (slope, table) = step_sweep(cfg.lambda)?;
        let mut rec = CheckRecord::residual(
            "step-sweep-order",
            "central differences of the blow-up pullback converge at order 2 in the step",
            &[],
            (slope - 2.0).abs(),
            0.2,
        );
        rec.value = fmt_real(slope);
        checks.push(rec);
        if map == MapArg::StepSweep {
            series = Some(table);
        }
    }

    let pass = checks.iter().all(|c| c.pass);
    match format_or(cfg, Format::Json) {
        Format::Json => Ok(Output::report(Report::new("verify", checks, Value::Null))),
        Format::Csv => match series {
            Some(t) => Output::csv(&t, pass),
            None => Output::csv(&records_table(&checks), pass),
        },
    }
}

/// Residual of the blow-up pullback against the step of a second-order
/// stencil, and the fitted log-log slope.
pub fn step_sweep(lam: Q) -> Result<(f64, Table)> {
    use num_complex::Complex64;
    let ell = to_f64(&lam);
    let r = ((ell + 0.5) / 2.0).sqrt();
    let z = [Complex64::new(r * 0.8, r * 0.6), Complex64::new(r * 0.6, -r * 0.8)];
    let mut table = Table::new(&["step", "residual"]);
    let mut pts = vec![];
    for i in 0..6 {
        let h = 1e-2 * 0.5f64.powi(i);
        let res = blowup_pullback_residual(&z, lam, &FdOptions::central(h))?;
        table.push(vec![fmt_real(h), fmt_real(res)]);
        pts.push((h.ln(), res.ln()));
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok((sxy / sxx, table))
}

fn blowup_verify(cfg: &RunConfig, lam: Q, shell: Q, n: usize) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples = sample_shell(lam, shell, n, &mut rng)?;
    let res = omega_lambda_residual(lam, &samples, cfg.step)?;
    let mut checks = vec![CheckRecord::residual(
        "blowup-pullback",
        "the blow-up map pulls the blown-up form back to ω_std on the complement of the ball",
        &[to_f64(&lam)],
        res.max_residual,
        cfg.tolerances.pullback,
    )];
    let ell = to_f64(&lam);
    let mut overlap = vec![];
    for z in samples.iter().take(n.min(50)) {
        let g = crate::blowup::blowup_transition(z, lam)?;
        if g[0].norm() == 0.0 || g[1].norm() == 0.0 {
            continue;
        }
        let pt = BlowupChartPoint::over(&g)?;
        overlap.push((crate::blowup::to_real(z).to_vec(), chart_overlap_residual(&pt, ell, cfg.step)?));
    }
    checks.push(max_record(
        "blowup-chart-overlap",
        "the two affine charts of the blow-up induce the same form on their overlap",
        &overlap,
        cfg.tolerances.pullback,
    ));
    let data = json!({
        "lambda": format_q(&lam),
        "shell": format_q(&shell),
        "evaluated": res.evaluated,
        "skipped": res.skipped.iter().map(|p| p.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    match format_or(cfg, Format::Json) {
        Format::Json => Ok(Output::report(Report::new("blowup-verify", checks, data))),
        Format::Csv => {
            let pass = checks.iter().all(|c| c.pass);
            Output::csv(&records_table(&checks), pass)
        }
    }
}

fn bubbles(cfg: &RunConfig, lam: Q, t: Q, mode: BubbleMode) -> Result<Output> {
    let rep = enumerate_bubble_decompositions(HomologyClass::new(1, 1), lam, t, mode)?;
    let pass = rep.survivors.is_empty();
    match format_or(cfg, Format::Csv) {
        Format::Csv => {
            let mut table = Table::new(&["k", "area", "virtual_genus", "verdict", "parts"]);
            for c in &rep.candidates {
                let parts: Vec<String> = c.parts.iter().map(|p| p.to_string()).collect();
                table.push(vec![
                    c.k.to_string(),
                    format_q(&c.area),
                    format_q(&c.virtual_genus),
                    c.verdict.as_str().into(),
                    parts.join(" + "),
                ]);
            }
            Output::csv(&table, pass)
        }
        Format::Json => {
            let check = CheckRecord::exact(
                "no-bubbling",
                "no nontrivial decomposition of L - E into curve classes survives",
                vec![format_q(&lam), format_q(&t)],
                rep.survivors.len().to_string(),
                "0".into(),
            );
            Ok(Output::report(Report::new("bubbles", vec![check], serde_json::to_value(&rep)?)))
        }
    }
}

fn karshon(cfg: &RunConfig) -> Result<Output> {
    json_only(cfg, "karshon")?;
    let m = karshon_model(cfg.grid)?;
    let claim_sum = "the two inscribed balls of the sphere bundle form a maximal packing: capacities sum to 1";
    let checks = vec![
        CheckRecord::exact("capacity-sum", claim_sum, vec![], format_q(&m.capacity_sum), "1/1".into()),
        CheckRecord::exact(
            "interior-disjoint",
            "the interiors of the two balls are disjoint",
            vec![m.interior_samples.to_string()],
            m.interior_overlaps.to_string(),
            "0".into(),
        ),
        CheckRecord::residual(
            "contact-circle",
            "the closed balls meet only along the equator circle of the zero-section",
            &[],
            m.max_contact_offset,
            cfg.tolerances.pullback,
        ),
        CheckRecord::residual(
            "hemisphere-transition",
            "the transition between the hemisphere charts is symplectic",
            &[],
            m.transition_residual,
            cfg.tolerances.chart,
        ),
    ];
    Ok(Output::report(Report::new("karshon", checks, serde_json::to_value(&m)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_labels_parse() {
        assert_eq!(parse_orbit("γ-").unwrap(), Orbit::minus(1));
        assert_eq!(parse_orbit("3g+").unwrap(), Orbit::plus(3));
        assert_eq!(parse_orbit(" 2γ- ").unwrap(), Orbit::minus(2));
        assert!(parse_orbit("0γ-").is_err());
        assert!(parse_orbit("γ").is_err());
    }

    #[test]
    fn step_sweep_is_second_order() {
        let (slope, table) = step_sweep(crate::rational::q(1, 2)).unwrap();
        assert!((slope - 2.0).abs() < 0.2, "{slope}");
        assert_eq!(table.rows.len(), 6);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["llab", "frobnicate"]), 2);
        assert_eq!(run(["llab", "reeb", "--spec", "1/0,1/2"]), 2);
    }
}
