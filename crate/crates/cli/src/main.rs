#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use friable::archimedean::{make_bump, TestFunction};
use friable::counting::{self, CountReport, PredictOptions, DEFAULT_COUNT_BUDGET};
use friable::saddle::{self, DEFAULT_C0};
use friable::smooth::DEFAULT_CAPACITY;
use friable::verify::{self, Suite, VerifyOptions};
use friable::{circle, Error, SmoothContext};
use rayon::prelude::*;
use serde::Serialize;

use config::{Format, SweepConfig};

#[derive(Parser)]
#[command(
    name = "friable",
    version,
    about = "Smooth solutions of a + b = c: exact counts and predictions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (default: all logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for cached largest-prime-factor tables.
    #[arg(long, global = true, env = "FRIABLE_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Largest sieve table the run may allocate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAPACITY)]
    capacity: u64,
    /// Seed for every randomised check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Saddle point α(x, y) and the quantities built from it.
    Alpha {
        #[arg(value_parser = parse_real)]
        x: f64,
        #[arg(value_parser = parse_real)]
        y: f64,
        #[arg(long)]
        json: bool,
    },
    /// Exact counts of smooth solutions next to their predictions.
    Count {
        /// One value or a comma-separated list.
        #[arg(value_parser = parse_list)]
        x: List,
        #[arg(value_parser = parse_list)]
        y: List,
        /// Use the smooth bump with this delta instead of the indicator.
        #[arg(long, value_name = "DELTA")]
        weighted: Option<f64>,
        /// Also count primitive weighted solutions (always done for the indicator).
        #[arg(long)]
        primitive: bool,
        /// CSV with one row per (x, y).
        #[arg(long, conflicts_with = "json")]
        grid: bool,
        #[arg(long)]
        json: bool,
        /// Largest floor(x) handled exactly.
        #[arg(long, default_value_t = DEFAULT_COUNT_BUDGET)]
        budget: u64,
    },
    /// Invariant suites with a pass/fail table.
    Verify {
        #[arg(default_value = "all")]
        suite: Suite,
        /// Largest modulus for the character checks.
        #[arg(long, default_value_t = VerifyOptions::default().q_max)]
        q_max: u64,
    },
    /// Major arcs for size C and an optional minor-arc probe.
    Arcs {
        #[arg(value_parser = parse_real)]
        size: f64,
        #[arg(value_parser = parse_real)]
        delta: f64,
        #[arg(value_parser = parse_real)]
        y: f64,
        #[arg(long)]
        json: bool,
        /// Write the arc table here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Write |E(C, y; θ)| on a Weyl grid to this CSV file.
        #[arg(long)]
        probe: Option<PathBuf>,
        #[arg(long, default_value_t = circle::arcs::DEFAULT_GRID)]
        points: usize,
        /// Bump delta used by the probe.
        #[arg(long, default_value_t = 0.25)]
        bump: f64,
    },
    /// Run a grid described by a TOML file.
    Sweep {
        config: PathBuf,
        /// Overrides the file's `output`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Budget(String),
    Output(String),
    Other(String),
    ChecksFailed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Output(_) => 4,
            Failure::Other(_) | Failure::ChecksFailed => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::Domain(_)
            | Error::Parameter(_)
            | Error::Unsupported(_) => Failure::Invalid(e.to_string()),
            Error::Capacity { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("{s:?} is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[derive(Debug, Clone)]
struct List(Vec<f64>);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(parse_real)
        .collect::<Result<_, _>>()
        .map(List)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Invalid(m)
                | Failure::Budget(m)
                | Failure::Output(m)
                | Failure::Other(m) => {
                    eprintln!("error: {m}")
                }
                Failure::ChecksFailed => eprintln!("some checks failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let g = cli.global;
    if let Some(n) = g.threads {
        set_threads(n)?;
    }
    match cli.command {
        Command::Alpha { x, y, json } => cmd_alpha(&g, x, y, json),
        Command::Count {
            x,
            y,
            weighted,
            primitive,
            grid,
            json,
            budget,
        } => cmd_count(&g, &x.0, &y.0, weighted, primitive, grid, json, budget),
        Command::Verify { suite, q_max } => cmd_verify(
            suite,
            VerifyOptions {
                seed: g.seed,
                q_max,
            },
        ),
        Command::Arcs {
            size,
            delta,
            y,
            json,
            output,
            probe,
            points,
            bump,
        } => cmd_arcs(
            &g,
            size,
            delta,
            y,
            json,
            output.as_deref(),
            probe.as_deref(),
            points,
            bump,
        ),
        Command::Sweep { config, output } => cmd_sweep(&g, &config, output),
    }
}

fn set_threads(n: usize) -> Outcome {
    if n == 0 {
        return Err(Failure::Invalid("--threads must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Other(e.to_string()))
}

fn context(g: &Global, y_bound: u64, table_limit: u64) -> Outcome<SmoothContext> {
    let y_bound = y_bound.max(2);
    let ctx = match &g.cache_dir {
        Some(dir) => SmoothContext::load_or_build(y_bound, table_limit, g.capacity, dir)?,
        None => SmoothContext::with_capacity(y_bound, table_limit, g.capacity)?,
    };
    Ok(ctx)
}

fn ceil_u64(v: f64) -> u64 {
    v.ceil().min(u64::MAX as f64) as u64
}

/// Standard output, or `path` when given; failures to write the file exit with code 4.
fn emit(path: Option<&Path>, body: &str) -> Outcome {
    match path {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(p) => std::fs::write(p, body)
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", p.display()))),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serialises") + "\n"
}

#[derive(Serialize)]
struct DomainRow {
    kappa: f64,
    in_d: bool,
    in_d_star: bool,
}

#[derive(Serialize)]
struct AlphaOutput {
    #[serde(flatten)]
    saddle: saddle::SaddleData,
    sigma2: f64,
    residual_tolerance: f64,
    domain: Vec<DomainRow>,
}

fn cmd_alpha(g: &Global, x: f64, y: f64, json: bool) -> Outcome {
    if !(y >= 2.0) {
        return Err(Failure::Invalid(format!("requires y >= 2, got y = {y}")));
    }
    if x < y {
        return Err(Failure::Invalid(format!(
            "requires x >= y, got x = {x}, y = {y}"
        )));
    }
    let ctx = context(g, y.floor() as u64, 0)?;
    let sd = saddle::solve_alpha(x, y, &ctx)?;
    let domain = [1.0, 4.0, 8.0]
        .into_iter()
        .map(|kappa| {
            Ok(DomainRow {
                kappa,
                in_d: saddle::in_domain(x, y, kappa, None)?,
                in_d_star: saddle::in_domain(x, y, kappa, Some(DEFAULT_C0))?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = AlphaOutput {
        saddle: sd,
        sigma2: sd.sigma2(),
        residual_tolerance: 1e-9 * sd.log_x(),
        domain,
    };
    if json {
        return emit(None, &to_json(&out));
    }
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<12} {v}\n"));
    line("x", format!("{x}"));
    line("y", format!("{y}"));
    line("u", format!("{}", sd.u));
    line("alpha", format!("{}", sd.alpha));
    line("residual", format!("{:e}", sd.residual));
    line("H(u)", format!("{}", sd.h_u));
    line("sigma2", format!("{}", sd.sigma2()));
    line("zeta(a,y)", format!("{}", sd.zeta_alpha_y));
    line("T0", format!("{}", sd.t0));
    for d in &out.domain {
        line(&format!("D({})", d.kappa), format!("{}", d.in_d));
        line(&format!("D*({})", d.kappa), format!("{}", d.in_d_star));
    }
    emit(None, &s)
}

pub const ROW_HEADER: [&str; 14] = [
    "x",
    "y",
    "u",
    "alpha",
    "n_exact",
    "prediction",
    "ratio",
    "psi",
    "normalized",
    "n_star_exact",
    "prediction_star_y",
    "ratio_star_y",
    "n_weighted",
    "available",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn report_row(r: &CountReport) -> Vec<String> {
    vec![
        r.x.to_string(),
        r.y.to_string(),
        r.u.to_string(),
        r.alpha.to_string(),
        opt(r.n_exact),
        opt(r.prediction),
        opt(r.ratio_to_prediction),
        r.psi.to_string(),
        opt(r.ratio),
        opt(r.n_star_exact),
        opt(r.prediction_star_y),
        opt(r.ratio_star_to_prediction_star_y),
        opt(r.n_weighted),
        r.available.to_string(),
    ]
}

fn csv_table(reports: &[CountReport]) -> Outcome<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::Other(e.to_string());
    w.write_record(ROW_HEADER).map_err(fail)?;
    for r in reports {
        w.write_record(report_row(r)).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// One report per grid point; the context covers the largest point.
fn run_grid(
    g: &Global,
    points: &[(f64, f64)],
    phi: &TestFunction,
    opts: &PredictOptions,
) -> Outcome<Vec<CountReport>> {
    for &(x, y) in points {
        if !(x >= 2.0 && y >= 2.0) {
            return Err(Failure::Invalid(format!(
                "count needs x, y >= 2, got x = {x}, y = {y}"
            )));
        }
        let n = x.floor();
        if n > opts.count_budget as f64 {
            return Err(Error::Capacity {
                what: "exact count range floor(x) (raise --budget)",
                requested: n as u64,
                limit: opts.count_budget,
            }
            .into());
        }
    }
    let x_max = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let y_max = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let ctx = context(g, y_max.floor() as u64, ceil_u64(x_max * phi.k_bound()))?;
    let reports: Vec<Result<CountReport, Error>> = points
        .par_iter()
        .map(|&(x, y)| counting::predict_with(x, y, phi, opts, &ctx))
        .collect();
    reports
        .into_iter()
        .map(|r| r.map_err(Failure::from))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_count(
    g: &Global,
    xs: &[f64],
    ys: &[f64],
    weighted: Option<f64>,
    primitive: bool,
    grid: bool,
    json: bool,
    budget: u64,
) -> Outcome {
    if budget == 0 {
        return Err(Failure::Invalid("--budget must be positive".into()));
    }
    let phi = match weighted {
        Some(d) => make_bump(d)?,
        None => TestFunction::indicator_unit(),
    };
    let opts = PredictOptions {
        count_budget: budget,
        primitive: primitive || weighted.is_none(),
        ..PredictOptions::default()
    };
    let points: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
        .collect();
    let reports = run_grid(g, &points, &phi, &opts)?;
    if grid {
        return emit(None, &csv_table(&reports)?);
    }
    if json {
        return match reports.as_slice() {
            [one] => emit(None, &to_json(one)),
            many => emit(None, &to_json(&many)),
        };
    }
    let mut s = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        for (k, v) in ROW_HEADER.iter().zip(report_row(r)) {
            s.push_str(&format!("{k:<18} {v}\n"));
        }
        if let Some(why) = &r.unavailable_reason {
            s.push_str(&format!("{:<18} {why}\n", "note"));
        }
    }
    emit(None, &s)
}

fn cmd_verify(suite: Suite, opts: VerifyOptions) -> Outcome {
    let ctx = verify::default_context()?;
    let report = verify::run(suite, &opts, &ctx);
    let width = report.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = std::io::stdout().lock();
    for r in &report.rows {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<10} {:<width$}  {mark}  {}",
            r.suite, r.name, r.detail
        );
    }
    let failed = report.rows.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {failed} failed", report.rows.len());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_arcs(
    g: &Global,
    size: f64,
    delta: f64,
    y: f64,
    json: bool,
    output: Option<&Path>,
    probe: Option<&Path>,
    points: usize,
    bump: f64,
) -> Outcome {
    if !(y >= 2.0) {
        return Err(Failure::Invalid(format!("requires y >= 2, got y = {y}")));
    }
    let phi = make_bump(bump)?;
    let table = if probe.is_some() {
        ceil_u64(size * phi.k_bound())
    } else {
        0
    };
    let ctx = context(g, y.floor() as u64, table)?;
    let arcs = circle::major_arcs(size, delta, y, &ctx)?;
    let body = if json {
        to_json(&arcs)
    } else {
        let mut s = format!(
            "C = {size}, delta = {delta}, y = {y}\nQ = {}\nhalfwidth = {:e}\narcs = {}\ntotal_measure = {:e}\nminor_measure = {}\ndisjoint = {}\n",
            arcs.q_max,
            arcs.halfwidth,
            arcs.arcs.len(),
            arcs.total_measure,
            arcs.minor_measure,
            arcs.disjoint
        );
        s.push_str("a,q,q0,q1,center,beta_halfwidth\n");
        for a in &arcs.arcs {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                a.a,
                a.q,
                a.q0,
                a.q1,
                a.center(),
                a.beta_halfwidth
            ));
        }
        s
    };
    if let Some(path) = probe {
        let p = circle::minor_arc_probe(&arcs, &phi, points, &ctx)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| Failure::Other(e.to_string());
        w.write_record(["theta", "abs_e", "on_major_arc"])
            .map_err(fail)?;
        for r in &p.rows {
            w.write_record([
                r.theta.to_string(),
                r.abs_e.to_string(),
                r.on_major_arc.to_string(),
            ])
            .map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Other(e.to_string()))?;
        std::fs::write(path, bytes)
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", path.display())))?;
        eprintln!(
            "minor-arc sup |E| = {:e} at theta = {}; C^(3/4) = {:e}; ratio = {}",
            p.sup_minor, p.theta_at_sup, p.reference, p.ratio
        );
    }
    emit(output, &body)
}

fn cmd_sweep(g: &Global, path: &Path, output: Option<PathBuf>) -> Outcome {
    let cfg = SweepConfig::load(path).map_err(Failure::Invalid)?;
    if g.threads.is_none() {
        if let Some(n) = cfg.threads {
            set_threads(n)?;
        }
    }
    let g = Global {
        cache_dir: g.cache_dir.clone().or_else(|| cfg.cache_dir.clone()),
        ..*g
    };
    let phi = cfg.test_function().map_err(Failure::Invalid)?;
    let out = output.or_else(|| cfg.output.clone());
    // fail on an unwritable destination before the grid runs
    if let Some(p) = &out {
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", p.display())))?;
    }
    let reports = run_grid(&g, &cfg.points(), &phi, &cfg.predict_options())?;
    let body = match cfg.format {
        Format::Csv => csv_table(&reports)?,
        Format::Json => to_json(&reports),
    };
    emit(out.as_deref(), &body)
}
