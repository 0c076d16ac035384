//! The `chordal-forge` command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or input
//! error, 3 density targeting ran out of attempts.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::experiments::{
    histogram, linear_fit, lower_bound_family, run_report, size_ratio_report, write_reports_csv,
    RunReport, SIZE_RATIO_HEADER,
};
use crate::generator::{
    generate, generate_with_density, run_seed, GenConfig, GenError, GenResult, SubsetMode,
};
use crate::graph::{is_chordal, read_graph, write_dot, write_edge_list, write_graph_json, Graph};
use crate::representation::{
    clique_tree_check, edge_load_bound_check, minimal_separators, minimize, nested_edge,
    pruning_trace, read_json, write_json, Representation,
};
use crate::rng::SplitMix64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

/// Environment variable capping the number of worker threads for `--runs`.
pub const THREADS_ENV: &str = "CHORDAL_FORGE_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "chordal-forge",
    version,
    about = "Random chordal graphs via minimal subtree representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate random chordal graphs.
    Generate(GenerateArgs),
    /// Check a graph and/or representation file.
    Verify(VerifyArgs),
    /// Emit the lower-bound family of order k and its size report.
    Lowerbound(LowerboundArgs),
    /// Time generation across sizes and fit ops against n + m.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Edgelist,
    Json,
    Dot,
}

/// `uniform` or `bernoulli:Q`.
#[derive(Clone, Copy, Debug)]
struct SubsetArg(SubsetMode);

impl FromStr for SubsetArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "uniform" {
            return Ok(Self(SubsetMode::UniformProper));
        }
        let q = s
            .strip_prefix("bernoulli:")
            .ok_or_else(|| format!("expected `uniform` or `bernoulli:Q`, got `{s}`"))?;
        let q: f64 = q.parse().map_err(|_| format!("bad probability `{q}`"))?;
        if !(q > 0.0 && q < 1.0) {
            return Err(format!("probability {q} must lie strictly between 0 and 1"));
        }
        Ok(Self(SubsetMode::Bernoulli(q)))
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Number of vertices.
    #[arg(long)]
    n: usize,
    /// Master seed; drawn from the clock and printed to stderr when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Target edge density in (0, 1).
    #[arg(long)]
    density: Option<f64>,
    /// Relative tolerance on the density [default: 0.05].
    #[arg(long, requires = "density")]
    epsilon: Option<f64>,
    /// Required vertex connectivity.
    #[arg(long)]
    kconn: Option<usize>,
    /// Cap on the vertices created per tree node.
    #[arg(long)]
    kmax: Option<usize>,
    /// Proper-subset distribution: `uniform` or `bernoulli:Q`.
    #[arg(long, default_value = "uniform")]
    subset: SubsetArg,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
    /// Graph output; with several runs `g.txt` becomes `g.0.txt`, `g.1.txt`, ...
    #[arg(long)]
    out: Option<PathBuf>,
    /// Representation JSON output, suffixed per run like `--out`.
    #[arg(long)]
    rep_out: Option<PathBuf>,
    /// Statistics CSV, to PATH or stdout.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    stats: Option<Option<PathBuf>>,
    /// Clique-size histogram CSV, to PATH or stdout.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    histogram: Option<Option<PathBuf>>,
    #[arg(long, default_value_t = 5)]
    binwidth: usize,
    /// Density attempts per run before giving up.
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Graph file: edge list, JSON or DOT.
    #[arg(long, required_unless_present = "rep")]
    graph: Option<PathBuf>,
    /// Representation JSON file.
    #[arg(long)]
    rep: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LowerboundArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    rep_out: Option<PathBuf>,
    #[arg(long, alias = "out")]
    graph_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 0.01)]
    density: f64,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<GenError> for Failure {
    fn from(e: GenError) -> Self {
        let code = match e {
            GenError::Exhausted { .. } => EXIT_EXHAUSTED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::usage(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lowerbound(a) => cmd_lowerbound(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn effective_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64);
        let s = SplitMix64::new(nanos ^ u64::from(std::process::id())).next_u64();
        eprintln!("seed: {s}");
        s
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let threads: usize = v.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
            Failure::usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))
        })?;
        builder = builder.num_threads(threads);
    }
    builder.build().map_err(Failure::usage)
}

/// `dir/g.txt` → `dir/g.{index}.txt`.
fn run_path(path: &Path, index: usize, runs: usize) -> PathBuf {
    if runs == 1 {
        return path.to_path_buf();
    }
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{index}"),
    };
    path.with_file_name(name)
}

fn write_file(
    path: &Path,
    write: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
) -> Result<(), Failure> {
    let file = File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = BufWriter::new(file);
    write(&mut w)
        .and_then(|()| w.flush())
        .map_err(|e| io_failure(path, e))
}

fn write_stdout(write: impl FnOnce(&mut io::StdoutLock) -> io::Result<()>) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    write(&mut out)
        .and_then(|()| out.flush())
        .map_err(|e| Failure::usage(format!("stdout: {e}")))
}

fn write_graph<W: Write>(g: &Graph, format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Edgelist => write_edge_list(g, out),
        Format::Json => {
            let mut out = out;
            write_graph_json(g, &mut out)?;
            writeln!(out)
        }
        Format::Dot => write_dot(g, out),
    }
}

fn write_rep<W: Write>(rep: &Representation, mut out: W) -> io::Result<()> {
    write_json(rep, &mut out)?;
    writeln!(out)
}

fn cmd_generate(a: GenerateArgs) -> Result<i32, Failure> {
    if a.runs == 0 {
        return Err(Failure::usage("--runs must be at least 1"));
    }
    if a.binwidth == 0 {
        return Err(Failure::usage("--binwidth must be at least 1"));
    }
    let stats_stdout = matches!(a.stats, Some(None));
    let hist_stdout = matches!(a.histogram, Some(None));
    if stats_stdout && hist_stdout {
        return Err(Failure::usage(
            "--stats and --histogram cannot both write to stdout; give one of them a PATH",
        ));
    }
    let graph_stdout = a.out.is_none() && a.runs == 1 && !stats_stdout && !hist_stdout;
    if a.out.is_none()
        && a.rep_out.is_none()
        && a.stats.is_none()
        && a.histogram.is_none()
        && !graph_stdout
    {
        return Err(Failure::usage(
            "--runs > 1 needs --out, --rep-out, --stats or --histogram",
        ));
    }

    let mut cfg = GenConfig::new(a.n, 0).with_subset_mode(a.subset.0);
    cfg.k_max = a.kmax;
    cfg.k_conn = a.kconn;
    cfg.validate()?;
    let density = a.density.map(|rho| (rho, a.epsilon.unwrap_or(0.05)));
    if let Some((rho, eps)) = density {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(GenError::BadDensity(rho).into());
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(GenError::BadTolerance(eps).into());
        }
        if a.max_attempts == 0 {
            return Err(GenError::NoAttempts.into());
        }
        if a.n < 2 {
            return Err(GenError::DensityNeedsTwoVertices.into());
        }
    }

    let master = effective_seed(a.seed);
    let pool = thread_pool()?;
    let one_run = |i: usize| -> Result<GenResult, GenError> {
        let mut c = cfg.clone();
        c.seed = run_seed(master, i);
        match density {
            Some((rho, eps)) => {
                generate_with_density(&c, rho, eps, a.max_attempts).map(|d| d.result)
            }
            None => generate(&c),
        }
    };

    // Workers generate one chunk at a time; this thread writes in run order.
    let chunk = pool.current_num_threads().max(1);
    let mut reports: Vec<RunReport> = Vec::with_capacity(a.runs);
    for start in (0..a.runs).step_by(chunk) {
        let end = (start + chunk).min(a.runs);
        let results: Vec<_> = pool.install(|| (start..end).into_par_iter().map(one_run).collect());
        for (i, res) in (start..end).zip(results) {
            let r = res.map_err(|e| {
                let f = Failure::from(e);
                Failure {
                    message: format!("run {i}: {}", f.message),
                    ..f
                }
            })?;
            if a.stats.is_some() || a.histogram.is_some() {
                reports
                    .push(run_report(&r.graph, Some(&r.rep), r.elapsed).map_err(Failure::usage)?);
            }
            if let Some(path) = &a.out {
                write_file(&run_path(path, i, a.runs), |w| {
                    write_graph(&r.graph, a.format, w)
                })?;
            } else if graph_stdout {
                write_stdout(|w| write_graph(&r.graph, a.format, w))?;
            }
            if let Some(path) = &a.rep_out {
                write_file(&run_path(path, i, a.runs), |w| write_rep(&r.rep, w))?;
            }
        }
    }

    if let Some(target) = &a.stats {
        match target {
            Some(path) => write_file(path, |w| write_reports_csv(&reports, w))?,
            None => write_stdout(|w| write_reports_csv(&reports, w))?,
        }
    }
    if let Some(target) = &a.histogram {
        let h = histogram(&reports, a.binwidth).map_err(Failure::usage)?;
        match target {
            Some(path) => write_file(path, |w| h.write_csv(w))?,
            None => write_stdout(|w| h.write_csv(w))?,
        }
    }
    Ok(EXIT_OK)
}

/// Collects `name: PASS/FAIL` lines.
struct Report {
    lines: Vec<String>,
    failed: bool,
}

impl Report {
    fn check(&mut self, name: &str, ok: bool) {
        self.lines
            .push(format!("{name}: {}", if ok { "PASS" } else { "FAIL" }));
        self.failed |= !ok;
    }

    fn check_detail(&mut self, name: &str, result: Result<(), String>) {
        match result {
            Ok(()) => self.check(name, true),
            Err(why) => {
                self.lines.push(format!("{name}: FAIL ({why})"));
                self.failed = true;
            }
        }
    }

    fn info(&mut self, line: String) {
        self.lines.push(line);
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn cmd_verify(a: VerifyArgs) -> Result<i32, Failure> {
    let graph = match &a.graph {
        Some(path) => Some(
            read_graph(&read_text(path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let rep = match &a.rep {
        Some(path) => {
            let file = File::open(path).map_err(|e| io_failure(path, e))?;
            Some(
                read_json(io::BufReader::new(file))
                    .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
            )
        }
        None => None,
    };

    let mut report = Report {
        lines: Vec::new(),
        failed: false,
    };
    let derived;
    let g = match (&graph, &rep) {
        (Some(g), _) => g,
        (None, Some(rep)) => {
            derived = rep.intersection_graph();
            &derived
        }
        (None, None) => unreachable!("clap requires --graph or --rep"),
    };
    report.info(format!("vertices: {}, edges: {}", g.n(), g.m()));
    report.check("chordal", is_chordal(g).is_some());

    if let Some(rep) = &rep {
        verify_rep(rep, graph.as_ref(), &mut report);
    }

    for line in &report.lines {
        println!("{line}");
    }
    Ok(if report.failed {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    })
}

/// Checks a representation. A non-minimal one is valid input: it is
/// minimized first, the contraction is checked, and the structural checks
/// run on the result.
fn verify_rep(original: &Representation, graph: Option<&Graph>, report: &mut Report) {
    report.info(format!(
        "subtrees: {}, tree nodes: {}, size: {}",
        original.n(),
        original.t(),
        original.size()
    ));
    if let Some(g) = graph {
        report.check(
            "graph matches representation",
            &original.intersection_graph() == g,
        );
    }
    let minimized;
    let rep = match nested_edge(original) {
        None => {
            report.check("minimal", true);
            original
        }
        Some((a, b)) => {
            let (min, mult) = minimize(original);
            report.info(format!(
                "minimal: NO (edge {a}-{b} is contractible); minimized to {} tree nodes",
                min.t()
            ));
            let same_graph = min.intersection_graph() == original.intersection_graph();
            report.check_detail(
                "contraction",
                if same_graph {
                    size_ratio_report(original, &min, &mult)
                        .map(|_| ())
                        .map_err(|e| e.to_string())
                } else {
                    Err("intersection graph changed".to_string())
                },
            );
            minimized = min;
            &minimized
        }
    };
    let n = rep.n();
    let m = rep.intersection_edge_count();
    report.check("clique tree", clique_tree_check(rep));
    let trace = pruning_trace(rep)
        .map_err(|e| e.to_string())
        .and_then(|t| t.check(n, m).map_err(|e| e.to_string()));
    report.check_detail("pruning trace", trace);
    let size = rep.size();
    report.check_detail(
        "size bound",
        if size <= 2 * m + n {
            Ok(())
        } else {
            Err(format!("size {size} > 2m + n = {}", 2 * m + n))
        },
    );
    report.check(
        "edge load bound",
        edge_load_bound_check(rep).unwrap_or(false),
    );
    match minimal_separators(rep) {
        Ok(seps) => {
            let g = rep.intersection_graph();
            let cliques = seps.separators.iter().all(|s| {
                s.vertices
                    .iter()
                    .enumerate()
                    .all(|(x, &u)| s.vertices[x + 1..].iter().all(|&v| g.has_edge(u, v)))
            });
            let distinct = seps.distinct().len();
            let t = rep.t();
            let bounded = t < 2 || (distinct < t && seps.kappa <= n - t);
            report.check("separators", cliques && bounded);
            report.info(format!("kappa: {}", seps.kappa));
        }
        Err(e) => report.check_detail("separators", Err(e.to_string())),
    }
}

fn cmd_lowerbound(a: LowerboundArgs) -> Result<i32, Failure> {
    let rep = lower_bound_family(a.k).map_err(Failure::usage)?;
    let (minimal, mult) = minimize(&rep);
    let report = size_ratio_report(&rep, &minimal, &mult).map_err(|e| Failure {
        code: EXIT_CHECK_FAILED,
        message: e.to_string(),
    })?;
    if let Some(path) = &a.rep_out {
        write_file(path, |w| write_rep(&rep, w))?;
    }
    if let Some(path) = &a.graph_out {
        let g = minimal.intersection_graph();
        write_file(path, |w| write_graph(&g, a.format, w))?;
    }
    write_stdout(|w| {
        writeln!(w, "{SIZE_RATIO_HEADER}")?;
        writeln!(w, "{}", report.csv_row())
    })?;
    Ok(EXIT_OK)
}

fn parse_sizes(s: &str) -> Result<Vec<usize>, Failure> {
    let sizes: Vec<usize> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .ok()
                .filter(|&n| n >= 2)
                .ok_or_else(|| Failure::usage(format!("--sizes: `{p}` is not an integer >= 2")))
        })
        .collect::<Result<_, _>>()?;
    if sizes.is_empty() {
        return Err(Failure::usage("--sizes must list at least one size"));
    }
    Ok(sizes)
}

fn cmd_bench(a: BenchArgs) -> Result<i32, Failure> {
    let sizes = parse_sizes(&a.sizes)?;
    if a.repeats == 0 {
        return Err(Failure::usage("--repeats must be at least 1"));
    }
    let master = effective_seed(a.seed);
    let mut points = Vec::new();
    let mut ratios = Vec::new();
    let mut out = io::stdout().lock();
    let stdout_err = |e: io::Error| Failure::usage(format!("stdout: {e}"));
    writeln!(out, "n,m,ops,seconds").map_err(stdout_err)?;
    let mut index = 0;
    for &n in &sizes {
        for _ in 0..a.repeats {
            let cfg = GenConfig::new(n, run_seed(master, index));
            index += 1;
            let r = generate_with_density(&cfg, a.density, a.epsilon, a.max_attempts)?.result;
            let m = r.graph.m();
            writeln!(out, "{n},{m},{},{:.6}", r.ops, r.elapsed.as_secs_f64())
                .map_err(stdout_err)?;
            points.push(((n + m) as f64, r.ops as f64));
            ratios.push(r.ops as f64 / (n + m) as f64);
        }
    }
    if let Some(fit) = linear_fit(&points) {
        writeln!(
            out,
            "# fit ops = {:.6}*(n+m) + {:.3}, r_squared = {:.6}",
            fit.slope, fit.intercept, fit.r_squared
        )
        .map_err(stdout_err)?;
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    let spread = ratios
        .iter()
        .map(|r| (r / mean - 1.0).abs())
        .fold(0.0, f64::max);
    writeln!(
        out,
        "# ops/(n+m) min = {lo:.4}, max = {hi:.4}, mean = {mean:.4}, max deviation = {:.2}%",
        100.0 * spread
    )
    .map_err(stdout_err)?;
    out.flush().map_err(stdout_err)?;
    Ok(EXIT_OK)
}
