//! Command-line front end.
//!
//! Exit codes: 0 success (and findings), 1 verify/decompose verdict failure,
//! 2 usage error, 3 alpha table missing a degree, 4 I/O or parse error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analytic::{self, AlphaSource};
use crate::certify::{self, AlphaProvider, Grids, SweepReport};
use crate::decomp::{self, DecompError, DecomposeOptions, StarDecomposition};
use crate::graph::{self, Graph, GreedyRule};

pub const TOOL: &str = "stardecomp";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISSING_ALPHA: i32 = 3;
pub const EXIT_IO: i32 = 4;

const DEFAULT_MAX_TRIES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("alpha table has no entry for d = {0}")]
    MissingAlpha(u32),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::MissingAlpha(_) => EXIT_MISSING_ALPHA,
            CliError::Io { .. } | CliError::Json(_) => EXIT_IO,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "k-star decomposition thresholds and constructions for d-regular graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy thresholds and k_ind for one degree.
    Thresholds(ThresholdsArgs),
    /// Certification sweep over a degree range.
    Certify(CertifyArgs),
    /// Sample a d-regular multigraph from the configuration model.
    Sample(SampleArgs),
    /// Build a k-star decomposition of a graph file.
    Decompose(DecomposeArgs),
    /// Check a decomposition file against a graph file.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GreedyArg {
    RandomOrder,
    MinDegree,
}

impl From<GreedyArg> for GreedyRule {
    fn from(g: GreedyArg) -> Self {
        match g {
            GreedyArg::RandomOrder => GreedyRule::RandomOrder,
            GreedyArg::MinDegree => GreedyRule::MinDegree,
        }
    }
}

#[derive(Debug, Args)]
pub struct AlphaArgs {
    /// CSV file with header `d,alpha`.
    #[arg(long)]
    pub alpha_table: Option<PathBuf>,
    /// Use the closed-form estimate for degrees missing from the table.
    #[arg(long)]
    pub estimate_fallback: bool,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Recorded in the output; the analytic commands use no randomness.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ThresholdsArgs {
    #[arg(long)]
    pub d: u32,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub d_min: u32,
    #[arg(long)]
    pub d_max: u32,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, default_value_t = certify::DEFAULT_BETA_STEP)]
    pub beta_step: f64,
    #[arg(long, default_value_t = certify::DEFAULT_TAU_STEP)]
    pub tau_step: f64,
    #[arg(long, default_value_t = 0.0)]
    pub safety_margin: f64,
    /// Worker threads; 0 lets rayon decide.
    #[arg(long, env = "STARDECOMP_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reject non-simple samples.
    #[arg(long)]
    pub simple: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_TRIES)]
    pub max_tries: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = decomp::DEFAULT_MAX_RETRIES)]
    pub max_retries: usize,
    /// Thinness bound for the independent set (default k).
    #[arg(long)]
    pub d_hat: Option<usize>,
    #[arg(long, value_enum, default_value = "random-order")]
    pub greedy: GreedyArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub decomposition: PathBuf,
}

/// Top-level metadata wrapper for every JSON output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub alpha_source: Option<String>,
    pub payload: T,
}

fn envelope<T>(
    command: &str,
    config: Value,
    seed: u64,
    alpha_source: Option<String>,
    payload: T,
) -> Envelope<T> {
    Envelope {
        tool: TOOL.to_string(),
        version: VERSION.to_string(),
        command: command.to_string(),
        config,
        seed,
        alpha_source,
        payload,
    }
}

fn path_str(p: &Option<PathBuf>) -> Value {
    p.as_ref()
        .map_or(Value::Null, |p| Value::String(p.display().to_string()))
}

/// Sidecar path for metadata of text outputs: `<out>.meta.json`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| io_err(path, e))?);
    w.write_all(bytes).map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))
}

fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_file(path, bytes),
        None => stdout
            .write_all(bytes)
            .map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(v)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Debug, Deserialize)]
struct AlphaRow {
    d: u32,
    alpha: f64,
}

pub fn read_alpha_table(path: &Path) -> Result<BTreeMap<u32, f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let mut table = BTreeMap::new();
    for row in reader.deserialize::<AlphaRow>() {
        let row = row.map_err(|e| io_err(path, e))?;
        if !(row.alpha > 0.0 && row.alpha < 0.5) {
            return Err(io_err(
                path,
                format!("alpha {} for d = {} outside (0, 1/2)", row.alpha, row.d),
            ));
        }
        table.insert(row.d, row.alpha);
    }
    Ok(table)
}

fn read_graph(path: &Path) -> Result<Graph> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    Graph::read_from(BufReader::new(file)).map_err(|e| io_err(path, e))
}

fn read_decomposition(path: &Path) -> Result<StarDecomposition> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    StarDecomposition::read_from(BufReader::new(file)).map_err(|e| io_err(path, e))
}

/// Resolves alpha for a single degree: table, then estimate (d >= 20), then
/// the first-moment bound.
fn single_alpha(d: u32, args: &AlphaArgs) -> Result<(f64, AlphaSource)> {
    if let Some(path) = &args.alpha_table {
        let table = read_alpha_table(path)?;
        if let Some(&a) = table.get(&d) {
            return Ok((a, AlphaSource::Table));
        }
        if !args.estimate_fallback {
            return Err(CliError::MissingAlpha(d));
        }
    }
    if d >= 20 {
        let a = analytic::alpha_fc_estimate(d).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((a, AlphaSource::Estimate))
    } else {
        let a = analytic::alpha_fm(d).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((a, AlphaSource::FirstMoment))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdsPayload {
    #[serde(flatten)]
    pub report: analytic::ThresholdReport,
    pub alpha_fc_estimate: Option<f64>,
    pub frac_threshold: f64,
}

#[derive(Debug, Serialize)]
struct ThresholdsRow {
    d: u32,
    alpha_fm: f64,
    alpha_source: AlphaSource,
    alpha_star: f64,
    kappa_star: f64,
    k_ind: u64,
    frac_part: f64,
    frac_cond_met: bool,
    alpha_lower_ref: f64,
    alpha_fc_estimate: Option<f64>,
    frac_threshold: f64,
}

fn cmd_thresholds(args: &ThresholdsArgs, stdout: &mut dyn Write) -> Result<i32> {
    if args.d < 3 {
        return Err(CliError::Usage(format!(
            "--d must be at least 3, got {}",
            args.d
        )));
    }
    let (alpha, source) = single_alpha(args.d, &args.alpha)?;
    let report = analytic::threshold_report(args.d, alpha, source)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let payload = ThresholdsPayload {
        report,
        alpha_fc_estimate: (args.d >= 20)
            .then(|| analytic::alpha_fc_estimate(args.d).ok())
            .flatten(),
        frac_threshold: analytic::frac_threshold(args.d),
    };
    let config = json!({
        "d": args.d,
        "alpha_table": path_str(&args.alpha.alpha_table),
        "estimate_fallback": args.alpha.estimate_fallback,
        "format": args.out.format,
    });
    let source = Some(source.to_string());
    match args.out.format {
        Format::Json => {
            let env = envelope("thresholds", config, args.out.seed, source, &payload);
            emit(&args.out.out, &to_json(&env)?, stdout)?;
        }
        Format::Csv => {
            let r = &payload.report;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.serialize(ThresholdsRow {
                d: r.d,
                alpha_fm: r.alpha_fm,
                alpha_source: r.alpha_source,
                alpha_star: r.alpha_star,
                kappa_star: r.kappa_star,
                k_ind: r.k_ind,
                frac_part: r.frac_part,
                frac_cond_met: r.frac_cond_met,
                alpha_lower_ref: r.alpha_lower_ref,
                alpha_fc_estimate: payload.alpha_fc_estimate,
                frac_threshold: payload.frac_threshold,
            })
            .map_err(|e| io_err(Path::new("<csv>"), e))?;
            let bytes = w.into_inner().map_err(|e| io_err(Path::new("<csv>"), e))?;
            emit(&args.out.out, &bytes, stdout)?;
            if let Some(out) = &args.out.out {
                let env = envelope("thresholds", config, args.out.seed, source, Value::Null);
                write_file(&meta_path(out), &to_json(&env)?)?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// One CSV row per degree.
#[derive(Debug, Serialize)]
struct SweepRow<'a> {
    d: u32,
    alpha: Option<f64>,
    alpha_source: Option<AlphaSource>,
    k_ind: Option<u32>,
    k_certified: Option<u32>,
    exceptional: bool,
    condition: certify::Condition,
    t1: Option<f64>,
    x1: Option<f64>,
    x2: Option<f64>,
    t2: Option<f64>,
    d_hat: Option<u32>,
    beta_max: Option<f64>,
    k_ind_slack: Option<f64>,
    error: Option<&'a str>,
}

fn sweep_csv(report: &SweepReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.records {
        w.serialize(SweepRow {
            d: r.d,
            alpha: r.alpha,
            alpha_source: r.alpha_source,
            k_ind: r.k_ind,
            k_certified: r.k_certified,
            exceptional: r.exceptional,
            condition: r.condition,
            t1: r.t1,
            x1: r.x1,
            x2: r.x2,
            t2: r.t2,
            d_hat: r.d_hat,
            beta_max: r.beta_max,
            k_ind_slack: r.k_ind_slack,
            error: r.error.as_deref(),
        })
        .map_err(|e| io_err(Path::new("<csv>"), e))?;
    }
    w.into_inner().map_err(|e| io_err(Path::new("<csv>"), e))
}

fn sweep_alpha_source(report: &SweepReport) -> Option<String> {
    let mut sources: Vec<String> = report
        .records
        .iter()
        .filter_map(|r| r.alpha_source.map(|s| s.to_string()))
        .collect();
    sources.sort();
    sources.dedup();
    match sources.len() {
        0 => None,
        1 => sources.pop(),
        _ => Some("mixed".to_string()),
    }
}

fn cmd_certify(args: &CertifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let grids = Grids {
        beta_step: args.beta_step,
        tau_step: args.tau_step,
        safety_margin: args.safety_margin,
    };
    if !(grids.beta_step > 0.0
        && grids.tau_step > 0.0
        && grids.tau_step < 1.0
        && grids.safety_margin >= 0.0)
    {
        return Err(CliError::Usage(
            "grid steps must be positive (tau step below 1) and the margin nonnegative".into(),
        ));
    }
    let provider = match &args.alpha.alpha_table {
        Some(path) => {
            let table = read_alpha_table(path)?;
            if args.alpha.estimate_fallback {
                AlphaProvider::TableWithEstimate(table)
            } else {
                if let Some(d) = (args.d_min..=args.d_max).find(|d| !table.contains_key(d)) {
                    return Err(CliError::MissingAlpha(d));
                }
                AlphaProvider::Table(table)
            }
        }
        None => AlphaProvider::Estimate,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = pool.install(|| certify::sweep(args.d_min, args.d_max, &provider, &grids));

    // thread count and output path are left out so that reports are
    // identical across --threads and destinations
    let config = json!({
        "d_min": args.d_min,
        "d_max": args.d_max,
        "alpha_table": path_str(&args.alpha.alpha_table),
        "estimate_fallback": args.alpha.estimate_fallback,
        "grids": grids,
        "format": args.out.format,
    });
    let source = sweep_alpha_source(&report);
    match args.out.format {
        Format::Json => {
            let env = envelope("certify", config, args.out.seed, source, &report);
            emit(&args.out.out, &to_json(&env)?, stdout)?;
        }
        Format::Csv => {
            emit(&args.out.out, &sweep_csv(&report)?, stdout)?;
            if let Some(out) = &args.out.out {
                let summary = json!({ "exceptional": report.exceptional, "errors": report.errors });
                let env = envelope("certify", config, args.out.seed, source, summary);
                write_file(&meta_path(out), &to_json(&env)?)?;
            }
        }
    }
    if args.out.out.is_some() {
        let list: Vec<String> = report.exceptional.iter().map(u32::to_string).collect();
        writeln!(stdout, "exceptional degrees: [{}]", list.join(", "))
            .map_err(|e| io_err(Path::new("<stdout>"), e))?;
        if !report.errors.is_empty() {
            let list: Vec<String> = report.errors.iter().map(u32::to_string).collect();
            writeln!(stdout, "degrees with errors: [{}]", list.join(", "))
                .map_err(|e| io_err(Path::new("<stdout>"), e))?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplePayload {
    pub n: usize,
    pub d: usize,
    pub edges: usize,
    pub simple: bool,
    pub rng: String,
    pub tries: Option<usize>,
    pub acceptance_rate: Option<f64>,
}

fn cmd_sample(args: &SampleArgs, stdout: &mut dyn Write) -> Result<i32> {
    if args.d == 0 || args.n * args.d % 2 == 1 {
        return Err(CliError::Usage(format!(
            "need d >= 1 and n d even, got n = {}, d = {}",
            args.n, args.d
        )));
    }
    if args.max_tries == 0 {
        return Err(CliError::Usage("--max-tries must be at least 1".into()));
    }
    let (g, stats) = if args.simple {
        let (g, s) = graph::sample_simple(args.n, args.d, args.seed, args.max_tries)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        (g, Some(s))
    } else {
        let g = graph::config_model_sample(args.n, args.d, args.seed)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        (g, None)
    };
    emit(&args.out, g.to_text().as_bytes(), stdout)?;
    if let Some(out) = &args.out {
        let config = json!({
            "n": args.n,
            "d": args.d,
            "simple": args.simple,
            "max_tries": args.max_tries,
        });
        let payload = SamplePayload {
            n: args.n,
            d: args.d,
            edges: g.m(),
            simple: graph::is_simple(&g),
            rng: graph::RNG_NAME.to_string(),
            tries: stats.map(|s| s.tries),
            acceptance_rate: stats.map(|s| s.acceptance_rate),
        };
        let env = envelope("sample", config, args.seed, None, payload);
        write_file(&meta_path(out), &to_json(&env)?)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposePayload {
    pub success: bool,
    pub n: usize,
    pub d: Option<usize>,
    pub k: usize,
    pub d_hat: Option<usize>,
    pub mode: Option<decomp::OrientationMode>,
    pub stars: Option<usize>,
    pub leftover: Option<usize>,
    pub failure_stage: Option<decomp::Stage>,
    pub attempts: Vec<decomp::AttemptReport>,
}

fn cmd_decompose(args: &DecomposeArgs, stdout: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&args.graph)?;
    let options = DecomposeOptions {
        seed: args.seed,
        max_retries: args.max_retries,
        d_hat: args.d_hat,
        greedy: args.greedy.into(),
    };
    let config = json!({
        "graph": args.graph.display().to_string(),
        "k": args.k,
        "max_retries": args.max_retries,
        "d_hat": args.d_hat,
        "greedy": options.greedy,
    });
    let (payload, code) = match decomp::decompose(&g, args.k, &options) {
        Ok(out) => {
            emit(&args.out, out.decomposition.to_text().as_bytes(), stdout)?;
            let payload = DecomposePayload {
                success: true,
                n: g.n(),
                d: Some(out.d),
                k: args.k,
                d_hat: Some(out.d_hat),
                mode: Some(out.mode),
                stars: Some(out.decomposition.stars.len()),
                leftover: Some(out.decomposition.leftover.len()),
                failure_stage: None,
                attempts: out.attempts,
            };
            (payload, EXIT_OK)
        }
        Err(DecompError::Failed(f)) => {
            let payload = DecomposePayload {
                success: false,
                n: f.n,
                d: Some(f.d),
                k: args.k,
                d_hat: None,
                mode: None,
                stars: None,
                leftover: None,
                failure_stage: Some(f.stage),
                attempts: f.attempts,
            };
            (payload, EXIT_FAIL)
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let env = envelope("decompose", config, args.seed, None, payload);
    let bytes = to_json(&env)?;
    match (&args.out, code) {
        (Some(out), _) => {
            write_file(&meta_path(out), &bytes)?;
            if code != EXIT_OK {
                stdout
                    .write_all(&bytes)
                    .map_err(|e| io_err(Path::new("<stdout>"), e))?;
            }
        }
        (None, EXIT_OK) => {}
        (None, _) => stdout
            .write_all(&bytes)
            .map_err(|e| io_err(Path::new("<stdout>"), e))?,
    }
    Ok(code)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let g = read_graph(&args.graph)?;
    let sd = read_decomposition(&args.decomposition)?;
    let report = decomp::verify_decomposition(&g, &sd);
    let w = |stdout: &mut dyn Write, s: &str| {
        writeln!(stdout, "{s}").map_err(|e| io_err(Path::new("<stdout>"), e))
    };
    if report.valid {
        w(
            stdout,
            &format!(
                "valid: {} stars of size {}, {} leftover edges",
                sd.stars.len(),
                sd.k,
                sd.leftover.len()
            ),
        )?;
        Ok(EXIT_OK)
    } else {
        w(stdout, "invalid")?;
        for d in &report.diagnostics {
            w(stdout, &format!("  {d}"))?;
        }
        Ok(EXIT_FAIL)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Thresholds(a) => cmd_thresholds(a, stdout),
        Command::Certify(a) => cmd_certify(a, stdout),
        Command::Sample(a) => cmd_sample(a, stdout),
        Command::Decompose(a) => cmd_decompose(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
