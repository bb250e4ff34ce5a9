//! The `powlab` command line: `simulate`, `analyze`, `trace` and `compare`.
//!
//! Every subcommand is a thin binding over the library. Machine output goes
//! to files; stdout carries a short human summary. Exit code 2 means a usage
//! error, 1 a runtime error.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{
    self, acf, bucket_blocks, classify_periods, dari_ratio, estimate_hashrate_ma, exp_weighted_difficulties,
    geometric_mean_ratio, log_ratio_summary, miner_shares, solve_time_stats, DariPoint, PoissonModel, RunSummary,
};
use crate::da::{ChainHeader, DaKind, DifficultyAlgorithm, TimestampSource};
use crate::error::Error;
use crate::io::{self, Cell, ConfigFile, PricePoint};
use crate::sim::{run_simulation, SimConfig, SimResult, RNG_ALGORITHM};

#[derive(Debug, Parser)]
#[command(name = "powlab", version, about = "Proof-of-work difficulty algorithm laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a mining simulation and write its chain as CSV.
    Simulate(SimulateArgs),
    /// Compute a report over a header CSV.
    Analyze(AnalyzeArgs),
    /// Replay a difficulty algorithm over an existing header CSV.
    Trace(TraceArgs),
    /// Run two difficulty algorithms on the same scenario and seed.
    Compare(CompareArgs),
}

/// Scenario and algorithm settings. Each flag mirrors a config key and
/// overrides it; unset keys take the documented defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioFlags {
    /// Run configuration (TOML) to start from.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of blocks to mine [config: n_blocks, default 100000].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub blocks: Option<u64>,
    /// PRNG seed [config: seed, default 1].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ideal block time in seconds [config: T, default 600].
    #[arg(long)]
    pub ideal_time: Option<f64>,
    /// NEFDA smoothing time constant in seconds [config: S, default 43200].
    #[arg(long)]
    pub smoothing: Option<f64>,
    /// Window length in blocks [config: N, default 2016 for btc2016/eda, 144 otherwise].
    #[arg(long)]
    pub window: Option<u64>,
    /// EDA trigger span in seconds [config: eda_span_threshold, default 43200].
    #[arg(long)]
    pub eda_span_threshold: Option<f64>,
    /// EDA drop fraction [config: eda_drop, default 0.2].
    #[arg(long)]
    pub eda_drop: Option<f64>,
    /// NEFDA clock: real-time, last-block or median-time-past [config: timestamp_source, default real-time].
    #[arg(long)]
    pub timestamp_source: Option<TimestampSource>,
    /// Median-time-past window, odd [config: mtp_window, default 11].
    #[arg(long)]
    pub mtp_window: Option<usize>,
    /// Loyal hash rate H_B in hashes/s [config: H_B, default 1].
    #[arg(long)]
    pub base_hashrate: Option<f64>,
    /// Greedy hash rate as a multiple of H_B [config: H_G, default 4].
    #[arg(long)]
    pub greedy_mult: Option<f64>,
    /// Variable hash rate as a multiple of H_B [config: H_V, default 4].
    #[arg(long)]
    pub variable_mult: Option<f64>,
    /// Profitability gain at which greedy miners join [config: greedy_threshold, default 0.05].
    #[arg(long)]
    pub greedy_threshold: Option<f64>,
    /// Logistic steepness of variable miners [config: logistic_steepness, default 40].
    #[arg(long)]
    pub steepness: Option<f64>,
    /// Genesis difficulty [config: D0, default (H_B + H_V/2) * T].
    #[arg(long)]
    pub initial_difficulty: Option<f64>,
    /// Seconds between hopper re-evaluations [config: strategy_tick, default 60].
    #[arg(long)]
    pub strategy_tick: Option<f64>,
    /// Genesis timestamp [config: start_time, default 0].
    #[arg(long)]
    pub start_time: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Difficulty algorithm [config: da, default nefda].
    #[arg(long)]
    pub da: Option<DaKind>,
    #[command(flatten)]
    pub scenario: ScenarioFlags,
    /// Output header CSV; metadata goes to `<out>.meta.toml`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    /// Blocks per bucket.
    Throughput,
    /// Autocorrelation of blocks per bucket.
    Acf,
    /// Desert/normal/spike class of each bucket.
    Classes,
    /// Moving-average hash-rate estimate.
    Hashrate,
    /// Difficulties filtered with a negative exponential of their age.
    Expfilter,
    /// Geometric mean of consecutive difficulty ratios.
    Growth,
    /// Difficulty-adjusted reward index (needs --prices).
    Dari,
    /// Per-miner block shares by period class.
    Miners,
    /// Solve-time statistics.
    Solvetimes,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Header CSV to analyze.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub report: Report,
    /// Bucket width in seconds.
    #[arg(long, default_value_t = 3600, value_parser = clap::value_parser!(u64).range(1..))]
    pub bucket: u64,
    /// Largest autocorrelation lag.
    #[arg(long, default_value_t = 50)]
    pub max_lag: usize,
    /// Ideal block time used for Poisson expectations.
    #[arg(long, default_value_t = 600.0)]
    pub ideal_time: f64,
    /// Moving-average window for the hashrate report, in blocks.
    #[arg(long, default_value_t = 6)]
    pub window: usize,
    /// Time constant for the expfilter report, in seconds.
    #[arg(long, default_value_t = 43_200.0)]
    pub smoothing: f64,
    /// Price CSV (`time,price`) for the dari report.
    #[arg(long)]
    pub prices: Option<PathBuf>,
    /// Block reward in coins for the dari report.
    #[arg(long, default_value_t = 1.0)]
    pub reward: f64,
    /// Second chain for a dari ratio (input over other).
    #[arg(long, requires = "other_prices")]
    pub other: Option<PathBuf>,
    /// Price CSV of the second chain.
    #[arg(long, requires = "other")]
    pub other_prices: Option<PathBuf>,
    /// Alignment bucket of the dari ratio, in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub ratio_bucket: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    /// Header CSV to replay; its first row anchors the algorithm.
    #[arg(long)]
    pub input: PathBuf,
    /// Difficulty algorithm (required unless --config names one).
    #[arg(long)]
    pub da: Option<DaKind>,
    #[command(flatten)]
    pub scenario: ScenarioFlags,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub da_a: DaKind,
    #[arg(long)]
    pub da_b: DaKind,
    #[command(flatten)]
    pub scenario: ScenarioFlags,
    /// Writes `<out>_a.csv`, `<out>_b.csv` and `<out>_summary.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

impl clap::builder::ValueParserFactory for DaKind {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<DaKind>().map_err(|e| e.to_string()))
    }
}

impl clap::builder::ValueParserFactory for TimestampSource {
    type Parser = clap::builder::ValueParser;
    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<TimestampSource>().map_err(|e| e.to_string()))
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Runtime(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("powlab: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate(args) => simulate(&args),
        Command::Analyze(args) => analyze(&args),
        Command::Trace(args) => trace(&args),
        Command::Compare(args) => compare(&args),
    }
}

impl ScenarioFlags {
    /// Applies `inline flag > config file > default` precedence.
    pub fn resolve(&self, da: Option<DaKind>) -> CliResult<SimConfig> {
        let mut file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                io::parse_config_file(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::minimal(da.unwrap_or(DaKind::Nefda)),
        };
        if let Some(da) = da {
            if file.da != da {
                // window defaults differ between algorithms
                if self.config.is_some() && file.window.is_some() && self.window.is_none() {
                    file.window = None;
                }
                file.da = da;
            }
        }
        macro_rules! overlay {
            ($($flag:ident => $key:ident),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { file.$key = Some(v); })*
            };
        }
        overlay!(
            blocks => n_blocks,
            seed => seed,
            ideal_time => ideal_block_time,
            smoothing => smoothing,
            window => window,
            eda_span_threshold => eda_span_threshold,
            eda_drop => eda_drop,
            timestamp_source => timestamp_source,
            mtp_window => mtp_window,
            base_hashrate => base_hashrate,
            greedy_threshold => greedy_threshold,
            steepness => logistic_steepness,
            initial_difficulty => initial_difficulty,
            strategy_tick => strategy_tick,
            start_time => start_time,
        );
        let base = file.base_hashrate.unwrap_or(1.0);
        if let Some(m) = self.greedy_mult {
            file.greedy_hashrate = Some(m * base);
        }
        if let Some(m) = self.variable_mult {
            file.variable_hashrate = Some(m * base);
        }
        file.resolve().map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    format: u32,
    rng: &'a str,
    config: ConfigFile,
    summary: SummaryRecord,
}

#[derive(Serialize)]
struct SummaryRecord {
    blocks: usize,
    mean_solve_time: f64,
    median_solve_time: f64,
    p05_solve_time: f64,
    p95_solve_time: f64,
    hours: usize,
    desert_frequency: f64,
    normal_frequency: f64,
    spike_frequency: f64,
    acf_band: f64,
    acf_lag1: f64,
    acf_lag24: f64,
    acf_lag48: f64,
    final_difficulty: f64,
}

impl From<&RunSummary> for SummaryRecord {
    fn from(s: &RunSummary) -> Self {
        let lag = |h| s.acf_lag(h).unwrap_or(f64::NAN);
        SummaryRecord {
            blocks: s.blocks,
            mean_solve_time: s.mean_solve_time,
            median_solve_time: s.median_solve_time,
            p05_solve_time: s.p05_solve_time,
            p95_solve_time: s.p95_solve_time,
            hours: s.hours,
            desert_frequency: s.desert_frequency,
            normal_frequency: s.normal_frequency,
            spike_frequency: s.spike_frequency,
            acf_band: s.acf_band,
            acf_lag1: lag(1),
            acf_lag24: lag(24),
            acf_lag48: lag(48),
            final_difficulty: s.final_difficulty,
        }
    }
}

/// `<out>.meta.toml`
pub fn metadata_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".meta.toml");
    PathBuf::from(name)
}

fn write_run(config: &SimConfig, result: &SimResult, out: &Path) -> CliResult<RunSummary> {
    io::write_headers(&result.chain, out)?;
    let summary = analysis::summarize(&result.chain, 50)?;
    let meta = Metadata {
        format: io::FORMAT_VERSION,
        rng: RNG_ALGORITHM,
        config: ConfigFile::from_config(config),
        summary: SummaryRecord::from(&summary),
    };
    let text = toml::to_string(&meta).map_err(|e| Error::Config(e.to_string()))?;
    let meta_path = metadata_path(out);
    std::fs::write(&meta_path, text).map_err(|source| Error::Io {
        path: meta_path,
        source,
    })?;
    Ok(summary)
}

fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let config = args.scenario.resolve(args.da)?;
    let result = run_simulation(&config)?;
    let s = write_run(&config, &result, &args.out)?;
    println!(
        "{}: {} blocks, mean solve time {:.2} s (median {:.2} s), deserts {:.2}%, spikes {:.2}%",
        config.da,
        s.blocks,
        s.mean_solve_time,
        s.median_solve_time,
        100.0 * s.desert_frequency,
        100.0 * s.spike_frequency
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn load_headers(path: &Path) -> CliResult<Vec<ChainHeader>> {
    let h = io::read_headers(path)?;
    if h.is_empty() {
        return Err(Error::Domain(format!("{}: no header rows", path.display())).into());
    }
    Ok(h)
}

/// Price in force at each header time; headers before the first price are dropped.
fn dari_points(headers: &[ChainHeader], prices: &[PricePoint], reward: f64) -> CliResult<Vec<DariPoint>> {
    let mut prices = prices.to_vec();
    prices.sort_by(|a, b| a.time.total_cmp(&b.time));
    let points: Vec<DariPoint> = headers
        .iter()
        .filter_map(|h| {
            let idx = prices.partition_point(|p| p.time <= h.timestamp);
            (idx > 0).then(|| DariPoint::new(h.timestamp, reward, prices[idx - 1].price, h.difficulty))
        })
        .collect();
    if points.is_empty() {
        return Err(Error::Domain("no header falls after the first price observation".into()).into());
    }
    Ok(points)
}

fn analyze(args: &AnalyzeArgs) -> CliResult<()> {
    let headers = load_headers(&args.input)?;
    let (columns, rows): (Vec<&str>, Vec<Vec<Cell>>) = match args.report {
        Report::Throughput => {
            let s = bucket_blocks(&headers, args.bucket)?;
            let rows = (0..s.counts.len())
                .map(|i| vec![Cell::Time(s.bucket_start(i)), s.counts[i].into()])
                .collect();
            println!("{} buckets of {} s", s.counts.len(), args.bucket);
            (vec!["bucket_start", "count"], rows)
        }
        Report::Acf => {
            let s = bucket_blocks(&headers, args.bucket)?;
            let a = acf(&s, args.max_lag)?;
            let rows = a
                .coefficients
                .iter()
                .enumerate()
                .map(|(lag, &r)| vec![lag.into(), r.into(), a.confidence_band.into()])
                .collect();
            println!(
                "confidence band ±{:.4} over {} buckets",
                a.confidence_band,
                s.counts.len()
            );
            (vec!["lag", "coefficient", "band"], rows)
        }
        Report::Classes => {
            let s = bucket_blocks(&headers, args.bucket)?;
            let (classes, summary) = classify_periods(&s);
            let model = PoissonModel::for_bucket(args.bucket as f64, args.ideal_time);
            let desert = model.desert_probability(analysis::PeriodClass::DESERT_MAX);
            let spike = model.spike_probability(analysis::PeriodClass::SPIKE_MIN);
            println!("class    observed  poisson(λ={})", model.lambda);
            println!(
                "desert   {:7.2}%  {:7.2}%",
                100.0 * summary.desert_frequency(),
                100.0 * desert
            );
            println!(
                "normal   {:7.2}%  {:7.2}%",
                100.0 * summary.normal_frequency(),
                100.0 * (1.0 - desert - spike)
            );
            println!(
                "spike    {:7.2}%  {:7.2}%",
                100.0 * summary.spike_frequency(),
                100.0 * spike
            );
            let rows = classes
                .iter()
                .enumerate()
                .map(|(i, c)| vec![Cell::Time(s.bucket_start(i)), s.counts[i].into(), c.name().into()])
                .collect();
            (vec!["bucket_start", "count", "class"], rows)
        }
        Report::Hashrate => {
            let est = estimate_hashrate_ma(&headers, args.window)?;
            if est.skipped > 0 {
                println!("skipped {} windows with no elapsed time", est.skipped);
            }
            let rows = est.points.iter().map(|&(t, h)| vec![Cell::Time(t), h.into()]).collect();
            (vec!["time", "hashrate"], rows)
        }
        Report::Expfilter => {
            let now = headers.iter().map(|h| h.timestamp).fold(f64::NEG_INFINITY, f64::max);
            let w = exp_weighted_difficulties(&headers, args.smoothing, now)?;
            println!(
                "smoothed hash rate estimate at t = {now:.3}: {}",
                io::format_value(w.hashrate_estimate)
            );
            let rows = headers
                .iter()
                .zip(&w.weights)
                .map(|(h, &x)| vec![h.height.into(), Cell::Time(h.timestamp), x.into()])
                .collect();
            (vec!["height", "time", "weight"], rows)
        }
        Report::Growth => {
            let d: Vec<f64> = headers.iter().map(|h| h.difficulty).collect();
            let g = geometric_mean_ratio(&d)?;
            let mut rows = vec![vec!["geometric_mean_ratio".into(), g.into()]];
            if let Ok(s) = log_ratio_summary(&d) {
                rows.push(vec!["mean_log_ratio".into(), s.mean.into()]);
                rows.push(vec!["std_error".into(), s.std_error.into()]);
            }
            println!("geometric mean ratio {g:.9}");
            (vec!["stat", "value"], rows)
        }
        Report::Dari => {
            let prices_path = args
                .prices
                .as_ref()
                .ok_or_else(|| CliError::Usage("prices required: pass --prices PATH for the dari report".into()))?;
            let a = dari_points(&headers, &io::read_prices(prices_path)?, args.reward)?;
            match (&args.other, &args.other_prices) {
                (Some(other), Some(other_prices)) => {
                    let b_headers = load_headers(other)?;
                    let b = dari_points(&b_headers, &io::read_prices(other_prices)?, args.reward)?;
                    let ratio = dari_ratio(&a, &b, args.ratio_bucket)?;
                    let mean = ratio.iter().map(|r| r.ratio).sum::<f64>() / ratio.len() as f64;
                    println!("mean dari ratio {mean:.4} over {} buckets", ratio.len());
                    let rows = ratio.iter().map(|r| vec![Cell::Time(r.time), r.ratio.into()]).collect();
                    (vec!["time", "ratio"], rows)
                }
                _ => {
                    let rows = a
                        .iter()
                        .map(|p| {
                            vec![
                                Cell::Time(p.time),
                                p.reward.into(),
                                p.price.into(),
                                p.difficulty.into(),
                                p.dari.into(),
                            ]
                        })
                        .collect();
                    (vec!["time", "reward", "price", "difficulty", "dari"], rows)
                }
            }
        }
        Report::Miners => {
            if headers.iter().all(|h| h.miner_id.is_none()) {
                return Err(CliError::Runtime(Error::Domain(
                    "miners report requires the miner_id field, which is empty in every row".into(),
                )));
            }
            let s = bucket_blocks(&headers, args.bucket)?;
            let (classes, _) = classify_periods(&s);
            let rows = miner_shares(&headers, &s, &classes)?
                .into_iter()
                .map(|r| {
                    vec![
                        r.miner.into(),
                        r.normal.into(),
                        r.spike.into(),
                        r.desert.into(),
                        r.total.into(),
                    ]
                })
                .collect();
            (
                vec!["miner", "normal_pct", "spike_pct", "desert_pct", "total_pct"],
                rows,
            )
        }
        Report::Solvetimes => {
            let s = solve_time_stats(&headers)?;
            println!(
                "mean solve time {:.2} s over {} intervals ({} excluded)",
                s.mean, s.count, s.excluded
            );
            let rows = vec![
                vec!["count".into(), s.count.into()],
                vec!["excluded".into(), s.excluded.into()],
                vec!["mean".into(), s.mean.into()],
                vec!["median".into(), s.median.into()],
                vec!["p05".into(), s.p05.into()],
                vec!["p95".into(), s.p95.into()],
            ];
            (vec!["stat", "value"], rows)
        }
    };
    io::write_series(&columns, &rows, &args.out)?;
    Ok(())
}

/// Difficulty the algorithm demands at every height after the anchor.
pub fn trace_rows(da: &DifficultyAlgorithm, headers: &[ChainHeader]) -> crate::Result<Vec<(u64, f64, f64)>> {
    (1..headers.len())
        .map(|i| {
            let h = &headers[i];
            let recomputed = da.difficulty_for(&headers[..i], h.timestamp)?;
            Ok((h.height, h.difficulty, recomputed))
        })
        .collect()
}

fn trace(args: &TraceArgs) -> CliResult<()> {
    if args.da.is_none() && args.scenario.config.is_none() {
        return Err(CliError::Usage("--da is required".into()));
    }
    let config = args.scenario.resolve(args.da)?;
    let da = config.algorithm()?;
    let headers = load_headers(&args.input)?;
    let rows = trace_rows(&da, &headers)?;
    let worst = rows.iter().map(|&(_, a, r)| (a / r - 1.0).abs()).fold(0.0, f64::max);
    let cells: Vec<Vec<Cell>> = rows
        .iter()
        .map(|&(h, a, r)| vec![h.into(), a.into(), r.into(), (a / r).into()])
        .collect();
    io::write_series(
        &["height", "actual_difficulty", "recomputed_difficulty", "ratio"],
        &cells,
        &args.out,
    )?;
    println!(
        "{}: {} heights replayed, max |ratio - 1| = {worst:.3e}",
        da.kind,
        rows.len()
    );
    Ok(())
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn compare(args: &CompareArgs) -> CliResult<()> {
    let config_a = args.scenario.resolve(Some(args.da_a))?;
    let config_b = args.scenario.resolve(Some(args.da_b))?;
    let (ra, rb) = std::thread::scope(|s| {
        let a = s.spawn(|| run_simulation(&config_a));
        let b = s.spawn(|| run_simulation(&config_b));
        (
            a.join().expect("simulation thread panicked"),
            b.join().expect("simulation thread panicked"),
        )
    });
    let (ra, rb) = (ra?, rb?);
    let sa = write_run(&config_a, &ra, &suffixed(&args.out, "_a.csv"))?;
    let sb = write_run(&config_b, &rb, &suffixed(&args.out, "_b.csv"))?;
    let row = |label: &str, kind: DaKind, s: &RunSummary| -> Vec<Cell> {
        vec![
            label.into(),
            kind.name().into(),
            s.blocks.into(),
            s.mean_solve_time.into(),
            s.median_solve_time.into(),
            (100.0 * s.desert_frequency).into(),
            (100.0 * s.spike_frequency).into(),
            s.acf_lag(1).unwrap_or(f64::NAN).into(),
            s.acf_lag(24).unwrap_or(f64::NAN).into(),
            s.acf_lag(48).unwrap_or(f64::NAN).into(),
            s.max_abs_acf_beyond_lag1().into(),
            s.acf_band.into(),
        ]
    };
    io::write_series(
        &[
            "run",
            "da",
            "blocks",
            "mean_solve_time",
            "median_solve_time",
            "desert_pct",
            "spike_pct",
            "acf_lag1",
            "acf_lag24",
            "acf_lag48",
            "max_abs_acf_beyond_lag1",
            "acf_band",
        ],
        &[row("a", args.da_a, &sa), row("b", args.da_b, &sb)],
        suffixed(&args.out, "_summary.csv"),
    )?;
    for (label, kind, s) in [("a", args.da_a, &sa), ("b", args.da_b, &sb)] {
        println!(
            "{label} {kind:>7}: mean {:.2} s, deserts {:.2}%, spikes {:.2}%, acf(24) {:+.4} (band ±{:.4})",
            s.mean_solve_time,
            100.0 * s.desert_frequency,
            100.0 * s.spike_frequency,
            s.acf_lag(24).unwrap_or(f64::NAN),
            s.acf_band
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_config_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "da = \"cw144\"\nseed = 9\nn_blocks = 500\nH_B = 2.0\n").unwrap();
        let flags = ScenarioFlags {
            config: Some(path),
            seed: Some(3),
            greedy_mult: Some(1.5),
            ..Default::default()
        };
        let c = flags.resolve(None).unwrap();
        assert_eq!(c.da, DaKind::Cw144);
        assert_eq!((c.seed, c.n_blocks), (3, 500));
        assert_eq!(c.population.greedy_hashrate, 3.0);
        assert_eq!(c.population.variable_hashrate, 8.0);
    }

    #[test]
    fn da_flag_switches_default_window() {
        let c = ScenarioFlags::default().resolve(Some(DaKind::Btc2016)).unwrap();
        assert_eq!(c.params.window, 2016);
        let c = ScenarioFlags::default().resolve(None).unwrap();
        assert_eq!(c.da, DaKind::Nefda);
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        let flags = ScenarioFlags {
            mtp_window: Some(4),
            ..Default::default()
        };
        assert!(matches!(flags.resolve(None), Err(CliError::Usage(_))));
    }

    #[test]
    fn metadata_path_appends_suffix() {
        assert_eq!(
            metadata_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.csv.meta.toml")
        );
    }
}
