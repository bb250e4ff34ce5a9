//! File formats: header and price CSVs, generic series CSVs and the run
//! configuration.
//!
//! CSV files use `,` separators, `.` decimals and `\n` line endings. Times are
//! written with three decimals, other reals with up to 12 significant digits.
//! Readers skip leading `#` lines such as `# powlab-format: 1`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::da::{ChainHeader, DaKind, DifficultyParams, TimestampSource};
use crate::error::{Error, Result};
use crate::miners::MinerPopulation;
use crate::sim::{HashrateSchedule, SimConfig, DEFAULT_MAX_SOLVE_TIME, DEFAULT_STRATEGY_TICK};

pub const FORMAT_VERSION: u32 = 1;
pub const HEADERS_COLUMNS: &str = "height,time,difficulty,miner_id";
pub const PRICES_COLUMNS: &str = "time,price";

/// Three decimal places.
pub fn format_time(t: f64) -> String {
    let s = format!("{t:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// Up to 12 significant digits, trailing zeros trimmed.
pub fn format_value(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v.is_finite() {
            "0".into()
        } else {
            format!("{v}")
        };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, e) = sci.split_once('e').expect("exponent form");
    let exp: i32 = e.parse().expect("integer exponent");
    if !(-5..15).contains(&exp) {
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-comment lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut in_preamble = true;
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(move |(_, l)| {
            if in_preamble && l.starts_with('#') {
                return false;
            }
            in_preamble = false;
            !l.trim().is_empty()
        })
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_real(path: &Path, line: usize, field: &str, raw: &str) -> Result<f64> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| parse_err(path, line, format!("invalid {field} `{raw}`")))
}

/// Parses header CSV text; `path` only labels errors.
pub fn parse_headers(text: &str, path: &Path) -> Result<Vec<ChainHeader>> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, HEADERS_COLUMNS)) => {}
        Some((n, other)) => {
            return Err(parse_err(
                path,
                n,
                format!("expected header `{HEADERS_COLUMNS}`, found `{other}`"),
            ))
        }
        None => return Err(parse_err(path, 1, "missing header row")),
    }
    let mut headers: Vec<ChainHeader> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(path, n, format!("expected 4 fields, found {}", fields.len())));
        }
        let height: u64 = fields[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, n, format!("invalid height `{}`", fields[0])))?;
        let timestamp = parse_real(path, n, "time", fields[1])?;
        let difficulty = parse_real(path, n, "difficulty", fields[2])?;
        if difficulty <= 0.0 {
            return Err(parse_err(
                path,
                n,
                format!("difficulty must be positive, got {difficulty}"),
            ));
        }
        if !seen.insert(height) {
            return Err(parse_err(path, n, format!("duplicate height {height}")));
        }
        let miner = fields[3].trim();
        headers.push(ChainHeader {
            height,
            timestamp,
            difficulty,
            miner_id: (!miner.is_empty()).then(|| miner.to_string()),
        });
    }
    Ok(headers)
}

pub fn read_headers(path: impl AsRef<Path>) -> Result<Vec<ChainHeader>> {
    let path = path.as_ref();
    parse_headers(&read_file(path)?, path)
}

pub fn headers_to_csv(headers: &[ChainHeader]) -> String {
    let mut out = String::with_capacity(32 * (headers.len() + 1));
    out.push_str(HEADERS_COLUMNS);
    out.push('\n');
    for h in headers {
        out.push_str(&format!(
            "{},{},{},{}\n",
            h.height,
            format_time(h.timestamp),
            format_value(h.difficulty),
            h.miner_id.as_deref().unwrap_or("")
        ));
    }
    out
}

pub fn write_headers(headers: &[ChainHeader], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &headers_to_csv(headers))
}

/// A price observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricePoint {
    pub time: f64,
    pub price: f64,
}

pub fn parse_prices(text: &str, path: &Path) -> Result<Vec<PricePoint>> {
    let mut lines = data_lines(text);
    match lines.next() {
        Some((_, PRICES_COLUMNS)) => {}
        Some((n, other)) => {
            return Err(parse_err(
                path,
                n,
                format!("expected header `{PRICES_COLUMNS}`, found `{other}`"),
            ))
        }
        None => return Err(parse_err(path, 1, "missing header row")),
    }
    lines
        .map(|(n, line)| {
            let (t, p) = line
                .split_once(',')
                .ok_or_else(|| parse_err(path, n, "expected 2 fields"))?;
            let price = parse_real(path, n, "price", p)?;
            if price <= 0.0 {
                return Err(parse_err(path, n, "price must be positive"));
            }
            Ok(PricePoint {
                time: parse_real(path, n, "time", t)?,
                price,
            })
        })
        .collect()
}

pub fn read_prices(path: impl AsRef<Path>) -> Result<Vec<PricePoint>> {
    let path = path.as_ref();
    parse_prices(&read_file(path)?, path)
}

pub fn prices_to_csv(prices: &[PricePoint]) -> String {
    let mut out = format!("{PRICES_COLUMNS}\n");
    for p in prices {
        out.push_str(&format!("{},{}\n", format_time(p.time), format_value(p.price)));
    }
    out
}

pub fn write_prices(prices: &[PricePoint], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &prices_to_csv(prices))
}

/// One cell of an exported series.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Time(f64),
    Value(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Time(t) => format_time(*t),
            Cell::Value(v) => format_value(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Value(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn series_to_csv(columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(Cell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_series(columns: &[&str], rows: &[Vec<Cell>], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &series_to_csv(columns, rows))
}

/// On-disk run configuration. Every key except `da` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub da: DaKind,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub ideal_block_time: Option<f64>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<f64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eda_span_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eda_drop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_source: Option<TimestampSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mtp_window: Option<usize>,
    #[serde(rename = "H_B", skip_serializing_if = "Option::is_none")]
    pub base_hashrate: Option<f64>,
    #[serde(rename = "H_G", skip_serializing_if = "Option::is_none")]
    pub greedy_hashrate: Option<f64>,
    #[serde(rename = "H_V", skip_serializing_if = "Option::is_none")]
    pub variable_hashrate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub greedy_threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub logistic_steepness: Option<f64>,
    #[serde(rename = "D0", skip_serializing_if = "Option::is_none")]
    pub initial_difficulty: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_blocks: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy_tick: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_solve_time: Option<f64>,
    /// `[[start_time, hashrate], ...]`; replaces the miner population.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hashrate_schedule: Option<Vec<[f64; 2]>>,
}

pub const DEFAULT_N_BLOCKS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

impl ConfigFile {
    /// A document naming only the algorithm; everything else defaults.
    pub fn minimal(da: DaKind) -> Self {
        ConfigFile {
            da,
            ideal_block_time: None,
            smoothing: None,
            window: None,
            eda_span_threshold: None,
            eda_drop: None,
            timestamp_source: None,
            mtp_window: None,
            base_hashrate: None,
            greedy_hashrate: None,
            variable_hashrate: None,
            greedy_threshold: None,
            logistic_steepness: None,
            initial_difficulty: None,
            n_blocks: None,
            seed: None,
            strategy_tick: None,
            start_time: None,
            max_solve_time: None,
            hashrate_schedule: None,
        }
    }

    /// Fills defaults. Miners default to the hopping scenario with `H_B = 1`.
    pub fn resolve(&self) -> Result<SimConfig> {
        let defaults = DifficultyParams::for_algorithm(self.da);
        let params = DifficultyParams {
            ideal_block_time: self.ideal_block_time.unwrap_or(defaults.ideal_block_time),
            smoothing: self.smoothing.unwrap_or(defaults.smoothing),
            window: self.window.unwrap_or(defaults.window),
            eda_span_threshold: self.eda_span_threshold.unwrap_or(defaults.eda_span_threshold),
            eda_drop: self.eda_drop.unwrap_or(defaults.eda_drop),
            timestamp_source: self.timestamp_source.unwrap_or(defaults.timestamp_source),
            mtp_window: self.mtp_window.unwrap_or(defaults.mtp_window),
            ..defaults
        };
        let base = self.base_hashrate.unwrap_or(1.0);
        let scenario = MinerPopulation::hopping_scenario(base);
        let population = MinerPopulation {
            base_hashrate: base,
            greedy_hashrate: self.greedy_hashrate.unwrap_or(scenario.greedy_hashrate),
            variable_hashrate: self.variable_hashrate.unwrap_or(scenario.variable_hashrate),
            greedy_threshold: self.greedy_threshold.unwrap_or(scenario.greedy_threshold),
            logistic_steepness: self.logistic_steepness.unwrap_or(scenario.logistic_steepness),
        };
        let hashrate_schedule = self
            .hashrate_schedule
            .as_ref()
            .map(|steps| HashrateSchedule::new(steps.iter().map(|s| (s[0], s[1])).collect()))
            .transpose()?;
        let config = SimConfig {
            da: self.da,
            params,
            population,
            initial_difficulty: self.initial_difficulty,
            n_blocks: self.n_blocks.unwrap_or(DEFAULT_N_BLOCKS),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            strategy_tick: self.strategy_tick.unwrap_or(DEFAULT_STRATEGY_TICK),
            start_time: self.start_time.unwrap_or(0.0),
            max_solve_time: self.max_solve_time.unwrap_or(DEFAULT_MAX_SOLVE_TIME),
            hashrate_schedule,
        };
        config.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(config)
    }

    /// Every key spelled out, so the document records all defaults.
    pub fn from_config(c: &SimConfig) -> Self {
        ConfigFile {
            da: c.da,
            ideal_block_time: Some(c.params.ideal_block_time),
            smoothing: Some(c.params.smoothing),
            window: Some(c.params.window),
            eda_span_threshold: Some(c.params.eda_span_threshold),
            eda_drop: Some(c.params.eda_drop),
            timestamp_source: Some(c.params.timestamp_source),
            mtp_window: Some(c.params.mtp_window),
            base_hashrate: Some(c.population.base_hashrate),
            greedy_hashrate: Some(c.population.greedy_hashrate),
            variable_hashrate: Some(c.population.variable_hashrate),
            greedy_threshold: Some(c.population.greedy_threshold),
            logistic_steepness: Some(c.population.logistic_steepness),
            initial_difficulty: c.initial_difficulty,
            n_blocks: Some(c.n_blocks),
            seed: Some(c.seed),
            strategy_tick: Some(c.strategy_tick),
            start_time: Some(c.start_time),
            max_solve_time: Some(c.max_solve_time),
            hashrate_schedule: c
                .hashrate_schedule
                .as_ref()
                .map(|s| s.steps().iter().map(|&(t, h)| [t, h]).collect()),
        }
    }
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile> {
    toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
}

pub fn parse_config(text: &str) -> Result<SimConfig> {
    parse_config_file(text)?.resolve()
}

pub fn read_config(path: impl AsRef<Path>) -> Result<SimConfig> {
    let path = path.as_ref();
    parse_config(&read_file(path)?).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Canonical serialization of a resolved config.
pub fn config_to_string(config: &SimConfig) -> Result<String> {
    toml::to_string(&ConfigFile::from_config(config)).map_err(|e| Error::Config(e.to_string()))
}

pub fn write_config(config: &SimConfig, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &config_to_string(config)?)
}
