//! Difficulty algorithms.
//!
//! Every algorithm works in difficulty space (expected hashes per block) with
//! `f64` arithmetic and consumes an immutable view of the chain. A chain view
//! is a slice of [`ChainHeader`]s whose first element is the anchor (genesis,
//! or the block at which the algorithm was activated) and whose last element
//! is the parent of the block being mined.
//!
//! Four algorithms are provided:
//!
//! - **btc2016**: the Bitcoin retarget, recomputed every `N = 2016` blocks and
//!   clamped to a factor of 4 in either direction.
//! - **cw144**: the per-block chain-work moving average over the last `N = 144`
//!   blocks, with the elapsed time clamped to `[12 h, 48 h]`.
//! - **eda**: the Bitcoin retarget composed with the emergency rule that drops
//!   difficulty by 20% whenever six successive timestamps span more than 12 h.
//! - **nefda**: the negative exponential filter,
//!   `D_n = D_0 * exp((t_0 + n*T - t_n) / S)`, evaluated against real time
//!   (the difficulty decays while a block is being mined), the parent block's
//!   timestamp, or the median time past.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest magnitude accepted for the argument of `exp`.
pub const EXP_GUARD: f64 = 700.0;

/// One mined block.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainHeader {
    pub height: u64,
    /// Seconds since the epoch.
    pub timestamp: f64,
    /// Expected number of hashes needed to mine the block.
    pub difficulty: f64,
    pub miner_id: Option<String>,
}

impl ChainHeader {
    pub fn new(height: u64, timestamp: f64, difficulty: f64) -> Self {
        ChainHeader {
            height,
            timestamp,
            difficulty,
            miner_id: None,
        }
    }

    pub fn with_miner(mut self, miner: impl Into<String>) -> Self {
        self.miner_id = Some(miner.into());
        self
    }
}

/// Which clock NEFDA is evaluated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimestampSource {
    /// The block's own timestamp: the target decays continuously while mining.
    RealTime,
    /// The parent block's timestamp; the target is fixed for the whole interval.
    LastBlock,
    /// Median of the last `mtp_window` timestamps.
    MedianTimePast,
}

impl fmt::Display for TimestampSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimestampSource::RealTime => "real-time",
            TimestampSource::LastBlock => "last-block",
            TimestampSource::MedianTimePast => "median-time-past",
        })
    }
}

impl FromStr for TimestampSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real-time" | "rtt" => Ok(TimestampSource::RealTime),
            "last-block" => Ok(TimestampSource::LastBlock),
            "median-time-past" | "mtp" => Ok(TimestampSource::MedianTimePast),
            other => Err(Error::domain(format!("unknown timestamp source `{other}`"))),
        }
    }
}

/// Lower and upper bound of a clamp.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamp {
    pub min: f64,
    pub max: f64,
}

impl Clamp {
    pub const fn new(min: f64, max: f64) -> Self {
        Clamp { min, max }
    }

    pub fn apply(&self, value: f64) -> f64 {
        value.max(self.min).min(self.max)
    }
}

/// Constants shared by all difficulty algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyParams {
    /// Ideal block time `T` in seconds.
    pub ideal_block_time: f64,
    /// NEFDA smoothing time constant `S` in seconds.
    pub smoothing: f64,
    /// Window length `N` in blocks (2016 for btc2016, 144 for cw144).
    pub window: u64,
    /// Bounds on the btc2016 adjustment factor.
    pub retarget_clamp: Clamp,
    /// Bounds on the cw144 elapsed time, in seconds.
    pub elapsed_clamp: Clamp,
    pub eda_span_threshold: f64,
    pub eda_drop: f64,
    /// Number of successive timestamps whose span the EDA inspects.
    pub eda_span_blocks: usize,
    pub timestamp_source: TimestampSource,
    pub mtp_window: usize,
}

pub const BTC_WINDOW: u64 = 2016;
pub const CW144_WINDOW: u64 = 144;
pub const DEFAULT_SMOOTHING: f64 = 43_200.0;

impl Default for DifficultyParams {
    fn default() -> Self {
        DifficultyParams {
            ideal_block_time: 600.0,
            smoothing: DEFAULT_SMOOTHING,
            window: CW144_WINDOW,
            retarget_clamp: Clamp::new(0.25, 4.0),
            elapsed_clamp: Clamp::new(43_200.0, 172_800.0),
            eda_span_threshold: 43_200.0,
            eda_drop: 0.20,
            eda_span_blocks: 6,
            timestamp_source: TimestampSource::RealTime,
            mtp_window: 11,
        }
    }
}

impl DifficultyParams {
    /// Defaults with the window appropriate for `kind`.
    pub fn for_algorithm(kind: DaKind) -> Self {
        DifficultyParams {
            window: kind.default_window(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::domain(msg.to_string()));
        if !(self.ideal_block_time > 0.0 && self.ideal_block_time.is_finite()) {
            return fail("ideal block time must be positive");
        }
        if !(self.smoothing > 0.0) {
            return fail("smoothing must be positive");
        }
        if self.window < 1 {
            return fail("window must be at least one block");
        }
        for (name, c) in [
            ("retarget clamp", self.retarget_clamp),
            ("elapsed clamp", self.elapsed_clamp),
        ] {
            if !(c.min > 0.0 && c.min < c.max) {
                return Err(Error::domain(format!("{name} must satisfy 0 < min < max")));
            }
        }
        if !(self.retarget_clamp.min < 1.0 && self.retarget_clamp.max > 1.0) {
            return fail("retarget clamp must satisfy min < 1 < max");
        }
        if !(self.eda_drop > 0.0 && self.eda_drop < 1.0) {
            return fail("eda drop must lie in (0, 1)");
        }
        if !(self.eda_span_threshold > 0.0) {
            return fail("eda span threshold must be positive");
        }
        if self.eda_span_blocks < 2 {
            return fail("eda span needs at least two timestamps");
        }
        if self.mtp_window == 0 || self.mtp_window.is_multiple_of(2) {
            return fail("mtp window must be odd");
        }
        Ok(())
    }
}

/// Evaluates `exp(x)` after checking `x` against [`EXP_GUARD`].
pub fn guarded_exp(x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > EXP_GUARD {
        return Err(Error::Overflow {
            argument: x,
            limit: EXP_GUARD,
        });
    }
    Ok(x.exp())
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be positive, got {value}")))
    }
}

/// Bitcoin's retarget: `D * clamp(N*T / T_A, 1/4, 4)`.
pub fn btc_retarget(prev_difficulty: f64, params: &DifficultyParams, actual_elapsed: f64) -> Result<f64> {
    check_positive("difficulty", prev_difficulty)?;
    check_positive("elapsed time", actual_elapsed)?;
    let expected = params.window as f64 * params.ideal_block_time;
    Ok(prev_difficulty * params.retarget_clamp.apply(expected / actual_elapsed))
}

/// Chain work and elapsed time spanned by a window of headers.
#[derive(Debug, Clone, PartialEq)]
pub struct RetargetWindow {
    /// Sum of difficulties over `(start_height, end_height]`.
    pub chain_work: f64,
    pub raw_elapsed: f64,
    /// `raw_elapsed` after the elapsed clamp.
    pub elapsed: f64,
    pub start_height: u64,
    pub end_height: u64,
}

impl RetargetWindow {
    pub fn from_headers(window: &[ChainHeader], params: &DifficultyParams) -> Result<Self> {
        let (first, last) = match window {
            [first, .., last] => (first, last),
            _ => return Err(Error::domain("window needs at least two headers")),
        };
        if window.windows(2).any(|w| w[1].height != w[0].height + 1) {
            return Err(Error::domain("window is not height-contiguous"));
        }
        let chain_work: f64 = window[1..].iter().map(|h| h.difficulty).sum();
        let raw_elapsed = last.timestamp - first.timestamp;
        Ok(RetargetWindow {
            chain_work,
            raw_elapsed,
            elapsed: params.elapsed_clamp.apply(raw_elapsed),
            start_height: first.height,
            end_height: last.height,
        })
    }

    pub fn hashrate(&self) -> f64 {
        self.chain_work / self.elapsed
    }
}

/// The cw-144 difficulty `CW / T_A * T` for a window of `N + 1` headers.
pub fn cw144_difficulty(window: &[ChainHeader], params: &DifficultyParams) -> Result<f64> {
    let w = RetargetWindow::from_headers(window, params)?;
    check_positive("chain work", w.chain_work)?;
    Ok(w.hashrate() * params.ideal_block_time)
}

/// Emergency adjustment: multiplies `current_difficulty` by `1 - eda_drop`
/// when the last `eda_span_blocks` timestamps span more than the threshold.
pub fn eda_adjust(recent: &[ChainHeader], current_difficulty: f64, params: &DifficultyParams) -> Result<f64> {
    check_positive("difficulty", current_difficulty)?;
    let k = params.eda_span_blocks;
    if recent.len() < k {
        return Err(Error::domain(format!("eda needs {k} headers, got {}", recent.len())));
    }
    let span = recent[recent.len() - 1].timestamp - recent[recent.len() - k].timestamp;
    if span > params.eda_span_threshold {
        Ok(current_difficulty * (1.0 - params.eda_drop))
    } else {
        Ok(current_difficulty)
    }
}

/// One NEFDA step: `D_{n-1} * exp((T - st) / S)`.
pub fn nefda_relative(prev_difficulty: f64, solve_time: f64, params: &DifficultyParams) -> Result<f64> {
    check_positive("difficulty", prev_difficulty)?;
    Ok(prev_difficulty * guarded_exp((params.ideal_block_time - solve_time) / params.smoothing)?)
}

/// The recurrence before the discretisation correction:
/// `D_{n-1} * (1 + T/S) * exp(-st / S)`.
pub fn nefda_uncorrected_relative(prev_difficulty: f64, solve_time: f64, params: &DifficultyParams) -> Result<f64> {
    check_positive("difficulty", prev_difficulty)?;
    let growth = 1.0 + params.ideal_block_time / params.smoothing;
    Ok(prev_difficulty * growth * guarded_exp(-solve_time / params.smoothing)?)
}

/// Anchor of the absolute NEFDA form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NefdaState {
    pub anchor_difficulty: f64,
    pub anchor_time: f64,
    pub anchor_height: u64,
    /// `exp(T/S)`; the per-block growth that offsets the decay of an on-time block.
    pub correction: f64,
}

impl NefdaState {
    pub fn new(
        anchor_difficulty: f64,
        anchor_time: f64,
        anchor_height: u64,
        params: &DifficultyParams,
    ) -> Result<Self> {
        check_positive("anchor difficulty", anchor_difficulty)?;
        Ok(NefdaState {
            anchor_difficulty,
            anchor_time,
            anchor_height,
            correction: guarded_exp(params.ideal_block_time / params.smoothing)?,
        })
    }

    pub fn from_anchor(anchor: &ChainHeader, params: &DifficultyParams) -> Result<Self> {
        Self::new(anchor.difficulty, anchor.timestamp, anchor.height, params)
    }

    /// Difficulty after `blocks` blocks (possibly fractional) evaluated at time `t`.
    pub(crate) fn evaluate(&self, blocks: f64, t: f64, params: &DifficultyParams) -> Result<f64> {
        let lag = self.anchor_time + blocks * params.ideal_block_time - t;
        Ok(self.anchor_difficulty * guarded_exp(lag / params.smoothing)?)
    }
}

/// Absolute NEFDA form: `D_0 * exp((t_0 + n*T - t_n) / S)`, with `n` counted
/// from the anchor. Only the height and the evaluation time matter.
pub fn nefda_absolute(state: &NefdaState, n: u64, t_n: f64, params: &DifficultyParams) -> Result<f64> {
    state.evaluate(n as f64, t_n, params)
}

/// Real-time target that block `next_height` must meet at wall-clock `t`.
pub fn nefda_target_at(state: &NefdaState, next_height: u64, t: f64, params: &DifficultyParams) -> Result<f64> {
    let n = next_height
        .checked_sub(state.anchor_height)
        .ok_or_else(|| Error::domain(format!("height {next_height} precedes anchor {}", state.anchor_height)))?;
    nefda_absolute(state, n, t, params)
}

/// Median of the last `k` timestamps (all of them when fewer are available).
pub fn nefda_mtp_timestamp(recent: &[ChainHeader], k: usize) -> Result<f64> {
    if recent.is_empty() || k == 0 {
        return Err(Error::domain("median time past needs at least one header"));
    }
    let take = k.min(recent.len());
    let mut times: Vec<f64> = recent[recent.len() - take..].iter().map(|h| h.timestamp).collect();
    times.sort_by(f64::total_cmp);
    let mid = take / 2;
    Ok(if take % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    })
}

/// Smoothing time that matches an `N`-block simple moving average: `(N+1)/2 * T`.
pub fn smoothing_from_window(window: u64, ideal_block_time: f64) -> f64 {
    (window as f64 + 1.0) / 2.0 * ideal_block_time
}

/// Algorithm selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DaKind {
    #[serde(rename = "btc2016")]
    Btc2016,
    #[serde(rename = "cw144")]
    Cw144,
    #[serde(rename = "eda", alias = "eda-composite")]
    EdaComposite,
    #[serde(rename = "nefda")]
    Nefda,
}

impl DaKind {
    pub const ALL: [DaKind; 4] = [DaKind::Btc2016, DaKind::Cw144, DaKind::EdaComposite, DaKind::Nefda];

    pub fn default_window(self) -> u64 {
        match self {
            DaKind::Btc2016 | DaKind::EdaComposite => BTC_WINDOW,
            DaKind::Cw144 | DaKind::Nefda => CW144_WINDOW,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DaKind::Btc2016 => "btc2016",
            DaKind::Cw144 => "cw144",
            DaKind::EdaComposite => "eda",
            DaKind::Nefda => "nefda",
        }
    }
}

impl fmt::Display for DaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "btc2016" | "btc" => Ok(DaKind::Btc2016),
            "cw144" | "cw-144" => Ok(DaKind::Cw144),
            "eda" | "eda-composite" => Ok(DaKind::EdaComposite),
            "nefda" => Ok(DaKind::Nefda),
            other => Err(Error::domain(format!("unknown difficulty algorithm `{other}`"))),
        }
    }
}

/// The difficulty the next block has to meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NextTarget {
    /// Constant for the whole block interval.
    Fixed(f64),
    /// Real-time target decaying with time constant `S`.
    Decaying { state: NefdaState, blocks: u64 },
}

impl NextTarget {
    pub fn at(&self, t: f64, params: &DifficultyParams) -> Result<f64> {
        match *self {
            NextTarget::Fixed(d) => Ok(d),
            NextTarget::Decaying { ref state, blocks } => nefda_absolute(state, blocks, t, params),
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, NextTarget::Decaying { .. })
    }
}

/// A configured difficulty algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyAlgorithm {
    pub kind: DaKind,
    pub params: DifficultyParams,
}

impl DifficultyAlgorithm {
    pub fn new(kind: DaKind, params: DifficultyParams) -> Result<Self> {
        params.validate()?;
        Ok(DifficultyAlgorithm { kind, params })
    }

    /// Target for the block following `chain`. `chain[0]` is the anchor and
    /// the last element is the parent.
    pub fn next_target(&self, chain: &[ChainHeader]) -> Result<NextTarget> {
        let anchor = chain.first().ok_or_else(|| Error::domain("chain view is empty"))?;
        let parent = &chain[chain.len() - 1];
        let next_height = parent.height + 1;
        let p = &self.params;
        let n = p.window as usize;
        let d = match self.kind {
            DaKind::Btc2016 => self.btc_step(chain, next_height)?,
            DaKind::EdaComposite => {
                let base = self.btc_step(chain, next_height)?;
                if !next_height.is_multiple_of(p.window) && chain.len() >= p.eda_span_blocks {
                    eda_adjust(chain, base, p)?
                } else {
                    base
                }
            }
            DaKind::Cw144 => {
                if chain.len() > n {
                    cw144_difficulty(&chain[chain.len() - n - 1..], p)?
                } else {
                    anchor.difficulty
                }
            }
            DaKind::Nefda => {
                let state = NefdaState::from_anchor(anchor, p)?;
                let since_anchor = parent.height - anchor.height;
                match p.timestamp_source {
                    TimestampSource::RealTime => {
                        return Ok(NextTarget::Decaying {
                            state,
                            blocks: since_anchor + 1,
                        })
                    }
                    TimestampSource::LastBlock => state.evaluate(since_anchor as f64, parent.timestamp, p)?,
                    TimestampSource::MedianTimePast => {
                        let mut k = p.mtp_window.min(chain.len());
                        if k.is_multiple_of(2) {
                            k -= 1;
                        }
                        let mtp = nefda_mtp_timestamp(chain, k)?;
                        // the median sits (k-1)/2 blocks behind the parent
                        let blocks = since_anchor as f64 - (k as f64 - 1.0) / 2.0;
                        state.evaluate(blocks, mtp, p)?
                    }
                }
            }
        };
        Ok(NextTarget::Fixed(d))
    }

    /// Difficulty demanded of a block appended to `chain` at time `t`.
    pub fn difficulty_for(&self, chain: &[ChainHeader], t: f64) -> Result<f64> {
        self.next_target(chain)?.at(t, &self.params)
    }

    fn btc_step(&self, chain: &[ChainHeader], next_height: u64) -> Result<f64> {
        let p = &self.params;
        let parent = &chain[chain.len() - 1];
        let n = p.window as usize;
        if next_height.is_multiple_of(p.window) && chain.len() > n {
            let start = &chain[chain.len() - n - 1];
            btc_retarget(parent.difficulty, p, parent.timestamp - start.timestamp)
        } else {
            Ok(parent.difficulty)
        }
    }
}
