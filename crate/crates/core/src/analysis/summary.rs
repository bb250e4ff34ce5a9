use crate::da::ChainHeader;
use crate::error::Result;

use super::{acf, bucket_blocks, classify_periods, solve_time_stats};

/// Headline numbers for one chain: solve times, hourly classes and the
/// hourly-count autocorrelation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub blocks: usize,
    pub mean_solve_time: f64,
    pub median_solve_time: f64,
    pub p05_solve_time: f64,
    pub p95_solve_time: f64,
    pub hours: usize,
    pub desert_frequency: f64,
    pub normal_frequency: f64,
    pub spike_frequency: f64,
    /// Lags 0..=max_lag of the hourly-count autocorrelation.
    pub acf: Vec<f64>,
    pub acf_band: f64,
    pub final_difficulty: f64,
}

impl RunSummary {
    pub fn acf_lag(&self, h: usize) -> Option<f64> {
        self.acf.get(h).copied()
    }

    /// Largest `|r(h)|` for `h >= 2`.
    pub fn max_abs_acf_beyond_lag1(&self) -> f64 {
        self.acf.iter().skip(2).fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Summarises `chain` with hourly buckets and autocorrelation up to `max_lag`
/// (shortened when the chain covers too few hours).
pub fn summarize(chain: &[ChainHeader], max_lag: usize) -> Result<RunSummary> {
    let st = solve_time_stats(chain)?;
    let series = bucket_blocks(chain, 3600)?;
    let (_, classes) = classify_periods(&series);
    let lag = max_lag.min(series.counts.len().saturating_sub(1));
    let (coefficients, band) = match acf(&series, lag) {
        Ok(a) => (a.coefficients, a.confidence_band),
        Err(_) => (vec![1.0], f64::NAN),
    };
    Ok(RunSummary {
        blocks: chain.len() - 1,
        mean_solve_time: st.mean,
        median_solve_time: st.median,
        p05_solve_time: st.p05,
        p95_solve_time: st.p95,
        hours: series.counts.len(),
        desert_frequency: classes.desert_frequency(),
        normal_frequency: classes.normal_frequency(),
        spike_frequency: classes.spike_frequency(),
        acf: coefficients,
        acf_band: band,
        final_difficulty: chain[chain.len() - 1].difficulty,
    })
}
