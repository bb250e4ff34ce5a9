use log::warn;

use crate::da::ChainHeader;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HashrateEstimate {
    /// `(timestamp, estimated hash rate)` per height.
    pub points: Vec<(f64, f64)>,
    /// Heights dropped because the window spanned no time.
    pub skipped: usize,
}

/// Moving-average estimate: for each height `n >= window`, the work of the
/// last `window` blocks divided by `t_n - t_{n-window}`.
pub fn estimate_hashrate_ma(headers: &[ChainHeader], window: usize) -> Result<HashrateEstimate> {
    if window == 0 || headers.len() <= window {
        return Err(Error::domain(format!(
            "need more than {window} headers, got {}",
            headers.len()
        )));
    }
    let mut work: f64 = headers[1..=window].iter().map(|h| h.difficulty).sum();
    let mut points = Vec::with_capacity(headers.len() - window);
    let mut skipped = 0;
    for n in window..headers.len() {
        if n > window {
            work += headers[n].difficulty - headers[n - window].difficulty;
        }
        let elapsed = headers[n].timestamp - headers[n - window].timestamp;
        if elapsed > 0.0 {
            points.push((headers[n].timestamp, work / elapsed));
        } else {
            skipped += 1;
            warn!("height {}: window spans {elapsed} s, skipping", headers[n].height);
        }
    }
    Ok(HashrateEstimate { points, skipped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpWeighted {
    /// `D_i * exp((t_i - t_now) / S)` per header.
    pub weights: Vec<f64>,
    /// `Σ weights / S`: the exponentially smoothed hash-rate estimate.
    pub hashrate_estimate: f64,
}

/// Difficulties filtered with a negative exponential of their age.
pub fn exp_weighted_difficulties(headers: &[ChainHeader], smoothing: f64, t_now: f64) -> Result<ExpWeighted> {
    if !(smoothing > 0.0) {
        return Err(Error::domain("smoothing must be positive"));
    }
    if headers.iter().any(|h| h.timestamp > t_now) {
        return Err(Error::domain("evaluation time precedes a header timestamp"));
    }
    let weights: Vec<f64> = headers
        .iter()
        .map(|h| h.difficulty * ((h.timestamp - t_now) / smoothing).exp())
        .collect();
    let hashrate_estimate = weights.iter().sum::<f64>() / smoothing;
    Ok(ExpWeighted {
        weights,
        hashrate_estimate,
    })
}
