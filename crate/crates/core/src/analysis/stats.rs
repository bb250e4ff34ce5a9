use crate::da::ChainHeader;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveTimeStats {
    pub mean: f64,
    pub median: f64,
    pub p05: f64,
    pub p95: f64,
    /// Solve times included in the statistics.
    pub count: usize,
    /// Negative solve times (out-of-order timestamps) left out.
    pub excluded: usize,
}

/// Linear interpolation between order statistics.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Statistics of consecutive timestamp differences.
pub fn solve_time_stats(headers: &[ChainHeader]) -> Result<SolveTimeStats> {
    if headers.len() < 2 {
        return Err(Error::domain("solve times need at least two headers"));
    }
    let all = headers.windows(2).map(|w| w[1].timestamp - w[0].timestamp);
    let mut times: Vec<f64> = all.clone().filter(|st| *st >= 0.0).collect();
    let excluded = headers.len() - 1 - times.len();
    if times.is_empty() {
        return Err(Error::domain("every solve time is negative"));
    }
    times.sort_by(f64::total_cmp);
    Ok(SolveTimeStats {
        mean: times.iter().sum::<f64>() / times.len() as f64,
        median: quantile(&times, 0.5),
        p05: quantile(&times, 0.05),
        p95: quantile(&times, 0.95),
        count: times.len(),
        excluded,
    })
}

/// `(D_n / D_m)^(1 / (n - m))` over the given difficulties, in log space.
pub fn geometric_mean_ratio(difficulties: &[f64]) -> Result<f64> {
    if difficulties.len() < 2 {
        return Err(Error::domain("geometric mean ratio needs at least two difficulties"));
    }
    if difficulties.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::domain("difficulties must be positive"));
    }
    let steps = (difficulties.len() - 1) as f64;
    let first = difficulties[0];
    let last = difficulties[difficulties.len() - 1];
    Ok(((last.ln() - first.ln()) / steps).exp())
}

/// Mean and standard error of the consecutive log ratios `ln(D_i / D_{i-1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRatioSummary {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

impl LogRatioSummary {
    /// `|mean| / std_error`.
    pub fn z_score(&self) -> f64 {
        self.mean.abs() / self.std_error
    }
}

pub fn log_ratio_summary(difficulties: &[f64]) -> Result<LogRatioSummary> {
    if difficulties.len() < 3 {
        return Err(Error::domain("log ratio summary needs at least three difficulties"));
    }
    if difficulties.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::domain("difficulties must be positive"));
    }
    let logs: Vec<f64> = difficulties.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let m = logs.len() as f64;
    let mean = logs.iter().sum::<f64>() / m;
    let var = logs.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(LogRatioSummary {
        mean,
        std_error: (var / m).sqrt(),
        count: logs.len(),
    })
}
