use crate::error::{Error, Result};

use super::ThroughputSeries;

/// Sample autocorrelation by lag, with the white-noise confidence band.
#[derive(Debug, Clone, PartialEq)]
pub struct AcfSeries {
    /// Index = lag; `coefficients[0] == 1`.
    pub coefficients: Vec<f64>,
    /// Half-width of the 95% band, `1.96 / sqrt(n)`.
    pub confidence_band: f64,
}

impl AcfSeries {
    pub fn lag(&self, h: usize) -> f64 {
        self.coefficients[h]
    }

    pub fn exceeds_band(&self, h: usize) -> bool {
        self.coefficients[h] > self.confidence_band
    }

    /// Largest `|r(h)|` for `h >= 2`.
    pub fn max_abs_beyond_lag1(&self) -> f64 {
        self.coefficients.iter().skip(2).fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Biased sample autocorrelation with global mean subtraction:
/// `r(h) = Σ (c_t - c̄)(c_{t+h} - c̄) / Σ (c_t - c̄)²`.
pub fn acf(series: &ThroughputSeries, max_lag: usize) -> Result<AcfSeries> {
    acf_values(&series.as_f64(), max_lag)
}

pub(crate) fn acf_values(values: &[f64], max_lag: usize) -> Result<AcfSeries> {
    let n = values.len();
    if max_lag < 1 || n <= max_lag {
        return Err(Error::domain(format!(
            "series of length {n} is too short for max lag {max_lag}"
        )));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = values.iter().map(|v| v - mean).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    if denom == 0.0 {
        return Err(Error::domain("autocorrelation of a zero-variance series"));
    }
    let mut coefficients = Vec::with_capacity(max_lag + 1);
    coefficients.push(1.0);
    for h in 1..=max_lag {
        let num: f64 = centered.iter().zip(&centered[h..]).map(|(a, b)| a * b).sum();
        coefficients.push(num / denom);
    }
    Ok(AcfSeries {
        coefficients,
        confidence_band: 1.96 / (n as f64).sqrt(),
    })
}
