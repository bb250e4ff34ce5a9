/// Expected block counts per bucket when blocks arrive as a Poisson process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonModel {
    pub lambda: f64,
}

impl PoissonModel {
    /// `bucket_seconds / T`; six blocks per hour for ten-minute blocks.
    pub fn for_bucket(bucket_seconds: f64, ideal_block_time: f64) -> Self {
        PoissonModel {
            lambda: bucket_seconds / ideal_block_time,
        }
    }

    pub fn pmf(&self, k: u64) -> f64 {
        poisson_pmf(k, self.lambda)
    }

    pub fn cdf(&self, k: u64) -> f64 {
        poisson_cdf(k, self.lambda)
    }

    /// `P(K <= desert_max)`.
    pub fn desert_probability(&self, desert_max: u64) -> f64 {
        self.cdf(desert_max)
    }

    /// `P(K >= spike_min)`.
    pub fn spike_probability(&self, spike_min: u64) -> f64 {
        if spike_min == 0 {
            1.0
        } else {
            1.0 - self.cdf(spike_min - 1)
        }
    }
}

/// `e^-λ λ^k / k!`, built up by the recurrence `p_k = p_{k-1} λ / k`.
pub fn poisson_pmf(k: u64, lambda: f64) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=k {
        p *= lambda / i as f64;
    }
    p
}

pub fn poisson_cdf(k: u64, lambda: f64) -> f64 {
    let mut p = (-lambda).exp();
    let mut sum = p;
    for i in 1..=k {
        p *= lambda / i as f64;
        sum += p;
    }
    sum.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stirling series for ln(k!), independent of the recurrence.
    fn ln_factorial(k: u64) -> f64 {
        if k < 20 {
            return (1..=k).map(|i| (i as f64).ln()).sum();
        }
        let n = k as f64;
        n * n.ln() - n + 0.5 * (2.0 * std::f64::consts::PI * n).ln() + 1.0 / (12.0 * n) - 1.0 / (360.0 * n.powi(3))
            + 1.0 / (1260.0 * n.powi(5))
    }

    #[test]
    fn reported_constants() {
        let desert = poisson_cdf(1, 6.0);
        let spike = 1.0 - poisson_cdf(11, 6.0);
        assert_eq!(format!("{:.4}", desert), "0.0174");
        assert_eq!(format!("{:.4}", spike), "0.0201");
        // the normal share is the complement of the two rounded figures; unrounded it is 0.962557
        assert_eq!(format!("{:.4}", 1.0 - 0.0174 - 0.0201), "0.9625");
        assert!((1.0 - desert - spike - 0.9625).abs() < 1e-4);
        assert!((poisson_pmf(0, 6.0) - 0.002479).abs() < 5e-7);
    }

    #[test]
    fn model_helpers() {
        let m = PoissonModel::for_bucket(3600.0, 600.0);
        assert_eq!(m.lambda, 6.0);
        assert_eq!(m.desert_probability(1), poisson_cdf(1, 6.0));
        assert_eq!(m.spike_probability(12), 1.0 - poisson_cdf(11, 6.0));
        assert_eq!(m.spike_probability(0), 1.0);
    }

    #[test]
    fn pmf_matches_log_gamma() {
        for k in 0..=200u64 {
            let direct = (-6.0 + k as f64 * 6.0f64.ln() - ln_factorial(k)).exp();
            assert!((poisson_pmf(k, 6.0) - direct).abs() <= 1e-12, "k = {k}");
        }
    }

    #[test]
    fn pmf_sums_to_one_and_cdf_is_monotone() {
        let total: f64 = (0..=200).map(|k| poisson_pmf(k, 6.0)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let cdf: Vec<f64> = (0..=200).map(|k| poisson_cdf(k, 6.0)).collect();
        assert!(cdf.windows(2).all(|w| w[1] >= w[0]));
        assert!((cdf[200] - 1.0).abs() < 1e-12);
    }
}
