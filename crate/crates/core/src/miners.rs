//! Hash-rate supply model.
//!
//! Three miner classes share the network: loyal base miners that always mine,
//! greedy hoppers that switch all of their hash rate in once profitability is
//! at least `greedy_threshold` above its starting value, and variable hoppers
//! that follow a logistic curve in the profitability change.

use crate::error::{Error, Result};

pub const DEFAULT_GREEDY_THRESHOLD: f64 = 0.05;
/// `6 / 0.15`: the logistic curve moves from ~0.25% to ~99.75% between -15% and +15%.
pub const DEFAULT_LOGISTIC_STEEPNESS: f64 = 6.0 / 0.15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinerPopulation {
    /// Loyal hash rate `H_B`, hashes per second.
    pub base_hashrate: f64,
    /// `H_G`, all-or-nothing hoppers.
    pub greedy_hashrate: f64,
    /// `H_V`, logistic hoppers.
    pub variable_hashrate: f64,
    pub greedy_threshold: f64,
    pub logistic_steepness: f64,
}

impl MinerPopulation {
    pub fn new(base: f64, greedy: f64, variable: f64) -> Self {
        MinerPopulation {
            base_hashrate: base,
            greedy_hashrate: greedy,
            variable_hashrate: variable,
            greedy_threshold: DEFAULT_GREEDY_THRESHOLD,
            logistic_steepness: DEFAULT_LOGISTIC_STEEPNESS,
        }
    }

    /// Only loyal miners: the hash rate never changes.
    pub fn constant(hashrate: f64) -> Self {
        Self::new(hashrate, 0.0, 0.0)
    }

    /// Greedy and variable hoppers each bring four times the base hash rate.
    pub fn hopping_scenario(base: f64) -> Self {
        Self::new(base, 4.0 * base, 4.0 * base)
    }

    pub fn max_hashrate(&self) -> f64 {
        self.base_hashrate + self.greedy_hashrate + self.variable_hashrate
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.base_hashrate > 0.0 && self.base_hashrate.is_finite()) {
            return Err(Error::domain("base hash rate must be positive"));
        }
        if !(self.greedy_hashrate >= 0.0 && self.variable_hashrate >= 0.0) {
            return Err(Error::domain("hopper hash rates must be non-negative"));
        }
        if !(self.logistic_steepness > 0.0) {
            return Err(Error::domain("logistic steepness must be positive"));
        }
        if !self.greedy_threshold.is_finite() {
            return Err(Error::domain("greedy threshold must be finite"));
        }
        Ok(())
    }

    /// Per-class hash rate at profitability change `x`.
    pub fn allocate(&self, x: ProfitabilitySignal) -> Allocation {
        Allocation {
            base: self.base_hashrate,
            greedy: greedy_allocation(x, self),
            variable: logistic_allocation(x, self),
        }
    }
}

/// Relative change in profitability, `p / p0 - 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ProfitabilitySignal(pub f64);

impl ProfitabilitySignal {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Hash rate contributed by each miner class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub base: f64,
    pub greedy: f64,
    pub variable: f64,
}

impl Allocation {
    pub fn total(&self) -> f64 {
        self.base + self.greedy + self.variable
    }
}

/// Profitability relative to the start, with reward and price held fixed:
/// reward per unit of work scales as `1 / difficulty`.
pub fn profitability_change(current_difficulty: f64, initial_difficulty: f64) -> Result<ProfitabilitySignal> {
    if !(current_difficulty > 0.0 && initial_difficulty > 0.0) {
        return Err(Error::domain(format!(
            "difficulties must be positive (current {current_difficulty}, initial {initial_difficulty})"
        )));
    }
    Ok(ProfitabilitySignal(initial_difficulty / current_difficulty - 1.0))
}

pub fn greedy_allocation(x: ProfitabilitySignal, pop: &MinerPopulation) -> f64 {
    if x.0 >= pop.greedy_threshold {
        pop.greedy_hashrate
    } else {
        0.0
    }
}

pub fn logistic_allocation(x: ProfitabilitySignal, pop: &MinerPopulation) -> f64 {
    pop.variable_hashrate / (1.0 + (-pop.logistic_steepness * x.0).exp())
}

pub fn total_hashrate(x: ProfitabilitySignal, pop: &MinerPopulation) -> f64 {
    pop.base_hashrate + greedy_allocation(x, pop) + logistic_allocation(x, pop)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn x(v: f64) -> ProfitabilitySignal {
        ProfitabilitySignal(v)
    }

    #[test]
    fn profitability_examples() {
        assert_eq!(profitability_change(50.0, 50.0).unwrap().value(), 0.0);
        assert_relative_eq!(
            profitability_change(100.0 / 1.05, 100.0).unwrap().value(),
            0.05,
            max_relative = 1e-12
        );
        assert_eq!(profitability_change(200.0, 100.0).unwrap().value(), -0.5);
        assert!(profitability_change(0.0, 100.0).is_err());
    }

    #[test]
    fn greedy_examples() {
        let pop = MinerPopulation::hopping_scenario(1.0);
        assert_eq!(greedy_allocation(x(0.05), &pop), 4.0);
        assert_eq!(greedy_allocation(x(0.049), &pop), 0.0);
        assert_eq!(greedy_allocation(x(-0.2), &pop), 0.0);
    }

    #[test]
    fn logistic_examples() {
        let pop = MinerPopulation::hopping_scenario(1.0);
        assert_eq!(logistic_allocation(x(0.0), &pop), 2.0);
        let e6 = (6.0f64).exp();
        assert_relative_eq!(
            logistic_allocation(x(0.15), &pop),
            4.0 / (1.0 + 1.0 / e6),
            max_relative = 1e-12
        );
        assert_relative_eq!(logistic_allocation(x(0.15), &pop), 3.99009, epsilon = 1e-4);
        assert_relative_eq!(
            logistic_allocation(x(-0.15), &pop),
            4.0 / (1.0 + e6),
            max_relative = 1e-12
        );
        assert_relative_eq!(logistic_allocation(x(-0.15), &pop), 0.00991, epsilon = 1e-4);
    }

    #[test]
    fn total_examples() {
        let pop = MinerPopulation::hopping_scenario(1.0);
        assert_eq!(total_hashrate(x(0.0), &pop), 3.0);
        assert_eq!(total_hashrate(x(f64::INFINITY), &pop), 9.0);
        assert_eq!(total_hashrate(x(f64::NEG_INFINITY), &pop), 1.0);
        assert_eq!(pop.allocate(x(0.0)).total(), 3.0);
    }

    #[test]
    fn validation() {
        assert!(MinerPopulation::constant(0.0).validate().is_err());
        assert!(MinerPopulation::new(1.0, -1.0, 0.0).validate().is_err());
        assert!(MinerPopulation::hopping_scenario(2.0).validate().is_ok());
    }

    proptest! {
        #[test]
        fn logistic_is_bounded_monotone_and_symmetric(a in -5.0f64..5.0, b in -5.0f64..5.0, hv in 0.0f64..100.0) {
            let pop = MinerPopulation::new(1.0, 0.0, hv);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(logistic_allocation(x(lo), &pop) <= logistic_allocation(x(hi), &pop));
            let v = logistic_allocation(x(a), &pop);
            prop_assert!((0.0..=hv).contains(&v));
            let sum = v + logistic_allocation(x(-a), &pop);
            prop_assert!((sum - hv).abs() <= 1e-12 * hv.max(1.0));
        }

        #[test]
        fn greedy_is_a_single_step(v in -1.0f64..1.0) {
            let pop = MinerPopulation::hopping_scenario(1.0);
            let g = greedy_allocation(x(v), &pop);
            prop_assert_eq!(g, if v >= 0.05 { 4.0 } else { 0.0 });
        }

        #[test]
        fn total_stays_within_bounds(v in -1.0f64..10.0, hb in 0.1f64..10.0, hg in 0.0f64..40.0, hv in 0.0f64..40.0) {
            let pop = MinerPopulation::new(hb, hg, hv);
            let h = total_hashrate(x(v), &pop);
            prop_assert!(h >= hb && h <= pop.max_hashrate() * (1.0 + 1e-15));
        }
    }
}
