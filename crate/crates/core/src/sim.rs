//! Event-driven mining simulator.
//!
//! Blocks arrive as a piecewise inhomogeneous Poisson process. Each block
//! draws one unit-exponential "work budget" `E`; the block is found when the
//! integrated intensity `∫ H(t) / D(t) dt` since the parent reaches `E`.
//! Hash rate is re-evaluated at every strategy tick and at every arrival and
//! is constant in between, so each segment is either homogeneous (fixed
//! target) or has the closed-form intensity of a decaying NEFDA target.
//! Unused budget carries across segment boundaries, which keeps the sampler
//! exact.
//!
//! Block timestamps are quantised to whole milliseconds (strictly increasing)
//! before the block's difficulty is computed, so a chain written with three
//! decimal places replays bit-for-bit.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::da::{ChainHeader, DaKind, DifficultyAlgorithm, DifficultyParams, NextTarget, EXP_GUARD};
use crate::error::{Error, Result};
use crate::miners::{logistic_allocation, profitability_change, MinerPopulation, ProfitabilitySignal};

/// Identifier of the generator behind every simulation stream.
pub const RNG_ALGORITHM: &str = "chacha12";
pub const DEFAULT_STRATEGY_TICK: f64 = 60.0;
pub const DEFAULT_MAX_SOLVE_TIME: f64 = 30.0 * 86_400.0;

/// Scripted hash rate: piecewise constant, `(start_time, hashrate)` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct HashrateSchedule {
    steps: Vec<(f64, f64)>,
}

impl HashrateSchedule {
    pub fn new(mut steps: Vec<(f64, f64)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::domain("hash rate schedule is empty"));
        }
        if steps.iter().any(|&(t, h)| !(h > 0.0) || !t.is_finite()) {
            return Err(Error::domain(
                "hash rate schedule needs finite times and positive rates",
            ));
        }
        steps.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(HashrateSchedule { steps })
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }

    /// Rate in effect at `t`; the first step also covers earlier times.
    pub fn at(&self, t: f64) -> f64 {
        let idx = self.steps.partition_point(|&(start, _)| start <= t);
        self.steps[idx.saturating_sub(1)].1
    }

    fn next_change_after(&self, t: f64) -> Option<f64> {
        let idx = self.steps.partition_point(|&(start, _)| start <= t);
        self.steps.get(idx).map(|s| s.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub da: DaKind,
    pub params: DifficultyParams,
    pub population: MinerPopulation,
    /// Overrides the equilibrium default `(H_B + logistic(0)) * T`.
    pub initial_difficulty: Option<f64>,
    pub n_blocks: u64,
    pub seed: u64,
    pub strategy_tick: f64,
    pub start_time: f64,
    /// Abort when a single solve time exceeds this many seconds.
    pub max_solve_time: f64,
    /// When set, replaces the miner population as the hash-rate source.
    pub hashrate_schedule: Option<HashrateSchedule>,
}

impl SimConfig {
    pub fn new(da: DaKind, population: MinerPopulation, n_blocks: u64, seed: u64) -> Self {
        SimConfig {
            da,
            params: DifficultyParams::for_algorithm(da),
            population,
            initial_difficulty: None,
            n_blocks,
            seed,
            strategy_tick: DEFAULT_STRATEGY_TICK,
            start_time: 0.0,
            max_solve_time: DEFAULT_MAX_SOLVE_TIME,
            hashrate_schedule: None,
        }
    }

    /// 100 000 blocks with greedy and variable hoppers at 4x the base hash rate.
    pub fn hopping_scenario(da: DaKind, seed: u64) -> Self {
        Self::new(da, MinerPopulation::hopping_scenario(1.0), 100_000, seed)
    }

    /// Genesis difficulty: the override, or the difficulty that puts the
    /// network in equilibrium at launch.
    pub fn resolved_initial_difficulty(&self) -> f64 {
        if let Some(d) = self.initial_difficulty {
            return d;
        }
        let launch_hashrate = match &self.hashrate_schedule {
            Some(s) => s.at(self.start_time),
            None => self.population.base_hashrate + logistic_allocation(ProfitabilitySignal(0.0), &self.population),
        };
        launch_hashrate * self.params.ideal_block_time
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.population.validate()?;
        if self.n_blocks < 1 {
            return Err(Error::domain("n_blocks must be at least 1"));
        }
        if !(self.strategy_tick > 0.0) {
            return Err(Error::domain("strategy tick must be positive"));
        }
        if !(self.max_solve_time > 0.0) {
            return Err(Error::domain("max solve time must be positive"));
        }
        if !self.start_time.is_finite() {
            return Err(Error::domain("start time must be finite"));
        }
        let d0 = self.resolved_initial_difficulty();
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::domain("initial difficulty must be positive"));
        }
        Ok(())
    }

    pub fn algorithm(&self) -> Result<DifficultyAlgorithm> {
        DifficultyAlgorithm::new(self.da, self.params.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Genesis followed by the mined blocks.
    pub chain: Vec<ChainHeader>,
    /// `(time, total hash rate)` at every change point.
    pub hashrate_trace: Vec<(f64, f64)>,
    pub rng_algorithm: &'static str,
}

impl SimResult {
    /// The mined blocks, without genesis.
    pub fn headers(&self) -> &[ChainHeader] {
        &self.chain[1..]
    }

    pub fn genesis(&self) -> &ChainHeader {
        &self.chain[0]
    }

    /// Acceptance difficulty of every mined block.
    pub fn difficulty_trace(&self) -> Vec<f64> {
        self.headers().iter().map(|h| h.difficulty).collect()
    }

    /// `(t_last - t_genesis) / n`.
    pub fn mean_solve_time(&self) -> f64 {
        let last = &self.chain[self.chain.len() - 1];
        (last.timestamp - self.chain[0].timestamp) / (self.chain.len() - 1) as f64
    }
}

/// Inverse-CDF draw of a solve time at constant difficulty and hash rate.
pub fn sample_solve_time_fixed(difficulty: f64, hashrate: f64, u: f64) -> f64 {
    -(difficulty / hashrate) * u.ln()
}

/// Time until the integrated intensity of a decaying target reaches `budget`.
///
/// With the target at `prev_target` at the segment start, the intensity is
/// `λ(Δ) = H / prev_target * exp(Δ / S)` and its integral
/// `Λ(Δ) = H*S / prev_target * (exp(Δ/S) - 1)` inverts to
/// `Δ = S * ln(1 + E * prev_target / (H*S))`.
pub fn sample_arrival_rtt(prev_target: f64, hashrate: f64, smoothing: f64, budget: f64) -> Result<f64> {
    let ratio = budget * prev_target / (hashrate * smoothing);
    let scaled = ratio.ln_1p();
    if !(scaled <= EXP_GUARD) {
        return Err(Error::Overflow {
            argument: scaled,
            limit: EXP_GUARD,
        });
    }
    Ok(smoothing * scaled)
}

/// `Λ(Δ)`: the budget consumed by a decaying target over `elapsed` seconds.
pub fn integrated_rtt_intensity(prev_target: f64, hashrate: f64, smoothing: f64, elapsed: f64) -> f64 {
    hashrate * smoothing / prev_target * (elapsed / smoothing).exp_m1()
}

enum Supply<'a> {
    Population(&'a MinerPopulation),
    Schedule(&'a HashrateSchedule),
}

struct Draw {
    total: f64,
    classes: [(&'static str, f64); 3],
}

impl Supply<'_> {
    fn draw(&self, x: ProfitabilitySignal, t: f64) -> Draw {
        match self {
            Supply::Population(pop) => {
                let a = pop.allocate(x);
                Draw {
                    total: a.total(),
                    classes: [("base", a.base), ("greedy", a.greedy), ("variable", a.variable)],
                }
            }
            Supply::Schedule(s) => Draw {
                total: s.at(t),
                classes: [("", 0.0); 3],
            },
        }
    }

    fn next_change_after(&self, t: f64) -> Option<f64> {
        match self {
            Supply::Population(_) => None,
            Supply::Schedule(s) => s.next_change_after(t),
        }
    }
}

fn next_tick(t: f64, start: f64, tick: f64) -> f64 {
    let k = ((t - start) / tick).floor() + 1.0;
    let mut b = start + k * tick;
    if b <= t {
        b += tick;
    }
    b
}

/// Simulates `config.n_blocks` blocks. Deterministic for a fixed seed.
pub fn run_simulation(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let da = config.algorithm()?;
    let params = &da.params;
    let d0 = config.resolved_initial_difficulty();
    let supply = match &config.hashrate_schedule {
        Some(s) => Supply::Schedule(s),
        None => Supply::Population(&config.population),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);

    let mut chain = Vec::with_capacity(config.n_blocks as usize + 1);
    chain.push(ChainHeader::new(0, config.start_time, d0));
    let mut hashrate_trace: Vec<(f64, f64)> = Vec::new();
    let mut t = config.start_time;
    let mut parent_ms = (t * 1000.0).round();

    for height in 1..=config.n_blocks {
        let target = da.next_target(&chain)?;
        let parent_t = t;
        let u: f64 = rng.sample(Open01);
        let mut budget = -u.ln();
        let draw = loop {
            let d_now = target.at(t, params)?;
            let x = profitability_change(d_now, d0)?;
            let draw = supply.draw(x, t);
            let h = draw.total;
            if hashrate_trace.last().is_none_or(|&(_, prev)| prev != h) {
                hashrate_trace.push((t, h));
            }
            let mut boundary = next_tick(t, config.start_time, config.strategy_tick);
            if let Some(change) = supply.next_change_after(t) {
                boundary = boundary.min(change);
            }
            let dt = match target {
                NextTarget::Fixed(d) => budget * d / h,
                NextTarget::Decaying { .. } => sample_arrival_rtt(d_now, h, params.smoothing, budget)?,
            };
            if t + dt <= boundary {
                t += dt;
                break draw;
            }
            let span = boundary - t;
            budget -= match target {
                NextTarget::Fixed(d) => h * span / d,
                NextTarget::Decaying { .. } => integrated_rtt_intensity(d_now, h, params.smoothing, span),
            };
            budget = budget.max(0.0);
            t = boundary;
            if t - parent_t > config.max_solve_time {
                return Err(Error::RunawayDifficulty {
                    height,
                    elapsed: t - parent_t,
                    cap: config.max_solve_time,
                });
            }
        };
        if t - parent_t > config.max_solve_time {
            return Err(Error::RunawayDifficulty {
                height,
                elapsed: t - parent_t,
                cap: config.max_solve_time,
            });
        }

        let ms = (t * 1000.0).ceil().max(parent_ms + 1.0);
        parent_ms = ms;
        t = ms / 1000.0;

        let difficulty = target.at(t, params)?;
        let mut header = ChainHeader::new(height, t, difficulty);
        let pick: f64 = rng.sample(Open01);
        if let Supply::Population(_) = supply {
            header.miner_id = Some(pick_miner(&draw, pick).to_string());
        }
        chain.push(header);
    }

    Ok(SimResult {
        chain,
        hashrate_trace,
        rng_algorithm: RNG_ALGORITHM,
    })
}

fn pick_miner(draw: &Draw, u: f64) -> &'static str {
    let mut acc = 0.0;
    let threshold = u * draw.total;
    for &(name, rate) in &draw.classes {
        acc += rate;
        if threshold < acc {
            return name;
        }
    }
    draw.classes.iter().rev().find(|c| c.1 > 0.0).map_or("base", |c| c.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fixed_sampler_quantiles() {
        assert_relative_eq!(
            sample_solve_time_fixed(1200.0, 2.0, (-1.0f64).exp()),
            600.0,
            max_relative = 1e-12
        );
        let near_one = sample_solve_time_fixed(1200.0, 2.0, 1.0 - 1e-12);
        assert!(near_one > 0.0 && near_one < 1e-8);
    }

    #[test]
    fn fixed_sampler_mean() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let n = 1_000_000;
        let mean = (0..n)
            .map(|_| sample_solve_time_fixed(600.0, 1.0, rng.sample(Open01)))
            .sum::<f64>()
            / n as f64;
        assert!((mean - 600.0).abs() < 3.0 * 600.0 / 1000.0, "mean {mean}");
    }

    #[test]
    fn rtt_sampler_identities() {
        let s = 43_200.0;
        let e = std::f64::consts::E - 1.0;
        // E * D / (H * S) = e - 1 with D = S, H = 1
        assert_relative_eq!(sample_arrival_rtt(s, 1.0, s, e).unwrap(), s, max_relative = 1e-12);
        let big = sample_arrival_rtt(600.0, 1.0, 1e15, 1.0).unwrap();
        assert_relative_eq!(big, 600.0, max_relative = 1e-9);
        let d = sample_arrival_rtt(1000.0, 2.0, 3600.0, 0.7).unwrap();
        assert_relative_eq!(
            integrated_rtt_intensity(1000.0, 2.0, 3600.0, d),
            0.7,
            max_relative = 1e-12
        );
    }

    #[test]
    fn schedule_lookup() {
        let s = HashrateSchedule::new(vec![(100.0, 2.0), (0.0, 1.0)]).unwrap();
        assert_eq!(s.at(-5.0), 1.0);
        assert_eq!(s.at(99.0), 1.0);
        assert_eq!(s.at(100.0), 2.0);
        assert_eq!(s.next_change_after(50.0), Some(100.0));
        assert_eq!(s.next_change_after(100.0), None);
        assert!(HashrateSchedule::new(vec![]).is_err());
        assert!(HashrateSchedule::new(vec![(0.0, 0.0)]).is_err());
    }

    #[test]
    fn tick_grid() {
        assert_eq!(next_tick(0.0, 0.0, 60.0), 60.0);
        assert_eq!(next_tick(59.9, 0.0, 60.0), 60.0);
        assert_eq!(next_tick(60.0, 0.0, 60.0), 120.0);
        assert_eq!(next_tick(10.0, 5.0, 60.0), 65.0);
    }

    #[test]
    fn equilibrium_default_difficulty() {
        let cfg = SimConfig::hopping_scenario(DaKind::Nefda, 1);
        assert_eq!(cfg.resolved_initial_difficulty(), 3.0 * 600.0);
        let mut fixed = cfg.clone();
        fixed.initial_difficulty = Some(5.0);
        assert_eq!(fixed.resolved_initial_difficulty(), 5.0);
    }

    #[test]
    fn invalid_configs_rejected() {
        let mut cfg = SimConfig::hopping_scenario(DaKind::Cw144, 1);
        cfg.n_blocks = 0;
        assert!(run_simulation(&cfg).is_err());
        let mut cfg = SimConfig::hopping_scenario(DaKind::Cw144, 1);
        cfg.strategy_tick = 0.0;
        assert!(run_simulation(&cfg).is_err());
    }

    #[test]
    fn short_run_shape() {
        let cfg = SimConfig::new(DaKind::Nefda, MinerPopulation::hopping_scenario(1.0), 500, 3);
        let r = run_simulation(&cfg).unwrap();
        assert_eq!(r.headers().len(), 500);
        assert_eq!(r.difficulty_trace().len(), 500);
        assert!(r.chain.windows(2).all(|w| w[1].timestamp > w[0].timestamp));
        assert!(r.chain.windows(2).all(|w| w[1].height == w[0].height + 1));
        assert!(r.headers().iter().all(|h| h.miner_id.is_some()));
        // the real-time target of block 1 starts one block ahead of schedule
        let x0 = (-600.0f64 / 43_200.0).exp() - 1.0;
        let h0 = crate::miners::total_hashrate(ProfitabilitySignal(x0), &cfg.population);
        assert_eq!(r.hashrate_trace[0], (0.0, h0));
        for &(_, h) in &r.hashrate_trace {
            assert!((1.0..=9.0).contains(&h));
        }
        // every timestamp sits on the millisecond grid
        for h in &r.chain {
            assert_eq!((h.timestamp * 1000.0).round() / 1000.0, h.timestamp);
        }
    }

    #[test]
    fn runaway_difficulty_is_reported() {
        let mut cfg = SimConfig::new(DaKind::Cw144, MinerPopulation::constant(1.0), 10, 1);
        cfg.initial_difficulty = Some(1e12);
        assert!(matches!(run_simulation(&cfg), Err(Error::RunawayDifficulty { .. })));
    }

    #[test]
    fn scheduled_supply_has_no_tags() {
        let mut cfg = SimConfig::new(DaKind::Btc2016, MinerPopulation::constant(1.0), 50, 2);
        cfg.hashrate_schedule = Some(HashrateSchedule::new(vec![(0.0, 1.0), (3000.0, 2.0)]).unwrap());
        let r = run_simulation(&cfg).unwrap();
        assert!(r.headers().iter().all(|h| h.miner_id.is_none()));
        assert!(r.hashrate_trace.iter().any(|&(t, h)| t == 3000.0 && h == 2.0));
    }
}
