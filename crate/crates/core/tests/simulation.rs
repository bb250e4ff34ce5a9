use powlab::analysis::{bucket_blocks, estimate_hashrate_ma, solve_time_stats, summarize};
use powlab::da::{ChainHeader, DaKind, DifficultyAlgorithm, TimestampSource};
use powlab::io::{headers_to_csv, parse_headers};
use powlab::miners::MinerPopulation;
use powlab::sim::{run_simulation, sample_solve_time_fixed, SimConfig};
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn constant(da: DaKind, blocks: u64, seed: u64) -> SimConfig {
    SimConfig::new(da, MinerPopulation::constant(1.0), blocks, seed)
}

#[test]
fn equilibrium_throughput_for_every_algorithm() {
    for da in DaKind::ALL {
        let r = run_simulation(&constant(da, 60_000, 21)).unwrap();
        let mean = r.mean_solve_time();
        assert!((mean / 600.0 - 1.0).abs() < 0.01, "{da}: mean solve time {mean}");
    }
    for source in [TimestampSource::LastBlock, TimestampSource::MedianTimePast] {
        let mut cfg = constant(DaKind::Nefda, 60_000, 22);
        cfg.params.timestamp_source = source;
        let mean = run_simulation(&cfg).unwrap().mean_solve_time();
        assert!((mean / 600.0 - 1.0).abs() < 0.01, "{source}: mean solve time {mean}");
    }
}

#[test]
fn fixed_difficulty_gives_exponential_solve_times() {
    let mut cfg = constant(DaKind::Nefda, 100_000, 5);
    cfg.params.smoothing = 1e15;
    let r = run_simulation(&cfg).unwrap();
    let stats = solve_time_stats(&r.chain).unwrap();
    let bound = 3.0 * 600.0 / (100_000f64).sqrt();
    assert!((stats.mean - 600.0).abs() < bound, "mean {}", stats.mean);
    // exponential median is T ln 2
    assert!((stats.median / (600.0 * std::f64::consts::LN_2) - 1.0).abs() < 0.02);
}

#[test]
fn fixed_sampler_mean_over_a_million_draws() {
    let mut rng = ChaCha12Rng::seed_from_u64(3);
    let n = 1_000_000;
    let sum: f64 = (0..n)
        .map(|_| sample_solve_time_fixed(1200.0, 2.0, rng.sample(Open01)))
        .sum();
    assert!((sum / n as f64 - 600.0).abs() < 1.8);
}

#[test]
fn identical_seeds_give_identical_results() {
    let cfg = SimConfig {
        n_blocks: 5_000,
        ..SimConfig::hopping_scenario(DaKind::Cw144, 8)
    };
    assert_eq!(run_simulation(&cfg).unwrap(), run_simulation(&cfg).unwrap());
}

#[test]
fn emitted_chains_replay_through_their_algorithm() {
    for da in DaKind::ALL {
        let cfg = SimConfig {
            n_blocks: 4_000,
            ..SimConfig::hopping_scenario(da, 12)
        };
        let r = run_simulation(&cfg).unwrap();
        let alg = DifficultyAlgorithm::new(da, cfg.params.clone()).unwrap();
        assert!(r.chain.windows(2).all(|w| w[1].timestamp > w[0].timestamp));
        assert_eq!(r.headers().len(), 4_000);
        for i in 1..r.chain.len() {
            let h = &r.chain[i];
            let d = alg.difficulty_for(&r.chain[..i], h.timestamp).unwrap();
            assert_eq!(d, h.difficulty, "{da} height {}", h.height);
        }
        let reread = parse_headers(&headers_to_csv(&r.chain), std::path::Path::new("mem")).unwrap();
        assert_eq!(reread.len(), r.chain.len());
        for (a, b) in reread.iter().zip(&r.chain) {
            assert_eq!(a.timestamp, b.timestamp, "{da}: csv timestamps");
            assert!(
                (a.difficulty / b.difficulty - 1.0).abs() < 1e-11,
                "{da}: csv difficulty"
            );
            assert_eq!(a.miner_id, b.miner_id);
        }
    }
}

#[test]
fn hopping_hash_rate_stays_between_base_and_total() {
    let cfg = SimConfig {
        n_blocks: 20_000,
        ..SimConfig::hopping_scenario(DaKind::Cw144, 2)
    };
    let r = run_simulation(&cfg).unwrap();
    let (lo, hi) = r
        .hashrate_trace
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(_, h)| (lo.min(h), hi.max(h)));
    assert!(lo >= 1.0 && hi <= 9.0);
    assert!(lo < 1.1, "hoppers never left: min {lo}");
    assert!(hi > 8.9, "hoppers never all arrived: max {hi}");
    let tagged = r.headers().iter().filter(|h| h.miner_id.is_some()).count();
    assert_eq!(tagged, r.headers().len());
}

/// Steps a decaying real-time target in 0.1 s increments and mines with
/// probability `H * step / D(t)` per step.
fn bernoulli_rtt_chain(blocks: usize, hashrate: f64, seed: u64) -> Vec<ChainHeader> {
    let (t_ideal, s, step) = (600.0, 43_200.0, 0.1);
    let d0 = hashrate * t_ideal;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut chain = vec![ChainHeader::new(0, 0.0, d0)];
    let mut ticks = 0u64;
    while chain.len() <= blocks {
        ticks += 1;
        let t = ticks as f64 * step;
        let n = chain.len() as f64;
        let target = d0 * ((n * t_ideal - t) / s).exp();
        let u: f64 = rng.gen();
        if u < hashrate * step / target {
            chain.push(ChainHeader::new(chain.len() as u64, t, target));
        }
    }
    chain
}

#[test]
fn inversion_sampler_matches_small_step_thinning() {
    let blocks = 10_000;
    let oracle = bernoulli_rtt_chain(blocks, 1.0, 17);
    let mut cfg = constant(DaKind::Nefda, blocks as u64, 18);
    cfg.params.timestamp_source = TimestampSource::RealTime;
    let sim = run_simulation(&cfg).unwrap();
    let mean = |c: &[ChainHeader]| {
        let s = bucket_blocks(c, 3600).unwrap();
        s.counts.iter().sum::<u64>() as f64 / s.counts.len() as f64
    };
    let (a, b) = (mean(&sim.chain), mean(&oracle));
    assert!((a / b - 1.0).abs() < 0.02, "inversion {a}, thinning {b}");
}

#[test]
fn moving_average_estimates_the_hash_rate() {
    let mut cfg = SimConfig::new(DaKind::Nefda, MinerPopulation::constant(2.0), 50_000, 4);
    cfg.params.smoothing = 1e15;
    let r = run_simulation(&cfg).unwrap();
    assert_eq!(r.genesis().difficulty, 1200.0);
    let est = estimate_hashrate_ma(&r.chain, 6).unwrap();
    let n = est.points.len() as f64;
    let harmonic = n / est.points.iter().map(|p| 1.0 / p.1).sum::<f64>();
    assert!((harmonic / 2.0 - 1.0).abs() < 0.02, "harmonic mean {harmonic}");
    // six exponential gaps sum to a Gamma(6) span, and E[1/Gamma(6)] = 1/5 per unit
    let arithmetic = est.points.iter().map(|p| p.1).sum::<f64>() / n;
    assert!(
        (arithmetic / (2.0 * 6.0 / 5.0) - 1.0).abs() < 0.02,
        "arithmetic mean {arithmetic}"
    );
}

#[test]
fn estimated_hash_rate_reproduces_difficulty_level() {
    let r = run_simulation(&constant(DaKind::Nefda, 50_000, 6)).unwrap();
    let est = estimate_hashrate_ma(&r.chain, 6).unwrap();
    let n = est.points.len() as f64;
    let fed_back = 600.0 * n / est.points.iter().map(|p| 1.0 / p.1).sum::<f64>();
    let mean_d = r.difficulty_trace().iter().sum::<f64>() / r.headers().len() as f64;
    assert!((fed_back / mean_d - 1.0).abs() < 0.02, "{fed_back} vs {mean_d}");
}

#[test]
fn cw144_counts_are_more_dispersed_than_nefda() {
    let measure = |da| {
        let r = run_simulation(&SimConfig {
            n_blocks: 50_000,
            ..SimConfig::hopping_scenario(da, 1)
        })
        .unwrap();
        let c = bucket_blocks(&r.chain, 3600).unwrap().as_f64();
        let m = c.iter().sum::<f64>() / c.len() as f64;
        let variance = c.iter().map(|x| (x - m).powi(2)).sum::<f64>() / c.len() as f64;
        (variance, summarize(&r.chain, 50).unwrap())
    };
    let (cw_var, cw) = measure(DaKind::Cw144);
    let (ne_var, ne) = measure(DaKind::Nefda);
    assert!(cw_var > ne_var, "{cw_var} vs {ne_var}");
    assert!(cw.desert_frequency + cw.spike_frequency > ne.desert_frequency + ne.spike_frequency);
}
