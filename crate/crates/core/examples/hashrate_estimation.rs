//! Six-block moving average and exponential filter over a simulated chain.

use powlab::analysis::{estimate_hashrate_ma, exp_weighted_difficulties};
use powlab::da::DaKind;
use powlab::sim::{run_simulation, SimConfig};

/// `∫ H(t) exp((t - now) / S) dt / S` over a step trace starting at its first point.
fn smoothed_trace(trace: &[(f64, f64)], smoothing: f64, now: f64) -> f64 {
    let mut acc = 0.0;
    for (i, &(start, h)) in trace.iter().enumerate() {
        if start >= now {
            break;
        }
        let end = trace.get(i + 1).map_or(now, |p| p.0.min(now));
        acc += h * (((end - now) / smoothing).exp() - ((start - now) / smoothing).exp());
    }
    acc
}

fn main() -> powlab::Result<()> {
    let config = SimConfig {
        n_blocks: 20_000,
        ..SimConfig::hopping_scenario(DaKind::Cw144, 3)
    };
    let run = run_simulation(&config)?;
    let ma = estimate_hashrate_ma(&run.chain, 6)?;
    let (lo, hi) = ma
        .points
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    println!("6-block estimate ranges over [{lo:.2}, {hi:.2}] (true range [1, 9])");

    let last = run.chain.last().unwrap().timestamp;
    for day in [2.0, 5.0, 10.0] {
        let now = day * 86_400.0;
        if now > last {
            break;
        }
        let seen: Vec<_> = run.chain.iter().filter(|h| h.timestamp <= now).cloned().collect();
        let filtered = exp_weighted_difficulties(&seen, 43_200.0, now)?;
        let actual = smoothed_trace(&run.hashrate_trace, 43_200.0, now);
        println!(
            "day {day:>4}: estimate {:.3}, true hash rate under the same filter {actual:.3}",
            filtered.hashrate_estimate
        );
    }
    Ok(())
}
