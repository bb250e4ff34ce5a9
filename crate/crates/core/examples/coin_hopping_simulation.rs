//! Hoppers with four times the base hash rate, under cw-144 and NEFDA.

use powlab::analysis::summarize;
use powlab::da::DaKind;
use powlab::sim::{run_simulation, SimConfig};

fn main() -> powlab::Result<()> {
    let blocks = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    for da in [DaKind::Cw144, DaKind::Nefda] {
        let config = SimConfig {
            n_blocks: blocks,
            ..SimConfig::hopping_scenario(da, 1)
        };
        let run = run_simulation(&config)?;
        let s = summarize(&run.chain, 50)?;
        let peak = run.hashrate_trace.iter().map(|p| p.1).fold(0.0, f64::max);
        println!(
            "{da}: mean {:.2} s, median {:.1} s, p95 {:.1} s, peak hash rate {peak:.2}, deserts {:.2}%, spikes {:.2}%",
            s.mean_solve_time,
            s.median_solve_time,
            s.p95_solve_time,
            s.desert_frequency * 100.0,
            s.spike_frequency * 100.0
        );
    }
    Ok(())
}
