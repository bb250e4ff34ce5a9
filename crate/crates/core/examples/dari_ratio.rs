//! Difficulty-adjusted reward index of two chains sharing a price feed.

use powlab::analysis::{dari_ratio, dari_series};
use powlab::da::DaKind;
use powlab::sim::{run_simulation, SimConfig};

fn main() -> powlab::Result<()> {
    let series = |da| -> powlab::Result<_> {
        let run = run_simulation(&SimConfig {
            n_blocks: 5_000,
            ..SimConfig::hopping_scenario(da, 4)
        })?;
        let h = run.headers();
        let times: Vec<f64> = h.iter().map(|x| x.timestamp).collect();
        let prices: Vec<f64> = times.iter().map(|t| 100.0 + 10.0 * (t / 86_400.0).sin()).collect();
        dari_series(&vec![6.25; h.len()], &prices, &run.difficulty_trace(), &times)
    };
    let a = series(DaKind::Nefda)?;
    let b = series(DaKind::Cw144)?;
    let ratio = dari_ratio(&a, &b, 60.0)?;
    let mean = ratio.iter().map(|r| r.ratio).sum::<f64>() / ratio.len() as f64;
    let (lo, hi) = ratio.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
        (lo.min(r.ratio), hi.max(r.ratio))
    });
    println!(
        "{} minute buckets, nefda/cw144 ratio mean {mean:.4}, range [{lo:.3}, {hi:.3}]",
        ratio.len()
    );
    Ok(())
}
