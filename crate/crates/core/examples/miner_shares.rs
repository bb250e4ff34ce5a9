//! Which miner classes found blocks during deserts, normal hours and spikes.

use powlab::analysis::{bucket_blocks, classify_periods, miner_shares};
use powlab::da::DaKind;
use powlab::sim::{run_simulation, SimConfig};

fn main() -> powlab::Result<()> {
    let run = run_simulation(&SimConfig {
        n_blocks: 50_000,
        ..SimConfig::hopping_scenario(DaKind::Cw144, 1)
    })?;
    let headers = run.headers();
    let series = bucket_blocks(headers, 3600)?;
    let (classes, _) = classify_periods(&series);
    println!(
        "{:<10} {:>8} {:>8} {:>8} {:>8}",
        "miner", "normal", "spike", "desert", "total"
    );
    for s in miner_shares(headers, &series, &classes)? {
        println!(
            "{:<10} {:>7.2}% {:>7.2}% {:>7.2}% {:>7.2}%",
            s.miner, s.normal, s.spike, s.desert, s.total
        );
    }
    Ok(())
}
