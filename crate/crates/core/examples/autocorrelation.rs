//! Hourly-count correlograms: cw-144 echoes its window every 24 hours,
//! NEFDA does not.

use powlab::analysis::{acf, bucket_blocks};
use powlab::da::DaKind;
use powlab::sim::{run_simulation, SimConfig};

fn main() -> powlab::Result<()> {
    for da in [DaKind::Cw144, DaKind::Nefda] {
        let run = run_simulation(&SimConfig::hopping_scenario(da, 1))?;
        let a = acf(&bucket_blocks(&run.chain, 3600)?, 50)?;
        let above: Vec<usize> = (2..=50).filter(|&h| a.exceeds_band(h)).collect();
        println!(
            "{da}: r(1) {:+.3}, r(24) {:+.3}, r(48) {:+.3}, band {:.4}, lags above band {above:?}",
            a.lag(1),
            a.lag(24),
            a.lag(48),
            a.confidence_band
        );
    }
    Ok(())
}
