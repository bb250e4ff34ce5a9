//! Hourly classes of a steady NEFDA chain against the Poisson expectation.

use powlab::analysis::{bucket_blocks, classify_periods, PeriodClass, PoissonModel};
use powlab::da::DaKind;
use powlab::miners::MinerPopulation;
use powlab::sim::{run_simulation, SimConfig};

fn main() -> powlab::Result<()> {
    let run = run_simulation(&SimConfig::new(
        DaKind::Nefda,
        MinerPopulation::constant(1.0),
        130_000,
        1,
    ))?;
    let series = bucket_blocks(&run.chain, 3600)?;
    let (_, summary) = classify_periods(&series);
    let model = PoissonModel::for_bucket(3600.0, 600.0);
    println!("{} hours", summary.total());
    println!(
        "desert {:.3}% (poisson {:.3}%)",
        summary.desert_frequency() * 100.0,
        model.desert_probability(PeriodClass::DESERT_MAX) * 100.0
    );
    println!(
        "spike  {:.3}% (poisson {:.3}%)",
        summary.spike_frequency() * 100.0,
        model.spike_probability(PeriodClass::SPIKE_MIN) * 100.0
    );
    println!("normal {:.3}%", summary.normal_frequency() * 100.0);
    Ok(())
}
