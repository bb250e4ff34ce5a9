//! A 95% hash-rate efflux under the emergency adjustment: difficulty falls
//! in 20% steps, then the returning miners over-produce until the next
//! retarget.

use powlab::da::DaKind;
use powlab::miners::MinerPopulation;
use powlab::sim::{run_simulation, HashrateSchedule, SimConfig};

fn main() -> powlab::Result<()> {
    let day = 86_400.0;
    let mut config = SimConfig::new(DaKind::EdaComposite, MinerPopulation::constant(1.0), 6_000, 1);
    config.hashrate_schedule = Some(HashrateSchedule::new(vec![
        (0.0, 1.0),
        (5.0 * day, 0.05),
        (8.0 * day, 1.0),
    ])?);
    let run = run_simulation(&config)?;

    let mut per_day = [0u32; 14];
    for h in run.headers() {
        if let Some(slot) = per_day.get_mut((h.timestamp / day) as usize) {
            *slot += 1;
        }
    }
    let drops = run
        .chain
        .windows(2)
        .filter(|w| (w[1].difficulty / w[0].difficulty - 0.8).abs() < 1e-12)
        .count();
    println!("20% drops: {drops}");
    for (d, n) in per_day.iter().enumerate() {
        println!("day {d:>2}: {n:>5} blocks");
    }
    Ok(())
}
