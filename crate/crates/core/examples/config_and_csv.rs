//! Writes a run configuration and a header CSV, then reads both back.

use powlab::da::DaKind;
use powlab::io::{config_to_string, parse_config, read_headers, write_headers};
use powlab::sim::{run_simulation, SimConfig};

fn main() -> powlab::Result<()> {
    let config = SimConfig {
        n_blocks: 1_000,
        ..SimConfig::hopping_scenario(DaKind::Cw144, 7)
    };
    let text = config_to_string(&config)?;
    println!("{text}");
    assert_eq!(parse_config(&text)?, config);

    let run = run_simulation(&config)?;
    let path = std::env::temp_dir().join("powlab_example_headers.csv");
    write_headers(&run.chain, &path)?;
    let back = read_headers(&path)?;
    println!("{} headers written to {} and read back", back.len(), path.display());
    let first = &back[1];
    println!(
        "block 1: t = {:.3}, difficulty = {}, miner = {:?}",
        first.timestamp, first.difficulty, first.miner_id
    );
    Ok(())
}
