//! The four difficulty algorithms steering a chain whose hash rate doubles at
//! block 1500. Every block takes exactly its expected solve time `D / H`.

use powlab::da::{ChainHeader, DaKind, DifficultyAlgorithm, DifficultyParams, TimestampSource};

fn main() -> powlab::Result<()> {
    let marks = [1_500usize, 1_600, 2_100, 3_000, 4_100];
    print!("{:<8}", "da");
    for m in marks {
        print!(" {:>10}", format!("D@{m}"));
    }
    println!();

    for kind in DaKind::ALL {
        let mut params = DifficultyParams::for_algorithm(kind);
        params.timestamp_source = TimestampSource::LastBlock;
        let da = DifficultyAlgorithm::new(kind, params)?;
        let mut chain = vec![ChainHeader::new(0, 0.0, 600.0)];
        while chain.len() <= 4_100 {
            let parent = chain.last().unwrap();
            let hashrate = if chain.len() < 1_500 { 1.0 } else { 2.0 };
            let d = da.difficulty_for(&chain, f64::NAN)?;
            let h = ChainHeader::new(parent.height + 1, parent.timestamp + d / hashrate, d);
            chain.push(h);
        }
        print!("{:<8}", kind.name());
        for m in marks {
            print!(" {:>10.2}", chain[m].difficulty);
        }
        println!();
    }
    Ok(())
}
