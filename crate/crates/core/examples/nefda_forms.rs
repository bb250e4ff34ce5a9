//! Relative and absolute NEFDA forms, the real-time target and the
//! discretisation correction.

use powlab::da::{
    nefda_absolute, nefda_relative, nefda_target_at, nefda_uncorrected_relative, smoothing_from_window, DaKind,
    DifficultyParams, NefdaState,
};

fn main() -> powlab::Result<()> {
    let params = DifficultyParams::for_algorithm(DaKind::Nefda);
    let state = NefdaState::new(1_000.0, 0.0, 0, &params)?;
    println!("correction c = exp(T/S) = {:.9}", state.correction);

    let solve_times = [420.0, 900.0, 35.0, 1200.0, 610.0];
    let (mut rel, mut raw, mut t) = (1_000.0, 1_000.0, 0.0);
    for (n, st) in solve_times.iter().enumerate() {
        t += st;
        rel = nefda_relative(rel, *st, &params)?;
        raw = nefda_uncorrected_relative(raw, *st, &params)?;
        let abs = nefda_absolute(&state, n as u64 + 1, t, &params)?;
        println!(
            "block {}: relative {rel:.6} absolute {abs:.6} uncorrected {raw:.6}",
            n + 1
        );
    }

    println!("real-time target for block 6 as the wait grows:");
    for wait in [0.0, 600.0, 3_600.0, 21_600.0] {
        println!(
            "  +{wait:>7.0} s -> {:.3}",
            nefda_target_at(&state, 6, t + wait, &params)?
        );
    }

    println!(
        "12-hour heuristic for a 144-block window: S = {} s",
        smoothing_from_window(144, 600.0)
    );
    for blocks in [288.0, 144.0, 72.0, 36.0] {
        println!(
            "smoothing factor {blocks} blocks: S = {} s",
            blocks * params.ideal_block_time
        );
    }
    Ok(())
}
