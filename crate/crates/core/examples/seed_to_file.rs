//! Tune, collect, condition and write a seed file.
//!
//! Usage: `cargo run --example seed_to_file -- [PATH]`
use std::time::Duration;

use siderand::{collect_trace, condition, tune, CollectorConfig, Timer, DEFAULT_QUALITY_FLOOR};

fn main() -> siderand::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "seed.bin".into());
    let timer = Timer::host()?;
    let tuned = tune(&CollectorConfig::default(), &timer, DEFAULT_QUALITY_FLOOR, Duration::from_secs(5))?;
    if !tuned.verdict.is_success() {
        eprintln!("no adequate scale found: {tuned:?}");
        std::process::exit(1);
    }
    let trace = collect_trace(&tuned.config, &timer)?;
    let seed = condition(&trace, DEFAULT_QUALITY_FLOOR)?;
    seed.write_raw(std::fs::File::create(&path)?)?;
    println!(
        "wrote {} bytes to {path} (scale={}, distinct={})",
        seed.total_bytes(),
        tuned.config.scale,
        trace.distinct_count()
    );
    Ok(())
}
