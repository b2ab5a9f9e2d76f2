//! Collect one timing trace and print its deltas.
use siderand::{collect_trace, CollectorConfig, Timer};

fn main() -> siderand::Result<()> {
    let scale = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let config = CollectorConfig {
        scale,
        ..CollectorConfig::default()
    };
    let trace = collect_trace(&config, &Timer::host()?)?;
    println!("scale={scale} samples={} distinct={}", trace.len(), trace.distinct_count());
    println!("first deltas (ns): {:?}", &trace.samples()[..10]);
    Ok(())
}
