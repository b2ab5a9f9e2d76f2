//! Aggregate many runs into a runtime distribution and compare two batches.
//!
//! Usage: `cargo run --example distribution_report -- [HISTOGRAM_CSV]`
use siderand::analysis::collect_runs;
use siderand::{aggregate_distribution, top_k_overlap, CollectorConfig, Timer};

fn main() -> siderand::Result<()> {
    let timer = Timer::host()?;
    let config = CollectorConfig {
        scale: 20_000,
        ..CollectorConfig::default()
    };
    let a = aggregate_distribution(&collect_runs(&config, &timer, 300)?, 20)?;
    let b = aggregate_distribution(&collect_runs(&config, &timer, 300)?, 20)?;

    let s = a.summary();
    println!(
        "unique={} total={} flatness={:.2} flat={}",
        s.unique_values, s.total_samples, s.flatness_ratio, s.flat
    );
    for (value, count) in a.top_values(5) {
        println!("  {value} ns x{count}");
    }
    if a.unique_values >= 10 && b.unique_values >= 10 {
        println!("top-10 overlap between batches: {}", top_k_overlap(&a, &b, 10)?);
    }
    if let Some(path) = std::env::args().nth(1) {
        a.write_histogram_csv(std::fs::File::create(&path)?)?;
        println!("histogram written to {path}");
    }
    Ok(())
}
