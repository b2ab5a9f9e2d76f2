//! Search for a scale that clears the quality floor, on the host clock and
//! on a simulated 16 ms clock.
use std::time::Duration;

use siderand::{tune, CollectorConfig, Timer};

fn main() -> siderand::Result<()> {
    let base = CollectorConfig::default();
    for (label, timer, budget) in [
        ("host", Timer::host()?, Duration::from_secs(5)),
        ("16 ms", Timer::simulated(16_000_000)?, Duration::from_secs(2)),
    ] {
        let r = tune(&base, &timer, 20, budget)?;
        println!(
            "{label}: {:?} scale={} median_distinct={} probes={} elapsed={:.1}ms",
            r.verdict,
            r.config.scale,
            r.achieved_distinct,
            r.probe_runs,
            r.elapsed_ns as f64 / 1e6
        );
    }
    Ok(())
}
