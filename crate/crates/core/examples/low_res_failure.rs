//! A 16 ms clock cannot resolve the workload; conditioning refuses.
use siderand::{collect_trace, condition, CollectorConfig, Error, Timer, DEFAULT_QUALITY_FLOOR};

fn main() -> siderand::Result<()> {
    let timer = Timer::simulated(16_000_000)?;
    let trace = collect_trace(&CollectorConfig::default(), &timer)?;
    println!("distinct runtimes: {}", trace.distinct_count());
    match condition(&trace, DEFAULT_QUALITY_FLOOR) {
        Err(e @ Error::InsufficientEntropy { .. }) => println!("refused: {e}"),
        Err(e) => return Err(e),
        Ok(seed) => println!("unexpectedly produced {} bytes", seed.total_bytes()),
    }
    Ok(())
}
