//! Probe the host clock and a simulated coarse clock.
use siderand::Timer;

fn main() -> siderand::Result<()> {
    let host = Timer::host()?;
    println!("host: {}", serde_json::to_string(host.spec())?);

    let coarse = Timer::simulated(16_000_000)?;
    println!("simulated 16 ms: {}", serde_json::to_string(coarse.spec())?);
    Ok(())
}
