//! The counter-hash reference stream passes the battery.
use siderand::{fips_pass_rate, mk0_stream};

fn main() -> siderand::Result<()> {
    let stream = mk0_stream(80_000)?;
    println!("first digest: {}", hex::encode(&stream[..32]));
    println!("{}", fips_pass_rate(&stream[..], 1000)?.summary_line());
    Ok(())
}
