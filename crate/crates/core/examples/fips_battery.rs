//! Run the FIPS 140-2 battery over a file, stdin (`-`), or by default the
//! counter-hash reference stream.
//!
//! Usage: `cargo run --example fips_battery -- [FILE|-]`
use siderand::{fips_block_tests, fips_pass_rate, mk0_stream};

fn main() -> siderand::Result<()> {
    let report = match std::env::args().nth(1).as_deref() {
        Some("-") => fips_pass_rate(std::io::stdin().lock(), 100)?,
        Some(path) => fips_pass_rate(std::fs::File::open(path)?, 100)?,
        None => fips_pass_rate(&mk0_stream(8000)?[..], 100)?,
    };
    println!("{}", report.summary_line());

    let zeros = fips_block_tests(&[0u8; 2500], 0)?;
    println!("all-zero block: {}", zeros.csv_row());
    Ok(())
}
