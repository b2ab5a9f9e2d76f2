//! Worst-case entropy of a trace whose runtimes fall on only `n_top` values.
use siderand::{estimate_worst_case_entropy, meets_seed_standard};

fn main() -> siderand::Result<()> {
    for (n_top, samples) in [(20, 100), (2, 100), (20, 50), (4, 128)] {
        let e = estimate_worst_case_entropy(n_top, samples)?;
        println!(
            "n_top={n_top:>3} samples={samples:>4} bits={:>7.2} key_space=10^{:.2} meets_256={}",
            e.bits,
            e.key_space_log10,
            meets_seed_standard(&e)
        );
    }
    Ok(())
}
