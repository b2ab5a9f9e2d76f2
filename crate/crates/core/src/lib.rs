//! Seed a CSPRNG from the irreproducible runtimes of a tiny CPU benchmark.
//!
//! A fixed integer-addition kernel is timed `samples` times with a
//! high-resolution monotonic clock. The chronological list of runtimes is
//! hashed with SHA-256 and key-stretched into seed material. The crate also
//! ships the tooling needed to judge whether a host is fit for this:
//!
//! - [`timer`]: monotonic tick sources, a quantized simulated clock, and
//!   empirical resolution probing.
//! - [`collector`]: the timed kernel and [`TimingTrace`] collection.
//! - [`conditioner`]: canonical trace serialization, the SHA-256 chain, and
//!   the counter-hash reference stream.
//! - [`autotune`]: geometric search over the kernel `scale` until a trace
//!   reaches a distinct-value floor.
//! - [`analysis`]: exact-value histograms, top-k overlap, and the
//!   worst-case entropy model.
//! - [`fips`]: the FIPS 140-2 monobit/poker/runs/long-run battery.
//! - [`cli`]: the `siderand` command-line front end.
//!
//! Seeding fails closed: if a trace does not reach the quality floor no
//! bytes are produced.
//!
//! ```no_run
//! use siderand::{collect_trace, condition, CollectorConfig, Timer};
//!
//! let timer = Timer::host()?;
//! let trace = collect_trace(&CollectorConfig::default(), &timer)?;
//! let seed = condition(&trace, siderand::DEFAULT_QUALITY_FLOOR)?;
//! assert_eq!(seed.total_bytes(), 3232);
//! # Ok::<(), siderand::Error>(())
//! ```

pub mod analysis;
pub mod autotune;
pub mod cli;
pub mod collector;
pub mod conditioner;
mod error;
pub mod fips;
pub mod timer;

pub use analysis::{
    aggregate_distribution, estimate_worst_case_entropy, meets_seed_standard, top_k_overlap,
    DistributionReport, EntropyEstimate, Report,
};
pub use autotune::{tune, TuneResult, Verdict};
pub use collector::{collect_trace, distinct_count, kernel, CollectorConfig, TimingTrace};
pub use conditioner::{
    condition, mk0_stream, serialize_trace, SeedOutput, DEFAULT_QUALITY_FLOOR,
};
pub use error::{Error, Result};
pub use fips::{fips_block_tests, fips_pass_rate, FipsBlockResult, FipsRateReport};
pub use timer::{now_ticks, probe_resolution, Clock, MonotonicClock, SimulatedClock, Timer, TimerSpec};
