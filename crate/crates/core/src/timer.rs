//! Monotonic tick sources and empirical resolution probing.
//!
//! Ticks are integer nanoseconds since an arbitrary, process-local epoch.
//! Resolution is never taken from platform metadata; it is the smallest
//! positive delta actually observed between reads.

use std::fmt;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PROBE_READS: usize = 1000;

/// Upper bound on wall time spent in [`probe_resolution`]. Coarse clocks
/// finish early with fewer pairs; a clock that never advances within it is
/// reported as stuck.
pub const DEFAULT_PROBE_DEADLINE: Duration = Duration::from_millis(250);

/// A source of monotonic ticks.
///
/// The clock must observe wall time including preemption by other
/// processes. Process-CPU-time clocks are not acceptable implementations.
pub trait Clock: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;

    fn now_ticks(&self) -> Result<u64>;

    /// Whether the clock claims never to go backwards. Probing may still
    /// downgrade this if a decrease is observed.
    fn is_monotonic(&self) -> bool {
        true
    }
}

fn process_epoch() -> Instant {
    static EPOCH: OnceLock<Instant> = OnceLock::new();
    *EPOCH.get_or_init(Instant::now)
}

/// Nanoseconds on the host monotonic clock.
pub fn now_ticks() -> Result<u64> {
    let epoch = process_epoch();
    let elapsed = Instant::now().duration_since(epoch);
    u64::try_from(elapsed.as_nanos()).map_err(|_| Error::UnsupportedClock)
}

/// The host monotonic clock (`std::time::Instant`).
#[derive(Debug, Default, Clone, Copy)]
pub struct MonotonicClock;

impl Clock for MonotonicClock {
    fn name(&self) -> &str {
        "monotonic"
    }

    fn now_ticks(&self) -> Result<u64> {
        now_ticks()
    }
}

/// A base clock whose readings are floored to a multiple of `quantum_ns`.
///
/// Used to reproduce the behaviour of coarse platform timers (for example
/// a 16 ms tick) on a machine that has a fine one.
#[derive(Debug, Clone)]
pub struct SimulatedClock<C = MonotonicClock> {
    base: C,
    quantum_ns: u64,
    name: String,
}

impl SimulatedClock<MonotonicClock> {
    pub fn new(quantum_ns: u64) -> Result<Self> {
        Self::with_base(MonotonicClock, quantum_ns)
    }
}

impl<C: Clock> SimulatedClock<C> {
    pub fn with_base(base: C, quantum_ns: u64) -> Result<Self> {
        if quantum_ns == 0 {
            return Err(Error::InvalidArgument("quantum must be positive".into()));
        }
        let name = format!("simulated({}, quantum={}ns)", base.name(), quantum_ns);
        Ok(Self {
            base,
            quantum_ns,
            name,
        })
    }

    pub fn quantum_ns(&self) -> u64 {
        self.quantum_ns
    }
}

impl<C: Clock> Clock for SimulatedClock<C> {
    fn name(&self) -> &str {
        &self.name
    }

    fn now_ticks(&self) -> Result<u64> {
        let t = self.base.now_ticks()?;
        Ok(t - t % self.quantum_ns)
    }

    fn is_monotonic(&self) -> bool {
        self.base.is_monotonic()
    }
}

/// Identity and probed resolution of a clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimerSpec {
    pub name: String,
    pub resolution_ns: u64,
    pub monotonic: bool,
    pub probe_reads: u64,
}

/// Measure the smallest positive tick delta of `clock`.
///
/// Each of the `reads` pairs takes a reading and then spins until the clock
/// reports a different value. Probing stops early once
/// [`DEFAULT_PROBE_DEADLINE`] of wall time has passed; `probe_reads` in the
/// result is the number of pairs that completed.
pub fn probe_resolution(clock: &dyn Clock, reads: usize) -> Result<TimerSpec> {
    probe_resolution_within(clock, reads, DEFAULT_PROBE_DEADLINE)
}

pub fn probe_resolution_within(
    clock: &dyn Clock,
    reads: usize,
    deadline: Duration,
) -> Result<TimerSpec> {
    if reads < 2 {
        return Err(Error::InvalidArgument(format!(
            "probe needs at least 2 reads, got {reads}"
        )));
    }
    let started = Instant::now();
    let mut monotonic = clock.is_monotonic();
    let mut min_delta: Option<u64> = None;
    let mut pairs = 0u64;

    'pairs: for _ in 0..reads {
        let first = clock.now_ticks()?;
        loop {
            let second = clock.now_ticks()?;
            if second != first {
                if second < first {
                    monotonic = false;
                } else {
                    let delta = second - first;
                    min_delta = Some(min_delta.map_or(delta, |m| m.min(delta)));
                }
                pairs += 1;
                break;
            }
            if started.elapsed() >= deadline {
                break 'pairs;
            }
        }
        if started.elapsed() >= deadline {
            break;
        }
    }

    let resolution_ns = min_delta.ok_or(Error::StuckClock)?;
    Ok(TimerSpec {
        name: clock.name().to_owned(),
        resolution_ns,
        monotonic,
        probe_reads: pairs,
    })
}

/// A clock together with its probed characteristics.
#[derive(Debug, Clone)]
pub struct Timer {
    clock: Arc<dyn Clock>,
    spec: TimerSpec,
}

impl Timer {
    pub fn probe(clock: Arc<dyn Clock>, reads: usize) -> Result<Self> {
        let spec = probe_resolution(clock.as_ref(), reads)?;
        Ok(Self { clock, spec })
    }

    /// The host monotonic clock, probed with [`DEFAULT_PROBE_READS`].
    pub fn host() -> Result<Self> {
        Self::probe(Arc::new(MonotonicClock), DEFAULT_PROBE_READS)
    }

    /// The host clock quantized to `quantum_ns`.
    pub fn simulated(quantum_ns: u64) -> Result<Self> {
        Self::probe(Arc::new(SimulatedClock::new(quantum_ns)?), DEFAULT_PROBE_READS)
    }

    /// Pair a clock with an already known spec, skipping the probe.
    pub fn from_parts(clock: Arc<dyn Clock>, spec: TimerSpec) -> Self {
        Self { clock, spec }
    }

    pub fn spec(&self) -> &TimerSpec {
        &self.spec
    }

    pub fn clock(&self) -> &dyn Clock {
        self.clock.as_ref()
    }

    #[inline]
    pub fn now_ticks(&self) -> Result<u64> {
        self.clock.now_ticks()
    }
}
