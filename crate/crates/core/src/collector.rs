//! The timed benchmark kernel and trace collection.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::hint::black_box;
use std::io::{self, BufRead, Write};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timer::{Timer, TimerSpec};

/// Held for the whole timed region so that no other collection in this
/// process competes for the CPU.
static COLLECTION_LOCK: Mutex<()> = Mutex::new(());

/// Benchmark parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectorConfig {
    pub val1: u64,
    pub val2: u64,
    /// Number of timed kernel invocations in one trace.
    pub samples: usize,
    /// Additions per timed invocation.
    pub scale: u64,
    /// Chained digests appended after the initial one.
    pub stretch: usize,
}

impl Default for CollectorConfig {
    fn default() -> Self {
        Self {
            val1: 2_585_566_630,
            val2: 576_722_363,
            samples: 100,
            scale: 250,
            stretch: 100,
        }
    }
}

impl CollectorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.scale == 0 {
            return Err(Error::InvalidConfig("scale must be at least 1".into()));
        }
        Ok(())
    }

    /// `key=value` lines, one per field.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "val1={}", self.val1);
        let _ = writeln!(out, "val2={}", self.val2);
        let _ = writeln!(out, "samples={}", self.samples);
        let _ = writeln!(out, "scale={}", self.scale);
        let _ = writeln!(out, "stretch={}", self.stretch);
        out
    }

    /// Parse `key=value` text. Missing keys keep their defaults; blank lines
    /// and `#` comments are skipped.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::ConfigParse {
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got {line:?}")))?;
            let value = value.trim();
            let bad = |_| parse_err(format!("bad value {value:?} for {}", key.trim()));
            match key.trim() {
                "val1" => config.val1 = value.parse().map_err(bad)?,
                "val2" => config.val2 = value.parse().map_err(bad)?,
                "samples" => config.samples = value.parse().map_err(bad)?,
                "scale" => config.scale = value.parse().map_err(bad)?,
                "stretch" => config.stretch = value.parse().map_err(bad)?,
                other => return Err(parse_err(format!("unknown key {other:?}"))),
            }
        }
        config.validate()?;
        Ok(config)
    }
}

/// Chronologically ordered kernel runtimes plus their provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTrace {
    samples: Vec<u64>,
    config: CollectorConfig,
    timer: TimerSpec,
    kernel_checksum: u64,
}

impl TimingTrace {
    pub fn new(
        samples: Vec<u64>,
        config: CollectorConfig,
        timer: TimerSpec,
        kernel_checksum: u64,
    ) -> Result<Self> {
        if samples.len() != config.samples {
            return Err(Error::InvalidConfig(format!(
                "trace has {} samples but config says {}",
                samples.len(),
                config.samples
            )));
        }
        Ok(Self {
            samples,
            config,
            timer,
            kernel_checksum,
        })
    }

    /// A trace built from given deltas, for replay and testing. The config
    /// is the default with `samples` set to the slice length.
    pub fn synthetic(samples: Vec<u64>) -> Self {
        Self::synthetic_with_stretch(samples, CollectorConfig::default().stretch)
    }

    pub fn synthetic_with_stretch(samples: Vec<u64>, stretch: usize) -> Self {
        let config = CollectorConfig {
            samples: samples.len(),
            stretch,
            ..CollectorConfig::default()
        };
        let timer = TimerSpec {
            name: "synthetic".into(),
            resolution_ns: 1,
            monotonic: true,
            probe_reads: 0,
        };
        Self {
            samples,
            config,
            timer,
            kernel_checksum: 0,
        }
    }

    pub fn samples(&self) -> &[u64] {
        &self.samples
    }

    pub fn config(&self) -> &CollectorConfig {
        &self.config
    }

    pub fn timer(&self) -> &TimerSpec {
        &self.timer
    }

    pub fn kernel_checksum(&self) -> u64 {
        self.kernel_checksum
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn distinct_count(&self) -> usize {
        distinct_count(&self.samples)
    }

    /// Same trace, different stretch. Does not touch the samples.
    pub fn with_stretch(mut self, stretch: usize) -> Self {
        self.config.stretch = stretch;
        self
    }

    /// Write the raw deltas through the value-log tap.
    pub fn write_log<W: Write>(&self, out: W) -> io::Result<()> {
        write_value_log(out, &self.samples)
    }
}

#[inline(never)]
fn run_kernel(val1: u64, val2: u64, scale: u64) -> u64 {
    let mut a1 = 0u64;
    for _ in 0..scale {
        a1 = black_box(val1).wrapping_add(black_box(val2));
    }
    black_box(a1)
}

/// Perform `scale` additions of `val1 + val2` and return the sum.
pub fn kernel(val1: u64, val2: u64, scale: u64) -> Result<u64> {
    if scale == 0 {
        return Err(Error::InvalidArgument("scale must be at least 1".into()));
    }
    Ok(run_kernel(val1, val2, scale))
}

/// Time `config.samples` kernel invocations on `timer`.
///
/// Only the kernel call sits between the two clock reads. The trace buffer
/// is allocated up front and deltas are stored exactly as read: zeros and
/// repeats are kept.
pub fn collect_trace(config: &CollectorConfig, timer: &Timer) -> Result<TimingTrace> {
    config.validate()?;
    if !timer.spec().monotonic || !timer.clock().is_monotonic() {
        return Err(Error::NonMonotonicTimer);
    }
    let CollectorConfig {
        val1, val2, scale, ..
    } = *config;

    let mut deltas = vec![0u64; config.samples];
    let mut checksum = 0u64;
    {
        let _guard = COLLECTION_LOCK
            .lock()
            .unwrap_or_else(|poisoned| poisoned.into_inner());
        for slot in deltas.iter_mut() {
            let start = timer.now_ticks()?;
            let sum = run_kernel(val1, val2, scale);
            let end = timer.now_ticks()?;
            *slot = end.checked_sub(start).ok_or(Error::NonMonotonicTimer)?;
            checksum = checksum.rotate_left(5) ^ sum;
        }
    }

    TimingTrace::new(deltas, *config, timer.spec().clone(), black_box(checksum))
}

/// Number of distinct values in `deltas`.
pub fn distinct_count(deltas: &[u64]) -> usize {
    deltas.iter().collect::<HashSet<_>>().len()
}

/// One decimal delta per line.
pub fn write_value_log<W: Write>(out: W, deltas: &[u64]) -> io::Result<()> {
    let mut out = io::BufWriter::new(out);
    for d in deltas {
        writeln!(out, "{d}")?;
    }
    out.flush()
}

pub fn read_value_log<R: BufRead>(input: R) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        values.push(line.parse().map_err(|_| Error::ConfigParse {
            line: idx + 1,
            message: format!("not a tick count: {line:?}"),
        })?);
    }
    Ok(values)
}
