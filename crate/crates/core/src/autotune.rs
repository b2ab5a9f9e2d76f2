//! Scale auto-tuning.
//!
//! Starting from the base config, probe the current `scale` for a short
//! window and double it until every probe trace reaches the floor and the
//! median clears it with headroom, or the next step would not fit in the
//! time budget.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::collector::{collect_trace, CollectorConfig};
use crate::error::{Error, Result};
use crate::timer::Timer;

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(5);
/// Minimum traces per probe step.
pub const PROBE_RUNS_PER_STEP: usize = 3;

/// A probe step keeps collecting until this much time has passed, so that
/// cheap configs are judged over a window longer than one noise burst.
pub const STEP_WINDOW: Duration = Duration::from_millis(20);

/// Median distinct count must reach `HEADROOM * floor`; every run in the
/// step must reach `floor`.
pub const HEADROOM: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The base scale already met the floor.
    AlreadyAdequate,
    /// A larger scale met the floor.
    Tuned,
    /// The floor was not met within the budget.
    Unattainable,
}

impl Verdict {
    pub fn is_success(self) -> bool {
        !matches!(self, Verdict::Unattainable)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    /// Last config probed; the tuned one on success.
    pub config: CollectorConfig,
    pub probe_runs: usize,
    /// Median distinct count over the last probe step.
    pub achieved_distinct: usize,
    pub elapsed_ns: u64,
    pub verdict: Verdict,
}

struct Step {
    runs: usize,
    worst: usize,
    median: usize,
}

fn probe_step(config: &CollectorConfig, timer: &Timer) -> Result<Step> {
    let started = Instant::now();
    let mut counts = Vec::new();
    while counts.len() < PROBE_RUNS_PER_STEP || started.elapsed() < STEP_WINDOW {
        counts.push(collect_trace(config, timer)?.distinct_count());
    }
    counts.sort_unstable();
    Ok(Step {
        runs: counts.len(),
        worst: counts[0],
        median: counts[counts.len() / 2],
    })
}

/// Search for a `scale` whose traces reach `floor` distinct values.
///
/// The returned scale is never below `base.scale`. Budget accounting uses
/// the host clock, not `timer`, so a simulated clock cannot make the search
/// appear free.
pub fn tune(base: &CollectorConfig, timer: &Timer, floor: usize, budget: Duration) -> Result<TuneResult> {
    base.validate()?;
    if floor < 2 {
        return Err(Error::InvalidArgument(format!("floor must be at least 2, got {floor}")));
    }
    if budget.is_zero() {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }

    let started = Instant::now();
    let mut config = *base;
    let mut probe_runs = 0;
    let mut first_step = true;

    loop {
        let step_started = Instant::now();
        let step = probe_step(&config, timer)?;
        let achieved = step.median;
        let adequate = step.worst >= floor && step.median >= floor.saturating_mul(HEADROOM);
        probe_runs += step.runs;
        let step_time = step_started.elapsed();
        let elapsed = started.elapsed();

        let result = |verdict| TuneResult {
            config,
            probe_runs,
            achieved_distinct: achieved,
            elapsed_ns: u64::try_from(elapsed.as_nanos()).unwrap_or(u64::MAX),
            verdict,
        };

        if adequate && elapsed <= budget {
            let verdict = if first_step {
                Verdict::AlreadyAdequate
            } else {
                Verdict::Tuned
            };
            return Ok(result(verdict));
        }

        // Doubling scale roughly doubles the next step.
        let projected = elapsed + (step_time * 2).max(STEP_WINDOW);
        let next_scale = config.scale.checked_mul(2);
        match next_scale {
            Some(scale) if !adequate && projected <= budget => {
                config.scale = scale;
                first_step = false;
            }
            _ => return Ok(result(Verdict::Unattainable)),
        }
    }
}
