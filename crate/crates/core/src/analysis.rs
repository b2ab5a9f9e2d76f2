//! Runtime distribution analysis and the worst-case entropy model.
//!
//! Histograms are exact: each distinct tick delta is its own bucket.

use std::collections::{BTreeMap, HashSet};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::autotune::TuneResult;
use crate::collector::{collect_trace, CollectorConfig, TimingTrace};
use crate::error::{Error, Result};
use crate::timer::{Timer, TimerSpec};

/// Entropy a seed must carry.
pub const SEED_STANDARD_BITS: f64 = 256.0;

/// Distinct values assumed by the worst-case model when the observed
/// distribution has at least this many.
pub const DEFAULT_N_TOP: u64 = 20;

/// `max/min` count across top-k at or below this is reported as flat.
pub const FLATNESS_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub histogram: BTreeMap<u64, u64>,
    pub total_samples: u64,
    pub unique_values: usize,
    /// `(value, count)`, count descending, ties by ascending value.
    pub top_k: Vec<(u64, u64)>,
    pub flatness_ratio: f64,
    pub runs: usize,
    pub k: usize,
}

impl DistributionReport {
    pub fn from_histogram(histogram: BTreeMap<u64, u64>, runs: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let total_samples: u64 = histogram.values().sum();
        if total_samples == 0 {
            return Err(Error::EmptyInput);
        }
        let top_k = ranked(&histogram, k);
        let max = top_k.first().map_or(0, |&(_, c)| c);
        let min = top_k.last().map_or(0, |&(_, c)| c);
        Ok(Self {
            unique_values: histogram.len(),
            total_samples,
            flatness_ratio: max as f64 / min as f64,
            top_k,
            histogram,
            runs,
            k,
        })
    }

    /// The `k` most frequent values, for any `k`.
    pub fn top_values(&self, k: usize) -> Vec<(u64, u64)> {
        ranked(&self.histogram, k)
    }

    pub fn is_flat(&self) -> bool {
        self.flatness_ratio <= FLATNESS_THRESHOLD
    }

    /// Combine two reports; `k` is taken from `self`.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut histogram = self.histogram.clone();
        for (&value, &count) in &other.histogram {
            *histogram.entry(value).or_default() += count;
        }
        Self::from_histogram(histogram, self.runs + other.runs, self.k)
    }

    /// CSV with header `value_ns,count`, rows in ranked order.
    pub fn write_histogram_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut out = io::BufWriter::new(out);
        writeln!(out, "value_ns,count")?;
        for (value, count) in self.top_values(self.histogram.len()) {
            writeln!(out, "{value},{count}")?;
        }
        out.flush()
    }

    pub fn summary(&self) -> DistributionSummary {
        DistributionSummary {
            unique_values: self.unique_values,
            total_samples: self.total_samples,
            runs: self.runs,
            k: self.k,
            flatness_ratio: self.flatness_ratio,
            flat: self.is_flat(),
            top_k: self
                .top_k
                .iter()
                .map(|&(value_ns, count)| TopValue { value_ns, count })
                .collect(),
        }
    }
}

fn ranked(histogram: &BTreeMap<u64, u64>, k: usize) -> Vec<(u64, u64)> {
    let mut entries: Vec<(u64, u64)> = histogram.iter().map(|(&v, &c)| (v, c)).collect();
    entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    entries.truncate(k);
    entries
}

/// Exact-value histogram over every delta of every trace.
pub fn aggregate_distribution(traces: &[TimingTrace], k: usize) -> Result<DistributionReport> {
    let mut histogram = BTreeMap::new();
    for trace in traces {
        for &d in trace.samples() {
            *histogram.entry(d).or_default() += 1;
        }
    }
    if histogram.is_empty() {
        return Err(Error::EmptyInput);
    }
    DistributionReport::from_histogram(histogram, traces.len(), k)
}

/// How many of the `k` most frequent values the two reports share.
pub fn top_k_overlap(a: &DistributionReport, b: &DistributionReport, k: usize) -> Result<usize> {
    for r in [a, b] {
        if r.unique_values < k {
            return Err(Error::InsufficientValues {
                needed: k,
                available: r.unique_values,
            });
        }
    }
    let a_top: HashSet<u64> = a.top_values(k).into_iter().map(|(v, _)| v).collect();
    Ok(b
        .top_values(k)
        .into_iter()
        .filter(|(v, _)| a_top.contains(v))
        .count())
}

/// Collect `runs` traces one after another.
pub fn collect_runs(config: &CollectorConfig, timer: &Timer, runs: usize) -> Result<Vec<TimingTrace>> {
    (0..runs).map(|_| collect_trace(config, timer)).collect()
}

/// Worst-case model: `samples` independent draws from `n_top` equally
/// likely values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub n_top: u64,
    pub samples: u64,
    pub bits: f64,
    pub key_space_log10: f64,
}

pub fn estimate_worst_case_entropy(n_top: u64, samples: u64) -> Result<EntropyEstimate> {
    if n_top == 0 || samples == 0 {
        return Err(Error::InvalidArgument(
            "n_top and samples must both be at least 1".into(),
        ));
    }
    let n = n_top as f64;
    let s = samples as f64;
    Ok(EntropyEstimate {
        n_top,
        samples,
        bits: s * n.log2(),
        key_space_log10: s * n.log10(),
    })
}

pub fn meets_seed_standard(e: &EntropyEstimate) -> bool {
    e.bits >= SEED_STANDARD_BITS
}

/// `min(20, observed distinct)`, never below one.
pub fn n_top_for(report: &DistributionReport) -> u64 {
    (report.unique_values as u64).clamp(1, DEFAULT_N_TOP)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopValue {
    pub value_ns: u64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub unique_values: usize,
    pub total_samples: u64,
    pub runs: usize,
    pub k: usize,
    pub flatness_ratio: f64,
    pub flat: bool,
    pub top_k: Vec<TopValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySummary {
    #[serde(flatten)]
    pub estimate: EntropyEstimate,
    pub meets_standard: bool,
    pub n_top_rule: String,
}

impl EntropySummary {
    pub fn for_distribution(report: &DistributionReport, samples: usize) -> Result<Self> {
        let estimate = estimate_worst_case_entropy(n_top_for(report), samples as u64)?;
        Ok(Self {
            meets_standard: meets_seed_standard(&estimate),
            estimate,
            n_top_rule: format!("min({DEFAULT_N_TOP}, observed distinct)"),
        })
    }
}

/// Shared top-k values between two collection sessions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapSummary {
    pub k: usize,
    pub shared: usize,
}

/// The JSON report emitted by `analyze` and `tune`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub timer: TimerSpec,
    pub config: CollectorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entropy: Option<EntropySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuning: Option<TuneResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overlap: Option<OverlapSummary>,
}

impl Report {
    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
