use std::collections::BTreeMap;

use proptest::prelude::*;
use siderand::analysis::{DistributionReport, EntropySummary, Report};
use siderand::{aggregate_distribution, estimate_worst_case_entropy, top_k_overlap, CollectorConfig, TimingTrace};

fn traces() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0u64..60, 1..40), 2..12)
}

fn as_traces(v: &[Vec<u64>]) -> Vec<TimingTrace> {
    v.iter().cloned().map(TimingTrace::synthetic).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn merge_equals_merged_traces(raw in traces(), split in any::<prop::sample::Index>(), k in 1usize..30) {
        let all = as_traces(&raw);
        let cut = split.index(all.len() - 1) + 1;
        let left = aggregate_distribution(&all[..cut], k).unwrap();
        let right = aggregate_distribution(&all[cut..], k).unwrap();
        let whole = aggregate_distribution(&all, k).unwrap();
        prop_assert_eq!(left.merge(&right).unwrap(), whole.clone());
        let total: u64 = whole.histogram.values().sum();
        prop_assert_eq!(total, raw.iter().map(|t| t.len() as u64).sum::<u64>());
        prop_assert_eq!(whole.unique_values, whole.histogram.len());
    }

    #[test]
    fn top_k_ordering(raw in traces(), k in 1usize..30) {
        let r = aggregate_distribution(&as_traces(&raw), k).unwrap();
        for w in r.top_k.windows(2) {
            prop_assert!(w[0].1 > w[1].1 || (w[0].1 == w[1].1 && w[0].0 < w[1].0));
        }
    }

    #[test]
    fn overlap_symmetric_and_bounded(a in traces(), b in traces(), k in 1usize..20) {
        let ra = aggregate_distribution(&as_traces(&a), 5).unwrap();
        let rb = aggregate_distribution(&as_traces(&b), 5).unwrap();
        prop_assume!(ra.unique_values >= k && rb.unique_values >= k);
        let ab = top_k_overlap(&ra, &rb, k).unwrap();
        prop_assert_eq!(ab, top_k_overlap(&rb, &ra, k).unwrap());
        prop_assert!(ab <= k);
        prop_assert_eq!(top_k_overlap(&ra, &ra, k).unwrap(), k);
    }

    #[test]
    fn histogram_csv_round_trips(raw in traces()) {
        let r = aggregate_distribution(&as_traces(&raw), 10).unwrap();
        let mut out = Vec::new();
        r.write_histogram_csv(&mut out).unwrap();
        let mut reader = csv::Reader::from_reader(&out[..]);
        prop_assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), vec!["value_ns", "count"]);
        let mut parsed = BTreeMap::new();
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec.unwrap();
            let v: u64 = rec[0].parse().unwrap();
            let c: u64 = rec[1].parse().unwrap();
            parsed.insert(v, c);
            rows.push((v, c));
        }
        prop_assert_eq!(&parsed, &r.histogram);
        prop_assert_eq!(rows, r.top_values(usize::MAX));
    }
}

#[test]
fn entropy_is_linear_in_samples_and_increasing_in_n() {
    for n in [2u64, 3, 20, 1000] {
        let one = estimate_worst_case_entropy(n, 1).unwrap().bits;
        assert!((one - (n as f64).log2()).abs() < 1e-12);
        for s in [1u64, 7, 100, 10_000] {
            let e = estimate_worst_case_entropy(n, s).unwrap();
            assert!((e.bits - s as f64 * one).abs() < 1e-9 * s as f64);
        }
        assert!(estimate_worst_case_entropy(n + 1, 100).unwrap().bits > estimate_worst_case_entropy(n, 100).unwrap().bits);
    }
    // log2(20) = 2 + log2(5)
    let e = estimate_worst_case_entropy(20, 100).unwrap();
    assert!((e.bits - 100.0 * (2.0 + 5f64.log2())).abs() < 1e-9);
}

#[test]
fn report_json_field_contract() {
    let traces = as_traces(&[(0..100).map(|i| 100 + i % 37).collect()]);
    let dist: DistributionReport = aggregate_distribution(&traces, 20).unwrap();
    let report = Report {
        timer: traces[0].timer().clone(),
        config: CollectorConfig::default(),
        distribution: Some(dist.summary()),
        entropy: Some(EntropySummary::for_distribution(&dist, 100).unwrap()),
        tuning: None,
        overlap: None,
    };
    let text = report.to_json_pretty().unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["timer", "config", "distribution", "entropy"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v.get("tuning").is_none());
    assert_eq!(v["distribution"]["unique_values"], 37);
    assert_eq!(v["distribution"]["total_samples"], 100);
    assert_eq!(v["distribution"]["top_k"].as_array().unwrap().len(), 20);
    assert_eq!(v["entropy"]["n_top"], 20);
    assert_eq!(v["config"]["val1"], 2_585_566_630u64);
    assert!(v["timer"]["resolution_ns"].is_u64());
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
}
