use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Recall {
    pub value: f64,
    /// Set when either list was shorter than `k`; the value is then computed
    /// over the available length.
    pub truncated: bool,
}

/// `|top-k(results) ∩ top-k(truth)| / k`.
pub fn recall_at(results: &[u32], truth: &[u32], k: usize) -> Recall {
    let m = k.min(results.len()).min(truth.len());
    let truncated = m < k;
    if m == 0 {
        return Recall { value: 0.0, truncated };
    }
    let expected: HashSet<u32> = truth[..m].iter().copied().collect();
    let hits = results[..m].iter().filter(|id| expected.contains(id)).count();
    Recall { value: hits as f64 / m as f64, truncated }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub mean: f64,
    pub p50: f64,
    pub p99: f64,
    pub count: usize,
}

/// Value at 1-based position `ceil(pct/100 · n)` of the ascending samples.
pub fn nearest_rank(sorted: &[f64], pct: usize) -> f64 {
    assert!(!sorted.is_empty() && (1..=100).contains(&pct));
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

/// Mean, median and 99th percentile (nearest rank) of latency samples.
pub fn latency_stats(samples: &[f64]) -> Result<LatencyStats> {
    if samples.is_empty() {
        return Err(Error::invalid("latency statistics need at least one sample"));
    }
    if let Some(bad) = samples.iter().find(|s| !s.is_finite() || **s < 0.0) {
        return Err(Error::invalid(format!("latency sample {bad} is not a finite non-negative value")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    Ok(LatencyStats { mean, p50: nearest_rank(&sorted, 50), p99: nearest_rank(&sorted, 99), count: samples.len() })
}

/// `baseline / candidate` mean latency.
pub fn speedup(baseline: f64, candidate: f64) -> Result<f64> {
    if !(baseline > 0.0 && candidate > 0.0) || !baseline.is_finite() || !candidate.is_finite() {
        return Err(Error::invalid(format!("speedup needs positive latencies, got {baseline} and {candidate}")));
    }
    Ok(baseline / candidate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recall_examples() {
        let a: Vec<u32> = (0..100).collect();
        assert_eq!(recall_at(&a, &a, 100).value, 1.0);
        let b: Vec<u32> = (100..200).collect();
        assert_eq!(recall_at(&a, &b, 100).value, 0.0);
        let half: Vec<u32> = (50..150).collect();
        assert_eq!(recall_at(&a, &half, 100), Recall { value: 0.5, truncated: false });
    }

    #[test]
    fn recall_only_counts_top_k() {
        assert_eq!(recall_at(&[1, 2, 3], &[3, 2, 1], 2).value, 0.5);
    }

    #[test]
    fn short_lists_are_flagged() {
        let r = recall_at(&[1, 2], &[1, 2, 3], 3);
        assert!(r.truncated);
        assert_eq!(r.value, 1.0);
        assert!(recall_at(&[], &[1], 1).truncated);
    }

    #[test]
    fn latency_examples() {
        let s = latency_stats(&[4.0; 7]).unwrap();
        assert_eq!((s.mean, s.p50, s.p99), (4.0, 4.0, 4.0));
        let ramp: Vec<f64> = (1..=100).map(f64::from).collect();
        let s = latency_stats(&ramp).unwrap();
        assert_eq!(s.p99, 99.0);
        assert_eq!(s.p50, 50.0);
        assert_eq!(s.mean, 50.5);
        assert_eq!(latency_stats(&[3.0]).unwrap().p99, 3.0);
        assert!(latency_stats(&[]).is_err());
        assert!(latency_stats(&[f64::NAN]).is_err());
    }

    #[test]
    fn speedup_examples() {
        assert_eq!(speedup(10.0, 5.0).unwrap(), 2.0);
        assert_eq!(speedup(3.0, 3.0).unwrap(), 1.0);
        assert_eq!(speedup(8.0, 10.0).unwrap(), 0.8);
        assert!(speedup(0.0, 1.0).is_err());
        assert!(speedup(1.0, -1.0).is_err());
    }
}
