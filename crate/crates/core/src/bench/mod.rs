//! Benchmark harness: ground truth, recall, latency statistics, speedup
//! tables and access-trace export.

mod stats;
mod trace;
mod truth;

pub use stats::{latency_stats, nearest_rank, recall_at, speedup, LatencyStats, Recall};
pub use trace::{export_access_trace, for_each_access, Access, AccessTrace};
pub use truth::{brute_force_knn, ground_truth};

use crate::graph::{FlatIndex, Ordering};
use crate::io::{GroundTruth, VectorDataset};
use crate::search::{Init, QueryParams, Searcher};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Queries per timed pass; capped by the number of queries supplied.
    pub query_count: usize,
    pub repetitions: usize,
    /// Beam widths `M_q` to sweep.
    pub sweep: Vec<usize>,
    /// Result count and recall depth.
    pub k: usize,
    /// Read the whole index once before timing each configuration.
    pub warm_start: bool,
    pub init: Init,
    /// Wall time of the index build, copied into every row.
    pub build_seconds: f64,
    /// Keep per-query result ids in the report rows.
    pub keep_results: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            query_count: 10_000,
            repetitions: 5,
            sweep: vec![100, 200, 500, 1000, 2000, 5000],
            k: 100,
            warm_start: true,
            init: Init::Hierarchical,
            build_seconds: 0.0,
            keep_results: false,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::invalid("repetitions must be at least 1"));
        }
        if self.sweep.is_empty() {
            return Err(Error::invalid("beam-width sweep is empty"));
        }
        if self.query_count == 0 {
            return Err(Error::invalid("query count must be at least 1"));
        }
        for &m in &self.sweep {
            QueryParams { beam_width: m, k: self.k, init: self.init }.validate()?;
        }
        Ok(())
    }
}

/// An ordering under test together with the time it took to compute.
#[derive(Debug, Clone)]
pub struct NamedOrdering {
    pub name: String,
    pub ordering: Ordering,
    pub reorder_seconds: f64,
}

impl NamedOrdering {
    pub fn new(name: impl Into<String>, ordering: Ordering, reorder_seconds: f64) -> Self {
        Self { name: name.into(), ordering, reorder_seconds }
    }

    pub fn identity(n: usize) -> Self {
        Self::new("original", Ordering::identity(n), 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub ordering: String,
    #[serde(rename = "M_q")]
    pub beam_width: usize,
    /// Mean recall `R k@k` over the queries.
    pub recall: f64,
    pub mean_us: f64,
    pub p99_us: f64,
    pub speedup: f64,
    /// Mean distance computations per query.
    pub dist_comps: f64,
    pub reorder_s: f64,
    pub build_s: f64,
    /// Result ids per query, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub results: Option<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub queries: usize,
    pub rows: Vec<BenchRow>,
}

/// Fixed column order of the CSV report.
pub const CSV_COLUMNS: [&str; 9] =
    ["ordering", "M_q", "recall", "mean_us", "p99_us", "speedup", "dist_comps", "reorder_s", "build_s"];

impl BenchReport {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record([
                r.ordering.clone(),
                r.beam_width.to_string(),
                r.recall.to_string(),
                r.mean_us.to_string(),
                r.p99_us.to_string(),
                r.speedup.to_string(),
                r.dist_comps.to_string(),
                r.reorder_s.to_string(),
                r.build_s.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, self)?;
        Ok(())
    }

    pub fn rows_for(&self, beam_width: usize) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(move |r| r.beam_width == beam_width)
    }

    /// True when every ordering reports the same recall (and, if kept, the
    /// same result ids) at each beam width.
    pub fn recall_invariant(&self) -> bool {
        self.config.sweep.iter().all(|&m| {
            let mut rows = self.rows_for(m);
            let Some(first) = rows.next() else { return true };
            rows.all(|r| r.recall == first.recall && r.results == first.results)
        })
    }
}

struct Measurement {
    recall: f64,
    latency: LatencyStats,
    batch_mean_us: f64,
    dist_comps: f64,
    results: Vec<Vec<u32>>,
}

fn measure(index: &FlatIndex, queries: &VectorDataset, truth: &GroundTruth, count: usize, params: &QueryParams, config: &BenchConfig) -> Result<Measurement> {
    if config.warm_start {
        black_box(index.touch());
    }
    let mut searcher = Searcher::new(index);
    let mut samples_us = Vec::with_capacity(count * config.repetitions);
    let mut batch_us = 0.0;
    let mut results = Vec::with_capacity(count);
    let mut dist_total = 0u64;
    for rep in 0..config.repetitions {
        let batch = Instant::now();
        for i in 0..count {
            let started = Instant::now();
            let res = searcher.search(queries.row(i), params)?;
            samples_us.push(started.elapsed().as_secs_f64() * 1e6);
            if rep == 0 {
                dist_total += res.distance_computations;
                results.push(res.ids());
            } else {
                black_box(&res);
            }
        }
        batch_us += batch.elapsed().as_secs_f64() * 1e6;
    }
    let recall =
        results.iter().zip(truth.rows()).map(|(r, t)| recall_at(r, t, config.k).value).sum::<f64>() / count as f64;
    Ok(Measurement {
        recall,
        latency: latency_stats(&samples_us)?,
        batch_mean_us: batch_us / (count * config.repetitions) as f64,
        dist_comps: dist_total as f64 / count as f64,
        results,
    })
}

/// Runs the sweep for every ordering and fills in speedups.
///
/// Each ordering is applied to `index`; for every beam width the relabeled
/// index is touched once (warm start) and then the first `query_count`
/// queries are run `repetitions` times on the calling thread. Mean latency
/// comes from whole-batch timing; P99 from per-query samples. Speedup is
/// taken against the first identity ordering at the same beam width, which
/// must be present.
pub fn run_benchmark(
    index: &FlatIndex,
    orderings: &[NamedOrdering],
    queries: &VectorDataset,
    truth: &GroundTruth,
    config: &BenchConfig,
) -> Result<BenchReport> {
    config.validate()?;
    if queries.len() != truth.len() {
        return Err(Error::QueryTruthMismatch { queries: queries.len(), truth: truth.len() });
    }
    if queries.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if queries.dim() != index.dim() {
        return Err(Error::DimensionMismatch { expected: index.dim(), found: queries.dim() });
    }
    truth.validate(index.num_nodes())?;
    let baseline = orderings
        .iter()
        .position(|o| o.ordering.is_identity())
        .ok_or_else(|| Error::invalid("the orderings must include the identity as the speedup baseline"))?;
    let count = config.query_count.min(queries.len());

    let mut rows = Vec::with_capacity(orderings.len() * config.sweep.len());
    for o in orderings {
        let relabeled = index.apply_ordering(&o.ordering)?;
        for &m in &config.sweep {
            let params = QueryParams { beam_width: m, k: config.k, init: config.init };
            let r = measure(&relabeled, queries, truth, count, &params, config)?;
            rows.push(BenchRow {
                ordering: o.name.clone(),
                beam_width: m,
                recall: r.recall,
                mean_us: r.batch_mean_us.max(f64::MIN_POSITIVE),
                p99_us: r.latency.p99,
                speedup: 1.0,
                dist_comps: r.dist_comps,
                reorder_s: o.reorder_seconds,
                build_s: config.build_seconds,
                results: config.keep_results.then_some(r.results),
            });
        }
    }
    let per = config.sweep.len();
    for i in 0..rows.len() {
        let base = rows[baseline * per + i % per].mean_us;
        rows[i].speedup = if i / per == baseline { 1.0 } else { speedup(base, rows[i].mean_us)? };
    }
    Ok(BenchReport { config: config.clone(), queries: count, rows })
}
