use crate::distance::squared_l2;
use crate::io::{GroundTruth, VectorDataset};
use crate::{Error, Result};
use rayon::prelude::*;

/// Exact `k` nearest neighbors of `query`, ascending by `(distance, id)`.
pub fn brute_force_knn(data: &VectorDataset, query: &[f32], k: usize) -> Result<Vec<u32>> {
    if query.len() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: query.len() });
    }
    if k > data.len() {
        return Err(Error::invalid(format!("k = {k} exceeds dataset size {}", data.len())));
    }
    let mut scored: Vec<(f32, u32)> = data.rows().enumerate().map(|(i, row)| (squared_l2(row, query), i as u32)).collect();
    let cmp = |a: &(f32, u32), b: &(f32, u32)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < scored.len() && k > 0 {
        scored.select_nth_unstable_by(k - 1, cmp);
    }
    scored.truncate(k);
    scored.sort_unstable_by(cmp);
    Ok(scored.into_iter().map(|(_, id)| id).collect())
}

/// Exact `k`-NN lists for every query, computed in parallel.
pub fn ground_truth(data: &VectorDataset, queries: &VectorDataset, k: usize) -> Result<GroundTruth> {
    let rows: Result<Vec<Vec<u32>>> =
        (0..queries.len()).into_par_iter().map(|i| brute_force_knn(data, queries.row(i), k)).collect();
    Ok(GroundTruth::new(rows?))
}
