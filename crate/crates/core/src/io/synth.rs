//! Seeded Gaussian-cluster datasets for desk-scale experiments.

use super::VectorDataset;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// A clustered dataset together with its generating centers.
#[derive(Debug, Clone)]
pub struct SyntheticClusters {
    pub dataset: VectorDataset,
    /// Cluster of each row.
    pub labels: Vec<u32>,
    /// Cluster centers, one row per cluster.
    pub centers: VectorDataset,
    pub spread: f32,
}

/// `n` points in `c` Gaussian clusters of standard deviation `spread`.
///
/// Centers are drawn uniformly from a cube and rejected until every pair is at
/// least 1 apart. Row `i` belongs to cluster `i % c`.
pub fn synth_clusters(n: usize, d: usize, c: usize, spread: f32, seed: u64) -> Result<SyntheticClusters> {
    if n == 0 || d == 0 || c == 0 {
        return Err(Error::invalid(format!("n, d and c must be positive (got {n}, {d}, {c})")));
    }
    if c > n {
        return Err(Error::invalid(format!("{c} clusters exceed {n} points")));
    }
    if !(spread.is_finite() && spread >= 0.0) {
        return Err(Error::invalid(format!("spread must be finite and non-negative, got {spread}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers = separated_centers(c, d, &mut rng);

    let mut data = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % c;
        labels.push(label as u32);
        data.extend(centers[label * d..(label + 1) * d].iter().map(|&x| x + spread * noise(&mut rng)));
    }
    Ok(SyntheticClusters {
        dataset: VectorDataset::new(d, data)?,
        labels,
        centers: VectorDataset::new(d, centers)?,
        spread,
    })
}

fn noise(rng: &mut impl Rng) -> f32 {
    rng.sample::<f32, _>(StandardNormal)
}

fn separated_centers(c: usize, d: usize, rng: &mut impl Rng) -> Vec<f32> {
    // side chosen so that c unit balls fit comfortably
    let mut side = 2.0 * (c as f64).powf(1.0 / d as f64).max(1.0);
    let mut centers: Vec<f32> = Vec::with_capacity(c * d);
    let mut rejected = 0;
    while centers.len() < c * d {
        let candidate: Vec<f32> = (0..d).map(|_| (rng.random::<f64>() * side) as f32).collect();
        let ok = centers.chunks_exact(d).all(|other| {
            other.iter().zip(&candidate).map(|(a, b)| (a - b) * (a - b)).sum::<f32>() >= 1.0
        });
        if ok {
            centers.extend_from_slice(&candidate);
            rejected = 0;
        } else {
            rejected += 1;
            if rejected >= 1000 {
                side *= 1.1;
                rejected = 0;
            }
        }
    }
    centers
}

impl SyntheticClusters {
    /// Fresh points drawn around the same centers, cycling through clusters.
    pub fn sample_queries(&self, count: usize, seed: u64) -> (VectorDataset, Vec<u32>) {
        let d = self.dataset.dim();
        let c = self.centers.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::with_capacity(count * d);
        let mut labels = Vec::with_capacity(count);
        for i in 0..count {
            let label = i % c;
            labels.push(label as u32);
            data.extend(self.centers.row(label).iter().map(|&x| x + self.spread * noise(&mut rng)));
        }
        (VectorDataset::new(d, data).expect("rows have dimension d"), labels)
    }
}
