#![allow(dead_code)]

use nnro::graph::{symmetrize, Adjacency, FlatIndex, Ordering, UndirectedGraph};
use nnro::hnsw::{build_flat, BuildParams};
use nnro::io::{synth_clusters, SyntheticClusters, VectorDataset};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn clusters(n: usize, d: usize, c: usize, spread: f32, seed: u64) -> SyntheticClusters {
    synth_clusters(n, d, c, spread, seed).unwrap()
}

pub fn index_for(data: &VectorDataset, k_c: usize, m_c: usize, seed: u64) -> FlatIndex {
    build_flat(data, &BuildParams::new(k_c, m_c).with_seed(seed)).unwrap()
}

pub fn random_ordering(n: usize, rng: &mut impl Rng) -> Ordering {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    Ordering::from_forward(order).unwrap()
}

pub fn uniform_points(n: usize, d: usize, rng: &mut impl Rng) -> VectorDataset {
    VectorDataset::new(d, (0..n * d).map(|_| rng.random::<f32>()).collect()).unwrap()
}

/// Exact k-NN graph by a plain double loop, symmetrized.
pub fn knn_graph(data: &VectorDataset, k: usize) -> UndirectedGraph {
    let n = data.len();
    let lists: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut others: Vec<(f32, u32)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d: f32 = data.row(i).iter().zip(data.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
                    (d, j as u32)
                })
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect();
    symmetrize(&Adjacency::from_lists(&lists))
}

/// Random connected graph: a random spanning tree plus extra random edges.
pub fn random_connected(n: usize, extra: usize, rng: &mut impl Rng) -> UndirectedGraph {
    let mut edges = Vec::new();
    for v in 1..n as u32 {
        edges.push((rng.random_range(0..v), v));
    }
    if n > 1 {
        for _ in 0..extra {
            let u = rng.random_range(0..n as u32);
            let v = rng.random_range(0..n as u32);
            if u != v {
                edges.push((u, v));
            }
        }
    }
    UndirectedGraph::from_edges(n, &edges).unwrap()
}

/// Adjacency matrix of an undirected graph.
pub fn matrix(g: &UndirectedGraph) -> Vec<Vec<bool>> {
    let n = g.num_nodes();
    let mut m = vec![vec![false; n]; n];
    for u in 0..n as u32 {
        for &v in g.neighbors(u) {
            m[u as usize][v as usize] = true;
        }
    }
    m
}

/// Objective values by enumerating all node pairs against the matrix.
pub struct PairOracle {
    pub gorder: u64,
    pub bandwidth: u64,
    pub linear: u64,
    pub log: f64,
}

pub fn pair_oracle(g: &UndirectedGraph, p: &Ordering, window: usize) -> PairOracle {
    let m = matrix(g);
    let n = m.len();
    let mut out = PairOracle { gorder: 0, bandwidth: 0, linear: 0, log: 0.0 };
    for u in 0..n {
        for v in u + 1..n {
            let gap = (p.slot_of(u as u32) as i64 - p.slot_of(v as u32) as i64).unsigned_abs();
            if gap < window as u64 {
                let common = (0..n).filter(|&x| m[u][x] && m[v][x]).count() as u64;
                out.gorder += m[u][v] as u64 + common;
            }
            if m[u][v] {
                out.bandwidth = out.bandwidth.max(gap);
                out.linear += gap;
                out.log += (gap as f64).log2();
            }
        }
    }
    out
}
