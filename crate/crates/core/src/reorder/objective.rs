//! Ordering-quality scores. Each undirected edge (or node pair) counts once.

use crate::graph::{Ordering, UndirectedGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingScore {
    pub gorder_score: u64,
    pub bandwidth: u64,
    pub linear_cost: u64,
    pub log_cost: f64,
}

impl OrderingScore {
    pub fn compute(graph: &UndirectedGraph, p: &Ordering, window: usize) -> Self {
        Self {
            gorder_score: gorder_score(graph, p, window),
            bandwidth: bandwidth(graph, p),
            linear_cost: linear_arrangement_cost(graph, p),
            log_cost: log_arrangement_cost(graph, p),
        }
    }
}

fn check_len(graph: &UndirectedGraph, p: &Ordering) {
    assert_eq!(graph.num_nodes(), p.len(), "ordering does not cover the graph");
}

#[inline]
fn gap(p: &Ordering, u: u32, v: u32) -> u64 {
    p.slot_of(u).abs_diff(p.slot_of(v)) as u64
}

/// Number of common neighbors of `u` and `v` (both lists sorted).
pub(crate) fn common_neighbors(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Sum over node pairs less than `window` slots apart of
/// `[u, v adjacent] + |N(u) ∩ N(v)|`.
pub fn gorder_score(graph: &UndirectedGraph, p: &Ordering, window: usize) -> u64 {
    check_len(graph, p);
    let n = p.len();
    let mut total = 0;
    for i in 0..n {
        let u = p.node_at(i as u32);
        for j in i + 1..n.min(i + window) {
            let v = p.node_at(j as u32);
            total += graph.has_edge(u, v) as u64 + common_neighbors(graph.neighbors(u), graph.neighbors(v));
        }
    }
    total
}

/// Largest slot gap across any edge; 0 without edges.
pub fn bandwidth(graph: &UndirectedGraph, p: &Ordering) -> u64 {
    check_len(graph, p);
    graph.edges().map(|(u, v)| gap(p, u, v)).max().unwrap_or(0)
}

/// Sum of slot gaps over edges.
pub fn linear_arrangement_cost(graph: &UndirectedGraph, p: &Ordering) -> u64 {
    check_len(graph, p);
    graph.edges().map(|(u, v)| gap(p, u, v)).sum()
}

/// Sum of base-2 logarithms of slot gaps over edges.
pub fn log_arrangement_cost(graph: &UndirectedGraph, p: &Ordering) -> f64 {
    check_len(graph, p);
    graph.edges().map(|(u, v)| (gap(p, u, v) as f64).log2()).sum()
}
