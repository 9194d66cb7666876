//! Lightweight reorderings driven only by node degrees. Each has a
//! `*_by_degrees` form over an explicit degree sequence and a graph form.

use crate::graph::{Adjacency, Direction, Ordering};
use std::cmp::Reverse;

fn from_slot_order(order: Vec<u32>) -> Ordering {
    Ordering::from_slot_order(order).expect("degree orderings place every node once")
}

/// Stable sort by descending degree.
pub fn degree_sort_by_degrees(degrees: &[usize]) -> Ordering {
    let mut order: Vec<u32> = (0..degrees.len() as u32).collect();
    order.sort_by_key(|&v| Reverse(degrees[v as usize]));
    from_slot_order(order)
}

pub fn degree_sort(graph: &Adjacency, direction: Direction) -> Ordering {
    degree_sort_by_degrees(&graph.degrees(direction))
}

/// Hubs are nodes whose degree exceeds the mean degree.
fn split_hubs(degrees: &[usize]) -> (Vec<u32>, Vec<u32>) {
    let n = degrees.len() as u128;
    let total: u128 = degrees.iter().map(|&d| d as u128).sum();
    (0..degrees.len() as u32).partition(|&v| degrees[v as usize] as u128 * n > total)
}

/// Hubs first, sorted by descending degree; then non-hubs in id order.
pub fn hub_sort_by_degrees(degrees: &[usize]) -> Ordering {
    let (mut hubs, rest) = split_hubs(degrees);
    hubs.sort_by_key(|&v| Reverse(degrees[v as usize]));
    hubs.extend(rest);
    from_slot_order(hubs)
}

/// Hubs first in id order, then non-hubs in id order.
pub fn hub_cluster_by_degrees(degrees: &[usize]) -> Ordering {
    let (mut hubs, rest) = split_hubs(degrees);
    hubs.extend(rest);
    from_slot_order(hubs)
}

/// Hub sorting on in-degree.
pub fn hub_sort(graph: &Adjacency) -> Ordering {
    hub_sort_by_degrees(&graph.in_degrees())
}

/// Hub clustering on in-degree.
pub fn hub_cluster(graph: &Adjacency) -> Ordering {
    hub_cluster_by_degrees(&graph.in_degrees())
}

/// Lower degree boundary of each of `groups` quantile groups.
///
/// With degrees sorted ascending as `D[1..=n]`, group `j` starts at
/// `D[ceil(j·n/groups) + 1]`, the value just past the nearest-rank
/// `j/groups` quantile. Group 0 starts at the minimum; a boundary past the end
/// of the sequence leaves its group empty.
pub fn dbg_boundaries(degrees: &[usize], groups: usize) -> Vec<Option<usize>> {
    assert!(groups >= 1, "groups must be at least 1");
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    (0..groups)
        .map(|j| {
            if j == 0 {
                return sorted.first().copied();
            }
            // 1-based nearest rank of the j/groups quantile doubles as the
            // 0-based index of the element after it
            sorted.get((j * n).div_ceil(groups)).copied()
        })
        .collect()
}

/// Degree-based grouping: nodes are bucketed by the quantiles of the degree
/// distribution, buckets are emitted from highest to lowest degree, and nodes
/// keep id order within a bucket.
pub fn dbg_by_degrees(degrees: &[usize], groups: usize) -> Ordering {
    let bounds = dbg_boundaries(degrees, groups);
    let group_of = |d: usize| -> usize {
        (0..groups).rev().find(|&j| bounds[j].is_some_and(|b| d >= b)).unwrap_or(0)
    };
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); groups];
    for (v, &d) in degrees.iter().enumerate() {
        buckets[group_of(d)].push(v as u32);
    }
    from_slot_order(buckets.into_iter().rev().flatten().collect())
}

pub fn dbg(graph: &Adjacency, groups: usize, direction: Direction) -> Ordering {
    dbg_by_degrees(&graph.degrees(direction), groups)
}
