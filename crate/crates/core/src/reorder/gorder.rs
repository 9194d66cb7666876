use crate::graph::{Ordering, UndirectedGraph};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// Greedy window ordering.
///
/// Starts at the highest-degree node and repeatedly places the unplaced node
/// with the largest score against the last `window` placed nodes, where the
/// score of `v` is the sum over window nodes `u` of `[u ~ v] + |N(u) ∩ N(v)|`.
/// Ties go to the smaller id. When no unplaced node scores above zero the
/// walk restarts at the highest-degree unplaced node.
///
/// Scores are maintained incrementally as nodes enter and leave the window;
/// the max-heap is lazy, so stale entries are re-checked when popped.
pub fn gorder(graph: &UndirectedGraph, window: usize) -> Ordering {
    assert!(window >= 1, "window must be at least 1");
    let n = graph.num_nodes();
    let mut by_degree: Vec<u32> = (0..n as u32).collect();
    by_degree.sort_by_key(|&v| (Reverse(graph.degree(v)), v));
    let mut restart_cursor = 0;

    let mut key = vec![0u64; n];
    let mut placed = vec![false; n];
    let mut heap: BinaryHeap<(u64, Reverse<u32>)> = BinaryHeap::new();
    let mut recent: VecDeque<u32> = VecDeque::with_capacity(window + 1);
    let mut touched: Vec<u32> = Vec::new();
    let mut order = Vec::with_capacity(n);

    while order.len() < n {
        let next = pop_best(&mut heap, &key, &placed).unwrap_or_else(|| {
            while placed[by_degree[restart_cursor] as usize] {
                restart_cursor += 1;
            }
            by_degree[restart_cursor]
        });
        placed[next as usize] = true;
        order.push(next);

        touched.clear();
        recent.push_back(next);
        adjust(graph, next, &placed, &mut key, |v, k| {
            *k += 1;
            touched.push(v);
        });
        if recent.len() > window {
            let leaving = recent.pop_front().unwrap();
            adjust(graph, leaving, &placed, &mut key, |_, k| *k -= 1);
        }
        touched.sort_unstable();
        touched.dedup();
        for &v in &touched {
            if !placed[v as usize] && key[v as usize] > 0 {
                heap.push((key[v as usize], Reverse(v)));
            }
        }
    }
    Ordering::from_slot_order(order).expect("every node placed exactly once")
}

/// Applies `f` once per unit of score that `u` contributes to each unplaced
/// node: once for every direct neighbor and once per shared neighbor.
fn adjust(graph: &UndirectedGraph, u: u32, placed: &[bool], key: &mut [u64], mut f: impl FnMut(u32, &mut u64)) {
    for &x in graph.neighbors(u) {
        if !placed[x as usize] {
            f(x, &mut key[x as usize]);
        }
        for &v in graph.neighbors(x) {
            if v != u && !placed[v as usize] {
                f(v, &mut key[v as usize]);
            }
        }
    }
}

fn pop_best(heap: &mut BinaryHeap<(u64, Reverse<u32>)>, key: &[u64], placed: &[bool]) -> Option<u32> {
    while let Some((k, Reverse(v))) = heap.pop() {
        let current = key[v as usize];
        if placed[v as usize] || current == 0 {
            continue;
        }
        if k == current {
            return Some(v);
        }
        // stale: the score dropped since this entry was pushed
        heap.push((current, Reverse(v)));
    }
    None
}
