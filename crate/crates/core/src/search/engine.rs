//! Graph-agnostic greedy and beam search shared by construction (over a
//! `BuildGraph` layer) and queries (over the flat layout).

use std::cmp::{Ordering as CmpOrdering, Reverse};
use std::collections::BinaryHeap;

/// A node reached during a search, keyed by `(distance, id)`.
///
/// `node` is the graph-local handle (a slot in a flat index, a node id in a
/// build graph); `id` is the original id used to break distance ties.
#[derive(Debug, Clone, Copy)]
pub struct Candidate {
    pub distance: f32,
    pub id: u32,
    pub node: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == CmpOrdering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        self.distance.total_cmp(&other.distance).then(self.id.cmp(&other.id))
    }
}

pub(crate) trait Traversable {
    fn tie_key(&self, node: u32) -> u32;
    fn distance_to(&self, node: u32, query: &[f32]) -> f32;
    fn neighbors(&self, node: u32) -> &[u32];
}

/// Work done by one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    /// Nodes whose out-links were scanned.
    pub expansions: u64,
    pub distance_computations: u64,
}

#[inline]
pub(crate) fn evaluate<G: Traversable>(g: &G, query: &[f32], node: u32, counters: &mut Counters) -> Candidate {
    counters.distance_computations += 1;
    Candidate { distance: g.distance_to(node, query), id: g.tie_key(node), node }
}

/// Generation-stamped visited set, reusable across searches without clearing.
#[derive(Debug, Default, Clone)]
pub struct VisitedSet {
    stamps: Vec<u32>,
    epoch: u32,
}

impl VisitedSet {
    pub fn new(n: usize) -> Self {
        Self { stamps: vec![0; n], epoch: 1 }
    }

    pub fn reset(&mut self, n: usize) {
        if self.stamps.len() < n {
            self.stamps.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamps.fill(0);
            self.epoch = 1;
        }
    }

    /// Marks `node`; returns `false` if it was already marked.
    #[inline]
    pub fn insert(&mut self, node: u32) -> bool {
        let stamp = &mut self.stamps[node as usize];
        if *stamp == self.epoch {
            false
        } else {
            *stamp = self.epoch;
            true
        }
    }
}

/// Moves to the closest out-neighbor while it beats the current node in
/// `(distance, id)` order.
pub(crate) fn greedy_walk<G: Traversable>(
    g: &G,
    query: &[f32],
    start: Candidate,
    counters: &mut Counters,
    mut on_expand: impl FnMut(u32),
) -> Candidate {
    let mut current = start;
    loop {
        on_expand(current.node);
        counters.expansions += 1;
        let mut best: Option<Candidate> = None;
        for &nb in g.neighbors(current.node) {
            let c = evaluate(g, query, nb, counters);
            if best.is_none_or(|b| c < b) {
                best = Some(c);
            }
        }
        match best {
            Some(b) if b < current => current = b,
            _ => return current,
        }
    }
}

/// Reusable heaps for [`beam`].
#[derive(Debug, Default)]
pub(crate) struct BeamScratch {
    frontier: BinaryHeap<Reverse<Candidate>>,
    best: BinaryHeap<Candidate>,
}

/// Best-first beam search: keeps the `width` best nodes seen, repeatedly
/// expands the nearest unexpanded one, and stops once all of them have been
/// expanded. Returns the kept nodes ascending by `(distance, id)`.
///
/// Seeds must already be evaluated; they are marked visited here.
#[allow(clippy::too_many_arguments)]
pub(crate) fn beam<G: Traversable>(
    g: &G,
    query: &[f32],
    seeds: &[Candidate],
    width: usize,
    visited: &mut VisitedSet,
    scratch: &mut BeamScratch,
    counters: &mut Counters,
    mut on_expand: impl FnMut(u32),
) -> Vec<Candidate> {
    debug_assert!(width >= 1);
    let BeamScratch { frontier, best } = scratch;
    frontier.clear();
    best.clear();
    for &s in seeds {
        if visited.insert(s.node) {
            frontier.push(Reverse(s));
            best.push(s);
            if best.len() > width {
                best.pop();
            }
        }
    }
    while let Some(Reverse(c)) = frontier.pop() {
        if best.len() >= width && best.peek().is_some_and(|worst| c > *worst) {
            // c was evicted, and so was everything still in the frontier
            break;
        }
        on_expand(c.node);
        counters.expansions += 1;
        for &nb in g.neighbors(c.node) {
            if !visited.insert(nb) {
                continue;
            }
            let nc = evaluate(g, query, nb, counters);
            if best.len() < width || best.peek().is_some_and(|worst| nc < *worst) {
                frontier.push(Reverse(nc));
                best.push(nc);
                if best.len() > width {
                    best.pop();
                }
            }
        }
    }
    let mut out: Vec<Candidate> = best.drain().collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Points on a line with explicit out-links.
    pub(crate) struct LineGraph {
        pub coords: Vec<f32>,
        pub links: Vec<Vec<u32>>,
    }

    impl Traversable for LineGraph {
        fn tie_key(&self, node: u32) -> u32 {
            node
        }
        fn distance_to(&self, node: u32, query: &[f32]) -> f32 {
            let d = self.coords[node as usize] - query[0];
            d * d
        }
        fn neighbors(&self, node: u32) -> &[u32] {
            &self.links[node as usize]
        }
    }

    fn chain(n: u32) -> LineGraph {
        LineGraph {
            coords: (0..n).map(|i| i as f32).collect(),
            links: (0..n).map(|i| if i + 1 < n { vec![i + 1] } else { vec![] }).collect(),
        }
    }

    #[test]
    fn greedy_walks_monotone_chain() {
        let g = chain(10);
        let mut counters = Counters::default();
        let start = evaluate(&g, &[9.1], 0, &mut counters);
        let mut path = Vec::new();
        let end = greedy_walk(&g, &[9.1], start, &mut counters, |n| path.push(n));
        assert_eq!(end.node, 9);
        assert_eq!(path, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn greedy_stays_at_local_minimum() {
        let g = chain(10);
        let mut counters = Counters::default();
        let start = evaluate(&g, &[0.0], 0, &mut counters);
        let end = greedy_walk(&g, &[0.0], start, &mut counters, |_| {});
        assert_eq!(end.node, 0);
        assert_eq!(counters.expansions, 1);
    }

    #[test]
    fn beam_never_evaluates_a_node_twice() {
        // complete graph on 6 nodes
        let n = 6;
        let g = LineGraph {
            coords: (0..n).map(|i| i as f32 * 1.5).collect(),
            links: (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect(),
        };
        let mut visited = VisitedSet::new(n as usize);
        visited.reset(n as usize);
        let mut counters = Counters::default();
        let seed = evaluate(&g, &[4.0], 5, &mut counters);
        let out = beam(&g, &[4.0], &[seed], 2, &mut visited, &mut BeamScratch::default(), &mut counters, |_| {});
        assert_eq!(counters.distance_computations, n as u64);
        assert_eq!(out[0].node, 3); // 4.5
        assert_eq!(out[1].node, 2); // 3.0
    }

    #[test]
    fn visited_set_survives_many_resets() {
        let mut v = VisitedSet::new(4);
        for _ in 0..10 {
            v.reset(4);
            assert!(v.insert(2));
            assert!(!v.insert(2));
        }
    }
}
