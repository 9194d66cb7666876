//! Graph data model shared by construction, search and reordering.

mod build;
mod flat;
mod ordering;

pub use build::BuildGraph;
pub use flat::{FlatIndex, HierarchyLayer, BLOCK_HEADER_BYTES, EMPTY_SLOT};
pub use ordering::{validate_ordering, Ordering};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Edge direction used when counting degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    In,
    Out,
}

/// Directed graph in compressed sparse row form.
///
/// Neighbor lists keep their insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    /// Builds from per-node out-neighbor lists. Panics if a target is out of
    /// range; use [`Adjacency::try_from_lists`] for untrusted input.
    pub fn from_lists<L: AsRef<[u32]>>(lists: &[L]) -> Self {
        Self::try_from_lists(lists).expect("neighbor id out of range")
    }

    pub fn try_from_lists<L: AsRef<[u32]>>(lists: &[L]) -> crate::Result<Self> {
        let n = lists.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in lists {
            for &t in list.as_ref() {
                if t as usize >= n {
                    return Err(crate::Error::NodeOutOfRange { id: t, n });
                }
                targets.push(t);
            }
            offsets.push(targets.len());
        }
        Ok(Self { offsets, targets })
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len()
    }

    #[inline]
    pub fn neighbors(&self, node: u32) -> &[u32] {
        let u = node as usize;
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.num_nodes()];
        for &t in &self.targets {
            deg[t as usize] += 1;
        }
        deg
    }

    pub fn degrees(&self, direction: Direction) -> Vec<usize> {
        match direction {
            Direction::In => self.in_degrees(),
            Direction::Out => self.out_degrees(),
        }
    }

    /// Reverses every edge. Lists of the result are ascending by source.
    pub fn transpose(&self) -> Adjacency {
        let n = self.num_nodes();
        let mut offsets = vec![0usize; n + 1];
        for &t in &self.targets {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut targets = vec![0u32; self.targets.len()];
        for u in 0..n {
            for &t in self.neighbors(u as u32) {
                targets[cursor[t as usize]] = u as u32;
                cursor[t as usize] += 1;
            }
        }
        Adjacency { offsets, targets }
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.num_nodes() as u32).flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
    }
}

/// Undirected simple graph: symmetric, sorted, duplicate-free neighbor lists
/// with no self-loops. This is the input type for the objective-driven
/// reorderers and the ordering-quality scores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    adj: Adjacency,
}

impl UndirectedGraph {
    /// Builds from an unordered edge list. Duplicate edges and self-loops are
    /// dropped.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> crate::Result<Self> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            for id in [u, v] {
                if id as usize >= n {
                    return Err(crate::Error::NodeOutOfRange { id, n });
                }
            }
            if u != v {
                lists[u as usize].push(v);
                lists[v as usize].push(u);
            }
        }
        Ok(Self::from_symmetric_lists(lists))
    }

    fn from_symmetric_lists(mut lists: Vec<Vec<u32>>) -> Self {
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
        }
        UndirectedGraph { adj: Adjacency::from_lists(&lists) }
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.num_nodes()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.adj.num_edges() / 2
    }

    #[inline]
    pub fn neighbors(&self, node: u32) -> &[u32] {
        self.adj.neighbors(node)
    }

    #[inline]
    pub fn degree(&self, node: u32) -> usize {
        self.adj.neighbors(node).len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.out_degrees()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.edges().filter(|&(u, v)| u < v)
    }

    pub fn as_adjacency(&self) -> &Adjacency {
        &self.adj
    }
}

/// Undirected view of a directed graph: `{u, v}` is an edge iff `u -> v` or
/// `v -> u`. Self-loops are dropped.
pub fn symmetrize(graph: &Adjacency) -> UndirectedGraph {
    let n = graph.num_nodes();
    let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (u, v) in graph.edges() {
        if u != v {
            lists[u as usize].push(v);
            lists[v as usize].push(u);
        }
    }
    UndirectedGraph::from_symmetric_lists(lists)
}

/// Degree distribution summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub direction: Direction,
    /// degree -> number of nodes with that degree
    pub histogram: BTreeMap<usize, usize>,
    pub mean: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
}

impl DegreeStats {
    pub fn from_degrees(degrees: &[usize], direction: Direction) -> Self {
        let mut histogram = BTreeMap::new();
        for &d in degrees {
            *histogram.entry(d).or_insert(0) += 1;
        }
        let n = degrees.len();
        let (mean, std) = if n == 0 {
            (0.0, 0.0)
        } else {
            let mean = degrees.iter().sum::<usize>() as f64 / n as f64;
            let var = degrees.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n as f64;
            (mean, var.sqrt())
        };
        DegreeStats {
            direction,
            histogram,
            mean,
            std,
            min: degrees.iter().copied().min().unwrap_or(0),
            max: degrees.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.histogram.values().sum()
    }

    /// Writes `degree,count` rows with a header line.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> crate::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["degree", "count"])?;
        for (degree, count) in &self.histogram {
            w.write_record([degree.to_string(), count.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn degree_stats(graph: &Adjacency, direction: Direction) -> DegreeStats {
    DegreeStats::from_degrees(&graph.degrees(direction), direction)
}
