use super::Adjacency;
use crate::{Error, Result};

/// Mutable layered adjacency used while an index is being constructed.
///
/// Node ids are dataset row indices. A node with level `L` has an out-neighbor
/// list on every layer `0..=L`. Nodes that have not been inserted yet have no
/// level and no links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildGraph {
    max_degree: usize,
    levels: Vec<Option<usize>>,
    /// `links[node][layer]`
    links: Vec<Vec<Vec<u32>>>,
    entry: Option<u32>,
    inserted: usize,
}

impl BuildGraph {
    /// An empty graph with room for `num_nodes` nodes.
    pub fn new(num_nodes: usize, max_degree: usize) -> Self {
        Self {
            max_degree,
            levels: vec![None; num_nodes],
            links: vec![Vec::new(); num_nodes],
            entry: None,
            inserted: 0,
        }
    }

    /// A single-layer graph with every node present at level 0.
    pub fn from_base_lists(lists: Vec<Vec<u32>>, max_degree: usize) -> Result<Self> {
        let n = lists.len();
        let graph = Self {
            max_degree,
            levels: vec![Some(0); n],
            links: lists.into_iter().map(|l| vec![l]).collect(),
            entry: if n > 0 { Some(0) } else { None },
            inserted: n,
        };
        graph.validate()?;
        Ok(graph)
    }

    pub fn num_nodes(&self) -> usize {
        self.levels.len()
    }

    pub fn num_inserted(&self) -> usize {
        self.inserted
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn entry_point(&self) -> Option<u32> {
        self.entry
    }

    /// Highest populated layer, or `None` for an empty graph.
    pub fn top_level(&self) -> Option<usize> {
        self.entry.and_then(|e| self.levels[e as usize])
    }

    pub fn level(&self, node: u32) -> Option<usize> {
        self.levels.get(node as usize).copied().flatten()
    }

    pub fn is_inserted(&self, node: u32) -> bool {
        self.level(node).is_some()
    }

    /// Out-neighbors of `node` on `layer`; empty if the node is absent there.
    #[inline]
    pub fn neighbors(&self, node: u32, layer: usize) -> &[u32] {
        self.links[node as usize].get(layer).map_or(&[], Vec::as_slice)
    }

    /// Nodes present on `layer`, ascending.
    pub fn layer_members(&self, layer: usize) -> Vec<u32> {
        (0..self.num_nodes() as u32)
            .filter(|&u| self.level(u).is_some_and(|l| l >= layer))
            .collect()
    }

    pub fn base_layer(&self) -> Adjacency {
        let lists: Vec<&[u32]> = (0..self.num_nodes() as u32).map(|u| self.neighbors(u, 0)).collect();
        Adjacency::from_lists(&lists)
    }

    pub(crate) fn add_node(&mut self, node: u32, level: usize) -> Result<()> {
        let n = self.num_nodes();
        let slot = self.levels.get_mut(node as usize).ok_or(Error::NodeOutOfRange { id: node, n })?;
        if slot.is_some() {
            return Err(Error::DuplicateInsert(node));
        }
        *slot = Some(level);
        self.links[node as usize] = vec![Vec::new(); level + 1];
        self.inserted += 1;
        if self.top_level().is_none_or(|top| level > top) {
            self.entry = Some(node);
        }
        Ok(())
    }

    pub(crate) fn links_mut(&mut self, node: u32, layer: usize) -> &mut Vec<u32> {
        &mut self.links[node as usize][layer]
    }

    /// Checks the structural invariants: no self-loops, targets in range and
    /// present on the layer, list lengths within the degree cap.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_nodes();
        for u in 0..n as u32 {
            let Some(level) = self.level(u) else {
                if self.links[u as usize].iter().any(|l| !l.is_empty()) {
                    return Err(Error::invalid(format!("absent node {u} has links")));
                }
                continue;
            };
            if self.links[u as usize].len() != level + 1 {
                return Err(Error::invalid(format!("node {u} has {} layers, level {level}", self.links[u as usize].len())));
            }
            for layer in 0..=level {
                let list = self.neighbors(u, layer);
                if list.len() > self.max_degree {
                    return Err(Error::invalid(format!(
                        "node {u} has {} links on layer {layer}, cap {}",
                        list.len(),
                        self.max_degree
                    )));
                }
                for &v in list {
                    if v as usize >= n {
                        return Err(Error::NodeOutOfRange { id: v, n });
                    }
                    if v == u {
                        return Err(Error::invalid(format!("self-loop at node {u}")));
                    }
                    if self.level(v).is_none_or(|lv| lv < layer) {
                        return Err(Error::invalid(format!("link {u}->{v} on layer {layer} leaves the layer")));
                    }
                }
            }
        }
        Ok(())
    }
}
