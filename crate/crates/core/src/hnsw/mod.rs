//! Layered navigable graph construction: level assignment, bootstrapped
//! insertion via beam search, neighbor pruning, and flattening to the
//! query-time layout.

mod prune;

pub use prune::prune_neighbors;

use crate::distance::{squared_l2, Metric};
use crate::graph::{BuildGraph, FlatIndex, HierarchyLayer, EMPTY_SLOT};
use crate::io::VectorDataset;
use crate::search::engine::{self, evaluate, BeamScratch, Traversable, VisitedSet};
use crate::search::{Candidate, Counters};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildParams {
    /// Maximum out-links per node on every layer (`k_c`).
    pub max_degree: usize,
    /// Construction beam width (`M_c`).
    pub beam_width: usize,
    /// Level scale `m_L`; `None` means `1 / ln(max_degree)`.
    pub level_scale: Option<f64>,
    pub seed: u64,
}

impl BuildParams {
    pub fn new(max_degree: usize, beam_width: usize) -> Self {
        Self { max_degree, beam_width, level_scale: None, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_level_scale(mut self, m_l: f64) -> Self {
        self.level_scale = Some(m_l);
        self
    }

    pub fn metric(&self) -> Metric {
        Metric::SquaredEuclidean
    }

    /// Effective `m_L`. For `max_degree < 2` the natural default is infinite,
    /// so `1 / ln 2` is used instead.
    pub fn effective_level_scale(&self) -> f64 {
        self.level_scale.unwrap_or_else(|| 1.0 / (self.max_degree.max(2) as f64).ln())
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_degree == 0 {
            return Err(Error::invalid("max degree must be at least 1"));
        }
        if self.beam_width < self.max_degree {
            return Err(Error::invalid(format!(
                "construction beam width {} is smaller than max degree {}",
                self.beam_width, self.max_degree
            )));
        }
        if self.max_degree >= EMPTY_SLOT as usize {
            return Err(Error::invalid("max degree too large"));
        }
        let m_l = self.effective_level_scale();
        if !(m_l.is_finite() && m_l > 0.0) {
            return Err(Error::invalid(format!("level scale must be positive and finite, got {m_l}")));
        }
        Ok(())
    }
}

/// `floor(-ln(draw) * m_l)` for a uniform draw in `(0, 1)`.
pub fn assign_layer(draw: f64, m_l: f64) -> Result<usize> {
    if !(draw > 0.0 && draw < 1.0) {
        return Err(Error::invalid(format!("uniform draw {draw} outside (0, 1)")));
    }
    if !(m_l.is_finite() && m_l > 0.0) {
        return Err(Error::invalid(format!("level scale {m_l} must be positive")));
    }
    Ok((-draw.ln() * m_l).floor() as usize)
}

fn draw_level(rng: &mut impl Rng, m_l: f64) -> usize {
    let draw: f64 = rng.sample(rand::distr::Open01);
    assign_layer(draw, m_l).expect("Open01 draws lie in (0, 1)")
}

struct LayerView<'a> {
    graph: &'a BuildGraph,
    data: &'a VectorDataset,
    layer: usize,
}

impl Traversable for LayerView<'_> {
    fn tie_key(&self, node: u32) -> u32 {
        node
    }
    fn distance_to(&self, node: u32, query: &[f32]) -> f32 {
        squared_l2(self.data.row(node as usize), query)
    }
    fn neighbors(&self, node: u32) -> &[u32] {
        self.graph.neighbors(node, self.layer)
    }
}

/// Incremental index construction over a fixed dataset.
pub struct HnswBuilder<'a> {
    data: &'a VectorDataset,
    params: BuildParams,
    graph: BuildGraph,
    rng: ChaCha8Rng,
    visited: VisitedSet,
    scratch: BeamScratch,
}

impl<'a> HnswBuilder<'a> {
    pub fn new(data: &'a VectorDataset, params: BuildParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            data,
            params,
            graph: BuildGraph::new(data.len(), params.max_degree),
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            visited: VisitedSet::new(data.len()),
            scratch: BeamScratch::default(),
        })
    }

    pub fn graph(&self) -> &BuildGraph {
        &self.graph
    }

    /// Inserts dataset row `id` with a level drawn from the builder's rng.
    pub fn insert(&mut self, id: u32) -> Result<()> {
        if id as usize >= self.data.len() {
            return Err(Error::NodeOutOfRange { id, n: self.data.len() });
        }
        if self.graph.is_inserted(id) {
            return Err(Error::DuplicateInsert(id));
        }
        let level = draw_level(&mut self.rng, self.params.effective_level_scale());
        insert_at_level(&mut self.graph, self.data, id, level, &self.params, &mut self.visited, &mut self.scratch)
    }

    pub fn finish(self) -> BuildGraph {
        self.graph
    }
}

/// Inserts `new_id` into `graph`, drawing its level from `rng`.
pub fn insert_node(
    graph: &mut BuildGraph,
    data: &VectorDataset,
    new_id: u32,
    params: &BuildParams,
    rng: &mut impl Rng,
) -> Result<()> {
    params.validate()?;
    if graph.num_nodes() != data.len() {
        return Err(Error::invalid(format!("graph has {} nodes, dataset {}", graph.num_nodes(), data.len())));
    }
    if new_id as usize >= data.len() {
        return Err(Error::NodeOutOfRange { id: new_id, n: data.len() });
    }
    if graph.is_inserted(new_id) {
        return Err(Error::DuplicateInsert(new_id));
    }
    let level = draw_level(rng, params.effective_level_scale());
    let mut visited = VisitedSet::new(data.len());
    insert_at_level(graph, data, new_id, level, params, &mut visited, &mut BeamScratch::default())
}

fn insert_at_level(
    graph: &mut BuildGraph,
    data: &VectorDataset,
    id: u32,
    level: usize,
    params: &BuildParams,
    visited: &mut VisitedSet,
    scratch: &mut BeamScratch,
) -> Result<()> {
    let previous = graph.entry_point().zip(graph.top_level());
    graph.add_node(id, level)?;
    let Some((entry, top)) = previous else {
        return Ok(());
    };

    let query = data.row(id as usize);
    let mut counters = Counters::default();
    let mut current = evaluate(&LayerView { graph, data, layer: top }, query, entry, &mut counters);
    for layer in (level + 1..=top).rev() {
        current = engine::greedy_walk(&LayerView { graph, data, layer }, query, current, &mut counters, |_| {});
    }

    let mut seeds = vec![current];
    for layer in (0..=level.min(top)).rev() {
        visited.reset(data.len());
        // the new node is unreachable until linked, but must not be its own candidate
        visited.insert(id);
        let found = engine::beam(
            &LayerView { graph, data, layer },
            query,
            &seeds,
            params.beam_width,
            visited,
            scratch,
            &mut counters,
            |_| {},
        );
        let selected = prune_neighbors(&found, params.max_degree, |a, b| {
            squared_l2(data.row(a as usize), data.row(b as usize))
        });
        *graph.links_mut(id, layer) = selected.iter().map(|c| c.node).collect();
        for s in &selected {
            let list = graph.links_mut(s.node, layer);
            list.push(id);
            if list.len() > params.max_degree {
                shrink_links(graph, data, s.node, layer, params.max_degree);
            }
        }
        seeds = found;
    }
    Ok(())
}

/// Re-prunes an over-full neighbor list against its owner.
fn shrink_links(graph: &mut BuildGraph, data: &VectorDataset, node: u32, layer: usize, max_degree: usize) {
    let base = data.row(node as usize);
    let mut candidates: Vec<Candidate> = graph
        .neighbors(node, layer)
        .iter()
        .map(|&v| Candidate { distance: squared_l2(base, data.row(v as usize)), id: v, node: v })
        .collect();
    candidates.sort_unstable();
    let kept = prune_neighbors(&candidates, max_degree, |a, b| squared_l2(data.row(a as usize), data.row(b as usize)));
    *graph.links_mut(node, layer) = kept.iter().map(|c| c.node).collect();
}

/// Builds the layered graph by inserting every row in dataset order.
pub fn build_index(data: &VectorDataset, params: &BuildParams) -> Result<BuildGraph> {
    data.require_non_empty()?;
    if data.len() > EMPTY_SLOT as usize {
        return Err(Error::invalid("dataset exceeds the 32-bit id space"));
    }
    let mut builder = HnswBuilder::new(data, *params)?;
    for id in 0..data.len() as u32 {
        builder.insert(id)?;
    }
    Ok(builder.finish())
}

/// Emits the flat layout with blocks in original id order.
pub fn flatten(graph: &BuildGraph, data: &VectorDataset) -> Result<FlatIndex> {
    data.require_non_empty()?;
    let n = data.len();
    if graph.num_nodes() != n {
        return Err(Error::invalid(format!("graph has {} nodes, dataset {n}", graph.num_nodes())));
    }
    if graph.num_inserted() != n {
        return Err(Error::invalid(format!("only {} of {n} nodes are inserted", graph.num_inserted())));
    }
    let k = graph.max_degree();
    let d = data.dim();
    let mut words = Vec::with_capacity(n * (1 + k + d));
    for u in 0..n as u32 {
        words.push(u);
        let links = graph.neighbors(u, 0);
        words.extend_from_slice(links);
        words.extend(std::iter::repeat_n(EMPTY_SLOT, k - links.len()));
        words.extend(data.row(u as usize).iter().map(|x| x.to_bits()));
    }
    let top = graph.top_level().unwrap_or(0);
    let hierarchy = (1..=top)
        .map(|layer| {
            let members = graph.layer_members(layer);
            let lists: Vec<Vec<u32>> = members.iter().map(|&u| graph.neighbors(u, layer).to_vec()).collect();
            HierarchyLayer::new(members, &lists)
        })
        .collect::<Result<Vec<_>>>()?;
    let entry = graph.entry_point().expect("non-empty graph has an entry point");
    FlatIndex::from_raw_parts(n, d, k, Metric::SquaredEuclidean, entry, hierarchy, words)
}

/// [`build_index`] followed by [`flatten`].
pub fn build_flat(data: &VectorDataset, params: &BuildParams) -> Result<FlatIndex> {
    flatten(&build_index(data, params)?, data)
}
