//! Query-time traversal over a [`FlatIndex`]: greedy search, beam search and
//! the two seeding strategies (hierarchy descent and random sampling).

pub(crate) mod engine;

pub use engine::{Candidate, Counters};

use crate::distance::squared_l2;
use crate::graph::{FlatIndex, HierarchyLayer};
use crate::{Error, Result};
use engine::{evaluate, BeamScratch, Traversable, VisitedSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

struct BaseLayer<'a>(&'a FlatIndex);

impl Traversable for BaseLayer<'_> {
    #[inline]
    fn tie_key(&self, slot: u32) -> u32 {
        self.0.original_id(slot)
    }
    #[inline]
    fn distance_to(&self, slot: u32, query: &[f32]) -> f32 {
        squared_l2(self.0.vector(slot), query)
    }
    #[inline]
    fn neighbors(&self, slot: u32) -> &[u32] {
        self.0.neighbors(slot)
    }
}

struct UpperLayer<'a> {
    index: &'a FlatIndex,
    layer: &'a HierarchyLayer,
}

impl Traversable for UpperLayer<'_> {
    fn tie_key(&self, slot: u32) -> u32 {
        self.index.original_id(slot)
    }
    fn distance_to(&self, slot: u32, query: &[f32]) -> f32 {
        squared_l2(self.index.vector(slot), query)
    }
    fn neighbors(&self, slot: u32) -> &[u32] {
        self.layer.neighbors(slot)
    }
}

/// How the base-layer beam search is seeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Init {
    /// Greedy descent through the upper layers from the entry slot.
    #[default]
    Hierarchical,
    /// Nearest of `samples` distinct slots drawn with a seeded rng.
    RandomSample { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryParams {
    /// Beam width `M_q`.
    pub beam_width: usize,
    /// Number of results.
    pub k: usize,
    pub init: Init,
}

impl QueryParams {
    pub fn new(k: usize, beam_width: usize) -> Result<Self> {
        let p = Self { beam_width, k, init: Init::Hierarchical };
        p.validate()?;
        Ok(p)
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if self.beam_width < self.k {
            return Err(Error::invalid(format!("beam width {} is smaller than k = {}", self.beam_width, self.k)));
        }
        if let Init::RandomSample { samples: 0, .. } = self.init {
            return Err(Error::invalid("random-sample init needs at least one sample"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    /// Original (pre-reordering) node id.
    pub id: u32,
    /// Squared Euclidean distance to the query.
    pub distance: f32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Ascending by `(distance, id)`.
    pub neighbors: Vec<Neighbor>,
    /// Base-layer nodes expanded by beam search.
    pub visited: u64,
    /// Distance evaluations, including seeding.
    pub distance_computations: u64,
    /// Set when fewer than `k` results exist because `k > N`.
    pub truncated: bool,
}

impl SearchResult {
    pub fn ids(&self) -> Vec<u32> {
        self.neighbors.iter().map(|n| n.id).collect()
    }
}

fn check_query(index: &FlatIndex, query: &[f32]) -> Result<()> {
    if query.len() != index.dim() {
        return Err(Error::DimensionMismatch { expected: index.dim(), found: query.len() });
    }
    Ok(())
}

fn check_slot(index: &FlatIndex, slot: u32) -> Result<()> {
    if slot as usize >= index.num_nodes() {
        return Err(Error::NodeOutOfRange { id: slot, n: index.num_nodes() });
    }
    Ok(())
}

/// Greedy walk over the base layer from `seed`; returns the final slot.
pub fn greedy_search(index: &FlatIndex, query: &[f32], seed: u32) -> Result<u32> {
    check_query(index, query)?;
    check_slot(index, seed)?;
    let g = BaseLayer(index);
    let mut counters = Counters::default();
    let start = evaluate(&g, query, seed, &mut counters);
    Ok(engine::greedy_walk(&g, query, start, &mut counters, |_| {}).node)
}

/// Beam search over the base layer; returns the final candidate set,
/// ascending by `(distance, original id)`.
pub fn beam_search(index: &FlatIndex, query: &[f32], seeds: &[u32], beam_width: usize) -> Result<Vec<Candidate>> {
    check_query(index, query)?;
    if seeds.is_empty() {
        return Err(Error::invalid("beam search needs at least one seed"));
    }
    if beam_width == 0 {
        return Err(Error::invalid("beam width must be at least 1"));
    }
    let mut searcher = Searcher::new(index);
    let g = BaseLayer(index);
    let mut counters = Counters::default();
    let mut evaluated = Vec::with_capacity(seeds.len());
    for &s in seeds {
        check_slot(index, s)?;
        evaluated.push(evaluate(&g, query, s, &mut counters));
    }
    searcher.visited.reset(index.num_nodes());
    Ok(engine::beam(&g, query, &evaluated, beam_width, &mut searcher.visited, &mut searcher.scratch, &mut counters, |_| {}))
}

/// Greedy descent from the entry slot through every upper layer; returns the
/// layer-1 terminus (the entry slot when there is no hierarchy).
pub fn init_hierarchical(index: &FlatIndex, query: &[f32]) -> Result<u32> {
    check_query(index, query)?;
    let mut counters = Counters::default();
    Ok(descend(index, query, &mut counters).node)
}

fn descend(index: &FlatIndex, query: &[f32], counters: &mut Counters) -> Candidate {
    let base = BaseLayer(index);
    let mut current = evaluate(&base, query, index.entry_slot(), counters);
    for layer in index.hierarchy().iter().rev() {
        let g = UpperLayer { index, layer };
        current = engine::greedy_walk(&g, query, current, counters, |_| {});
    }
    current
}

/// Nearest of `samples` distinct slots drawn with a rng seeded by `seed`.
pub fn init_random_sample(index: &FlatIndex, query: &[f32], samples: usize, seed: u64) -> Result<u32> {
    check_query(index, query)?;
    let mut counters = Counters::default();
    Ok(random_seed(index, query, samples, seed, &mut counters)?.node)
}

fn random_seed(index: &FlatIndex, query: &[f32], samples: usize, seed: u64, counters: &mut Counters) -> Result<Candidate> {
    let n = index.num_nodes();
    if samples == 0 || samples > n {
        return Err(Error::invalid(format!("sample count {samples} must be in 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = BaseLayer(index);
    let best = rand::seq::index::sample(&mut rng, n, samples)
        .into_iter()
        .map(|s| evaluate(&base, query, s as u32, counters))
        .min()
        .expect("at least one sample");
    Ok(best)
}

/// Runs one k-NN query with a fresh [`Searcher`].
pub fn knn_query(index: &FlatIndex, query: &[f32], params: &QueryParams) -> Result<SearchResult> {
    Searcher::new(index).search(query, params)
}

/// Query executor that keeps its visited set and heaps between queries.
pub struct Searcher<'a> {
    index: &'a FlatIndex,
    visited: VisitedSet,
    scratch: BeamScratch,
}

impl<'a> Searcher<'a> {
    pub fn new(index: &'a FlatIndex) -> Self {
        Self { index, visited: VisitedSet::new(index.num_nodes()), scratch: BeamScratch::default() }
    }

    pub fn index(&self) -> &FlatIndex {
        self.index
    }

    pub fn search(&mut self, query: &[f32], params: &QueryParams) -> Result<SearchResult> {
        self.search_traced(query, params, |_| {})
    }

    /// Like [`Searcher::search`], calling `on_visit` with every base-layer
    /// slot as it is expanded.
    pub fn search_traced(&mut self, query: &[f32], params: &QueryParams, on_visit: impl FnMut(u32)) -> Result<SearchResult> {
        check_query(self.index, query)?;
        params.validate()?;
        let mut counters = Counters::default();
        let seed = match params.init {
            Init::Hierarchical => descend(self.index, query, &mut counters),
            Init::RandomSample { samples, seed } => random_seed(self.index, query, samples, seed, &mut counters)?,
        };
        let base_expansions_before = counters.expansions;
        self.visited.reset(self.index.num_nodes());
        let found = engine::beam(
            &BaseLayer(self.index),
            query,
            &[seed],
            params.beam_width,
            &mut self.visited,
            &mut self.scratch,
            &mut counters,
            on_visit,
        );
        let neighbors = found.iter().take(params.k).map(|c| Neighbor { id: c.id, distance: c.distance }).collect();
        Ok(SearchResult {
            neighbors,
            visited: counters.expansions - base_expansions_before,
            distance_computations: counters.distance_computations,
            truncated: params.k > self.index.num_nodes(),
        })
    }
}
