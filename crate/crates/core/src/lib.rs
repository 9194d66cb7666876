//! Graph-based approximate nearest-neighbor search with a flat, cache-friendly
//! memory layout and a collection of graph reordering passes.
//!
//! The pipeline is:
//!
//! 1. [`hnsw::build_index`] grows a layered [`graph::BuildGraph`] by
//!    bootstrapped insertion and neighbor pruning.
//! 2. [`hnsw::flatten`] emits a [`graph::FlatIndex`]: equal-size node blocks
//!    holding the original id, fixed link slots and the embedded vector.
//! 3. A [`reorder`] pass computes an [`graph::Ordering`] of the base layer and
//!    [`graph::FlatIndex::apply_ordering`] relabels the blocks.
//! 4. [`search::knn_query`] runs hierarchical (or random-sample) seeding
//!    followed by beam search. Results do not depend on the ordering.
//! 5. [`bench`] measures recall, latency and speedup across orderings.

pub mod bench;
pub mod distance;
mod error;
pub mod graph;
pub mod hnsw;
pub mod io;
pub mod reorder;
pub mod search;

pub use error::{Error, FormatError, OrderingViolation, Result};
