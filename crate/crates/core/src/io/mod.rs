//! Dataset formats, synthetic data, and index/ordering persistence.

mod dataset;
mod persist;
mod synth;
mod vecs;

pub use dataset::{GroundTruth, VectorDataset};
pub use persist::{
    index_to_bytes, load_index, load_index_from, load_ordering, load_ordering_from, ordering_to_bytes, save_index,
    save_ordering, INDEX_MAGIC, INDEX_VERSION, ORDERING_MAGIC,
};
pub use synth::{synth_clusters, SyntheticClusters};
pub use vecs::{
    read_bvecs, read_bvecs_from, read_fvecs, read_fvecs_from, read_ivecs, read_ivecs_from, write_bvecs, write_fvecs,
    write_ivecs,
};

use crate::Result;
use std::path::Path;

/// Loads `.fvecs` or `.bvecs` depending on the file extension.
pub fn load_vectors(path: impl AsRef<Path>) -> Result<VectorDataset> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;
    let ds = match path.extension().and_then(|e| e.to_str()) {
        Some("bvecs") => read_bvecs(&bytes)?,
        _ => read_fvecs(&bytes)?,
    };
    Ok(ds.with_source(path.display().to_string()))
}

pub fn load_ground_truth(path: impl AsRef<Path>) -> Result<GroundTruth> {
    GroundTruth::from_ivecs(read_ivecs(&std::fs::read(path)?)?)
}
