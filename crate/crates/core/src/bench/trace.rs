use crate::graph::FlatIndex;
use crate::io::VectorDataset;
use crate::search::{QueryParams, Searcher};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// One base-layer node expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Access {
    pub query: u32,
    pub slot: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AccessTrace {
    /// All expansions in visit order, query by query.
    pub accesses: Vec<Access>,
    /// Per-query visited counters reported by the searcher.
    pub visited: Vec<u64>,
}

impl AccessTrace {
    pub fn slots_of(&self, query: u32) -> impl Iterator<Item = u32> + '_ {
        self.accesses.iter().filter(move |a| a.query == query).map(|a| a.slot)
    }

    /// CSV with header `query,slot`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for a in &self.accesses {
            w.serialize(a)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Streams `(query ordinal, slot)` for every base-layer expansion.
pub fn for_each_access(
    index: &FlatIndex,
    queries: &VectorDataset,
    params: &QueryParams,
    mut sink: impl FnMut(Access),
) -> Result<Vec<u64>> {
    let mut searcher = Searcher::new(index);
    let mut visited = Vec::with_capacity(queries.len());
    for (q, row) in queries.rows().enumerate() {
        let query = q as u32;
        let res = searcher.search_traced(row, params, |slot| sink(Access { query, slot }))?;
        visited.push(res.visited);
    }
    Ok(visited)
}

/// Collects the full access trace of running `queries` against `index`.
pub fn export_access_trace(index: &FlatIndex, queries: &VectorDataset, params: &QueryParams) -> Result<AccessTrace> {
    let mut accesses = Vec::new();
    let visited = for_each_access(index, queries, params, |a| accesses.push(a))?;
    Ok(AccessTrace { accesses, visited })
}
