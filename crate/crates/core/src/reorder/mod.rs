//! Graph reordering. Every algorithm returns an [`Ordering`] of the base
//! layer; apply it with [`FlatIndex::apply_ordering`](crate::graph::FlatIndex::apply_ordering).
//!
//! Gorder and RCM work on the symmetrized base graph. The degree-based
//! methods use directed degrees: the hub methods always use in-degree, the
//! others follow [`ReorderSpec::direction`].

mod degree;
mod gorder;
mod objective;
mod rcm;

pub use degree::{
    dbg, dbg_boundaries, dbg_by_degrees, degree_sort, degree_sort_by_degrees, hub_cluster,
    hub_cluster_by_degrees, hub_sort, hub_sort_by_degrees,
};
pub use gorder::gorder;
pub use objective::{
    bandwidth, gorder_score, linear_arrangement_cost, log_arrangement_cost, OrderingScore,
};
pub use rcm::rcm;

use crate::graph::{symmetrize, Adjacency, Direction, Ordering};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_GROUPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Gorder,
    Rcm,
    DegreeSort,
    HubSort,
    HubCluster,
    Dbg,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] =
        [Algorithm::Gorder, Algorithm::Rcm, Algorithm::DegreeSort, Algorithm::HubSort, Algorithm::HubCluster, Algorithm::Dbg];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Gorder => "gorder",
            Algorithm::Rcm => "rcm",
            Algorithm::DegreeSort => "degree-sort",
            Algorithm::HubSort => "hub-sort",
            Algorithm::HubCluster => "hub-cluster",
            Algorithm::Dbg => "dbg",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "gorder" => Ok(Algorithm::Gorder),
            "rcm" => Ok(Algorithm::Rcm),
            "degreesort" | "degsort" => Ok(Algorithm::DegreeSort),
            "hubsort" => Ok(Algorithm::HubSort),
            "hubcluster" => Ok(Algorithm::HubCluster),
            "dbg" => Ok(Algorithm::Dbg),
            _ => Err(Error::invalid(format!("unknown reordering algorithm {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReorderSpec {
    pub algorithm: Algorithm,
    /// Gorder window.
    pub window: usize,
    /// DBG group count.
    pub groups: usize,
    /// Degree direction for degree sort and DBG.
    pub direction: Direction,
}

impl ReorderSpec {
    pub fn new(algorithm: Algorithm) -> Self {
        Self { algorithm, window: DEFAULT_WINDOW, groups: DEFAULT_GROUPS, direction: Direction::In }
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn with_groups(mut self, groups: usize) -> Self {
        self.groups = groups;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::invalid("gorder window must be at least 1"));
        }
        if self.groups == 0 {
            return Err(Error::invalid("dbg group count must be at least 1"));
        }
        Ok(())
    }

    /// Short label such as `gorder`, `degree-sort-out` or `dbg`.
    pub fn label(&self) -> String {
        match (self.algorithm, self.direction) {
            (Algorithm::DegreeSort, Direction::In) => "degree-sort-in".into(),
            (Algorithm::DegreeSort, Direction::Out) => "degree-sort-out".into(),
            (a, _) => a.name().into(),
        }
    }
}

/// Computes the ordering described by `spec` for a directed base graph.
pub fn compute_ordering(base: &Adjacency, spec: &ReorderSpec) -> Result<Ordering> {
    spec.validate()?;
    Ok(match spec.algorithm {
        Algorithm::Gorder => gorder(&symmetrize(base), spec.window),
        Algorithm::Rcm => rcm(&symmetrize(base)),
        Algorithm::DegreeSort => degree_sort(base, spec.direction),
        Algorithm::HubSort => hub_sort(base),
        Algorithm::HubCluster => hub_cluster(base),
        Algorithm::Dbg => dbg(base, spec.groups, spec.direction),
    })
}
