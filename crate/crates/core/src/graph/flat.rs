use super::{Adjacency, Ordering};
use crate::distance::Metric;
use crate::{Error, Result};

/// Bytes in front of the link slots of every block: the node's original id.
pub const BLOCK_HEADER_BYTES: usize = 4;

/// Marks an unused link slot. Never a valid slot index.
pub const EMPTY_SLOT: u32 = u32::MAX;

/// Adjacency of one upper hierarchy layer, over the slots of its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyLayer {
    /// Member slots, ascending.
    members: Vec<u32>,
    offsets: Vec<u32>,
    links: Vec<u32>,
}

impl HierarchyLayer {
    /// `lists[i]` holds the out-links of `members[i]`. Members must be
    /// ascending and unique.
    pub fn new(members: Vec<u32>, lists: &[Vec<u32>]) -> Result<Self> {
        if members.len() != lists.len() {
            return Err(Error::invalid("hierarchy member and list counts differ"));
        }
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("hierarchy members must be strictly ascending"));
        }
        let mut offsets = Vec::with_capacity(members.len() + 1);
        let mut links = Vec::new();
        offsets.push(0);
        for list in lists {
            links.extend_from_slice(list);
            offsets.push(links.len() as u32);
        }
        Ok(Self { members, offsets, links })
    }

    pub(crate) fn from_raw(members: Vec<u32>, offsets: Vec<u32>, links: Vec<u32>) -> Self {
        Self { members, offsets, links }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn offsets(&self) -> &[u32] {
        &self.offsets
    }

    pub fn links(&self) -> &[u32] {
        &self.links
    }

    pub fn contains(&self, slot: u32) -> bool {
        self.members.binary_search(&slot).is_ok()
    }

    /// Out-links of `slot`, or an empty slice if it is not on this layer.
    #[inline]
    pub fn neighbors(&self, slot: u32) -> &[u32] {
        match self.members.binary_search(&slot) {
            Ok(i) => &self.links[self.offsets[i] as usize..self.offsets[i + 1] as usize],
            Err(_) => &[],
        }
    }

    fn remap(&self, p: &Ordering) -> HierarchyLayer {
        let mut rows: Vec<(u32, Vec<u32>)> = self
            .members
            .iter()
            .map(|&s| (p.slot_of(s), self.neighbors(s).iter().map(|&t| p.slot_of(t)).collect()))
            .collect();
        rows.sort_unstable_by_key(|r| r.0);
        let (members, lists): (Vec<u32>, Vec<Vec<u32>>) = rows.into_iter().unzip();
        HierarchyLayer::new(members, &lists).expect("remapped members are unique")
    }
}

/// Immutable query-time index.
///
/// The base layer is a contiguous region of `N` equal-size blocks. Block `s`
/// holds, as little-endian 32-bit words:
///
/// ```text
/// [original id][link 0 .. link k_c-1][vector component 0 .. d-1]
/// ```
///
/// Links are slot indices packed at the front of the link area; the rest of
/// the link area holds [`EMPTY_SLOT`]. Upper layers live in a separate small
/// table, also addressed by slot.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatIndex {
    num_nodes: usize,
    dim: usize,
    max_degree: usize,
    metric: Metric,
    entry: u32,
    /// `hierarchy[i]` is layer `i + 1`.
    hierarchy: Vec<HierarchyLayer>,
    words: Vec<u32>,
}

impl FlatIndex {
    /// Assembles an index from its parts, checking sizes and slot ranges.
    pub fn from_raw_parts(
        num_nodes: usize,
        dim: usize,
        max_degree: usize,
        metric: Metric,
        entry: u32,
        hierarchy: Vec<HierarchyLayer>,
        words: Vec<u32>,
    ) -> Result<Self> {
        if num_nodes == 0 {
            return Err(Error::EmptyDataset);
        }
        if num_nodes > EMPTY_SLOT as usize {
            return Err(Error::invalid(format!("{num_nodes} nodes exceed the 32-bit slot space")));
        }
        let block = 1 + max_degree + dim;
        if words.len() != num_nodes * block {
            return Err(Error::invalid(format!(
                "block region has {} words, expected {}",
                words.len(),
                num_nodes * block
            )));
        }
        if entry as usize >= num_nodes {
            return Err(Error::NodeOutOfRange { id: entry, n: num_nodes });
        }
        let index = Self { num_nodes, dim, max_degree, metric, entry, hierarchy, words };
        index.check_links()?;
        Ok(index)
    }

    fn check_links(&self) -> Result<()> {
        let n = self.num_nodes;
        for slot in 0..n as u32 {
            let raw = self.link_slots(slot);
            let count = raw.iter().take_while(|&&t| t != EMPTY_SLOT).count();
            if raw[count..].iter().any(|&t| t != EMPTY_SLOT) {
                return Err(Error::invalid(format!("slot {slot}: links are not packed")));
            }
            if let Some(&bad) = raw[..count].iter().find(|&&t| t as usize >= n) {
                return Err(Error::NodeOutOfRange { id: bad, n });
            }
        }
        for layer in &self.hierarchy {
            let m = layer.members.len();
            if layer.offsets.len() != m + 1
                || layer.offsets.windows(2).any(|w| w[0] > w[1])
                || layer.offsets.last().copied() != Some(layer.links.len() as u32)
            {
                return Err(Error::invalid("hierarchy offsets are inconsistent"));
            }
            if layer.members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("hierarchy members must be strictly ascending"));
            }
            if let Some(&bad) = layer.members.iter().chain(&layer.links).find(|&&t| t as usize >= n) {
                return Err(Error::NodeOutOfRange { id: bad, n });
            }
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn entry_slot(&self) -> u32 {
        self.entry
    }

    /// Upper layers, bottom-up: element 0 is layer 1.
    pub fn hierarchy(&self) -> &[HierarchyLayer] {
        &self.hierarchy
    }

    /// Number of layers including the base layer.
    pub fn num_levels(&self) -> usize {
        self.hierarchy.len() + 1
    }

    #[inline]
    pub fn block_words(&self) -> usize {
        1 + self.max_degree + self.dim
    }

    /// Header + 4·k_c + 4·d.
    pub fn block_bytes(&self) -> usize {
        BLOCK_HEADER_BYTES + 4 * self.max_degree + 4 * self.dim
    }

    #[inline]
    fn block(&self, slot: u32) -> &[u32] {
        let w = self.block_words();
        let start = slot as usize * w;
        &self.words[start..start + w]
    }

    #[inline]
    pub fn original_id(&self, slot: u32) -> u32 {
        self.words[slot as usize * self.block_words()]
    }

    /// All `k_c` link slots of a block, including trailing [`EMPTY_SLOT`]s.
    #[inline]
    pub fn link_slots(&self, slot: u32) -> &[u32] {
        &self.block(slot)[1..1 + self.max_degree]
    }

    /// Occupied link slots of a block.
    #[inline]
    pub fn neighbors(&self, slot: u32) -> &[u32] {
        let links = self.link_slots(slot);
        let count = links.iter().position(|&t| t == EMPTY_SLOT).unwrap_or(links.len());
        &links[..count]
    }

    pub fn neighbor_count(&self, slot: u32) -> usize {
        self.neighbors(slot).len()
    }

    #[inline]
    pub fn vector(&self, slot: u32) -> &[f32] {
        bytemuck::cast_slice(&self.block(slot)[1 + self.max_degree..])
    }

    /// The whole block region as words.
    pub fn region_words(&self) -> &[u32] {
        &self.words
    }

    /// The whole block region in native byte order (little-endian on every
    /// supported target).
    pub fn region_bytes(&self) -> &[u8] {
        bytemuck::cast_slice(&self.words)
    }

    /// Base-layer adjacency in slot space.
    pub fn base_adjacency(&self) -> Adjacency {
        let lists: Vec<&[u32]> = (0..self.num_nodes as u32).map(|s| self.neighbors(s)).collect();
        Adjacency::from_lists(&lists)
    }

    /// Reads every word of the block region once and returns a checksum, so
    /// that the whole index is resident before timing starts.
    pub fn touch(&self) -> u64 {
        self.words.iter().fold(0u64, |acc, &w| acc.wrapping_mul(31).wrapping_add(w as u64))
    }

    /// Relabels the index: the block currently at slot `s` moves to slot
    /// `p.slot_of(s)`, and every link and hierarchy entry is rewritten through
    /// `p`. Original ids stay in the block headers, so search results are
    /// unchanged.
    pub fn apply_ordering(&self, p: &Ordering) -> Result<FlatIndex> {
        if p.len() != self.num_nodes {
            return Err(crate::OrderingViolation::LengthMismatch { expected: self.num_nodes, found: p.len() }.into());
        }
        let w = self.block_words();
        let k = self.max_degree;
        let mut words = vec![0u32; self.words.len()];
        for (new_slot, dst) in words.chunks_exact_mut(w).enumerate() {
            let src = self.block(p.node_at(new_slot as u32));
            dst[0] = src[0];
            for (d, &s) in dst[1..1 + k].iter_mut().zip(&src[1..1 + k]) {
                *d = if s == EMPTY_SLOT { EMPTY_SLOT } else { p.slot_of(s) };
            }
            dst[1 + k..].copy_from_slice(&src[1 + k..]);
        }
        Ok(FlatIndex {
            num_nodes: self.num_nodes,
            dim: self.dim,
            max_degree: self.max_degree,
            metric: self.metric,
            entry: p.slot_of(self.entry),
            hierarchy: self.hierarchy.iter().map(|l| l.remap(p)).collect(),
            words,
        })
    }

    /// Slot -> original id for every slot.
    pub fn slot_to_id(&self) -> Vec<u32> {
        (0..self.num_nodes as u32).map(|s| self.original_id(s)).collect()
    }
}
