//! Binary index and ordering files. All integers are little-endian.
//!
//! Index file:
//!
//! ```text
//! "NNRO" | version u16 | metric u16 | N u32 | d u32 | k_c u32 | entry u32 | upper layers u32
//! per upper layer (bottom-up): m u32 | members m×u32 | offsets (m+1)×u32 | links offsets[m]×u32
//! block region: N × (4 + 4·k_c + 4·d) bytes, verbatim
//! ```
//!
//! Ordering file: `"ORDR" | N u32 | N × u32 forward map`.

use crate::distance::Metric;
use crate::error::FormatError;
use crate::graph::{FlatIndex, HierarchyLayer, Ordering};
use crate::{Error, Result};
use std::io::{Read, Write};

pub const INDEX_MAGIC: [u8; 4] = *b"NNRO";
pub const INDEX_VERSION: u16 = 1;
pub const ORDERING_MAGIC: [u8; 4] = *b"ORDR";

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &'static str) -> Result<&'a [u8], FormatError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or(FormatError::LengthMismatch {
            what,
            expected: self.pos.saturating_add(n),
            actual: self.bytes.len(),
        })?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u16(&mut self, what: &'static str) -> Result<u16, FormatError> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, FormatError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u32s(&mut self, count: usize, what: &'static str) -> Result<Vec<u32>, FormatError> {
        let len = count.checked_mul(4).ok_or(FormatError::Corrupt { what, detail: format!("count {count}") })?;
        Ok(self.take(len, what)?.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

fn put_u32s(out: &mut Vec<u8>, values: &[u32]) {
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

fn u32_field(value: usize, what: &str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::invalid(format!("{what} {value} does not fit the index format")))
}

pub fn index_to_bytes(index: &FlatIndex) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(32 + index.region_bytes().len());
    out.extend_from_slice(&INDEX_MAGIC);
    out.extend_from_slice(&INDEX_VERSION.to_le_bytes());
    out.extend_from_slice(&index.metric().tag().to_le_bytes());
    put_u32s(
        &mut out,
        &[
            u32_field(index.num_nodes(), "node count")?,
            u32_field(index.dim(), "dimension")?,
            u32_field(index.max_degree(), "max degree")?,
            index.entry_slot(),
            u32_field(index.hierarchy().len(), "layer count")?,
        ],
    );
    for layer in index.hierarchy() {
        out.extend_from_slice(&(layer.members().len() as u32).to_le_bytes());
        put_u32s(&mut out, layer.members());
        put_u32s(&mut out, layer.offsets());
        put_u32s(&mut out, layer.links());
    }
    for w in index.region_words() {
        out.extend_from_slice(&w.to_le_bytes());
    }
    Ok(out)
}

pub fn save_index<W: Write>(index: &FlatIndex, mut w: W) -> Result<()> {
    w.write_all(&index_to_bytes(index)?)?;
    Ok(())
}

pub fn load_index(bytes: &[u8]) -> Result<FlatIndex> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic: [u8; 4] = cur.take(4, "magic")?.try_into().unwrap();
    if magic != INDEX_MAGIC {
        return Err(FormatError::BadMagic { expected: INDEX_MAGIC, found: magic }.into());
    }
    let version = cur.u16("version")?;
    if version != INDEX_VERSION {
        return Err(FormatError::VersionMismatch { expected: INDEX_VERSION, found: version }.into());
    }
    let tag = cur.u16("metric")?;
    let metric = Metric::from_tag(tag).ok_or(FormatError::UnknownMetric(tag))?;
    let n = cur.u32("header")? as usize;
    let d = cur.u32("header")? as usize;
    let k = cur.u32("header")? as usize;
    let entry = cur.u32("header")?;
    let layers = cur.u32("header")? as usize;

    let mut hierarchy = Vec::with_capacity(layers.min(64));
    for _ in 0..layers {
        let m = cur.u32("hierarchy table")? as usize;
        let members = cur.u32s(m, "hierarchy table")?;
        let offsets = cur.u32s(m + 1, "hierarchy table")?;
        let links_len = *offsets.last().unwrap() as usize;
        let links = cur.u32s(links_len, "hierarchy table")?;
        hierarchy.push(HierarchyLayer::from_raw(members, offsets, links));
    }

    let block_bytes = 4 * (1 + k + d);
    let expected = n.checked_mul(block_bytes).ok_or(FormatError::Corrupt {
        what: "header",
        detail: format!("{n} blocks of {block_bytes} bytes overflow"),
    })?;
    if cur.remaining() != expected {
        return Err(FormatError::LengthMismatch { what: "block region", expected, actual: cur.remaining() }.into());
    }
    let words = cur.u32s(n * (1 + k + d), "block region")?;
    FlatIndex::from_raw_parts(n, d, k, metric, entry, hierarchy, words).map_err(|e| match e {
        Error::InvalidParameter(detail) | Error::Format(FormatError::Corrupt { detail, .. }) => {
            FormatError::Corrupt { what: "index", detail }.into()
        }
        other => other,
    })
}

pub fn load_index_from<R: Read>(mut r: R) -> Result<FlatIndex> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    load_index(&bytes)
}

pub fn ordering_to_bytes(p: &Ordering) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(8 + 4 * p.len());
    out.extend_from_slice(&ORDERING_MAGIC);
    out.extend_from_slice(&u32_field(p.len(), "ordering length")?.to_le_bytes());
    put_u32s(&mut out, p.forward());
    Ok(out)
}

pub fn save_ordering<W: Write>(p: &Ordering, mut w: W) -> Result<()> {
    w.write_all(&ordering_to_bytes(p)?)?;
    Ok(())
}

pub fn load_ordering(bytes: &[u8]) -> Result<Ordering> {
    let mut cur = Cursor { bytes, pos: 0 };
    let magic: [u8; 4] = cur.take(4, "magic")?.try_into().unwrap();
    if magic != ORDERING_MAGIC {
        return Err(FormatError::BadMagic { expected: ORDERING_MAGIC, found: magic }.into());
    }
    let n = cur.u32("header")? as usize;
    if cur.remaining() != 4 * n {
        return Err(FormatError::LengthMismatch { what: "ordering", expected: 4 * n, actual: cur.remaining() }.into());
    }
    Ok(Ordering::from_forward(cur.u32s(n, "ordering")?)?)
}

pub fn load_ordering_from<R: Read>(mut r: R) -> Result<Ordering> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    load_ordering(&bytes)
}
