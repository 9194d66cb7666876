use crate::{Error, Result};

/// `N` vectors of a common dimension `d`, stored row-major.
///
/// A dataset read from an empty file has `N = 0`; consumers that need data
/// reject it with [`Error::EmptyDataset`].
#[derive(Debug, Clone, PartialEq)]
pub struct VectorDataset {
    dim: usize,
    data: Vec<f32>,
    source: Option<String>,
}

impl VectorDataset {
    pub fn new(dim: usize, data: Vec<f32>) -> Result<Self> {
        if dim == 0 && !data.is_empty() {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if dim > 0 && !data.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!("{} components do not divide into rows of {dim}", data.len())));
        }
        Ok(Self { dim, data, source: None })
    }

    pub fn from_rows<R: AsRef<[f32]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(dim * rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(source.into());
        self
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        (0..self.len()).map(move |i| self.row(i))
    }

    pub fn as_flat(&self) -> &[f32] {
        &self.data
    }

    /// Rows `range` as a new dataset.
    pub fn slice(&self, range: std::ops::Range<usize>) -> VectorDataset {
        VectorDataset {
            dim: self.dim,
            data: self.data[range.start * self.dim..range.end * self.dim].to_vec(),
            source: self.source.clone(),
        }
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyDataset)
        } else {
            Ok(())
        }
    }
}

/// Per-query neighbor id lists, nearest first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundTruth {
    rows: Vec<Vec<u32>>,
}

impl GroundTruth {
    pub fn new(rows: Vec<Vec<u32>>) -> Self {
        Self { rows }
    }

    /// Converts ivecs rows, rejecting negative ids.
    pub fn from_ivecs(rows: Vec<Vec<i32>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| u32::try_from(v).map_err(|_| Error::invalid(format!("negative neighbor id {v}"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn to_ivecs(&self) -> Result<Vec<Vec<i32>>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| i32::try_from(v).map_err(|_| Error::invalid(format!("id {v} exceeds ivecs range"))))
                    .collect()
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Checks ids are below `n` and unique within each row.
    pub fn validate(&self, n: usize) -> Result<()> {
        for row in &self.rows {
            let mut seen = std::collections::HashSet::with_capacity(row.len());
            for &id in row {
                if id as usize >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
                if !seen.insert(id) {
                    return Err(Error::invalid(format!("duplicate id {id} in ground truth row")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip() {
        let ds = VectorDataset::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.row(1), &[3.0, 4.0]);
        assert_eq!(ds.slice(1..2).row(0), &[3.0, 4.0]);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(VectorDataset::from_rows(&[vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(VectorDataset::new(3, vec![0.0; 4]).is_err());
    }

    #[test]
    fn ground_truth_validation() {
        assert!(GroundTruth::new(vec![vec![0, 1]]).validate(2).is_ok());
        assert!(GroundTruth::new(vec![vec![0, 0]]).validate(2).is_err());
        assert!(GroundTruth::new(vec![vec![2]]).validate(2).is_err());
        assert!(GroundTruth::from_ivecs(vec![vec![-1]]).is_err());
    }
}
