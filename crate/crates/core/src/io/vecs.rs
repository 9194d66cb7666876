//! The `.fvecs` / `.bvecs` / `.ivecs` interchange formats.
//!
//! Each record is a little-endian `i32` dimension `d` followed by `d`
//! components: `f32` (fvecs), `u8` (bvecs) or `i32` (ivecs). Every record in a
//! file must share the same `d`.

use super::VectorDataset;
use crate::error::FormatError;
use crate::Result;
use std::io::{Read, Write};

/// Splits `bytes` into records of `elem_size`-byte components. Returns the
/// common dimension (0 for an empty stream) and the component bytes of every
/// record.
fn split_records(bytes: &[u8], elem_size: usize) -> Result<(usize, Vec<&[u8]>), FormatError> {
    let mut offset = 0;
    let mut dim: Option<usize> = None;
    let mut records = Vec::new();
    while offset < bytes.len() {
        let header = bytes.get(offset..offset + 4).ok_or(FormatError::Truncated { offset })?;
        let d = i32::from_le_bytes(header.try_into().unwrap());
        if d <= 0 {
            return Err(FormatError::InvalidDimension { dim: d, offset });
        }
        let d = d as usize;
        if let Some(expected) = dim {
            if d != expected {
                return Err(FormatError::InconsistentDimension { expected, found: d, offset });
            }
        }
        dim = Some(d);
        let body = bytes.get(offset + 4..offset + 4 + d * elem_size).ok_or(FormatError::Truncated { offset })?;
        records.push(body);
        offset += 4 + d * elem_size;
    }
    Ok((dim.unwrap_or(0), records))
}

pub fn read_fvecs(bytes: &[u8]) -> Result<VectorDataset> {
    let (dim, records) = split_records(bytes, 4)?;
    let data = records
        .iter()
        .flat_map(|r| r.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())))
        .collect();
    VectorDataset::new(dim, data)
}

/// Reads `.bvecs`, widening each byte to `f32`.
pub fn read_bvecs(bytes: &[u8]) -> Result<VectorDataset> {
    let (dim, records) = split_records(bytes, 1)?;
    let data = records.iter().flat_map(|r| r.iter().map(|&b| b as f32)).collect();
    VectorDataset::new(dim, data)
}

pub fn read_ivecs(bytes: &[u8]) -> Result<Vec<Vec<i32>>> {
    let (_, records) = split_records(bytes, 4)?;
    Ok(records
        .iter()
        .map(|r| r.chunks_exact(4).map(|c| i32::from_le_bytes(c.try_into().unwrap())).collect())
        .collect())
}

fn dim_header(dim: usize) -> Result<[u8; 4]> {
    let d = i32::try_from(dim).map_err(|_| crate::Error::invalid(format!("dimension {dim} exceeds i32")))?;
    Ok(d.to_le_bytes())
}

pub fn write_fvecs<W: Write>(data: &VectorDataset, mut w: W) -> Result<()> {
    let header = dim_header(data.dim())?;
    let mut buf = Vec::with_capacity(4 + 4 * data.dim());
    for row in data.rows() {
        buf.clear();
        buf.extend_from_slice(&header);
        for x in row {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Writes `.bvecs`. Every component must be an integer in `0..=255`.
pub fn write_bvecs<W: Write>(data: &VectorDataset, mut w: W) -> Result<()> {
    let header = dim_header(data.dim())?;
    let mut buf = Vec::with_capacity(4 + data.dim());
    for (i, row) in data.rows().enumerate() {
        buf.clear();
        buf.extend_from_slice(&header);
        for &x in row {
            if !(0.0..=255.0).contains(&x) || x.fract() != 0.0 {
                return Err(FormatError::Unrepresentable { value: x as f64, row: i, target: "u8" }.into());
            }
            buf.push(x as u8);
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

/// Writes `.ivecs`. All rows must have the same non-zero length.
pub fn write_ivecs<W: Write, R: AsRef<[i32]>>(rows: &[R], mut w: W) -> Result<()> {
    let dim = rows.first().map_or(0, |r| r.as_ref().len());
    let header = dim_header(dim)?;
    for row in rows {
        let row = row.as_ref();
        if row.len() != dim || dim == 0 {
            return Err(crate::Error::DimensionMismatch { expected: dim, found: row.len() });
        }
        w.write_all(&header)?;
        for v in row {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_all<R: Read>(mut r: R) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    Ok(bytes)
}

pub fn read_fvecs_from<R: Read>(r: R) -> Result<VectorDataset> {
    read_fvecs(&read_all(r)?)
}

pub fn read_bvecs_from<R: Read>(r: R) -> Result<VectorDataset> {
    read_bvecs(&read_all(r)?)
}

pub fn read_ivecs_from<R: Read>(r: R) -> Result<Vec<Vec<i32>>> {
    read_ivecs(&read_all(r)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_fvecs_record() {
        let mut bytes = vec![2, 0, 0, 0];
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        bytes.extend_from_slice(&2.0f32.to_le_bytes());
        let ds = read_fvecs(&bytes).unwrap();
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn empty_stream_is_empty_dataset() {
        let ds = read_fvecs(&[]).unwrap();
        assert!(ds.is_empty());
        assert!(matches!(ds.require_non_empty(), Err(crate::Error::EmptyDataset)));
    }

    #[test]
    fn bvecs_widen_to_float() {
        let ds = read_bvecs(&[2, 0, 0, 0, 7, 255]).unwrap();
        assert_eq!(ds.row(0), &[7.0, 255.0]);
        let mut out = Vec::new();
        write_bvecs(&ds, &mut out).unwrap();
        assert_eq!(out, vec![2, 0, 0, 0, 7, 255]);
    }

    #[test]
    fn bvecs_rejects_unrepresentable() {
        let ds = VectorDataset::from_rows(&[vec![1.5]]).unwrap();
        assert!(write_bvecs(&ds, Vec::new()).is_err());
    }

    #[test]
    fn ivecs_row() {
        let mut bytes = vec![3, 0, 0, 0];
        for v in [4i32, 1, 9] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        assert_eq!(read_ivecs(&bytes).unwrap(), vec![vec![4, 1, 9]]);
    }

    #[test]
    fn truncated_record_reports_offset() {
        let mut bytes = vec![1, 0, 0, 0];
        bytes.extend_from_slice(&1.0f32.to_le_bytes());
        bytes.extend_from_slice(&[1, 0, 0, 0, 0, 0]);
        let err = read_fvecs(&bytes).unwrap_err();
        assert!(matches!(err, crate::Error::Format(FormatError::Truncated { offset: 8 })), "{err}");
        assert!(matches!(read_fvecs(&[1, 0]), Err(crate::Error::Format(FormatError::Truncated { offset: 0 }))));
    }

    #[test]
    fn inconsistent_dimension_names_both() {
        let mut bytes = vec![1, 0, 0, 0, 0, 0, 0, 0];
        bytes.extend_from_slice(&[2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let err = read_fvecs(&bytes).unwrap_err();
        assert!(matches!(
            err,
            crate::Error::Format(FormatError::InconsistentDimension { expected: 1, found: 2, offset: 8 })
        ));
        assert!(err.to_string().contains('1') && err.to_string().contains('2'));
    }

    #[test]
    fn non_positive_dimension_rejected() {
        assert!(read_ivecs(&(-1i32).to_le_bytes()).is_err());
        assert!(read_ivecs(&0i32.to_le_bytes()).is_err());
    }

    fn vecs_bytes(elem: usize) -> impl Strategy<Value = Vec<u8>> {
        (1usize..6, 0usize..5).prop_flat_map(move |(d, n)| {
            proptest::collection::vec(proptest::collection::vec(any::<u8>(), d * elem), n).prop_map(move |rows| {
                let mut out = Vec::new();
                for r in rows {
                    out.extend_from_slice(&(d as i32).to_le_bytes());
                    out.extend_from_slice(&r);
                }
                out
            })
        })
    }

    proptest! {
        #[test]
        fn fvecs_round_trip_is_byte_identical(bytes in vecs_bytes(4)) {
            let ds = read_fvecs(&bytes).unwrap();
            let mut out = Vec::new();
            write_fvecs(&ds, &mut out).unwrap();
            prop_assert_eq!(out, bytes);
        }

        #[test]
        fn bvecs_and_ivecs_round_trip(b in vecs_bytes(1), i in vecs_bytes(4)) {
            let mut out = Vec::new();
            write_bvecs(&read_bvecs(&b).unwrap(), &mut out).unwrap();
            prop_assert_eq!(out, b);
            let mut out = Vec::new();
            write_ivecs(&read_ivecs(&i).unwrap(), &mut out).unwrap();
            prop_assert_eq!(out, i);
        }
    }
}
