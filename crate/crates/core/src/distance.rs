//! Euclidean distance, compared in squared form throughout the crate.

/// Squared Euclidean distance. Both slices must have the same length.
///
/// The accumulation order is fixed so that the same pair of vectors always
/// produces the same bit pattern, wherever the vectors live in memory.
#[inline]
pub fn squared_l2(a: &[f32], b: &[f32]) -> f32 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f32; 8];
    let chunks_a = a.chunks_exact(8);
    let chunks_b = b.chunks_exact(8);
    let tail_a = chunks_a.remainder();
    let tail_b = chunks_b.remainder();
    for (ca, cb) in chunks_a.zip(chunks_b) {
        for i in 0..8 {
            let diff = ca[i] - cb[i];
            acc[i] += diff * diff;
        }
    }
    let mut sum = ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
    for (x, y) in tail_a.iter().zip(tail_b) {
        let diff = x - y;
        sum += diff * diff;
    }
    sum
}

/// Metric tag stored in index files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Metric {
    #[default]
    SquaredEuclidean,
}

impl Metric {
    pub fn tag(self) -> u16 {
        match self {
            Metric::SquaredEuclidean => 0,
        }
    }

    pub fn from_tag(tag: u16) -> Option<Self> {
        match tag {
            0 => Some(Metric::SquaredEuclidean),
            _ => None,
        }
    }
}
