use crate::error::OrderingViolation;

/// A bijection from node labels to memory slots `{0..n-1}`.
///
/// `forward[v]` is the slot of node `v`; `inverse[s]` is the node stored in
/// slot `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordering {
    forward: Vec<u32>,
    inverse: Vec<u32>,
}

impl Ordering {
    pub fn identity(n: usize) -> Self {
        let forward: Vec<u32> = (0..n as u32).collect();
        Self { inverse: forward.clone(), forward }
    }

    /// Builds from the node -> slot map.
    pub fn from_forward(forward: Vec<u32>) -> Result<Self, OrderingViolation> {
        let n = forward.len();
        let mut inverse = vec![u32::MAX; n];
        for (index, &slot) in forward.iter().enumerate() {
            if slot as usize >= n {
                return Err(OrderingViolation::OutOfRange { index, slot, n });
            }
            if inverse[slot as usize] != u32::MAX {
                return Err(OrderingViolation::DuplicateSlot { index, slot });
            }
            inverse[slot as usize] = index as u32;
        }
        Ok(Self { forward, inverse })
    }

    /// Builds from the sequence of nodes in slot order (slot -> node map).
    pub fn from_slot_order(inverse: Vec<u32>) -> Result<Self, OrderingViolation> {
        let flipped = Self::from_forward(inverse)?;
        Ok(Self { forward: flipped.inverse, inverse: flipped.forward })
    }

    /// Builds from both maps, checking that they are consistent.
    pub fn from_parts(forward: Vec<u32>, inverse: Vec<u32>) -> Result<Self, OrderingViolation> {
        validate_ordering(&forward, &inverse, forward.len())?;
        Ok(Self { forward, inverse })
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    #[inline]
    pub fn slot_of(&self, node: u32) -> u32 {
        self.forward[node as usize]
    }

    #[inline]
    pub fn node_at(&self, slot: u32) -> u32 {
        self.inverse[slot as usize]
    }

    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }

    /// `self` followed by `next`: node `v` ends up at `next(self(v))`.
    pub fn then(&self, next: &Ordering) -> Ordering {
        assert_eq!(self.len(), next.len(), "orderings of different length");
        let forward: Vec<u32> = self.forward.iter().map(|&s| next.forward[s as usize]).collect();
        let inverse: Vec<u32> = next.inverse.iter().map(|&s| self.inverse[s as usize]).collect();
        Ordering { forward, inverse }
    }

    pub fn inverted(&self) -> Ordering {
        Ordering { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &s)| i as u32 == s)
    }
}

/// Checks that `forward` is a bijection on `{0..n-1}` and that `inverse` is
/// its inverse. Reports the first problem found.
pub fn validate_ordering(forward: &[u32], inverse: &[u32], n: usize) -> Result<(), OrderingViolation> {
    if forward.len() != n {
        return Err(OrderingViolation::LengthMismatch { expected: n, found: forward.len() });
    }
    if inverse.len() != n {
        return Err(OrderingViolation::LengthMismatch { expected: n, found: inverse.len() });
    }
    let mut seen = vec![false; n];
    for (index, &slot) in forward.iter().enumerate() {
        let s = slot as usize;
        if s >= n {
            return Err(OrderingViolation::OutOfRange { index, slot, n });
        }
        if seen[s] {
            return Err(OrderingViolation::DuplicateSlot { index, slot });
        }
        seen[s] = true;
    }
    for (slot, &node) in inverse.iter().enumerate() {
        if (node as usize) >= n || forward[node as usize] as usize != slot {
            // forward is a bijection here, so exactly one node maps to `slot`
            let expected = forward.iter().position(|&s| s as usize == slot).unwrap_or(0) as u32;
            return Err(OrderingViolation::InverseMismatch { slot, expected, found: node });
        }
    }
    Ok(())
}
