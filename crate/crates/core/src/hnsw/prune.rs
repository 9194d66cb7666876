use crate::search::Candidate;

/// Neighbor selection heuristic.
///
/// Scans `candidates` (ascending by distance to the base node) and keeps a
/// candidate only if it is at least as close to the base as to every
/// candidate already kept. Stops after `max_degree` keeps. `distance(a, b)`
/// returns the distance between two candidate nodes.
pub fn prune_neighbors(
    candidates: &[Candidate],
    max_degree: usize,
    mut distance: impl FnMut(u32, u32) -> f32,
) -> Vec<Candidate> {
    debug_assert!(candidates.windows(2).all(|w| w[0] <= w[1]), "candidates must be sorted");
    let mut kept: Vec<Candidate> = Vec::with_capacity(max_degree.min(candidates.len()));
    for c in candidates {
        if kept.len() >= max_degree {
            break;
        }
        if kept.iter().all(|s| distance(c.node, s.node) >= c.distance) {
            kept.push(*c);
        }
    }
    kept
}
