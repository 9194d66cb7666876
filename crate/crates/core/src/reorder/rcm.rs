use crate::graph::{Ordering, UndirectedGraph};
use std::collections::VecDeque;

/// Reverse Cuthill-McKee.
///
/// Components are handled in order of their smallest node id. Each is
/// traversed breadth-first from its minimum-degree node, enqueueing unvisited
/// neighbors by ascending `(degree, id)`. The final slot order is the reversed
/// visit order, so every component occupies a contiguous slot range.
pub fn rcm(graph: &UndirectedGraph) -> Ordering {
    let n = graph.num_nodes();
    let mut in_component = vec![false; n];
    let mut visited = vec![false; n];
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut component: Vec<u32> = Vec::new();
    let mut queue = VecDeque::new();
    let mut frontier: Vec<u32> = Vec::new();

    for root in 0..n as u32 {
        if in_component[root as usize] {
            continue;
        }
        component.clear();
        in_component[root as usize] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            component.push(u);
            for &v in graph.neighbors(u) {
                if !in_component[v as usize] {
                    in_component[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }

        let start = *component.iter().min_by_key(|&&v| (graph.degree(v), v)).unwrap();
        visited[start as usize] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            frontier.clear();
            frontier.extend(graph.neighbors(u).iter().copied().filter(|&v| !visited[v as usize]));
            frontier.sort_by_key(|&v| (graph.degree(v), v));
            for &v in &frontier {
                visited[v as usize] = true;
                queue.push_back(v);
            }
        }
    }
    order.reverse();
    Ordering::from_slot_order(order).expect("every node visited exactly once")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reorder::objective::bandwidth;

    #[test]
    fn path_gets_bandwidth_one() {
        // a-b-c-d with scrambled labels: 2-0-3-1
        let g = UndirectedGraph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(bandwidth(&g, &rcm(&g)), 1);
    }

    #[test]
    fn isolated_node_is_identity() {
        let g = UndirectedGraph::from_edges(1, &[]).unwrap();
        assert!(rcm(&g).is_identity());
    }

    #[test]
    fn disjoint_paths_stay_contiguous() {
        // 0-4-2 and 1-5-3
        let g = UndirectedGraph::from_edges(6, &[(0, 4), (4, 2), (1, 5), (5, 3)]).unwrap();
        let p = rcm(&g);
        assert_eq!(bandwidth(&g, &p), 1);
        // traced by hand: visit 0,4,2 then 1,5,3; reversed
        assert_eq!(p.inverse(), &[3, 5, 1, 2, 4, 0]);
        let slots_a: Vec<u32> = [0, 4, 2].iter().map(|&v| p.slot_of(v)).collect();
        assert!(slots_a.iter().all(|&s| s >= 3));
    }

    #[test]
    fn starts_from_min_degree_node() {
        // star centered at 0 plus tail 3-4: degrees 0:3, 1:1, 2:1, 3:2, 4:1
        let g = UndirectedGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let p = rcm(&g);
        // visit: 1, 0, then neighbors of 0 by (deg, id): 2, 3; then 4
        assert_eq!(p.inverse(), &[4, 3, 2, 0, 1]);
    }
}
