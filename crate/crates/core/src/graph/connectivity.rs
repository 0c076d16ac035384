use super::{Graph, GraphError};

/// Largest graph accepted by [`brute_force_connectivity`].
pub const BRUTE_FORCE_LIMIT: usize = 16;

/// Vertex sets of the connected components, ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push(root);
        let mut component = Vec::new();
        while let Some(v) = stack.pop() {
            component.push(v);
            for &w in g.neighbors(v) {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        component.sort_unstable();
        components.push(component);
    }
    components
}

fn mask_connected(nbr: &[u32], alive: u32) -> bool {
    if alive == 0 {
        return true;
    }
    let start = alive & alive.wrapping_neg();
    let mut reached = start;
    let mut frontier = start;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = nbr[v] & alive & !reached;
        reached |= fresh;
        frontier |= fresh;
    }
    reached == alive
}

/// Vertex connectivity by exhaustive separator search.
///
/// Returns the largest `k` such that `g` has more than `k` vertices and no
/// separator with fewer than `k` vertices: `0` for disconnected graphs and
/// `n - 1` for complete graphs.
pub fn brute_force_connectivity(g: &Graph) -> Result<usize, GraphError> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(GraphError::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n <= 1 {
        return Ok(0);
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = n - 1;
    for removed in 0..=full {
        let size = removed.count_ones() as usize;
        if size >= best || n - size < 2 {
            continue;
        }
        if !mask_connected(&nbr, full & !removed) {
            best = size;
        }
    }
    Ok(best)
}
