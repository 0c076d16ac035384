//! Chordality recognition and maximal cliques of chordal graphs.

use super::{Graph, GraphError};

/// A vertex ordering; `order[0]` is eliminated first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl EliminationOrder {
    pub fn new(order: Vec<usize>) -> Result<Self, GraphError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(GraphError::NotAPermutation(n));
            }
            position[v] = i;
        }
        Ok(Self { order, position })
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Maximal cliques, each sorted ascending, listed in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CliqueSet {
    cliques: Vec<Vec<usize>>,
}

impl CliqueSet {
    pub fn new(mut cliques: Vec<Vec<usize>>) -> Self {
        for c in &mut cliques {
            c.sort_unstable();
        }
        cliques.sort();
        Self { cliques }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.cliques.iter().map(Vec::as_slice)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cliques.iter().map(Vec::len).collect()
    }

    pub fn into_inner(self) -> Vec<Vec<usize>> {
        self.cliques
    }
}

/// Maximum cardinality search. Returns vertices in visiting order; the
/// reverse of this order is a perfect elimination order iff `g` is chordal.
///
/// Bucket queue with lazy deletion: every weight increment pushes one entry,
/// so the total work is `O(n + m)`.
pub fn maximum_cardinality_search(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0u32; n];
    let mut numbered = vec![false; n];
    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); n.max(1)];
    buckets[0] = (0..n as u32).rev().collect();
    let mut top = 0usize;
    let mut visit = Vec::with_capacity(n);

    for _ in 0..n {
        let v = loop {
            while buckets[top].is_empty() {
                top -= 1;
            }
            let v = buckets[top].pop().unwrap() as usize;
            if !numbered[v] && weight[v] as usize == top {
                break v;
            }
        };
        numbered[v] = true;
        visit.push(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !numbered[w] {
                weight[w] += 1;
                let wt = weight[w] as usize;
                buckets[wt].push(w as u32);
                top = top.max(wt);
            }
        }
    }
    visit
}

/// Checks that every vertex's later neighbours form a clique.
///
/// Follower test: each vertex `w` points at its earliest later neighbour
/// `f(w)`; the order is perfect iff every later neighbour of `w` other than
/// `f(w)` is adjacent to `f(w)`. On failure returns the offending vertex.
pub fn verify_elimination_order(g: &Graph, peo: &EliminationOrder) -> Result<(), GraphError> {
    let n = g.n();
    if peo.len() != n {
        return Err(GraphError::NotAPermutation(n));
    }
    let mut follower: Vec<usize> = (0..n).collect();
    let mut stamp = vec![usize::MAX; n];
    for (i, &v) in peo.as_slice().iter().enumerate() {
        stamp[v] = i;
        for &w in g.neighbors(v) {
            let w = w as usize;
            if peo.position(w) < i {
                stamp[w] = i;
                if follower[w] == w {
                    follower[w] = v;
                }
            }
        }
        for &w in g.neighbors(v) {
            let w = w as usize;
            if peo.position(w) < i && stamp[follower[w]] != i {
                return Err(GraphError::NotPerfectElimination(w));
            }
        }
    }
    Ok(())
}

/// Returns a perfect elimination order if `g` is chordal.
pub fn is_chordal(g: &Graph) -> Option<EliminationOrder> {
    let mut order = maximum_cardinality_search(g);
    order.reverse();
    let peo = EliminationOrder::new(order).expect("search visits every vertex once");
    verify_elimination_order(g, &peo).ok().map(|_| peo)
}

/// Maximal cliques of a chordal graph from one of its perfect elimination
/// orders.
///
/// Candidate cliques are `{v} ∪ later(v)`. The candidate of `v` is contained
/// in that of an earlier `u` exactly when `v` is the earliest later neighbour
/// of `u` and `u` has one more later neighbour than `v`.
pub fn maximal_cliques(g: &Graph, peo: &EliminationOrder) -> Result<CliqueSet, GraphError> {
    verify_elimination_order(g, peo)?;
    let n = g.n();
    let mut later_degree = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    for v in 0..n {
        let pv = peo.position(v);
        let mut best = usize::MAX;
        for &w in g.neighbors(v) {
            let pw = peo.position(w as usize);
            if pw > pv {
                later_degree[v] += 1;
                best = best.min(pw);
            }
        }
        if best != usize::MAX {
            parent[v] = peo.as_slice()[best];
        }
    }
    let mut dominated = vec![false; n];
    for u in 0..n {
        let p = parent[u];
        if p != usize::MAX && later_degree[u] == later_degree[p] + 1 {
            dominated[p] = true;
        }
    }
    let cliques = (0..n)
        .filter(|&v| !dominated[v])
        .map(|v| {
            let pv = peo.position(v);
            let mut clique: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&w| w as usize)
                .filter(|&w| peo.position(w) > pv)
                .collect();
            clique.push(v);
            clique
        })
        .collect();
    Ok(CliqueSet::new(cliques))
}
