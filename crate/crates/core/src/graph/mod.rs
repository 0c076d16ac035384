//! Simple undirected graphs on the dense vertex set `0..n`.

mod chordal;
mod connectivity;
mod format;

pub use chordal::{
    is_chordal, maximal_cliques, maximum_cardinality_search, verify_elimination_order, CliqueSet,
    EliminationOrder,
};
pub use connectivity::{brute_force_connectivity, connected_components, BRUTE_FORCE_LIMIT};
pub use format::{read_edge_list, read_graph, write_dot, write_edge_list, write_graph_json};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("order is not a perfect elimination order (vertex {0} is not simplicial)")]
    NotPerfectElimination(usize),
    #[error("graph on {n} vertices exceeds the brute-force limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Undirected simple graph stored as adjacency lists.
///
/// Neighbour lists are not kept sorted; the generator appends edges in
/// creation order. Equality compares edge sets.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "too many vertices");
        Self {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n as u32).filter(|&w| w as usize != v).collect())
            .collect();
        Self {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
    }

    /// Builds a graph from an edge list, rejecting loops, parallel edges and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.push_edge(u, v);
        }
        for (v, list) in g.adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (v.min(w[0] as usize), v.max(w[0] as usize));
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(g)
    }

    /// Wraps adjacency lists the caller guarantees to be symmetric, loop-free
    /// and free of parallel edges.
    pub(crate) fn from_adjacency_unchecked(adj: Vec<Vec<u32>>, m: usize) -> Self {
        debug_assert_eq!(adj.iter().map(Vec::len).sum::<usize>(), 2 * m);
        Self { adj, m }
    }

    /// Appends the edge without checking for duplicates.
    pub(crate) fn push_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v as u32);
        self.adj[v].push(u as u32);
        self.m += 1;
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].contains(&(b as u32))
    }

    /// Edge density `m / (n(n-1)/2)`; zero when `n < 2`.
    pub fn density(&self) -> f64 {
        let n = self.n() as f64;
        if self.n() < 2 {
            0.0
        } else {
            self.m as f64 / (n * (n - 1.0) / 2.0)
        }
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        let mut higher = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            higher.clear();
            higher.extend(list.iter().map(|&w| w as usize).filter(|&w| w > u));
            higher.sort_unstable();
            out.extend(higher.iter().map(|&w| (u, w)));
        }
        out
    }

    /// Subgraph induced by `keep`, relabelled to `0..keep.len()` in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut label = vec![u32::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            label[v] = i as u32;
        }
        let mut g = Graph::empty(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = label[w as usize];
                if j != u32::MAX && (j as usize) > i {
                    g.push_edge(i, j as usize);
                }
            }
        }
        g
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        if self.n() != other.n() || self.m != other.m {
            return false;
        }
        let mut a = Vec::new();
        let mut b = Vec::new();
        self.adj.iter().zip(&other.adj).all(|(x, y)| {
            if x.len() != y.len() {
                return false;
            }
            a.clear();
            a.extend_from_slice(x);
            a.sort_unstable();
            b.clear();
            b.extend_from_slice(y);
            b.sort_unstable();
            a == b
        })
    }
}

impl Eq for Graph {}
