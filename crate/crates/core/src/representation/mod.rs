//! Subtree intersection representations.
//!
//! A [`Representation`] is a host [`Tree`] plus one connected node set per
//! graph vertex. Vertex `i` and `i'` of the intersection graph are adjacent
//! iff their subtrees share a node.
//!
//! Tree nodes carry arbitrary identifiers; internally everything is indexed
//! by the position of the identifier in the sorted identifier list. The tree
//! is rooted at its smallest identifier, which makes the parent of every
//! non-root node (and therefore the edge set) addressable by a single index.

mod contraction;
mod json;
mod structure;

pub use contraction::{contract_edge, minimize, minimize_randomized, MultiplicityMap};
pub use json::{read_json, write_json, RepresentationFile, TreeFile};
pub use structure::{
    clique_tree_check, edge_load_bound_check, is_minimal, minimal_separators, nested_edge,
    pruning_trace, PruneRecord, PruningTrace, Separator, SeparatorReport, TraceViolation,
};

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Graph;

pub type NodeId = usize;

const NONE: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("tree has no nodes")]
    EmptyTree,
    #[error("tree node {0} listed twice")]
    DuplicateNode(NodeId),
    #[error("tree edge {0}-{1} references an unknown node")]
    UnknownEdgeEndpoint(NodeId, NodeId),
    #[error("tree edge {0}-{1} is a loop or listed twice")]
    BadTreeEdge(NodeId, NodeId),
    #[error("a tree on {nodes} nodes needs {} edges, found {edges}", nodes - 1)]
    WrongEdgeCount { nodes: usize, edges: usize },
    #[error("tree is not connected")]
    TreeNotConnected,
    #[error("representation has no subtrees")]
    NoSubtrees,
    #[error("subtree {0} is empty")]
    EmptySubtree(usize),
    #[error("subtree {subtree} contains unknown node {node}")]
    UnknownSubtreeNode { subtree: usize, node: NodeId },
    #[error("subtree {0} is not connected in the tree")]
    DisconnectedSubtree(usize),
    #[error("{0}-{1} is not an edge of the tree")]
    NotAnEdge(NodeId, NodeId),
    #[error("multiplicity map does not match the tree nodes")]
    MultiplicityMismatch,
    #[error("representation is not contraction-minimal: edge {0}-{1} has nested incidence sets")]
    NotMinimal(NodeId, NodeId),
    #[error("malformed representation JSON: {0}")]
    Json(String),
}

/// Unrooted tree on arbitrary node identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    ids: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
    order: Vec<usize>,
}

impl Tree {
    pub fn new(nodes: Vec<NodeId>, edges: &[(NodeId, NodeId)]) -> Result<Self, RepError> {
        if nodes.is_empty() {
            return Err(RepError::EmptyTree);
        }
        let mut ids = nodes;
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(RepError::DuplicateNode(w[0]));
        }
        if edges.len() != ids.len() - 1 {
            return Err(RepError::WrongEdgeCount {
                nodes: ids.len(),
                edges: edges.len(),
            });
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in edges {
            let (Ok(pa), Ok(pb)) = (ids.binary_search(&a), ids.binary_search(&b)) else {
                return Err(RepError::UnknownEdgeEndpoint(a, b));
            };
            if pa == pb {
                return Err(RepError::BadTreeEdge(a, b));
            }
            adj[pa].push(pb);
            adj[pb].push(pa);
        }
        for (p, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(RepError::BadTreeEdge(ids[p], ids[w[0]]));
            }
        }
        Self::rooted(ids, adj).ok_or(RepError::TreeNotConnected)
    }

    /// Tree on nodes `0..parents.len()` where node `j > 0` hangs below
    /// `parents[j] < j`.
    pub(crate) fn from_parents(parents: &[usize]) -> Self {
        let t = parents.len().max(1);
        let mut adj = vec![Vec::new(); t];
        for (j, &p) in parents.iter().enumerate().skip(1) {
            debug_assert!(p < j);
            adj[p].push(j);
            adj[j].push(p);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self::rooted((0..t).collect(), adj).expect("parent array describes a tree")
    }

    fn rooted(ids: Vec<NodeId>, adj: Vec<Vec<usize>>) -> Option<Self> {
        let t = ids.len();
        let mut parent = vec![NONE; t];
        let mut depth = vec![0; t];
        let mut order = Vec::with_capacity(t);
        let mut seen = vec![false; t];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        (order.len() == t).then_some(Self {
            ids,
            adj,
            parent,
            depth,
            order,
        })
    }

    pub fn single(id: NodeId) -> Self {
        Self::new(vec![id], &[]).expect("single node tree")
    }

    /// Path on nodes `0..t`.
    pub fn path(t: usize) -> Self {
        let edges: Vec<_> = (1..t).map(|j| (j - 1, j)).collect();
        Self::new((0..t).collect(), &edges).expect("path is a tree")
    }

    /// Number of nodes `t`.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Node identifiers in ascending order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index_of(id).is_some()
    }

    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        self.index_of(id)
            .map(|p| self.adj[p].iter().map(|&q| self.ids[q]).collect())
            .unwrap_or_default()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(pa), Some(pb)) => self.adj[pa].binary_search(&pb).is_ok(),
            _ => false,
        }
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out: Vec<_> = (0..self.len())
            .flat_map(|p| {
                self.adj[p]
                    .iter()
                    .filter(move |&&q| q > p)
                    .map(move |&q| (self.ids[p], self.ids[q]))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn id(&self, pos: usize) -> NodeId {
        self.ids[pos]
    }

    pub(crate) fn adjacent(&self, pos: usize) -> &[usize] {
        &self.adj[pos]
    }

    pub(crate) fn parent(&self, pos: usize) -> Option<usize> {
        (self.parent[pos] != NONE).then_some(self.parent[pos])
    }

    pub(crate) fn depth(&self, pos: usize) -> usize {
        self.depth[pos]
    }
}

/// A tree together with `n` subtrees, one per graph vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    tree: Tree,
    /// Node positions of each subtree, sorted.
    subtrees: Vec<Vec<usize>>,
    /// Per node position, the sorted indices of the subtrees containing it.
    members: Vec<Vec<usize>>,
}

impl Representation {
    /// Validates and builds a representation. Subtree node lists may be given
    /// in any order; repeated identifiers are collapsed.
    pub fn new(tree: Tree, subtrees: Vec<Vec<NodeId>>) -> Result<Self, RepError> {
        if subtrees.is_empty() {
            return Err(RepError::NoSubtrees);
        }
        let mut positions = Vec::with_capacity(subtrees.len());
        for (i, nodes) in subtrees.into_iter().enumerate() {
            if nodes.is_empty() {
                return Err(RepError::EmptySubtree(i));
            }
            let mut pos = nodes
                .into_iter()
                .map(|id| {
                    tree.index_of(id).ok_or(RepError::UnknownSubtreeNode {
                        subtree: i,
                        node: id,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            pos.sort_unstable();
            pos.dedup();
            positions.push(pos);
        }
        let mut in_set = vec![NONE; tree.len()];
        for (i, pos) in positions.iter().enumerate() {
            for &p in pos {
                in_set[p] = i;
            }
            // a node set of a tree is connected iff it spans |set| - 1 tree edges
            let inner_edges = pos
                .iter()
                .filter(|&&p| tree.parent(p).is_some_and(|q| in_set[q] == i))
                .count();
            if inner_edges + 1 != pos.len() {
                return Err(RepError::DisconnectedSubtree(i));
            }
        }
        Ok(Self::from_positions(tree, positions))
    }

    /// Builds from sorted, connected position lists without validation.
    pub(crate) fn from_positions(tree: Tree, subtrees: Vec<Vec<usize>>) -> Self {
        let mut members = vec![Vec::new(); tree.len()];
        for (i, pos) in subtrees.iter().enumerate() {
            for &p in pos {
                members[p].push(i);
            }
        }
        Self {
            tree,
            subtrees,
            members,
        }
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    /// Number of subtrees (vertices of the intersection graph).
    pub fn n(&self) -> usize {
        self.subtrees.len()
    }

    /// Number of tree nodes.
    pub fn t(&self) -> usize {
        self.tree.len()
    }

    /// Node identifiers of subtree `i`, ascending.
    pub fn subtree(&self, i: usize) -> Vec<NodeId> {
        self.subtrees[i].iter().map(|&p| self.tree.id(p)).collect()
    }

    pub fn subtree_len(&self, i: usize) -> usize {
        self.subtrees[i].len()
    }

    /// `T_j`: indices of the subtrees containing node `id`.
    pub fn members(&self, id: NodeId) -> Option<&[usize]> {
        self.tree.index_of(id).map(|p| self.members[p].as_slice())
    }

    /// `t_j` for node `id`.
    pub fn load(&self, id: NodeId) -> Option<usize> {
        self.members(id).map(<[usize]>::len)
    }

    /// `(id, t_j)` for every node, by ascending identifier.
    pub fn loads(&self) -> Vec<(NodeId, usize)> {
        (0..self.t())
            .map(|p| (self.tree.id(p), self.members[p].len()))
            .collect()
    }

    pub(crate) fn subtree_positions(&self, i: usize) -> &[usize] {
        &self.subtrees[i]
    }

    pub(crate) fn members_at(&self, pos: usize) -> &[usize] {
        &self.members[pos]
    }

    /// `Σ_i |V(T_i)|`, which equals `Σ_j t_j`.
    pub fn size(&self) -> usize {
        self.subtrees.iter().map(Vec::len).sum()
    }

    /// `Σ_i |L(T_i)|`, where a single-node subtree has one leaf.
    pub fn leaf_count(&self) -> usize {
        let mut degree = vec![0usize; self.t()];
        let mut stamp = vec![NONE; self.t()];
        let mut total = 0;
        for (i, pos) in self.subtrees.iter().enumerate() {
            for &p in pos {
                stamp[p] = i;
                degree[p] = 0;
            }
            for &p in pos {
                if let Some(q) = self.tree.parent(p).filter(|&q| stamp[q] == i) {
                    degree[p] += 1;
                    degree[q] += 1;
                }
            }
            total += pos.iter().filter(|&&p| degree[p] <= 1).count();
        }
        total
    }

    /// Position of the node of subtree `i` closest to the root.
    fn top(&self, i: usize) -> usize {
        *self.subtrees[i]
            .iter()
            .min_by_key(|&&p| self.tree.depth(p))
            .expect("subtrees are non-empty")
    }

    /// For every non-root node position `p`, the number of subtrees that
    /// contain the edge between `p` and its parent (`|T_e|`). The root entry is
    /// zero.
    pub(crate) fn parent_edge_loads(&self) -> Vec<usize> {
        let mut load = vec![0usize; self.t()];
        for i in 0..self.n() {
            let top = self.top(i);
            for &p in &self.subtrees[i] {
                if p != top {
                    load[p] += 1;
                }
            }
        }
        load
    }

    /// `|T_e|` for every tree edge, keyed like [`Tree::edges`].
    pub fn edge_loads(&self) -> Vec<((NodeId, NodeId), usize)> {
        let load = self.parent_edge_loads();
        let mut out: Vec<_> = (0..self.t())
            .filter_map(|p| {
                self.tree.parent(p).map(|q| {
                    let (a, b) = (self.tree.id(p), self.tree.id(q));
                    ((a.min(b), a.max(b)), load[p])
                })
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// The intersection graph `G(𝒯)`.
    ///
    /// Two intersecting subtrees meet at the top node of exactly one of them
    /// (the deeper top), or share their top. Each edge is therefore emitted
    /// exactly once by pairing every subtree with the other members of its
    /// top node, for `O(n + m)` total work.
    pub fn intersection_graph(&self) -> Graph {
        let n = self.n();
        let tops: Vec<usize> = (0..n).map(|i| self.top(i)).collect();
        let mut g = Graph::empty(n);
        for i in 0..n {
            let j = tops[i];
            for &other in &self.members[j] {
                if other == i || (tops[other] == j && other < i) {
                    continue;
                }
                g.push_edge(i, other);
            }
        }
        g
    }

    /// Edge count of the intersection graph without materialising it.
    pub fn intersection_edge_count(&self) -> usize {
        let tops: Vec<usize> = (0..self.n()).map(|i| self.top(i)).collect();
        let mut same_top = vec![0usize; self.t()];
        let mut m = 0;
        for &j in &tops {
            m += self.members[j].len() - 1;
            same_top[j] += 1;
        }
        // pairs sharing a top were counted from both sides
        m - same_top
            .iter()
            .map(|&s| s * s.saturating_sub(1) / 2)
            .sum::<usize>()
    }
}
