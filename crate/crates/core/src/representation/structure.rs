//! Minimality, clique trees, the leaf-pruning trace and minimal separators.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use thiserror::Error;

use super::{NodeId, RepError, Representation};
use crate::graph::{is_chordal, maximal_cliques};

/// First tree edge (in ascending order) whose endpoint incidence sets are
/// nested, if any.
pub fn nested_edge(rep: &Representation) -> Option<(NodeId, NodeId)> {
    let load = rep.parent_edge_loads();
    let tree = rep.tree();
    (0..rep.t())
        .filter_map(|p| {
            let q = tree.parent(p)?;
            // T_p ∩ T_q has exactly load[p] members
            let nested = load[p] == rep.members_at(p).len() || load[p] == rep.members_at(q).len();
            nested.then(|| {
                let (a, b) = (tree.id(p), tree.id(q));
                (a.min(b), a.max(b))
            })
        })
        .min()
}

/// True iff no tree edge `jj'` has `T_j ⊆ T_j'` or `T_j' ⊆ T_j`.
pub fn is_minimal(rep: &Representation) -> bool {
    nested_edge(rep).is_none()
}

fn require_minimal(rep: &Representation) -> Result<(), RepError> {
    match nested_edge(rep) {
        Some((a, b)) => Err(RepError::NotMinimal(a, b)),
        None => Ok(()),
    }
}

/// Checks that the tree is a clique tree of the intersection graph with every
/// subtree made of the cliques containing its vertex, and that this agrees
/// with [`is_minimal`].
///
/// # Panics
///
/// Panics if the two characterisations disagree.
pub fn clique_tree_check(rep: &Representation) -> bool {
    let minimal = is_minimal(rep);
    let clique_tree = is_clique_tree(rep);
    assert_eq!(
        minimal, clique_tree,
        "minimality and clique-tree structure disagree"
    );
    minimal
}

fn is_clique_tree(rep: &Representation) -> bool {
    let g = rep.intersection_graph();
    let peo = is_chordal(&g).expect("intersection graphs of subtrees are chordal");
    let cliques = maximal_cliques(&g, &peo).expect("order comes from the recogniser");
    if cliques.len() != rep.t() {
        return false;
    }
    let maximal: HashSet<&[usize]> = cliques.iter().collect();
    let mut seen = HashSet::new();
    for p in 0..rep.t() {
        let clique = rep.members_at(p);
        if !maximal.contains(clique) || !seen.insert(clique) {
            return false;
        }
    }
    // subtree of vertex i = nodes whose clique contains i
    let mut containing = vec![Vec::new(); rep.n()];
    for p in 0..rep.t() {
        for &i in rep.members_at(p) {
            containing[i].push(p);
        }
    }
    containing
        .iter()
        .enumerate()
        .all(|(i, nodes)| nodes.as_slice() == rep.subtree_positions(i))
}

/// One leaf removal: node, number `s_j` of subtrees consisting solely of it,
/// and `t_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PruneRecord {
    pub node: NodeId,
    pub simplicial: usize,
    pub load: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruningTrace {
    pub records: Vec<PruneRecord>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceViolation {
    #[error("record {0}: no simplicial vertex removed")]
    NoSimplicial(usize),
    #[error("simplicial counts sum to {sum}, expected n = {n}")]
    SimplicialSum { sum: usize, n: usize },
    #[error(
        "record {index}: s = {s}, t = {t}, remaining = {remaining} violates s <= t <= remaining"
    )]
    LoadBounds {
        index: usize,
        s: usize,
        t: usize,
        remaining: usize,
    },
    #[error("2·Σ s·t − Σ s² = {lhs}, expected 2m + n = {rhs}")]
    EdgeIdentity { lhs: u128, rhs: u128 },
}

impl PruningTrace {
    /// `2 Σ s_j t_j − Σ s_j²`.
    pub fn identity_value(&self) -> u128 {
        let (st, ss) = self.records.iter().fold((0u128, 0u128), |(st, ss), r| {
            let (s, t) = (r.simplicial as u128, r.load as u128);
            (st + s * t, ss + s * s)
        });
        2 * st - ss
    }

    /// Verifies the trace against a graph with `n` vertices and `m` edges:
    /// every `s_j ≥ 1`, `Σ s_j = n`, `s_j ≤ t_j ≤ Σ_{i≥j} s_i` in removal
    /// order, and `2 Σ s_j t_j − Σ s_j² = 2m + n`.
    pub fn check(&self, n: usize, m: usize) -> Result<(), TraceViolation> {
        if let Some(idx) = self.records.iter().position(|r| r.simplicial == 0) {
            return Err(TraceViolation::NoSimplicial(idx));
        }
        let sum: usize = self.records.iter().map(|r| r.simplicial).sum();
        if sum != n {
            return Err(TraceViolation::SimplicialSum { sum, n });
        }
        let mut remaining = n;
        for (index, r) in self.records.iter().enumerate() {
            if !(r.simplicial <= r.load && r.load <= remaining) {
                return Err(TraceViolation::LoadBounds {
                    index,
                    s: r.simplicial,
                    t: r.load,
                    remaining,
                });
            }
            remaining -= r.simplicial;
        }
        let lhs = self.identity_value();
        let rhs = 2 * m as u128 + n as u128;
        if lhs != rhs {
            return Err(TraceViolation::EdgeIdentity { lhs, rhs });
        }
        Ok(())
    }
}

/// Removes leaves in ascending identifier order, recording for each removed
/// node how many subtrees vanish with it.
pub fn pruning_trace(rep: &Representation) -> Result<PruningTrace, RepError> {
    require_minimal(rep)?;
    let tree = rep.tree();
    let t = rep.t();
    let mut degree: Vec<usize> = (0..t).map(|p| tree.adjacent(p).len()).collect();
    let mut removed = vec![false; t];
    let mut remaining: Vec<usize> = (0..rep.n()).map(|i| rep.subtree_len(i)).collect();
    // positions are ordered like identifiers
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..t).filter(|&p| degree[p] <= 1).map(Reverse).collect();
    let mut records = Vec::with_capacity(t);
    while let Some(Reverse(p)) = leaves.pop() {
        if removed[p] {
            continue;
        }
        removed[p] = true;
        let mut simplicial = 0;
        for &i in rep.members_at(p) {
            if remaining[i] == 1 {
                simplicial += 1;
            }
            remaining[i] -= 1;
        }
        records.push(PruneRecord {
            node: tree.id(p),
            simplicial,
            load: rep.members_at(p).len(),
        });
        for &q in tree.adjacent(p) {
            if !removed[q] {
                degree[q] -= 1;
                if degree[q] <= 1 {
                    leaves.push(Reverse(q));
                }
            }
        }
    }
    Ok(PruningTrace { records })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub edge: (NodeId, NodeId),
    /// `V_e`: vertices whose subtrees contain both endpoints, ascending.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorReport {
    pub separators: Vec<Separator>,
    /// Vertex connectivity: `min |V_e|`, or `n - 1` on a single-node tree.
    pub kappa: usize,
}

impl SeparatorReport {
    /// Distinct `V_e` sets, i.e. the minimal separators of the graph.
    pub fn distinct(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> =
            self.separators.iter().map(|s| s.vertices.clone()).collect();
        sets.sort();
        sets.dedup();
        sets
    }
}

/// `V_e` for every tree edge of a minimal representation, and the resulting
/// connectivity.
pub fn minimal_separators(rep: &Representation) -> Result<SeparatorReport, RepError> {
    require_minimal(rep)?;
    let tree = rep.tree();
    let mut separators: Vec<Separator> = (0..rep.t())
        .filter_map(|p| {
            let q = tree.parent(p)?;
            let (a, b) = (tree.id(p), tree.id(q));
            let other: HashSet<usize> = rep.members_at(q).iter().copied().collect();
            let vertices = rep
                .members_at(p)
                .iter()
                .copied()
                .filter(|i| other.contains(i))
                .collect();
            Some(Separator {
                edge: (a.min(b), a.max(b)),
                vertices,
            })
        })
        .collect();
    separators.sort_by_key(|s| s.edge);
    let kappa = separators
        .iter()
        .map(|s| s.vertices.len())
        .min()
        .unwrap_or(rep.n() - 1);
    Ok(SeparatorReport { separators, kappa })
}

/// True iff every tree edge lies in at most `n - t` subtrees.
pub fn edge_load_bound_check(rep: &Representation) -> Result<bool, RepError> {
    require_minimal(rep)?;
    let bound = rep.n().saturating_sub(rep.t());
    Ok(rep.edge_loads().iter().all(|&(_, load)| load <= bound))
}
