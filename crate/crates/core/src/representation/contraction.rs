//! Edge contraction and reduction to a contraction-minimal representation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{NodeId, RepError, Representation, Tree};
use crate::rng::SplitMix64;

/// Multiplicity `k_j` of every surviving node: how many nodes of the
/// original tree were merged into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityMap {
    k: BTreeMap<NodeId, usize>,
}

impl MultiplicityMap {
    /// All multiplicities equal to one.
    pub fn unit(tree: &Tree) -> Self {
        Self {
            k: tree.nodes().iter().map(|&id| (id, 1)).collect(),
        }
    }

    pub fn get(&self, id: NodeId) -> Option<usize> {
        self.k.get(&id).copied()
    }

    /// `Σ_j k_j`, the node count of the original tree.
    pub fn total(&self) -> usize {
        self.k.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, usize)> + '_ {
        self.k.iter().map(|(&id, &k)| (id, k))
    }

    /// `Σ_j k_j t_j` against the loads of `rep`.
    pub fn weighted_size(&self, rep: &Representation) -> usize {
        rep.loads()
            .into_iter()
            .map(|(id, t)| self.k.get(&id).copied().unwrap_or(0) * t)
            .sum()
    }

    fn matches(&self, tree: &Tree) -> bool {
        self.k.len() == tree.len() && self.k.keys().zip(tree.nodes()).all(|(a, b)| a == b)
    }
}

/// Contracts tree edge `a-b`. The merged node keeps the smaller identifier;
/// its multiplicity is the sum of both endpoints'.
pub fn contract_edge(
    rep: &Representation,
    mult: &MultiplicityMap,
    (a, b): (NodeId, NodeId),
) -> Result<(Representation, MultiplicityMap), RepError> {
    let tree = rep.tree();
    if !tree.has_edge(a, b) {
        return Err(RepError::NotAnEdge(a, b));
    }
    if !mult.matches(tree) {
        return Err(RepError::MultiplicityMismatch);
    }
    let (keep, drop) = (a.min(b), a.max(b));
    let rename = |id: NodeId| if id == drop { keep } else { id };
    let nodes: Vec<NodeId> = tree
        .nodes()
        .iter()
        .copied()
        .filter(|&id| id != drop)
        .collect();
    let edges: Vec<(NodeId, NodeId)> = tree
        .edges()
        .into_iter()
        .filter(|&e| e != (keep, drop))
        .map(|(x, y)| (rename(x), rename(y)))
        .collect();
    let subtrees = (0..rep.n())
        .map(|i| rep.subtree(i).into_iter().map(rename).collect())
        .collect();
    let contracted = Representation::new(Tree::new(nodes, &edges)?, subtrees)?;

    let mut k = mult.k.clone();
    let absorbed = k.remove(&drop).expect("checked against tree");
    *k.get_mut(&keep).expect("checked against tree") += absorbed;
    Ok((contracted, MultiplicityMap { k }))
}

/// Mutable working copy used while contracting many edges.
struct Contractor {
    ids: Vec<NodeId>,
    alive: Vec<bool>,
    adj: Vec<BTreeSet<usize>>,
    members: Vec<Vec<usize>>,
    k: Vec<usize>,
    n: usize,
}

fn is_subset(small: &[usize], large: &[usize]) -> bool {
    if small.len() > large.len() {
        return false;
    }
    let mut it = large.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Contractor {
    fn new(rep: &Representation) -> Self {
        let tree = rep.tree();
        let t = tree.len();
        Self {
            ids: tree.nodes().to_vec(),
            alive: vec![true; t],
            adj: (0..t)
                .map(|p| tree.adjacent(p).iter().copied().collect())
                .collect(),
            members: (0..t).map(|p| rep.members_at(p).to_vec()).collect(),
            k: vec![1; t],
            n: rep.n(),
        }
    }

    fn nested(&self, a: usize, b: usize) -> bool {
        is_subset(&self.members[a], &self.members[b])
            || is_subset(&self.members[b], &self.members[a])
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.ids.len())
            .filter(|&p| self.alive[p])
            .flat_map(|p| self.adj[p].range(p + 1..).map(move |&q| (p, q)))
            .collect()
    }

    /// Merges `b` into `a` (or vice versa); returns the surviving position,
    /// always the smaller one.
    fn contract(&mut self, a: usize, b: usize) -> usize {
        let (keep, drop) = (a.min(b), a.max(b));
        self.members[keep] = sorted_union(&self.members[keep], &self.members[drop]);
        self.members[drop] = Vec::new();
        self.k[keep] += self.k[drop];
        self.alive[drop] = false;
        let neighbours = std::mem::take(&mut self.adj[drop]);
        self.adj[keep].remove(&drop);
        for nb in neighbours {
            if nb != keep {
                self.adj[nb].remove(&drop);
                self.adj[nb].insert(keep);
                self.adj[keep].insert(nb);
            }
        }
        keep
    }

    fn finish(self) -> (Representation, MultiplicityMap) {
        let live: Vec<usize> = (0..self.ids.len()).filter(|&p| self.alive[p]).collect();
        let nodes: Vec<NodeId> = live.iter().map(|&p| self.ids[p]).collect();
        let edges: Vec<(NodeId, NodeId)> = self
            .edges()
            .into_iter()
            .map(|(p, q)| (self.ids[p], self.ids[q]))
            .collect();
        let mut subtrees = vec![Vec::new(); self.n];
        for &p in &live {
            for &i in &self.members[p] {
                subtrees[i].push(self.ids[p]);
            }
        }
        let tree = Tree::new(nodes, &edges).expect("contraction preserves the tree");
        let rep = Representation::new(tree, subtrees).expect("contraction preserves subtrees");
        let k = live.iter().map(|&p| (self.ids[p], self.k[p])).collect();
        (rep, MultiplicityMap { k })
    }
}

/// Contracts edges with nested endpoint incidence sets until none remain.
///
/// Edges are processed from a FIFO worklist seeded with every edge in
/// ascending order; after each contraction the merged node's edges are
/// re-queued, since only they can have become nested. The intersection graph
/// is unchanged and the final node count equals the number of maximal cliques
/// regardless of the order.
pub fn minimize(rep: &Representation) -> (Representation, MultiplicityMap) {
    let mut work = Contractor::new(rep);
    let mut queue: VecDeque<(usize, usize)> = work.edges().into();
    while let Some((a, b)) = queue.pop_front() {
        if !work.alive[a] || !work.alive[b] || !work.adj[a].contains(&b) {
            continue;
        }
        if work.nested(a, b) {
            let merged = work.contract(a, b);
            queue.extend(
                work.adj[merged]
                    .iter()
                    .map(|&nb| (merged.min(nb), merged.max(nb))),
            );
        }
    }
    work.finish()
}

/// Like [`minimize`], but contracts a uniformly random nested edge at every
/// step. Quadratic; meant for cross-checking order independence.
pub fn minimize_randomized(
    rep: &Representation,
    rng: &mut SplitMix64,
) -> (Representation, MultiplicityMap) {
    let mut work = Contractor::new(rep);
    loop {
        let candidates: Vec<(usize, usize)> = work
            .edges()
            .into_iter()
            .filter(|&(a, b)| work.nested(a, b))
            .collect();
        if candidates.is_empty() {
            break;
        }
        let (a, b) = candidates[rng.below(candidates.len() as u64) as usize];
        work.contract(a, b);
    }
    work.finish()
}
