//! Brute-force oracles and random instance builders shared by the
//! integration tests. Everything here works on bitmasks and is only meant
//! for graphs with at most 16 vertices.

#![allow(dead_code)]

use chordal_forge::representation::{NodeId, Representation, Tree};
use chordal_forge::rng::SplitMix64;
use chordal_forge::Graph;

pub fn masks(g: &Graph) -> Vec<u32> {
    assert!(g.n() <= 16);
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect()
}

fn members(set: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| set >> i & 1 == 1)
}

fn is_clique(adj: &[u32], set: u32) -> bool {
    members(set).all(|v| (adj[v] | 1 << v) & set == set)
}

fn connected_within(adj: &[u32], set: u32) -> bool {
    if set == 0 {
        return true;
    }
    let mut seen = 1u32 << set.trailing_zeros();
    loop {
        let grown = members(seen).fold(seen, |acc, v| acc | (adj[v] & set));
        if grown == seen {
            return seen == set;
        }
        seen = grown;
    }
}

/// No induced cycle on four or more vertices.
pub fn is_chordal_oracle(g: &Graph) -> bool {
    let adj = masks(g);
    let n = g.n();
    (0u32..1 << n).all(|set| {
        if set.count_ones() < 4 {
            return true;
        }
        let is_cycle =
            members(set).all(|v| (adj[v] & set).count_ones() == 2) && connected_within(&adj, set);
        !is_cycle
    })
}

/// Every maximal clique, each sorted, in lexicographic order.
pub fn maximal_cliques_oracle(g: &Graph) -> Vec<Vec<usize>> {
    let adj = masks(g);
    let n = g.n();
    let mut out: Vec<Vec<usize>> = (1u32..1 << n)
        .filter(|&set| is_clique(&adj, set))
        .filter(|&set| (0..n).all(|v| set >> v & 1 == 1 || adj[v] & set != set))
        .map(|set| members(set).collect())
        .collect();
    out.sort();
    out
}

/// Number of connected components.
pub fn components_oracle(g: &Graph) -> usize {
    let adj = masks(g);
    let mut left: u32 = if g.n() == 32 {
        u32::MAX
    } else {
        (1u32 << g.n()) - 1
    };
    let mut count = 0;
    while left != 0 {
        let mut comp = 1u32 << left.trailing_zeros();
        loop {
            let grown = members(comp).fold(comp, |acc, v| acc | adj[v]);
            if grown == comp {
                break;
            }
            comp = grown;
        }
        left &= !comp;
        count += 1;
    }
    count
}

/// Largest `k` such that the graph has more than `k` vertices and no vertex
/// set of size below `k` disconnects it.
pub fn connectivity_oracle(g: &Graph) -> usize {
    let n = g.n();
    let adj = masks(g);
    let all = (1u32 << n) - 1;
    let mut best = n.saturating_sub(1);
    for removed in 0u32..1 << n {
        let rest = all & !removed;
        if rest.count_ones() >= 2 && !connected_within(&adj, rest) {
            best = best.min(removed.count_ones() as usize);
        }
    }
    best
}

/// `true` iff each vertex's neighbours later in `order` form a clique.
pub fn is_peo_oracle(g: &Graph, order: &[usize]) -> bool {
    let adj = masks(g);
    let mut later: u32 = order.iter().fold(0, |m, &v| m | 1 << v);
    order.iter().all(|&v| {
        later &= !(1 << v);
        is_clique(&adj, adj[v] & later)
    })
}

/// Minimum adjacency bitstring over all vertex relabellings.
pub fn canonical_form(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 8);
    let edges = g.edges();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let code = edges.iter().fold(0u64, |acc, &(u, v)| {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            acc | 1 << (a * n + b)
        });
        best = best.min(code);
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Canonical forms of all chordal graphs on `n` vertices, by exhaustive
/// enumeration of labelled graphs.
pub fn chordal_classes(n: usize) -> Vec<u64> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut classes: Vec<u64> = (0u32..1 << pairs.len())
        .map(|bits| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|&(i, _)| bits >> i & 1 == 1)
                .map(|(_, &e)| e);
            Graph::from_edges(n, edges).unwrap()
        })
        .filter(is_chordal_oracle)
        .map(|g| canonical_form(&g))
        .collect();
    classes.sort_unstable();
    classes.dedup();
    classes
}

/// Graph whose edges are the pairs of subtrees sharing a node.
pub fn intersection_oracle(rep: &Representation) -> Graph {
    let sets: Vec<Vec<NodeId>> = (0..rep.n()).map(|i| rep.subtree(i)).collect();
    let mut edges = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].iter().any(|x| sets[j].contains(x)) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(sets.len(), edges).unwrap()
}

/// Random labelled graph with edge probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut SplitMix64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random tree on `t` nodes with scattered identifiers; returns the tree and
/// its adjacency by position.
pub fn random_tree(t: usize, rng: &mut SplitMix64) -> (Tree, Vec<NodeId>, Vec<Vec<usize>>) {
    let mut ids: Vec<NodeId> = (0..t).map(|i| 7 * i + 3).collect();
    rng.shuffle(&mut ids);
    let mut adj = vec![Vec::new(); t];
    let mut edges = Vec::new();
    for p in 1..t {
        let q = rng.below(p as u64) as usize;
        adj[p].push(q);
        adj[q].push(p);
        edges.push((ids[p], ids[q]));
    }
    (Tree::new(ids.clone(), &edges).unwrap(), ids, adj)
}

/// Random connected node set grown from a random node.
fn random_subtree(ids: &[NodeId], adj: &[Vec<usize>], rng: &mut SplitMix64) -> Vec<NodeId> {
    let t = ids.len();
    let target = rng.range_inclusive(1, t);
    let mut inside = vec![false; t];
    let start = rng.below(t as u64) as usize;
    inside[start] = true;
    let mut chosen = vec![start];
    while chosen.len() < target {
        let frontier: Vec<usize> = chosen
            .iter()
            .flat_map(|&p| adj[p].iter().copied())
            .filter(|&q| !inside[q])
            .collect();
        let q = frontier[rng.below(frontier.len() as u64) as usize];
        inside[q] = true;
        chosen.push(q);
    }
    chosen.into_iter().map(|p| ids[p]).collect()
}

/// Arbitrary (usually non-minimal) representation with `t` tree nodes and
/// `n` subtrees.
pub fn random_representation(t: usize, n: usize, rng: &mut SplitMix64) -> Representation {
    let (tree, ids, adj) = random_tree(t, rng);
    let subtrees = (0..n).map(|_| random_subtree(&ids, &adj, rng)).collect();
    Representation::new(tree, subtrees).unwrap()
}
