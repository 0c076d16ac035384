//! Random generation of contraction-minimal representations.
//!
//! The tree grows one leaf at a time. Each new node `j'` is attached to a
//! uniformly chosen existing node `j`, receives a batch of fresh single-node
//! subtrees (a clique of fresh vertices in the graph), and a random proper
//! subset of the subtrees at `j` is extended into it. Because the subset is
//! proper and the fresh batch is non-empty, no edge of the tree ever has
//! nested incidence sets, so the result is minimal by construction.
//!
//! Every graph edge is created exactly once: fresh-fresh pairs inside the new
//! clique, and extended-fresh pairs when a subtree is extended. Two extended
//! subtrees already met at `j`, so no other pair is new.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::representation::{Representation, Tree};
use crate::rng::SplitMix64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("n must be at least 1")]
    EmptyGraph,
    #[error("k_max must be at least 1")]
    ZeroKMax,
    #[error("bernoulli subset probability {0} must lie strictly between 0 and 1")]
    BadProbability(f64),
    #[error("a {k}-connected graph needs at least {} vertices, got n = {n}", k + 1)]
    TooFewVertices { k: usize, n: usize },
    #[error("density targeting needs n >= 2")]
    DensityNeedsTwoVertices,
    #[error("target density {0} must lie strictly between 0 and 1")]
    BadDensity(f64),
    #[error("tolerance {0} must lie strictly between 0 and 1")]
    BadTolerance(f64),
    #[error("max_attempts must be at least 1")]
    NoAttempts,
    #[error("no graph within the density window after {attempts} attempts")]
    Exhausted { attempts: usize },
}

/// How the proper subset of `T_j` extended into a new node is drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubsetMode {
    /// Uniform over all proper subsets (fair coins, redrawn on the full set).
    UniformProper,
    /// Each subtree kept with probability `q`, redrawn on the full set.
    Bernoulli(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub seed: u64,
    /// Cap on the number of fresh vertices created per tree node.
    pub k_max: Option<usize>,
    pub subset_mode: SubsetMode,
    /// Required vertex connectivity; `None` or `Some(0)` means unconstrained.
    pub k_conn: Option<usize>,
}

impl GenConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            k_max: None,
            subset_mode: SubsetMode::UniformProper,
            k_conn: None,
        }
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.k_max = Some(k_max);
        self
    }

    pub fn with_subset_mode(mut self, mode: SubsetMode) -> Self {
        self.subset_mode = mode;
        self
    }

    pub fn with_k_conn(mut self, k: usize) -> Self {
        self.k_conn = Some(k);
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.n < 1 {
            return Err(GenError::EmptyGraph);
        }
        if self.k_max == Some(0) {
            return Err(GenError::ZeroKMax);
        }
        if let SubsetMode::Bernoulli(q) = self.subset_mode {
            if !(q > 0.0 && q < 1.0) {
                return Err(GenError::BadProbability(q));
            }
        }
        if let Some(k) = self.k_conn {
            if k > 0 && self.n <= k {
                return Err(GenError::TooFewVertices { k, n: self.n });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GenResult {
    pub rep: Representation,
    pub graph: Graph,
    pub elapsed: Duration,
    /// Elementary events: tree nodes created, edges inserted and subtrees
    /// extended.
    pub ops: u64,
}

#[derive(Clone, Debug)]
pub struct DensityResult {
    pub result: GenResult,
    /// Number of generations run, including the accepted one.
    pub attempts: usize,
    /// The per-node vertex cap in effect.
    pub k_max: Option<usize>,
}

/// Draws a proper subset of `pool` into `out`.
struct SubsetSampler {
    mode: SubsetMode,
    min_size: usize,
    bits: u64,
    bits_left: u32,
}

impl SubsetSampler {
    fn coin(&mut self, rng: &mut SplitMix64) -> bool {
        if self.bits_left == 0 {
            self.bits = rng.next_u64();
            self.bits_left = 64;
        }
        let bit = self.bits & 1 == 1;
        self.bits >>= 1;
        self.bits_left -= 1;
        bit
    }

    fn draw(&mut self, pool: &[u32], out: &mut Vec<u32>, rng: &mut SplitMix64) {
        let size = pool.len();
        if self.min_size > 0 {
            // cardinality uniform in [min_size, size - 1], then a uniform subset of it
            debug_assert!(size > self.min_size);
            let c = rng.range_inclusive(self.min_size, size - 1);
            out.clear();
            out.extend_from_slice(pool);
            for x in 0..c {
                let y = x + rng.below((size - x) as u64) as usize;
                out.swap(x, y);
            }
            out.truncate(c);
            return;
        }
        loop {
            out.clear();
            for &i in pool {
                let keep = match self.mode {
                    SubsetMode::UniformProper => self.coin(rng),
                    SubsetMode::Bernoulli(q) => rng.bernoulli(q),
                };
                if keep {
                    out.push(i);
                }
            }
            if out.len() < size {
                return;
            }
        }
    }
}

struct Builder {
    adj: Vec<Vec<u32>>,
    m: usize,
    subtrees: Vec<Vec<usize>>,
    members: Vec<Vec<u32>>,
    parents: Vec<usize>,
    ops: u64,
}

impl Builder {
    /// Adds a tree node holding `k` fresh single-node subtrees that form a
    /// clique; returns the new node.
    fn new_node(&mut self, parent: usize, k: usize) -> usize {
        let node = self.members.len();
        self.parents.push(parent);
        let first = self.adj.len();
        let fresh: Vec<u32> = (first..first + k).map(|v| v as u32).collect();
        for &v in &fresh {
            let mut list = Vec::with_capacity(k - 1);
            list.extend(fresh.iter().copied().filter(|&w| w != v));
            self.adj.push(list);
            self.subtrees.push(vec![node]);
        }
        let clique_edges = k * (k - 1) / 2;
        self.m += clique_edges;
        self.ops += 1 + clique_edges as u64;
        self.members.push(fresh);
        node
    }

    /// Extends subtree `i` into `node`, joining vertex `i` to the `fresh`
    /// vertices created there.
    fn extend(&mut self, i: u32, node: usize, fresh: std::ops::Range<usize>) {
        let iu = i as usize;
        self.subtrees[iu].push(node);
        self.adj[iu].extend(fresh.clone().map(|w| w as u32));
        for w in fresh.clone() {
            self.adj[w].push(i);
        }
        self.m += fresh.len();
        self.ops += 1 + fresh.len() as u64;
        self.members[node].push(i);
    }
}

/// Runs the growth process. Returns `None` as soon as the edge count exceeds
/// `edge_ceiling`.
fn grow(cfg: &GenConfig, edge_ceiling: Option<usize>) -> Option<GenResult> {
    let start = Instant::now();
    let n = cfg.n;
    let k_conn = cfg.k_conn.unwrap_or(0);
    let cap = cfg.k_max.unwrap_or(n).min(n);
    let mut rng = SplitMix64::new(cfg.seed);
    let mut sampler = SubsetSampler {
        mode: cfg.subset_mode,
        min_size: k_conn,
        bits: 0,
        bits_left: 0,
    };
    let mut b = Builder {
        adj: Vec::with_capacity(n),
        m: 0,
        subtrees: Vec::with_capacity(n),
        members: Vec::new(),
        parents: Vec::new(),
        ops: 0,
    };

    // the first node carries at least k_conn + 1 vertices
    let lo = (k_conn + 1).max(1);
    let k = rng.range_inclusive(lo, cap.max(lo));
    b.new_node(0, k);
    let mut chosen = Vec::new();
    if edge_ceiling.is_some_and(|c| b.m > c) {
        return None;
    }

    while b.adj.len() < n {
        let j = rng.below(b.members.len() as u64) as usize;
        let k = rng.range_inclusive(1, (n - b.adj.len()).min(cap));
        let first = b.adj.len();
        let node = b.new_node(j, k);
        sampler.draw(&b.members[j], &mut chosen, &mut rng);
        for &i in &chosen {
            b.extend(i, node, first..first + k);
        }
        if edge_ceiling.is_some_and(|c| b.m > c) {
            return None;
        }
    }

    let tree = Tree::from_parents(&b.parents);
    let rep = Representation::from_positions(tree, b.subtrees);
    let graph = Graph::from_adjacency_unchecked(b.adj, b.m);
    Some(GenResult {
        rep,
        graph,
        elapsed: start.elapsed(),
        ops: b.ops,
    })
}

/// Generates a random contraction-minimal representation on `cfg.n`
/// subtrees and its chordal intersection graph.
///
/// When `cfg.k_conn` is `Some(k)` with `k > 0` this behaves like
/// [`generate_k_connected`].
pub fn generate(cfg: &GenConfig) -> Result<GenResult, GenError> {
    cfg.validate()?;
    Ok(grow(cfg, None).expect("no edge ceiling"))
}

/// Generates a `k`-connected chordal graph: the first node holds at least
/// `k + 1` vertices and every extended subset has at least `k` members.
pub fn generate_k_connected(cfg: &GenConfig, k: usize) -> Result<GenResult, GenError> {
    if cfg.n <= k {
        return Err(GenError::TooFewVertices { k, n: cfg.n });
    }
    generate(&cfg.clone().with_k_conn(k))
}

const SPARSE_CAP_FACTOR: f64 = 0.55;

/// The per-node vertex cap used when targeting density `rho` on `n`
/// vertices: `max(1, round(0.55·ρ·n))` for sparse targets (`ρ ≤ 0.1`), none
/// otherwise.
///
/// With this cap a typical run lands slightly below the target, so accepted
/// graphs come from the denser tail and are almost always connected. A cap
/// of `ρ·n` overshoots: at `n = 1000, ρ = 0.01` no run reaches the window.
pub fn density_k_max(n: usize, rho: f64) -> Option<usize> {
    (rho <= 0.1).then(|| ((SPARSE_CAP_FACTOR * rho * n as f64).round() as usize).max(1))
}

/// Inclusive edge-count window `[⌈(1-ε)ρN⌉, ⌊(1+ε)ρN⌋]` with `N = n(n-1)/2`.
pub fn density_window(n: usize, rho: f64, epsilon: f64) -> (usize, usize) {
    let pairs = (n * n.saturating_sub(1) / 2) as f64;
    let lo = ((1.0 - epsilon) * rho * pairs).ceil() as usize;
    let hi = ((1.0 + epsilon) * rho * pairs).floor() as usize;
    (lo, hi)
}

/// Generates until the realised density lies within `[(1-ε)ρ, (1+ε)ρ]`.
///
/// Attempt `a` uses the seed stream `(cfg.seed, a)`. An attempt is abandoned
/// as soon as its edge count passes the window, since edges are never removed.
/// An explicit `cfg.k_max` overrides [`density_k_max`].
pub fn generate_with_density(
    cfg: &GenConfig,
    rho: f64,
    epsilon: f64,
    max_attempts: usize,
) -> Result<DensityResult, GenError> {
    cfg.validate()?;
    if cfg.n < 2 {
        return Err(GenError::DensityNeedsTwoVertices);
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(GenError::BadDensity(rho));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(GenError::BadTolerance(epsilon));
    }
    if max_attempts < 1 {
        return Err(GenError::NoAttempts);
    }
    let k_max = cfg.k_max.or_else(|| density_k_max(cfg.n, rho));
    let (lo, hi) = density_window(cfg.n, rho, epsilon);
    for attempt in 0..max_attempts {
        let mut run_cfg = cfg.clone();
        run_cfg.k_max = k_max;
        run_cfg.seed = SplitMix64::stream(cfg.seed, attempt as u64).next_u64();
        if let Some(result) = grow(&run_cfg, Some(hi)) {
            if result.graph.m() >= lo {
                return Ok(DensityResult {
                    result,
                    attempts: attempt + 1,
                    k_max,
                });
            }
        }
    }
    Err(GenError::Exhausted {
        attempts: max_attempts,
    })
}

/// Seed of run `index` in a batch with master seed `master`.
pub fn run_seed(master: u64, index: usize) -> u64 {
    SplitMix64::stream(master, index as u64).next_u64()
}

/// Runs `job(run_seed(master, i), i)` for `i in 0..runs` on the current rayon
/// pool and returns the results in run order.
pub fn run_batch<T, F>(runs: usize, master: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, usize) -> T + Sync + Send,
{
    (0..runs)
        .into_par_iter()
        .map(|i| job(run_seed(master, i), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, is_chordal};
    use crate::representation::is_minimal;

    #[test]
    fn single_vertex() {
        let r = generate(&GenConfig::new(1, 9)).unwrap();
        assert_eq!(r.graph.n(), 1);
        assert_eq!(r.graph.m(), 0);
        assert_eq!(r.rep.t(), 1);
        assert_eq!(r.rep.subtree(0), vec![0]);
    }

    #[test]
    fn rejects_bad_configs() {
        assert_eq!(
            generate(&GenConfig::new(0, 1)).unwrap_err(),
            GenError::EmptyGraph
        );
        assert_eq!(
            generate(&GenConfig::new(5, 1).with_k_max(0)).unwrap_err(),
            GenError::ZeroKMax
        );
        assert_eq!(
            generate(&GenConfig::new(5, 1).with_subset_mode(SubsetMode::Bernoulli(1.0)))
                .unwrap_err(),
            GenError::BadProbability(1.0)
        );
        assert_eq!(
            generate_k_connected(&GenConfig::new(3, 1), 3).unwrap_err(),
            GenError::TooFewVertices { k: 3, n: 3 }
        );
    }

    #[test]
    fn output_is_consistent() {
        for seed in 0..50 {
            let r = generate(&GenConfig::new(40, seed)).unwrap();
            assert_eq!(r.rep.n(), 40);
            assert!(is_minimal(&r.rep));
            assert_eq!(r.rep.intersection_graph(), r.graph);
            assert!(is_chordal(&r.graph).is_some());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate(&GenConfig::new(100, 77)).unwrap();
        let b = generate(&GenConfig::new(100, 77)).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.rep, b.rep);
        assert_eq!(a.ops, b.ops);
    }

    #[test]
    fn ops_counts_nodes_edges_and_extensions() {
        for seed in 0..10 {
            let r = generate(&GenConfig::new(60, seed)).unwrap();
            let extensions = r.rep.size() - r.rep.n();
            assert_eq!(r.ops as usize, r.rep.t() + r.graph.m() + extensions);
        }
    }

    #[test]
    fn k_max_one_builds_one_vertex_per_node() {
        let r = generate(&GenConfig::new(30, 4).with_k_max(1)).unwrap();
        assert_eq!(r.rep.t(), 30);
    }

    #[test]
    fn bernoulli_mode_is_minimal() {
        for seed in 0..20 {
            let cfg = GenConfig::new(30, seed).with_subset_mode(SubsetMode::Bernoulli(0.9));
            let r = generate(&cfg).unwrap();
            assert!(is_minimal(&r.rep));
            assert_eq!(r.rep.intersection_graph(), r.graph);
        }
    }

    #[test]
    fn forced_complete_graph() {
        let r = generate_k_connected(&GenConfig::new(6, 3), 5).unwrap();
        assert_eq!(r.graph, Graph::complete(6));
    }

    #[test]
    fn one_connected_is_connected() {
        for seed in 0..30 {
            let r = generate_k_connected(&GenConfig::new(25, seed), 1).unwrap();
            assert_eq!(connected_components(&r.graph).len(), 1);
        }
    }

    #[test]
    fn density_window_arithmetic() {
        let (lo, hi) = density_window(1000, 0.1, 0.05);
        assert_eq!((lo, hi), (47453, 52447));
        assert!(lo >= 47453 && hi <= 52448);
        assert_eq!(density_k_max(1000, 0.1), Some(55));
        assert_eq!(density_k_max(1000, 0.01), Some(6));
        assert_eq!(density_k_max(1000, 0.0001), Some(1));
        assert_eq!(density_k_max(1000, 0.5), None);
    }

    #[test]
    fn density_exhaustion() {
        let cfg = GenConfig::new(200, 5).with_k_max(1);
        let err = generate_with_density(&cfg, 0.99, 0.01, 1).unwrap_err();
        assert_eq!(err, GenError::Exhausted { attempts: 1 });
        assert_eq!(
            generate_with_density(&GenConfig::new(1, 0), 0.5, 0.1, 1).unwrap_err(),
            GenError::DensityNeedsTwoVertices
        );
        assert_eq!(
            generate_with_density(&GenConfig::new(10, 0), 0.5, 0.1, 0).unwrap_err(),
            GenError::NoAttempts
        );
    }

    #[test]
    fn batch_preserves_order() {
        let seeds = run_batch(8, 11, |seed, i| (i, seed));
        assert_eq!(seeds.len(), 8);
        for (i, &(idx, seed)) in seeds.iter().enumerate() {
            assert_eq!(idx, i);
            assert_eq!(seed, run_seed(11, i));
        }
    }
}
