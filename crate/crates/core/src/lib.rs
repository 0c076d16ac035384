//! Random chordal graphs from contraction-minimal subtree intersection
//! representations.
//!
//! - [`graph`]: simple graphs, chordality recognition, maximal cliques and
//!   connectivity.
//! - [`representation`]: host trees with subtree families, contraction,
//!   minimality, clique trees, pruning traces and minimal separators.
//! - [`generator`]: linear-time random generation, including `k`-connected
//!   and density-targeted variants.
//! - [`experiments`]: run statistics, histograms, the lower-bound family and
//!   size-ratio reports.
//! - [`cli`]: the `chordal-forge` command line.

pub mod cli;
pub mod experiments;
pub mod generator;
pub mod graph;
pub mod representation;
pub mod rng;

pub use generator::{
    generate, generate_k_connected, generate_with_density, GenConfig, GenResult, SubsetMode,
};
pub use graph::Graph;
pub use representation::{Representation, Tree};
