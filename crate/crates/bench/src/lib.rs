//! Fixed instances shared by the benchmarks.

use tkcert::generators::{gq_incidence, polarity_graph, random_bipartite};
use tkcert::Graph;

pub fn polarity(q: u32) -> Graph {
    polarity_graph(q).expect("supported field order")
}

pub fn gq(q: u32) -> Graph {
    gq_incidence(q).expect("supported field order")
}

/// Bipartite with `side` vertices per side and average degree about `d`.
pub fn sparse_random(side: usize, d: f64) -> Graph {
    random_bipartite(side, side, d / side as f64, 0).expect("valid probability")
}
