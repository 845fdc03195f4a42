//! Random instances shared by the integration tests.
#![allow(dead_code)]

use hcitm::hypergraph::{build_hypergraph, Hypergraph, HypergraphBuilder, Thresholds};
use hcitm::{CascadeState, SeedVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A hypertree: every new hyperedge holds exactly one existing node plus
/// zero or more fresh ones, so the incidence graph has no cycles.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize, threshold: f64) -> Hypergraph {
    let mut edges: Vec<Vec<u64>> = Vec::new();
    let mut next = 1u64;
    while (next as usize) < max_nodes {
        let anchor = rng.random_range(0..next);
        let fresh = rng.random_range(0..=3).min(max_nodes as u64 - next);
        let mut e = vec![anchor];
        e.extend(next..next + fresh);
        next += fresh;
        edges.push(e);
    }
    if edges.is_empty() {
        edges.push(vec![0]);
    }
    build_hypergraph(&edges, Thresholds::Uniform(threshold)).expect("valid tree")
}

/// Random hypergraph on nodes `0..n` (some possibly isolated) with
/// between n/2 and n hyperedges of 1 to 5 members and per-edge thresholds.
pub fn random_loopy<R: Rng>(rng: &mut R, n: usize) -> Hypergraph {
    let m = rng.random_range(n / 2..=n).max(1);
    let mut b = HypergraphBuilder::new();
    for i in 0..n as u64 {
        b.node(i);
    }
    for _ in 0..m {
        let size = rng.random_range(1..=5.min(n));
        let members: Vec<u64> = rand::seq::index::sample(rng, n, size)
            .into_iter()
            .map(|i| i as u64)
            .collect();
        b.edge(members, [0.3, 0.5, 0.6, 0.8][rng.random_range(0..4)]);
    }
    b.build().expect("valid hypergraph")
}

pub fn random_seeds<R: Rng>(rng: &mut R, n: usize, p: f64) -> SeedVector {
    let nodes: Vec<usize> = (0..n).filter(|_| rng.random_bool(p)).collect();
    SeedVector::from_nodes(n, &nodes)
}

/// Cascade state after seeding a random sparse subset.
pub fn random_state<R: Rng>(rng: &mut R, h: &Hypergraph, p: f64) -> CascadeState {
    let seeds = random_seeds(rng, h.node_count(), p);
    hcitm::run_cascade(h, &seeds, false)
        .expect("sizes match")
        .state
}
