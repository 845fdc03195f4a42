//! Random hypergraph families: bipartite Erdős–Rényi, scale-free and
//! K-uniform.
//!
//! Node labels are `0..N`. Empty hyperedges are dropped, so the realized
//! edge count can fall short of the requested one; nodes left without any
//! hyperedge are still part of the returned hypergraph.

use std::io::Write;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("N and M must both be at least 1 (got N = {nodes}, M = {edges})")]
    EmptySize { nodes: usize, edges: usize },
    #[error("incidence probability {0} is outside (0, 1]")]
    InvalidProbability(f64),
    #[error("power-law exponent {0} must exceed 1")]
    InvalidExponent(f64),
    #[error("hyperedge size K = {0} must be a positive integer")]
    InvalidK(f64),
    #[error("hyperedge size K = {k} exceeds N = {nodes}")]
    KTooLarge { k: usize, nodes: usize },
    #[error("threshold {0} is outside (0, 1)")]
    InvalidThreshold(f64),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    #[serde(rename = "er", alias = "ER")]
    Er,
    #[serde(rename = "sf", alias = "SF")]
    Sf,
    #[serde(rename = "kuf", alias = "KUF")]
    Kuf,
}

impl GeneratorKind {
    /// Edge-to-node ratio used by the experiments.
    pub fn default_edge_ratio(self) -> f64 {
        match self {
            GeneratorKind::Er => 0.3,
            GeneratorKind::Sf | GeneratorKind::Kuf => 0.5,
        }
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(GeneratorKind::Er),
            "sf" => Ok(GeneratorKind::Sf),
            "kuf" | "k-uniform" | "kuniform" => Ok(GeneratorKind::Kuf),
            _ => Err(format!("unknown generator `{s}` (expected er, sf or kuf)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub nodes: usize,
    pub edges: usize,
    /// Mean hyperdegree (ER), power-law exponent (SF) or edge size (KUF).
    pub param: f64,
    pub threshold: f64,
    pub rng_seed: u64,
}

impl GeneratorSpec {
    /// Spec with the experiment default `M` for this family.
    pub fn with_default_edges(
        kind: GeneratorKind,
        nodes: usize,
        param: f64,
        threshold: f64,
        rng_seed: u64,
    ) -> Self {
        let edges = ((nodes as f64 * kind.default_edge_ratio()).round() as usize).max(1);
        GeneratorSpec {
            kind,
            nodes,
            edges,
            param,
            threshold,
            rng_seed,
        }
    }

    fn check_common(&self) -> Result<(), GenError> {
        if self.nodes == 0 || self.edges == 0 {
            return Err(GenError::EmptySize {
                nodes: self.nodes,
                edges: self.edges,
            });
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(GenError::InvalidThreshold(self.threshold));
        }
        Ok(())
    }
}

/// A generated hypergraph with its audit metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub graph: Hypergraph,
    pub metadata: GeneratorMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMetadata {
    pub spec: GeneratorSpec,
    pub realized_nodes: usize,
    pub realized_edges: usize,
    pub dropped_edges: usize,
    /// Nodes with no hyperedge; these do not survive the text format.
    pub isolated_nodes: usize,
    pub rng_seed: u64,
}

impl GeneratorMetadata {
    pub fn write_json<W: Write>(&self, w: W) -> serde_json::Result<()> {
        serde_json::to_writer_pretty(w, self)
    }
}

fn finish(spec: &GeneratorSpec, edges: Vec<Vec<NodeId>>) -> Generated {
    let dropped = spec.edges - edges.len();
    let labels: Vec<u64> = (0..spec.nodes as u64).collect();
    let thresholds = vec![spec.threshold; edges.len()];
    let graph = Hypergraph::from_dense(labels, &edges, thresholds);
    let isolated = (0..graph.node_count())
        .filter(|&i| graph.degree(i) == 0)
        .count();
    Generated {
        metadata: GeneratorMetadata {
            spec: *spec,
            realized_nodes: graph.node_count(),
            realized_edges: graph.edge_count(),
            dropped_edges: dropped,
            isolated_nodes: isolated,
            rng_seed: spec.rng_seed,
        },
        graph,
    }
}

fn sorted_sample<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<NodeId> {
    let mut members = sample(rng, n, k).into_vec();
    members.sort_unstable();
    members
}

/// Every (node, hyperedge) incidence present independently with
/// probability `<k> / M`.
pub fn gen_er(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    spec.check_common()?;
    let p = spec.param / spec.edges as f64;
    if !(p > 0.0 && p <= 1.0) {
        return Err(GenError::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let size = Binomial::new(spec.nodes as u64, p).map_err(|_| GenError::InvalidProbability(p))?;
    let mut edges = Vec::with_capacity(spec.edges);
    for _ in 0..spec.edges {
        let k = size.sample(&mut rng) as usize;
        if k > 0 {
            edges.push(sorted_sample(&mut rng, spec.nodes, k));
        }
    }
    Ok(finish(spec, edges))
}

/// Largest hyperdegree drawn by the scale-free generator.
pub fn sf_max_degree(nodes: usize) -> usize {
    ((nodes as f64).sqrt().ceil() as usize).max(1)
}

/// Node hyperdegrees drawn from `P(k) ∝ k^-γ` on `[1, ceil(sqrt N)]`; each
/// stub joins a uniformly chosen hyperedge and repeated incidences collapse.
pub fn gen_sf(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    spec.check_common()?;
    let gamma = spec.param;
    if gamma.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) || !gamma.is_finite() {
        return Err(GenError::InvalidExponent(gamma));
    }
    let kmax = sf_max_degree(spec.nodes);
    let weights: Vec<f64> = (1..=kmax).map(|k| (k as f64).powf(-gamma)).collect();
    let degree = WeightedIndex::new(&weights).map_err(|_| GenError::InvalidExponent(gamma))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let mut members: Vec<Vec<NodeId>> = vec![Vec::new(); spec.edges];
    for i in 0..spec.nodes {
        let k = degree.sample(&mut rng) + 1;
        for _ in 0..k {
            let e = rng.random_range(0..spec.edges);
            members[e].push(i);
        }
    }
    let edges = members
        .into_iter()
        .filter_map(|mut m| {
            m.dedup();
            (!m.is_empty()).then_some(m)
        })
        .collect();
    Ok(finish(spec, edges))
}

/// `M` hyperedges of `K` distinct uniformly chosen nodes each.
pub fn gen_kuniform(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    spec.check_common()?;
    let k = spec.param;
    if !(k >= 1.0 && k.fract() == 0.0 && k.is_finite()) {
        return Err(GenError::InvalidK(k));
    }
    let k = k as usize;
    if k > spec.nodes {
        return Err(GenError::KTooLarge {
            k,
            nodes: spec.nodes,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let edges = (0..spec.edges)
        .map(|_| sorted_sample(&mut rng, spec.nodes, k))
        .collect();
    Ok(finish(spec, edges))
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    match spec.kind {
        GeneratorKind::Er => gen_er(spec),
        GeneratorKind::Sf => gen_sf(spec),
        GeneratorKind::Kuf => gen_kuniform(spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{load_hyperedge_list, write_hyperedge_list};

    fn spec(kind: GeneratorKind, nodes: usize, edges: usize, param: f64) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            nodes,
            edges,
            param,
            threshold: 0.5,
            rng_seed: 11,
        }
    }

    #[test]
    fn deterministic_per_seed() {
        for (kind, param) in [
            (GeneratorKind::Er, 3.0),
            (GeneratorKind::Sf, 2.0),
            (GeneratorKind::Kuf, 4.0),
        ] {
            let s = spec(kind, 300, 120, param);
            let a = generate(&s).unwrap();
            let b = generate(&s).unwrap();
            assert_eq!(a, b);
            let c = generate(&GeneratorSpec { rng_seed: 12, ..s }).unwrap();
            assert_ne!(a.graph.edge_label_lists(), c.graph.edge_label_lists());
        }
    }

    #[test]
    fn kuniform_sizes_and_degree_sum() {
        let g = gen_kuniform(&spec(GeneratorKind::Kuf, 50, 40, 5.0))
            .unwrap()
            .graph;
        assert_eq!(g.edge_count(), 40);
        assert!((0..40).all(|e| g.edge_size(e) == 5));
        let total: usize = (0..g.node_count()).map(|i| g.degree(i)).sum();
        assert_eq!(total, 5 * 40);
        assert_eq!(g.uniform_threshold(), Some(0.5));
    }

    #[test]
    fn kuniform_errors() {
        assert_eq!(
            gen_kuniform(&spec(GeneratorKind::Kuf, 3, 4, 4.0)).unwrap_err(),
            GenError::KTooLarge { k: 4, nodes: 3 }
        );
        assert_eq!(
            gen_kuniform(&spec(GeneratorKind::Kuf, 3, 4, 2.5)).unwrap_err(),
            GenError::InvalidK(2.5)
        );
    }

    #[test]
    fn er_sparse_drops_empty_edges() {
        let g = gen_er(&spec(GeneratorKind::Er, 20, 50, 0.0001)).unwrap();
        assert!(g.metadata.realized_edges <= 50);
        assert_eq!(g.metadata.realized_edges + g.metadata.dropped_edges, 50);
        assert_eq!(g.metadata.realized_nodes, 20);
    }

    #[test]
    fn er_rejects_bad_probability() {
        assert_eq!(
            gen_er(&spec(GeneratorKind::Er, 20, 2, 3.0)).unwrap_err(),
            GenError::InvalidProbability(1.5)
        );
        assert_eq!(
            gen_er(&spec(GeneratorKind::Er, 20, 2, 0.0)).unwrap_err(),
            GenError::InvalidProbability(0.0)
        );
    }

    #[test]
    fn sf_rejects_flat_exponent() {
        assert_eq!(
            gen_sf(&spec(GeneratorKind::Sf, 20, 10, 1.0)).unwrap_err(),
            GenError::InvalidExponent(1.0)
        );
    }

    #[test]
    fn sf_degrees_bounded() {
        let g = gen_sf(&spec(GeneratorKind::Sf, 400, 200, 1.5))
            .unwrap()
            .graph;
        assert!((0..g.node_count()).all(|i| g.degree(i) <= 20));
    }

    #[test]
    fn common_checks() {
        assert!(matches!(
            gen_er(&spec(GeneratorKind::Er, 0, 5, 1.0)),
            Err(GenError::EmptySize { .. })
        ));
        let bad = GeneratorSpec {
            threshold: 1.0,
            ..spec(GeneratorKind::Er, 10, 5, 1.0)
        };
        assert_eq!(gen_er(&bad).unwrap_err(), GenError::InvalidThreshold(1.0));
    }

    #[test]
    fn er_file_round_trip() {
        let g = gen_er(&spec(GeneratorKind::Er, 200, 60, 3.0)).unwrap();
        let mut buf = Vec::new();
        write_hyperedge_list(&g.graph, &mut buf, &[]).unwrap();
        let back = load_hyperedge_list(buf.as_slice(), None).unwrap();
        assert_eq!(back.edge_label_lists(), g.graph.edge_label_lists());
        assert_eq!(back.thresholds(), g.graph.thresholds());
    }

    #[test]
    fn default_edge_ratios() {
        let s = GeneratorSpec::with_default_edges(GeneratorKind::Er, 1000, 3.0, 0.5, 1);
        assert_eq!(s.edges, 300);
        let s = GeneratorSpec::with_default_edges(GeneratorKind::Sf, 1000, 2.0, 0.5, 1);
        assert_eq!(s.edges, 500);
    }

    #[test]
    fn metadata_json_echoes_spec() {
        let g = gen_kuniform(&spec(GeneratorKind::Kuf, 10, 3, 2.0)).unwrap();
        let mut buf = Vec::new();
        g.metadata.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["spec"]["kind"], "kuf");
        assert_eq!(v["realized_edges"], 3);
        assert_eq!(v["rng_seed"], 11);
    }
}
