//! Seed selection: HCI-TM and the baseline selectors.
//!
//! Every selector adds seeds one at a time, runs the cascade each new seed
//! triggers, and stops once the active fraction `Q` reaches the target ratio.
//! Static selectors (HHD, NP, PageRank, RA) fix a ranking up front and walk
//! it, seeding nodes even when they are already active. Adaptive selectors
//! (HCI-TM, HHDA, NPA) rescore the masked hypergraph after every cascade and
//! only ever pick inactive nodes. All ties go to the lowest node id.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cascade::{CascadeState, Propagation};
use crate::hci::{node_score, PathCounter, DEFAULT_MAX_ORDER};
use crate::hypergraph::{BallWalker, Hypergraph, NodeId};

pub const DEFAULT_ACTIVATION_RATIO: f64 = 0.9;
pub const DEFAULT_HCI_ORDER: usize = 2;
pub const PAGERANK_DAMPING: f64 = 0.85;
pub const PAGERANK_TOLERANCE: f64 = 1e-10;
pub const PAGERANK_MAX_ITER: usize = 200;

#[derive(Debug, Error, PartialEq)]
pub enum SelectError {
    #[error("activation ratio {0} is outside (0, 1]")]
    InvalidRatio(f64),
    #[error("HCI order {requested} exceeds the cap {cap}")]
    OrderTooLarge { requested: usize, cap: usize },
    #[error("damping factor {0} is outside (0, 1)")]
    InvalidDamping(f64),
    #[error("PageRank did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("unknown algorithm `{0}` (expected one of hcitm, hhd, hhda, np, npa, pagerank, ra)")]
    UnknownAlgorithm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(rename = "hcitm")]
    HciTm,
    Hhd,
    Hhda,
    Np,
    Npa,
    #[serde(rename = "pagerank")]
    PageRank,
    #[serde(rename = "ra")]
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::HciTm,
        Algorithm::Hhd,
        Algorithm::Hhda,
        Algorithm::Np,
        Algorithm::Npa,
        Algorithm::PageRank,
        Algorithm::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::HciTm => "hcitm",
            Algorithm::Hhd => "hhd",
            Algorithm::Hhda => "hhda",
            Algorithm::Np => "np",
            Algorithm::Npa => "npa",
            Algorithm::PageRank => "pagerank",
            Algorithm::Random => "ra",
        }
    }

    pub fn is_adaptive(self) -> bool {
        matches!(self, Algorithm::HciTm | Algorithm::Hhda | Algorithm::Npa)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = SelectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .or(match lower.as_str() {
                "hci-tm" | "hci" => Some(Algorithm::HciTm),
                "pr" => Some(Algorithm::PageRank),
                "random" => Some(Algorithm::Random),
                _ => None,
            })
            .ok_or_else(|| SelectError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Stop once this fraction of nodes is active.
    pub activation_ratio: f64,
    pub hci_order: usize,
    pub rng_seed: u64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            activation_ratio: DEFAULT_ACTIVATION_RATIO,
            hci_order: DEFAULT_HCI_ORDER,
            rng_seed: 0,
        }
    }
}

impl SelectionConfig {
    pub fn validate(&self) -> Result<(), SelectError> {
        if !(self.activation_ratio > 0.0 && self.activation_ratio <= 1.0) {
            return Err(SelectError::InvalidRatio(self.activation_ratio));
        }
        if self.hci_order > DEFAULT_MAX_ORDER {
            return Err(SelectError::OrderTooLarge {
                requested: self.hci_order,
                cap: DEFAULT_MAX_ORDER,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryPoint {
    pub seed_count: usize,
    pub q: f64,
    #[serde(rename = "Q")]
    pub activation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub algorithm: Algorithm,
    pub seeds: Vec<NodeId>,
    /// Score each seed had when it was picked (rank score for static
    /// selectors).
    pub scores: Vec<f64>,
    pub history: Vec<HistoryPoint>,
    pub elapsed: Duration,
    /// The ranking ran out before `Q` reached the target.
    pub exhausted: bool,
}

impl SelectionResult {
    pub fn seed_count(&self) -> usize {
        self.seeds.len()
    }

    /// Final seed fraction.
    pub fn q(&self) -> f64 {
        self.history.last().map_or(0.0, |p| p.q)
    }

    /// Final active fraction.
    pub fn activation(&self) -> f64 {
        self.history.last().map_or(0.0, |p| p.activation)
    }

    /// JSON record with seed labels and the config it ran under.
    pub fn write_json<W: std::io::Write>(
        &self,
        h: &Hypergraph,
        cfg: &SelectionConfig,
        w: W,
    ) -> serde_json::Result<()> {
        #[derive(Serialize)]
        struct Export<'a> {
            algorithm: Algorithm,
            config: &'a SelectionConfig,
            rng_seed: u64,
            seeds: Vec<u64>,
            q: f64,
            #[serde(rename = "Q")]
            activation: f64,
            exhausted: bool,
            #[serde(rename = "Q_history")]
            history: &'a [HistoryPoint],
            elapsed_ms: f64,
        }
        let export = Export {
            algorithm: self.algorithm,
            config: cfg,
            rng_seed: cfg.rng_seed,
            seeds: self.seeds.iter().map(|&i| h.label(i)).collect(),
            q: self.q(),
            activation: self.activation(),
            exhausted: self.exhausted,
            history: &self.history,
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
        };
        serde_json::to_writer_pretty(w, &export)
    }

    /// CSV `seed_count,q,Q`, one row per seed.
    pub fn write_history_csv<W: std::io::Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["seed_count", "q", "Q"])?;
        for p in &self.history {
            out.write_record([
                p.seed_count.to_string(),
                p.q.to_string(),
                p.activation.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// What an adaptive run exposes to an observer.
pub enum RoundEvent<'a> {
    /// About to seed `node`; `state` is the state it was scored on.
    Picked {
        index: usize,
        node: NodeId,
        score: u64,
        state: &'a CascadeState,
    },
    /// Scores after the cascade of seed `index` and the local rescoring.
    Rescored {
        index: usize,
        state: &'a CascadeState,
        scores: &'a [u64],
    },
}

fn reached(state: &CascadeState, target: f64) -> bool {
    !state.node_flags().is_empty() && state.activation_fraction() >= target
}

fn record(history: &mut Vec<HistoryPoint>, state: &CascadeState, seeds: usize) {
    let n = state.node_flags().len().max(1) as f64;
    history.push(HistoryPoint {
        seed_count: seeds,
        q: seeds as f64 / n,
        activation: state.activation_fraction(),
    });
}

/// Walks a fixed ranking, seeding in order until the target is met.
fn run_ranking(
    h: &Hypergraph,
    algorithm: Algorithm,
    ranking: &[(NodeId, f64)],
    cfg: &SelectionConfig,
) -> SelectionResult {
    let start = Instant::now();
    let mut state = CascadeState::new(h);
    let mut seeds = Vec::new();
    let mut scores = Vec::new();
    let mut history = Vec::new();
    for &(i, score) in ranking {
        if reached(&state, cfg.activation_ratio) {
            break;
        }
        state.add_seed(h, i, false);
        seeds.push(i);
        scores.push(score);
        record(&mut history, &state, seeds.len());
    }
    SelectionResult {
        algorithm,
        exhausted: !reached(&state, cfg.activation_ratio),
        seeds,
        scores,
        history,
        elapsed: start.elapsed(),
    }
}

/// Descending by score, ascending by id on ties.
fn rank_by<T: PartialOrd + Copy + Into<f64>>(scores: &[T]) -> Vec<(NodeId, f64)> {
    let mut order: Vec<NodeId> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    order.into_iter().map(|i| (i, scores[i].into())).collect()
}

/// Greedy selection with lazily maintained scores. After each cascade only
/// nodes within `radius` layers of the newly activated elements are
/// rescored, walking through structure that was inactive before the round.
fn run_adaptive<S, O>(
    h: &Hypergraph,
    algorithm: Algorithm,
    cfg: &SelectionConfig,
    radius: usize,
    mut score: S,
    mut observe: O,
) -> SelectionResult
where
    S: FnMut(&CascadeState, NodeId) -> u64,
    O: FnMut(RoundEvent<'_>),
{
    let start = Instant::now();
    let n = h.node_count();
    let mut state = CascadeState::new(h);
    let mut table: Vec<u64> = (0..n).map(|i| score(&state, i)).collect();
    let mut heap: BinaryHeap<(u64, Reverse<NodeId>)> = table
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, Reverse(i)))
        .collect();
    let mut walker = BallWalker::new(h);
    let mut fresh_node = vec![0u32; n];
    let mut fresh_edge = vec![0u32; h.edge_count()];
    let mut ball = Vec::new();

    let mut seeds = Vec::new();
    let mut scores = Vec::new();
    let mut history = Vec::new();
    while !reached(&state, cfg.activation_ratio) {
        let Some((s, Reverse(i))) = heap.pop() else {
            break;
        };
        if state.node_active(i) || table[i] != s {
            continue;
        }
        let index = seeds.len() + 1;
        observe(RoundEvent::Picked {
            index,
            node: i,
            score: s,
            state: &state,
        });
        let round = index as u32;
        let prop: Propagation = state.add_seed(h, i, false);
        seeds.push(i);
        scores.push(s as f64);
        record(&mut history, &state, seeds.len());

        for &j in &prop.nodes {
            fresh_node[j] = round;
            table[j] = 0;
        }
        for &e in &prop.edges {
            fresh_edge[e] = round;
        }
        let roots = prop.elements();
        walker.walk(
            h,
            &roots,
            radius,
            |j| !state.node_active(j) || fresh_node[j] == round,
            |e| !state.edge_active(e) || fresh_edge[e] == round,
            &mut ball,
        );
        for &j in &ball {
            if state.node_active(j) {
                continue;
            }
            let updated = score(&state, j);
            if updated != table[j] {
                table[j] = updated;
                heap.push((updated, Reverse(j)));
            }
        }
        observe(RoundEvent::Rescored {
            index,
            state: &state,
            scores: &table,
        });
    }
    SelectionResult {
        algorithm,
        exhausted: !reached(&state, cfg.activation_ratio),
        seeds,
        scores,
        history,
        elapsed: start.elapsed(),
    }
}

/// Rescoring radius for HCI of order `n`: `ceil(n / 2)` layers.
pub fn hci_radius(order: usize) -> usize {
    order.div_ceil(2)
}

pub fn hci_tm_select(
    h: &Hypergraph,
    cfg: &SelectionConfig,
) -> Result<SelectionResult, SelectError> {
    hci_tm_select_observed(h, cfg, |_| {})
}

/// HCI-TM with a callback on every pick and every rescoring.
pub fn hci_tm_select_observed<O>(
    h: &Hypergraph,
    cfg: &SelectionConfig,
    observe: O,
) -> Result<SelectionResult, SelectError>
where
    O: FnMut(RoundEvent<'_>),
{
    cfg.validate()?;
    let order = cfg.hci_order;
    let mut counter = PathCounter::new(h);
    Ok(run_adaptive(
        h,
        Algorithm::HciTm,
        cfg,
        hci_radius(order),
        |state, i| node_score(h, state, i, order, &mut counter),
        observe,
    ))
}

pub fn hhd_select(h: &Hypergraph, cfg: &SelectionConfig) -> Result<SelectionResult, SelectError> {
    cfg.validate()?;
    let degrees: Vec<u32> = (0..h.node_count()).map(|i| h.degree(i) as u32).collect();
    Ok(run_ranking(h, Algorithm::Hhd, &rank_by(&degrees), cfg))
}

/// Hyperdegree counting inactive hyperedges only.
pub fn masked_hyperdegree(h: &Hypergraph, state: &CascadeState, i: NodeId) -> u64 {
    if state.node_active(i) {
        return 0;
    }
    h.incident_edges(i)
        .iter()
        .filter(|&&e| !state.edge_active(e))
        .count() as u64
}

pub fn hhda_select(h: &Hypergraph, cfg: &SelectionConfig) -> Result<SelectionResult, SelectError> {
    hhda_select_observed(h, cfg, |_| {})
}

pub fn hhda_select_observed<O>(
    h: &Hypergraph,
    cfg: &SelectionConfig,
    observe: O,
) -> Result<SelectionResult, SelectError>
where
    O: FnMut(RoundEvent<'_>),
{
    cfg.validate()?;
    Ok(run_adaptive(
        h,
        Algorithm::Hhda,
        cfg,
        0,
        |state, i| masked_hyperdegree(h, state, i),
        observe,
    ))
}

/// Distinct nodes sharing at least one hyperedge with `i`.
pub fn neighbor_count(h: &Hypergraph, i: NodeId) -> usize {
    h.neighbors(i).len()
}

/// Distinct inactive nodes sharing an inactive hyperedge with inactive `i`.
pub fn masked_neighbor_count(
    h: &Hypergraph,
    state: &CascadeState,
    i: NodeId,
    scratch: &mut Vec<NodeId>,
) -> u64 {
    if state.node_active(i) {
        return 0;
    }
    scratch.clear();
    for &e in h.incident_edges(i) {
        if state.edge_active(e) {
            continue;
        }
        scratch.extend(
            h.members(e)
                .iter()
                .copied()
                .filter(|&j| j != i && !state.node_active(j)),
        );
    }
    scratch.sort_unstable();
    scratch.dedup();
    scratch.len() as u64
}

pub fn np_select(h: &Hypergraph, cfg: &SelectionConfig) -> Result<SelectionResult, SelectError> {
    cfg.validate()?;
    let counts: Vec<u32> = (0..h.node_count())
        .map(|i| neighbor_count(h, i) as u32)
        .collect();
    Ok(run_ranking(h, Algorithm::Np, &rank_by(&counts), cfg))
}

pub fn npa_select(h: &Hypergraph, cfg: &SelectionConfig) -> Result<SelectionResult, SelectError> {
    npa_select_observed(h, cfg, |_| {})
}

pub fn npa_select_observed<O>(
    h: &Hypergraph,
    cfg: &SelectionConfig,
    observe: O,
) -> Result<SelectionResult, SelectError>
where
    O: FnMut(RoundEvent<'_>),
{
    cfg.validate()?;
    let mut scratch = Vec::new();
    Ok(run_adaptive(
        h,
        Algorithm::Npa,
        cfg,
        1,
        |state, i| masked_neighbor_count(h, state, i, &mut scratch),
        observe,
    ))
}

/// Hypergraph PageRank by power iteration.
///
/// A node `j` spreads its rank over the `L(j) = sum (|e| - 1)` incidences it
/// shares with other nodes, so a neighbor met in two hyperedges receives two
/// shares. Nodes with `L(j) = 0` spread uniformly over all nodes. Iteration
/// starts from the uniform vector and stops once the largest change drops
/// below `tol`.
pub fn pagerank_scores(
    h: &Hypergraph,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<f64>, SelectError> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(SelectError::InvalidDamping(damping));
    }
    let n = h.node_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    let out_weight: Vec<f64> = (0..n)
        .map(|j| {
            h.incident_edges(j)
                .iter()
                .map(|&e| (h.edge_size(e) - 1) as f64)
                .sum()
        })
        .collect();
    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut edge_share = vec![0.0; h.edge_count()];

    for _ in 0..max_iter {
        let mut dangling = 0.0;
        for (j, &w) in out_weight.iter().enumerate() {
            if w == 0.0 {
                dangling += rank[j];
            }
        }
        for (e, share) in edge_share.iter_mut().enumerate() {
            *share = h
                .members(e)
                .iter()
                .filter(|&&j| out_weight[j] > 0.0)
                .map(|&j| rank[j] / out_weight[j])
                .sum();
        }
        let base = (1.0 - damping) / n as f64 + damping * dangling / n as f64;
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let own = if out_weight[i] > 0.0 {
                rank[i] / out_weight[i]
            } else {
                0.0
            };
            let inflow: f64 = h
                .incident_edges(i)
                .iter()
                .map(|&e| edge_share[e] - own)
                .sum();
            next[i] = base + damping * inflow;
            delta = delta.max((next[i] - rank[i]).abs());
        }
        std::mem::swap(&mut rank, &mut next);
        if delta < tol {
            return Ok(rank);
        }
    }
    Err(SelectError::NoConvergence(max_iter))
}

pub fn pagerank_select(
    h: &Hypergraph,
    cfg: &SelectionConfig,
) -> Result<SelectionResult, SelectError> {
    cfg.validate()?;
    let start = Instant::now();
    let pr = pagerank_scores(h, PAGERANK_DAMPING, PAGERANK_TOLERANCE, PAGERANK_MAX_ITER)?;
    let mut result = run_ranking(h, Algorithm::PageRank, &rank_by(&pr), cfg);
    result.elapsed = start.elapsed();
    Ok(result)
}

/// Uniformly random order drawn from `cfg.rng_seed`.
pub fn ra_select(h: &Hypergraph, cfg: &SelectionConfig) -> Result<SelectionResult, SelectError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut order: Vec<NodeId> = (0..h.node_count()).collect();
    order.shuffle(&mut rng);
    let ranking: Vec<(NodeId, f64)> = order.into_iter().map(|i| (i, 0.0)).collect();
    Ok(run_ranking(h, Algorithm::Random, &ranking, cfg))
}

pub fn select(
    h: &Hypergraph,
    algorithm: Algorithm,
    cfg: &SelectionConfig,
) -> Result<SelectionResult, SelectError> {
    match algorithm {
        Algorithm::HciTm => hci_tm_select(h, cfg),
        Algorithm::Hhd => hhd_select(h, cfg),
        Algorithm::Hhda => hhda_select(h, cfg),
        Algorithm::Np => np_select(h, cfg),
        Algorithm::Npa => npa_select(h, cfg),
        Algorithm::PageRank => pagerank_select(h, cfg),
        Algorithm::Random => ra_select(h, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hci::hci_n;
    use crate::hypergraph::tests::walkthrough;
    use crate::hypergraph::{build_hypergraph, HypergraphBuilder, Thresholds};

    fn labels(h: &Hypergraph, r: &SelectionResult) -> Vec<u64> {
        r.seeds.iter().map(|&i| h.label(i)).collect()
    }

    fn cfg(order: usize) -> SelectionConfig {
        SelectionConfig {
            activation_ratio: 0.9,
            hci_order: order,
            rng_seed: 7,
        }
    }

    #[test]
    fn hci_tm_walkthrough() {
        let h = walkthrough();
        let r = hci_tm_select(&h, &cfg(1)).unwrap();
        assert_eq!(labels(&h, &r), vec![2, 4]);
        assert_eq!(r.scores, vec![4.0, 2.0]);
        assert_eq!(r.activation(), 1.0);
        assert!(!r.exhausted);

        let r2 = hci_tm_select(&h, &cfg(2)).unwrap();
        assert_eq!(labels(&h, &r2), vec![3, 4]);
    }

    #[test]
    fn degree_selectors_walkthrough() {
        let h = walkthrough();
        let hhd = hhd_select(&h, &cfg(2)).unwrap();
        assert_eq!(labels(&h, &hhd), vec![2, 3, 6, 1, 4]);
        let hhda = hhda_select(&h, &cfg(2)).unwrap();
        assert_eq!(labels(&h, &hhda), vec![2, 4]);
        assert_eq!(hhda.history.len(), 2);
        assert_eq!(hhda.history[0].activation, 5.0 / 7.0);
    }

    #[test]
    fn neighbor_counts_walkthrough() {
        let h = walkthrough();
        let by_label: Vec<usize> = (0..7).map(|i| neighbor_count(&h, i)).collect();
        assert_eq!(by_label, vec![1, 2, 2, 1, 1, 2, 1]);
        let state = CascadeState::new(&h);
        let mut scratch = Vec::new();
        let masked: Vec<u64> = (0..7)
            .map(|i| masked_neighbor_count(&h, &state, i, &mut scratch))
            .collect();
        assert_eq!(masked, vec![1, 2, 2, 1, 1, 2, 1]);
    }

    #[test]
    fn neighbor_count_in_uniform_edge() {
        let h = build_hypergraph(&[vec![1, 2, 3, 4]], Thresholds::Uniform(0.5)).unwrap();
        assert_eq!(neighbor_count(&h, 0), 3);
    }

    #[test]
    fn isolated_node_must_be_seeded_for_full_activation() {
        let mut b = HypergraphBuilder::new();
        b.node(100).edge([1, 2], 0.5).edge([2, 3], 0.5);
        let h = b.build().unwrap();
        let full = SelectionConfig {
            activation_ratio: 1.0,
            ..cfg(2)
        };
        for alg in Algorithm::ALL {
            let r = select(&h, alg, &full).unwrap();
            assert!(labels(&h, &r).contains(&100), "{alg}");
            assert_eq!(r.activation(), 1.0, "{alg}");
        }
    }

    #[test]
    fn tiny_ratio_stops_after_first_seed() {
        let h = walkthrough();
        let c = SelectionConfig {
            activation_ratio: 1e-6,
            ..cfg(2)
        };
        for alg in Algorithm::ALL {
            assert_eq!(select(&h, alg, &c).unwrap().seed_count(), 1, "{alg}");
        }
    }

    #[test]
    fn invalid_config() {
        let h = walkthrough();
        let bad = SelectionConfig {
            activation_ratio: 0.0,
            ..cfg(2)
        };
        assert_eq!(
            hci_tm_select(&h, &bad).unwrap_err(),
            SelectError::InvalidRatio(0.0)
        );
        let deep = SelectionConfig {
            hci_order: 9,
            ..cfg(2)
        };
        assert!(matches!(
            hci_tm_select(&h, &deep),
            Err(SelectError::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!(matches!(
            "bogus".parse::<Algorithm>(),
            Err(SelectError::UnknownAlgorithm(_))
        ));
    }

    #[test]
    fn pagerank_pair_and_path() {
        let h = build_hypergraph(&[vec![1, 2]], Thresholds::Uniform(0.5)).unwrap();
        let pr = pagerank_scores(&h, 0.85, 1e-12, 500).unwrap();
        assert!((pr[0] - 0.5).abs() < 1e-12 && (pr[1] - 0.5).abs() < 1e-12);

        // c = label 0, joined to a = 1 and b = 2:
        //   c = d (a + b) + (1 - d)/3,  a = b = d c / 2 + (1 - d)/3
        // which at d = 0.85 solves to c = 0.135 / 0.2775.
        let h = build_hypergraph(&[vec![0, 1], vec![0, 2]], Thresholds::Uniform(0.5)).unwrap();
        let pr = pagerank_scores(&h, 0.85, 1e-12, 1000).unwrap();
        let c = 0.135 / 0.2775;
        let a = 0.425 * c + 0.05;
        assert!((pr[0] - c).abs() < 1e-9);
        assert!((pr[1] - a).abs() < 1e-9 && (pr[2] - a).abs() < 1e-9);
    }

    #[test]
    fn pagerank_handles_dangling_and_overlap() {
        let mut b = HypergraphBuilder::new();
        b.node(50)
            .edge([1, 2, 3], 0.5)
            .edge([1, 2], 0.5)
            .edge([4], 0.5);
        let h = b.build().unwrap();
        let pr = pagerank_scores(&h, 0.85, 1e-12, 1000).unwrap();
        assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(pr.iter().all(|&p| p > 0.0));
        assert_eq!(
            pagerank_scores(&h, 1.0, 1e-12, 10),
            Err(SelectError::InvalidDamping(1.0))
        );
        assert_eq!(
            pagerank_scores(&h, 0.85, 0.0, 3),
            Err(SelectError::NoConvergence(3))
        );
    }

    #[test]
    fn random_is_reproducible() {
        let h = walkthrough();
        let a = ra_select(&h, &cfg(2)).unwrap();
        let b = ra_select(&h, &cfg(2)).unwrap();
        assert_eq!(a.seeds, b.seeds);
        assert_eq!(a.history, b.history);
        let full = SelectionConfig {
            activation_ratio: 1.0,
            ..cfg(2)
        };
        assert_eq!(ra_select(&h, &full).unwrap().activation(), 1.0);
    }

    #[test]
    fn lazy_scores_match_full_recompute_on_walkthrough() {
        let h = walkthrough();
        for order in 0..=4 {
            let c = SelectionConfig {
                activation_ratio: 1.0,
                ..cfg(order)
            };
            let mut checked = 0;
            hci_tm_select_observed(&h, &c, |ev| {
                if let RoundEvent::Rescored { state, scores, .. } = ev {
                    assert_eq!(scores, hci_n(&h, state, order).unwrap().scores.as_slice());
                    checked += 1;
                }
            })
            .unwrap();
            assert!(checked > 0);
        }
    }

    #[test]
    fn exports() {
        let h = walkthrough();
        let c = cfg(1);
        let r = hci_tm_select(&h, &c).unwrap();
        let mut buf = Vec::new();
        r.write_json(&h, &c, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["algorithm"], "hcitm");
        assert_eq!(v["seeds"], serde_json::json!([2, 4]));
        assert_eq!(v["config"]["hci_order"], 1);
        assert_eq!(v["Q_history"][1]["Q"], 1.0);
        assert!(v["elapsed_ms"].is_number());

        let mut buf = Vec::new();
        r.write_history_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("seed_count,q,Q"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn single_node_hypergraph() {
        let h = build_hypergraph(&[vec![9]], Thresholds::Uniform(0.5)).unwrap();
        for alg in Algorithm::ALL {
            let r = select(&h, alg, &cfg(2)).unwrap();
            assert_eq!(labels(&h, &r), vec![9]);
        }
    }
}
