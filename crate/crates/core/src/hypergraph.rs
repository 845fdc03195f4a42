//! Immutable hypergraph with bidirectional incidence.
//!
//! Nodes and hyperedges are addressed by dense 0-based ids. External node
//! labels (the ids found in input files) are kept alongside and sorted
//! ascending, so "lowest dense id" and "lowest label" order nodes the same way.
//!
//! Incidence is stored twice in CSR form: edge-major (`members`) and
//! node-major (`incident_edges`). Every incidence pair has an *arc id*, its
//! position in the edge-major array; message passing keys both directed
//! messages of a pair by that id.

use std::collections::{BTreeMap, VecDeque};
use std::io::{BufRead, Write};

use serde::Serialize;
use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;
pub type ArcId = usize;

/// Slack used when rounding `t * size` up to an integer, so that thresholds
/// written in decimal (0.6, 0.8, ...) land on the intended count.
const CEIL_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum HypergraphError {
    #[error("hyperedge {edge} has no members")]
    EmptyEdge { edge: usize },
    #[error("node {node} appears more than once in hyperedge {edge}")]
    DuplicateMember { edge: usize, node: u64 },
    #[error("threshold {value} of hyperedge {edge} is outside (0, 1)")]
    ThresholdOutOfRange { edge: usize, value: f64 },
    #[error("expected {expected} thresholds, got {got}")]
    ThresholdCount { expected: usize, got: usize },
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("unknown hyperedge {0}")]
    UnknownEdge(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("no threshold given: add a `%threshold` directive or pass one explicitly")]
    MissingThreshold,
    #[error(
        "hyperedge-list files carry a single threshold; this hypergraph has per-edge thresholds"
    )]
    NonUniformThreshold,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for HypergraphError {
    fn from(err: std::io::Error) -> Self {
        HypergraphError::Io(err.to_string())
    }
}

pub type Result<T, E = HypergraphError> = std::result::Result<T, E>;

/// Minimal number of active members that activates a hyperedge of `size`
/// members with threshold `threshold`, i.e. `ceil(threshold * size)`.
///
/// The result always lies in `1..=size` for `threshold` in (0, 1).
pub fn activation_count(threshold: f64, size: usize) -> usize {
    let raw = (threshold * size as f64 - CEIL_SLACK).ceil();
    (raw.max(1.0) as usize).min(size.max(1))
}

/// Threshold assignment for a batch of hyperedges.
#[derive(Debug, Clone, PartialEq)]
pub enum Thresholds {
    Uniform(f64),
    PerEdge(Vec<f64>),
}

/// A node or a hyperedge; the two vertex kinds of the incidence graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "id", rename_all = "lowercase")]
pub enum Element {
    Node(NodeId),
    Edge(EdgeId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    labels: Vec<u64>,
    edge_ptr: Vec<usize>,
    edge_nodes: Vec<NodeId>,
    node_ptr: Vec<usize>,
    node_edges: Vec<EdgeId>,
    node_arcs: Vec<ArcId>,
    thresholds: Vec<f64>,
    activation: Vec<usize>,
}

/// Incremental construction from external node labels.
#[derive(Debug, Default, Clone)]
pub struct HypergraphBuilder {
    extra_nodes: Vec<u64>,
    edges: Vec<Vec<u64>>,
    thresholds: Vec<f64>,
}

impl HypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a node even if no hyperedge mentions it.
    pub fn node(&mut self, label: u64) -> &mut Self {
        self.extra_nodes.push(label);
        self
    }

    pub fn edge(&mut self, members: impl IntoIterator<Item = u64>, threshold: f64) -> &mut Self {
        self.edges.push(members.into_iter().collect());
        self.thresholds.push(threshold);
        self
    }

    pub fn build(&self) -> Result<Hypergraph> {
        let mut labels: Vec<u64> = self.extra_nodes.clone();
        for (e, (members, &t)) in self.edges.iter().zip(&self.thresholds).enumerate() {
            if members.is_empty() {
                return Err(HypergraphError::EmptyEdge { edge: e });
            }
            if !(t > 0.0 && t < 1.0) {
                return Err(HypergraphError::ThresholdOutOfRange { edge: e, value: t });
            }
            let mut sorted = members.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::DuplicateMember {
                    edge: e,
                    node: w[0],
                });
            }
            labels.extend_from_slice(members);
        }
        labels.sort_unstable();
        labels.dedup();

        let index: BTreeMap<u64, NodeId> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let edges: Vec<Vec<NodeId>> = self
            .edges
            .iter()
            .map(|m| m.iter().map(|l| index[l]).collect())
            .collect();
        Ok(Hypergraph::from_dense(
            labels,
            &edges,
            self.thresholds.clone(),
        ))
    }
}

/// Builds a hypergraph from hyperedge member lists given as external labels.
/// Node count is the number of distinct labels mentioned.
pub fn build_hypergraph(edges: &[Vec<u64>], thresholds: Thresholds) -> Result<Hypergraph> {
    let per_edge = match thresholds {
        Thresholds::Uniform(t) => vec![t; edges.len()],
        Thresholds::PerEdge(v) => {
            if v.len() != edges.len() {
                return Err(HypergraphError::ThresholdCount {
                    expected: edges.len(),
                    got: v.len(),
                });
            }
            v
        }
    };
    let mut b = HypergraphBuilder::new();
    for (members, t) in edges.iter().zip(per_edge) {
        b.edge(members.iter().copied(), t);
    }
    b.build()
}

impl Hypergraph {
    /// Assembles the CSR arrays. Callers guarantee the invariants
    /// (distinct members, non-empty edges, thresholds in range).
    pub(crate) fn from_dense(
        labels: Vec<u64>,
        edges: &[Vec<NodeId>],
        thresholds: Vec<f64>,
    ) -> Self {
        let n = labels.len();
        let mut edge_ptr = Vec::with_capacity(edges.len() + 1);
        let mut edge_nodes = Vec::new();
        edge_ptr.push(0);
        for members in edges {
            edge_nodes.extend_from_slice(members);
            edge_ptr.push(edge_nodes.len());
        }

        let mut node_ptr = vec![0usize; n + 1];
        for &v in &edge_nodes {
            node_ptr[v + 1] += 1;
        }
        for i in 0..n {
            node_ptr[i + 1] += node_ptr[i];
        }
        let mut fill = node_ptr.clone();
        let mut node_edges = vec![0; edge_nodes.len()];
        let mut node_arcs = vec![0; edge_nodes.len()];
        for e in 0..edges.len() {
            for (arc, &v) in edge_nodes
                .iter()
                .enumerate()
                .take(edge_ptr[e + 1])
                .skip(edge_ptr[e])
            {
                node_edges[fill[v]] = e;
                node_arcs[fill[v]] = arc;
                fill[v] += 1;
            }
        }

        let activation = edges
            .iter()
            .zip(&thresholds)
            .map(|(m, &t)| activation_count(t, m.len()))
            .collect();
        Hypergraph {
            labels,
            edge_ptr,
            edge_nodes,
            node_ptr,
            node_edges,
            node_arcs,
            thresholds,
            activation,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.thresholds.len()
    }

    /// Number of incidence pairs, `S = sum_i k_i = sum_e |e|`.
    pub fn arc_count(&self) -> usize {
        self.edge_nodes.len()
    }

    pub fn label(&self, i: NodeId) -> u64 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id of an external label.
    pub fn node_of_label(&self, label: u64) -> Option<NodeId> {
        self.labels.binary_search(&label).ok()
    }

    pub fn members(&self, e: EdgeId) -> &[NodeId] {
        &self.edge_nodes[self.edge_ptr[e]..self.edge_ptr[e + 1]]
    }

    /// Arc ids of hyperedge `e`, parallel to [`Self::members`].
    pub fn edge_arcs(&self, e: EdgeId) -> std::ops::Range<ArcId> {
        self.edge_ptr[e]..self.edge_ptr[e + 1]
    }

    pub fn incident_edges(&self, i: NodeId) -> &[EdgeId] {
        &self.node_edges[self.node_ptr[i]..self.node_ptr[i + 1]]
    }

    /// Arc ids of node `i`, parallel to [`Self::incident_edges`].
    pub fn node_arcs(&self, i: NodeId) -> &[ArcId] {
        &self.node_arcs[self.node_ptr[i]..self.node_ptr[i + 1]]
    }

    /// Endpoints of an arc.
    pub fn arc_endpoints(&self, arc: ArcId) -> (NodeId, EdgeId) {
        let e = self.edge_ptr.partition_point(|&p| p <= arc) - 1;
        (self.edge_nodes[arc], e)
    }

    /// Arc id of the incidence pair `(i, e)`, if `i` belongs to `e`.
    pub fn arc(&self, i: NodeId, e: EdgeId) -> Option<ArcId> {
        self.edge_arcs(e).find(|&a| self.edge_nodes[a] == i)
    }

    pub fn contains(&self, e: EdgeId, i: NodeId) -> bool {
        self.members(e).contains(&i)
    }

    pub fn edge_size(&self, e: EdgeId) -> usize {
        self.edge_ptr[e + 1] - self.edge_ptr[e]
    }

    pub fn threshold(&self, e: EdgeId) -> f64 {
        self.thresholds[e]
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Activation count `m = ceil(t * |e|)`.
    pub fn activation_count(&self, e: EdgeId) -> usize {
        self.activation[e]
    }

    /// The common threshold, if every hyperedge shares one.
    pub fn uniform_threshold(&self) -> Option<f64> {
        match self.thresholds.split_first() {
            None => None,
            Some((&t, rest)) => rest.iter().all(|&x| x == t).then_some(t),
        }
    }

    pub fn degree(&self, i: NodeId) -> usize {
        self.node_ptr[i + 1] - self.node_ptr[i]
    }

    pub fn hyperdegree(&self, i: NodeId) -> Result<usize> {
        if i >= self.node_count() {
            return Err(HypergraphError::UnknownNode(i));
        }
        Ok(self.degree(i))
    }

    /// Distinct nodes sharing at least one hyperedge with `i`, sorted.
    pub fn neighbors(&self, i: NodeId) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = self
            .incident_edges(i)
            .iter()
            .flat_map(|&e| self.members(e).iter().copied())
            .filter(|&j| j != i)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Member lists with external labels, in edge order.
    pub fn edge_label_lists(&self) -> Vec<Vec<u64>> {
        (0..self.edge_count())
            .map(|e| self.members(e).iter().map(|&i| self.labels[i]).collect())
            .collect()
    }

    /// Sub-hypergraph on the given node and edge sets. Members of kept edges
    /// that are not kept nodes are dropped; kept edges must stay non-empty.
    fn induced(&self, nodes: &[NodeId], edges: &[EdgeId]) -> Hypergraph {
        let mut remap = vec![usize::MAX; self.node_count()];
        for (new, &old) in nodes.iter().enumerate() {
            remap[old] = new;
        }
        let labels = nodes.iter().map(|&i| self.labels[i]).collect();
        let members: Vec<Vec<NodeId>> = edges
            .iter()
            .map(|&e| {
                self.members(e)
                    .iter()
                    .filter(|&&i| remap[i] != usize::MAX)
                    .map(|&i| remap[i])
                    .collect()
            })
            .collect();
        let thresholds = edges.iter().map(|&e| self.thresholds[e]).collect();
        Hypergraph::from_dense(labels, &members, thresholds)
    }
}

/// A connected component lifted out of a larger hypergraph, with the dense
/// ids it had there.
#[derive(Debug, Clone)]
pub struct Component {
    pub graph: Hypergraph,
    /// `node_origin[new] = old` dense node id.
    pub node_origin: Vec<NodeId>,
    /// `edge_origin[new] = old` dense edge id.
    pub edge_origin: Vec<EdgeId>,
}

/// Largest connected component of the node-hyperedge incidence graph.
///
/// Size counts both nodes and hyperedges. Ties go to the component holding
/// the smallest node id. Thresholds are ignored.
pub fn giant_component(h: &Hypergraph) -> Component {
    let n = h.node_count();
    let mut comp = vec![usize::MAX; n];
    let mut edge_seen = vec![false; h.edge_count()];
    let mut best: Option<(usize, Vec<NodeId>, Vec<EdgeId>)> = None;
    let mut queue = VecDeque::new();

    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut nodes = vec![start];
        let mut edges = Vec::new();
        comp[start] = start;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            for &e in h.incident_edges(i) {
                if edge_seen[e] {
                    continue;
                }
                edge_seen[e] = true;
                edges.push(e);
                for &j in h.members(e) {
                    if comp[j] == usize::MAX {
                        comp[j] = start;
                        nodes.push(j);
                        queue.push_back(j);
                    }
                }
            }
        }
        let size = nodes.len() + edges.len();
        // Components are discovered in order of their minimum node id, so a
        // strict comparison keeps the lowest one on ties.
        if best.as_ref().is_none_or(|(s, _, _)| size > *s) {
            best = Some((size, nodes, edges));
        }
    }

    match best {
        None => Component {
            graph: Hypergraph::from_dense(Vec::new(), &[], Vec::new()),
            node_origin: Vec::new(),
            edge_origin: Vec::new(),
        },
        Some((_, mut nodes, mut edges)) => {
            nodes.sort_unstable();
            edges.sort_unstable();
            Component {
                graph: h.induced(&nodes, &edges),
                node_origin: nodes,
                edge_origin: edges,
            }
        }
    }
}

/// Reusable breadth-first walker over the incidence graph. Visit marks are
/// epoch-stamped so repeated walks cost only what they touch.
#[derive(Debug, Clone)]
pub struct BallWalker {
    node_mark: Vec<u32>,
    edge_mark: Vec<u32>,
    epoch: u32,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
}

impl BallWalker {
    pub fn new(h: &Hypergraph) -> Self {
        BallWalker {
            node_mark: vec![0; h.node_count()],
            edge_mark: vec![0; h.edge_count()],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn bump(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.node_mark.fill(0);
            self.edge_mark.fill(0);
            self.epoch = 1;
        }
    }

    /// Nodes reachable from `roots` in at most `layers` node-edge-node hops,
    /// moving only through nodes and edges accepted by the filters. A root
    /// edge contributes its members as the starting layer. Roots themselves
    /// are not filtered. Output order is discovery order.
    pub fn walk<FN, FE>(
        &mut self,
        h: &Hypergraph,
        roots: &[Element],
        layers: usize,
        pass_node: FN,
        pass_edge: FE,
        out: &mut Vec<NodeId>,
    ) where
        FN: Fn(NodeId) -> bool,
        FE: Fn(EdgeId) -> bool,
    {
        self.bump();
        let epoch = self.epoch;
        out.clear();
        self.frontier.clear();
        for &r in roots {
            match r {
                Element::Node(i) => {
                    if self.node_mark[i] != epoch {
                        self.node_mark[i] = epoch;
                        out.push(i);
                        self.frontier.push(i);
                    }
                }
                Element::Edge(e) => {
                    self.edge_mark[e] = epoch;
                    for &j in h.members(e) {
                        if self.node_mark[j] != epoch && pass_node(j) {
                            self.node_mark[j] = epoch;
                            out.push(j);
                            self.frontier.push(j);
                        }
                    }
                }
            }
        }
        for _ in 0..layers {
            self.next.clear();
            for &i in &self.frontier {
                for &e in h.incident_edges(i) {
                    if self.edge_mark[e] == epoch || !pass_edge(e) {
                        continue;
                    }
                    self.edge_mark[e] = epoch;
                    for &j in h.members(e) {
                        if self.node_mark[j] != epoch && pass_node(j) {
                            self.node_mark[j] = epoch;
                            out.push(j);
                            self.next.push(j);
                        }
                    }
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
            if self.frontier.is_empty() {
                break;
            }
        }
    }
}

/// All nodes within `layers` node-edge-node hops of the roots, sorted.
/// Root nodes are included; a root hyperedge starts from its members.
pub fn bipartite_ball(h: &Hypergraph, roots: &[Element], layers: usize) -> Result<Vec<NodeId>> {
    for &r in roots {
        match r {
            Element::Node(i) if i >= h.node_count() => return Err(HypergraphError::UnknownNode(i)),
            Element::Edge(e) if e >= h.edge_count() => return Err(HypergraphError::UnknownEdge(e)),
            _ => {}
        }
    }
    let mut walker = BallWalker::new(h);
    let mut out = Vec::new();
    walker.walk(h, roots, layers, |_| true, |_| true, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Parses the hyperedge-list text format.
///
/// `#` lines and blank lines are skipped; `%threshold <t>` sets the uniform
/// threshold; every other line is one hyperedge of whitespace-separated node
/// labels. `threshold_override`, when given, wins over the directive.
pub fn load_hyperedge_list<R: BufRead>(
    reader: R,
    threshold_override: Option<f64>,
) -> Result<Hypergraph> {
    let mut directive = None;
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if let Some(rest) = text.strip_prefix('%') {
            let mut parts = rest.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some("threshold"), Some(v), None) => {
                    let t: f64 = v.parse().map_err(|_| HypergraphError::Parse {
                        line: line_no,
                        message: format!("invalid threshold `{v}`"),
                    })?;
                    if directive.replace(t).is_some() {
                        return Err(HypergraphError::Parse {
                            line: line_no,
                            message: "duplicate %threshold directive".into(),
                        });
                    }
                }
                _ => {
                    return Err(HypergraphError::Parse {
                        line: line_no,
                        message: format!("unknown directive `{text}`"),
                    })
                }
            }
            continue;
        }
        let members = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>().map_err(|_| HypergraphError::Parse {
                    line: line_no,
                    message: format!("invalid node id `{tok}`"),
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        edges.push(members);
        lines.push(line_no);
    }
    let t = threshold_override
        .or(directive)
        .ok_or(HypergraphError::MissingThreshold)?;
    build_hypergraph(&edges, Thresholds::Uniform(t)).map_err(|err| match err {
        HypergraphError::DuplicateMember { edge, node } => HypergraphError::Parse {
            line: lines[edge],
            message: format!("node {node} appears more than once"),
        },
        other => other,
    })
}

/// Writes the hyperedge-list text format. `comments` become leading `#` lines.
/// Isolated nodes have no representation in the format and are not written.
pub fn write_hyperedge_list<W: Write>(h: &Hypergraph, mut w: W, comments: &[String]) -> Result<()> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    if h.edge_count() > 0 {
        let t = h
            .uniform_threshold()
            .ok_or(HypergraphError::NonUniformThreshold)?;
        writeln!(w, "%threshold {t}")?;
    }
    let mut buf = String::new();
    for e in 0..h.edge_count() {
        buf.clear();
        for (k, &i) in h.members(e).iter().enumerate() {
            if k > 0 {
                buf.push(' ');
            }
            buf.push_str(&h.labels[i].to_string());
        }
        writeln!(w, "{buf}")?;
    }
    Ok(())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// e1={1,2}, e2={2,3}, e3={3,6}, e4={4,5}, e5={6,7}, all at t = 0.5.
    pub(crate) fn walkthrough() -> Hypergraph {
        build_hypergraph(
            &[vec![1, 2], vec![2, 3], vec![3, 6], vec![4, 5], vec![6, 7]],
            Thresholds::Uniform(0.5),
        )
        .unwrap()
    }

    fn node(h: &Hypergraph, label: u64) -> NodeId {
        h.node_of_label(label).unwrap()
    }

    #[test]
    fn build_two_edges() {
        let h = build_hypergraph(&[vec![1, 2], vec![2, 3]], Thresholds::Uniform(0.5)).unwrap();
        assert_eq!(h.node_count(), 3);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.hyperdegree(node(&h, 2)).unwrap(), 2);
        assert_eq!(h.labels(), &[1, 2, 3]);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            build_hypergraph(&[vec![1, 1]], Thresholds::Uniform(0.5)),
            Err(HypergraphError::DuplicateMember { edge: 0, node: 1 })
        );
        assert_eq!(
            build_hypergraph(&[vec![]], Thresholds::Uniform(0.5)),
            Err(HypergraphError::EmptyEdge { edge: 0 })
        );
        for t in [0.0, 1.0, -0.1, f64::NAN] {
            assert!(matches!(
                build_hypergraph(&[vec![1]], Thresholds::Uniform(t)),
                Err(HypergraphError::ThresholdOutOfRange { .. })
            ));
        }
        assert!(matches!(
            build_hypergraph(&[vec![1]], Thresholds::PerEdge(vec![0.5, 0.5])),
            Err(HypergraphError::ThresholdCount { .. })
        ));
    }

    #[test]
    fn activation_count_three_member_edge() {
        let h = build_hypergraph(&[vec![1, 2, 3]], Thresholds::Uniform(0.6)).unwrap();
        assert_eq!(h.activation_count(0), 2);
    }

    #[test]
    fn activation_count_matches_rational_table() {
        // Oracle: smallest m with m/N >= t, in integer arithmetic on t = p/10.
        for (t, p) in [(0.5, 5u64), (0.6, 6), (0.8, 8)] {
            for size in 1..=10u64 {
                let oracle = (1..=size).find(|&m| 10 * m >= p * size).unwrap();
                assert_eq!(
                    activation_count(t, size as usize) as u64,
                    oracle,
                    "t={t} N={size}"
                );
            }
        }
    }

    #[test]
    fn hyperdegrees() {
        let h = walkthrough();
        assert_eq!(h.hyperdegree(node(&h, 3)).unwrap(), 2);
        assert_eq!(h.hyperdegree(99), Err(HypergraphError::UnknownNode(99)));

        let mut b = HypergraphBuilder::new();
        b.node(9).edge([1, 2], 0.5);
        let h = b.build().unwrap();
        assert_eq!(h.hyperdegree(node(&h, 9)).unwrap(), 0);
    }

    #[test]
    fn incidence_is_symmetric() {
        let h = walkthrough();
        let total: usize = (0..h.node_count()).map(|i| h.degree(i)).sum();
        assert_eq!(total, h.arc_count());
        for e in 0..h.edge_count() {
            for (&i, arc) in h.members(e).iter().zip(h.edge_arcs(e)) {
                assert!(h.incident_edges(i).contains(&e));
                assert_eq!(h.arc_endpoints(arc), (i, e));
                assert_eq!(h.arc(i, e), Some(arc));
            }
        }
        for i in 0..h.node_count() {
            for (&e, &arc) in h.incident_edges(i).iter().zip(h.node_arcs(i)) {
                assert!(h.contains(e, i));
                assert_eq!(h.arc_endpoints(arc), (i, e));
            }
        }
    }

    #[test]
    fn giant_component_picks_larger_piece() {
        let h = build_hypergraph(&[vec![1, 2], vec![3, 4, 5]], Thresholds::Uniform(0.5)).unwrap();
        let g = giant_component(&h);
        assert_eq!(g.graph.labels(), &[3, 4, 5]);
        assert_eq!(g.graph.edge_count(), 1);
        assert_eq!(g.edge_origin, vec![1]);
    }

    #[test]
    fn giant_component_ties_prefer_lowest_node() {
        let h = build_hypergraph(&[vec![5, 6], vec![1, 2]], Thresholds::Uniform(0.5)).unwrap();
        assert_eq!(giant_component(&h).graph.labels(), &[1, 2]);
    }

    #[test]
    fn giant_component_of_connected_and_empty() {
        let h = build_hypergraph(&[vec![1, 2], vec![2, 3]], Thresholds::Uniform(0.5)).unwrap();
        let g = giant_component(&h);
        assert_eq!(g.graph, h);

        let empty = build_hypergraph(&[], Thresholds::Uniform(0.5)).unwrap();
        assert_eq!(giant_component(&empty).graph.node_count(), 0);
    }

    #[test]
    fn ball_examples() {
        let h = walkthrough();
        let labels = |v: Vec<NodeId>| v.into_iter().map(|i| h.label(i)).collect::<Vec<_>>();
        let three = Element::Node(node(&h, 3));
        assert_eq!(labels(bipartite_ball(&h, &[three], 0).unwrap()), vec![3]);
        assert_eq!(
            labels(bipartite_ball(&h, &[three], 1).unwrap()),
            vec![2, 3, 6]
        );
        // e2 is the second edge
        assert_eq!(
            labels(bipartite_ball(&h, &[Element::Edge(1)], 1).unwrap()),
            vec![1, 2, 3, 6]
        );
        assert_eq!(
            bipartite_ball(&h, &[Element::Edge(17)], 1),
            Err(HypergraphError::UnknownEdge(17))
        );
    }

    #[test]
    fn load_examples() {
        let h = load_hyperedge_list("1 2\n2 3\n".as_bytes(), Some(0.5)).unwrap();
        assert_eq!((h.node_count(), h.edge_count()), (3, 2));

        let h =
            load_hyperedge_list("# comment\n\n%threshold 0.6\n1 2 3\n".as_bytes(), None).unwrap();
        assert_eq!((h.node_count(), h.edge_count()), (3, 1));
        assert_eq!(h.threshold(0), 0.6);

        let h = load_hyperedge_list("%threshold 0.6\n1 2\n".as_bytes(), Some(0.8)).unwrap();
        assert_eq!(h.threshold(0), 0.8);
    }

    #[test]
    fn load_errors_carry_line_numbers() {
        let err = load_hyperedge_list("1 2\n# x\n3 x\n".as_bytes(), Some(0.5)).unwrap_err();
        assert!(
            matches!(err, HypergraphError::Parse { line: 3, .. }),
            "{err:?}"
        );
        let err = load_hyperedge_list("1 2\n4 4\n".as_bytes(), Some(0.5)).unwrap_err();
        assert!(
            matches!(err, HypergraphError::Parse { line: 2, .. }),
            "{err:?}"
        );
        let err = load_hyperedge_list("%bogus 1\n".as_bytes(), Some(0.5)).unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 1, .. }));
        assert_eq!(
            load_hyperedge_list("1 2\n".as_bytes(), None).unwrap_err(),
            HypergraphError::MissingThreshold
        );
    }

    #[test]
    fn write_then_load() {
        let h = walkthrough();
        let mut buf = Vec::new();
        write_hyperedge_list(&h, &mut buf, &["walkthrough".into()]).unwrap();
        let back = load_hyperedge_list(buf.as_slice(), None).unwrap();
        assert_eq!(back, h);
    }
}
