//! Synchronous threshold cascades.
//!
//! Odd steps activate every inactive hyperedge whose active-member count has
//! reached its activation count; even steps activate every inactive member of
//! an active hyperedge. Seeds are active at step 0 and count toward hyperedge
//! activation immediately.
//!
//! [`CascadeState`] can also be driven incrementally with
//! [`CascadeState::add_seed`]: by monotonicity the final state equals a fresh
//! run from the accumulated seed set. Selectors rely on this to "remove"
//! activated structure by masking it.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{EdgeId, Element, Hypergraph, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum CascadeError {
    #[error("seed vector has {got} entries, hypergraph has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("hyperedge {0} is already active")]
    EdgeAlreadyActive(EdgeId),
}

/// Seed indicator over nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedVector {
    seeded: Vec<bool>,
    count: usize,
}

impl SeedVector {
    pub fn empty(node_count: usize) -> Self {
        SeedVector {
            seeded: vec![false; node_count],
            count: 0,
        }
    }

    pub fn all(node_count: usize) -> Self {
        SeedVector {
            seeded: vec![true; node_count],
            count: node_count,
        }
    }

    pub fn from_nodes(node_count: usize, nodes: &[NodeId]) -> Self {
        let mut s = Self::empty(node_count);
        for &i in nodes {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: NodeId) -> bool {
        let fresh = !self.seeded[i];
        if fresh {
            self.seeded[i] = true;
            self.count += 1;
        }
        fresh
    }

    pub fn contains(&self, i: NodeId) -> bool {
        self.seeded[i]
    }

    pub fn len(&self) -> usize {
        self.seeded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeded.is_empty()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Seed fraction `q`.
    pub fn fraction(&self) -> f64 {
        if self.seeded.is_empty() {
            0.0
        } else {
            self.count as f64 / self.seeded.len() as f64
        }
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.seeded
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.seeded
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
    }
}

/// Elements newly activated at time `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub t: usize,
    pub activated: Vec<Element>,
}

/// Elements activated by one propagation, in activation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Propagation {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    /// Last step at which something activated (0 if only seeds changed).
    pub steps: usize,
    /// Per-step record, filled only when requested.
    pub trace: Vec<TraceStep>,
}

impl Propagation {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    /// Every activated node and edge, usable as ball roots.
    pub fn elements(&self) -> Vec<Element> {
        self.nodes
            .iter()
            .map(|&i| Element::Node(i))
            .chain(self.edges.iter().map(|&e| Element::Edge(e)))
            .collect()
    }
}

/// Activation flags plus the bookkeeping needed to extend a cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeState {
    node_active: Vec<bool>,
    edge_active: Vec<bool>,
    seeds: SeedVector,
    /// Active members per hyperedge.
    active_members: Vec<usize>,
    /// Active incident hyperedges per node.
    active_incident: Vec<usize>,
    active_nodes: usize,
    active_edges: usize,
    /// Trace of the run that produced this state, when recorded.
    pub trace: Vec<TraceStep>,
    pub steps: usize,
}

impl CascadeState {
    /// Nothing active.
    pub fn new(h: &Hypergraph) -> Self {
        CascadeState {
            node_active: vec![false; h.node_count()],
            edge_active: vec![false; h.edge_count()],
            seeds: SeedVector::empty(h.node_count()),
            active_members: vec![0; h.edge_count()],
            active_incident: vec![0; h.node_count()],
            active_nodes: 0,
            active_edges: 0,
            trace: Vec::new(),
            steps: 0,
        }
    }

    pub fn node_active(&self, i: NodeId) -> bool {
        self.node_active[i]
    }

    pub fn edge_active(&self, e: EdgeId) -> bool {
        self.edge_active[e]
    }

    pub fn node_flags(&self) -> &[bool] {
        &self.node_active
    }

    pub fn edge_flags(&self) -> &[bool] {
        &self.edge_active
    }

    pub fn seeds(&self) -> &SeedVector {
        &self.seeds
    }

    pub fn is_seed(&self, i: NodeId) -> bool {
        self.seeds.contains(i)
    }

    pub fn active_node_count(&self) -> usize {
        self.active_nodes
    }

    pub fn active_edge_count(&self) -> usize {
        self.active_edges
    }

    /// Number of active members of `e`.
    pub fn active_members(&self, e: EdgeId) -> usize {
        self.active_members[e]
    }

    /// Number of active hyperedges incident to `i`.
    pub fn active_incident(&self, i: NodeId) -> usize {
        self.active_incident[i]
    }

    /// Fraction of active nodes, `Q`.
    pub fn activation_fraction(&self) -> f64 {
        if self.node_active.is_empty() {
            0.0
        } else {
            self.active_nodes as f64 / self.node_active.len() as f64
        }
    }

    /// Hyperedge `e` restricted to its inactive members needs this many more
    /// activations; zero means it is already satisfiable.
    pub fn residual_requirement(&self, h: &Hypergraph, e: EdgeId) -> Result<usize, CascadeError> {
        if self.edge_active[e] {
            return Err(CascadeError::EdgeAlreadyActive(e));
        }
        Ok(h.activation_count(e).saturating_sub(self.active_members[e]))
    }

    /// State with the given flags; counts are derived from them. The flags
    /// need not describe a quiescent cascade.
    pub fn from_flags(
        h: &Hypergraph,
        seeds: SeedVector,
        node_active: Vec<bool>,
        edge_active: Vec<bool>,
    ) -> Self {
        let mut state = CascadeState::new(h);
        state.seeds = seeds;
        for (i, _) in node_active.iter().enumerate().filter(|(_, &a)| a) {
            state.activate_node(h, i);
        }
        for (e, _) in edge_active.iter().enumerate().filter(|(_, &a)| a) {
            state.activate_edge(h, e);
        }
        state
    }

    fn activate_node(&mut self, h: &Hypergraph, i: NodeId) {
        self.node_active[i] = true;
        self.active_nodes += 1;
        for &e in h.incident_edges(i) {
            self.active_members[e] += 1;
        }
    }

    fn activate_edge(&mut self, h: &Hypergraph, e: EdgeId) {
        self.edge_active[e] = true;
        self.active_edges += 1;
        for &j in h.members(e) {
            self.active_incident[j] += 1;
        }
    }

    /// Seeds `i` and runs the cascade it triggers to quiescence. Seeding an
    /// already active node only records it as a seed.
    pub fn add_seed(&mut self, h: &Hypergraph, i: NodeId, record_trace: bool) -> Propagation {
        self.add_seeds(h, &[i], record_trace)
    }

    /// Seeds every node in `nodes` at step 0 and propagates synchronously.
    pub fn add_seeds(
        &mut self,
        h: &Hypergraph,
        nodes: &[NodeId],
        record_trace: bool,
    ) -> Propagation {
        let mut out = Propagation::default();
        let mut frontier = Vec::new();
        for &i in nodes {
            self.seeds.insert(i);
            if !self.node_active[i] {
                self.activate_node(h, i);
                frontier.push(i);
            }
        }
        if frontier.is_empty() {
            return out;
        }
        if record_trace {
            out.trace.push(TraceStep {
                t: 0,
                activated: frontier.iter().map(|&i| Element::Node(i)).collect(),
            });
        }
        out.nodes.extend_from_slice(&frontier);

        let mut t = 0;
        let mut new_edges = Vec::new();
        loop {
            new_edges.clear();
            for &i in &frontier {
                for &e in h.incident_edges(i) {
                    if !self.edge_active[e] && self.active_members[e] >= h.activation_count(e) {
                        self.activate_edge(h, e);
                        new_edges.push(e);
                    }
                }
            }
            if new_edges.is_empty() {
                break;
            }
            t += 1;
            if record_trace {
                out.trace.push(TraceStep {
                    t,
                    activated: new_edges.iter().map(|&e| Element::Edge(e)).collect(),
                });
            }
            out.edges.extend_from_slice(&new_edges);

            frontier.clear();
            for &e in &new_edges {
                for &j in h.members(e) {
                    if !self.node_active[j] {
                        self.activate_node(h, j);
                        frontier.push(j);
                    }
                }
            }
            t += 1;
            if frontier.is_empty() {
                t -= 1;
                break;
            }
            if record_trace {
                out.trace.push(TraceStep {
                    t,
                    activated: frontier.iter().map(|&i| Element::Node(i)).collect(),
                });
            }
            out.nodes.extend_from_slice(&frontier);
        }
        out.steps = t;
        out
    }
}

/// Outcome of a full cascade from a seed set.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeResult {
    pub state: CascadeState,
}

impl CascadeResult {
    /// Final active-node fraction `Q(q)`.
    pub fn activation_fraction(&self) -> f64 {
        self.state.activation_fraction()
    }
}

pub fn run_cascade(
    h: &Hypergraph,
    seeds: &SeedVector,
    record_trace: bool,
) -> Result<CascadeResult, CascadeError> {
    if seeds.len() != h.node_count() {
        return Err(CascadeError::SizeMismatch {
            expected: h.node_count(),
            got: seeds.len(),
        });
    }
    let mut state = CascadeState::new(h);
    let nodes: Vec<NodeId> = seeds.nodes().collect();
    let run = state.add_seeds(h, &nodes, record_trace);
    state.trace = run.trace;
    state.steps = run.steps;
    Ok(CascadeResult { state })
}

/// Writes a trace as CSV `t,kind,id`; node ids are external labels, edge ids
/// are dense indices.
pub fn write_trace_csv<W: Write>(h: &Hypergraph, trace: &[TraceStep], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["t", "kind", "id"])?;
    for step in trace {
        for el in &step.activated {
            let (kind, id) = match *el {
                Element::Node(i) => ("node", h.label(i)),
                Element::Edge(e) => ("edge", e as u64),
            };
            out.write_record([step.t.to_string(), kind.to_string(), id.to_string()])?;
        }
    }
    out.flush()?;
    Ok(())
}
