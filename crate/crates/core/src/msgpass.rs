//! Cavity message passing on directed node/hyperedge arcs.
//!
//! Every incidence pair `(i, e)` carries two binary messages:
//! `v[i -> e]`, node `i` active with `e` removed, and `v[e -> i]`, hyperedge
//! `e` active with `i` removed (its activation count is left unchanged).
//! One [`update_step`] recomputes both directions from the previous state:
//!
//! ```text
//! v[i -> e]' = n_i  or  any(v[b -> i] for b in edges(i) \ e)
//! v[e -> i]' = #{p in e \ i : v[p -> e]} >= m_e
//! ```
//!
//! The count form equals the product over all `m_e`-subsets for binary
//! messages and avoids enumerating them.

use std::io::Write;

use thiserror::Error;

use crate::cascade::{CascadeState, SeedVector};
use crate::hypergraph::{ArcId, EdgeId, Hypergraph, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum MsgPassError {
    #[error("seed vector has {got} entries, hypergraph has {expected} nodes")]
    SizeMismatch { expected: usize, got: usize },
    #[error("messages still changing after {0} steps")]
    NonConvergence(usize),
    #[error("message state is not a fixed point")]
    NotAFixedPoint,
    #[error("node {node} is not a member of hyperedge {edge}")]
    NotIncident { node: NodeId, edge: EdgeId },
    #[error("indicator needs two distinct nodes, got {0} twice")]
    SameNode(NodeId),
    #[error("indicator needs two distinct hyperedges, got {0} twice")]
    SameEdge(EdgeId),
}

pub type Result<T> = std::result::Result<T, MsgPassError>;

/// Arc numbering shared by both message directions: one id per incidence
/// pair, `S` in total.
#[derive(Debug, Clone, Copy)]
pub struct ArcIndex<'h> {
    h: &'h Hypergraph,
}

impl<'h> ArcIndex<'h> {
    pub fn new(h: &'h Hypergraph) -> Self {
        ArcIndex { h }
    }

    /// `S`, arcs per direction.
    pub fn len(&self) -> usize {
        self.h.arc_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arc(&self, i: NodeId, e: EdgeId) -> Result<ArcId> {
        self.h
            .arc(i, e)
            .ok_or(MsgPassError::NotIncident { node: i, edge: e })
    }

    pub fn endpoints(&self, arc: ArcId) -> (NodeId, EdgeId) {
        self.h.arc_endpoints(arc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageState {
    pub seeds: SeedVector,
    /// `v[i -> e]` by arc id.
    pub node_to_edge: Vec<bool>,
    /// `v[e -> i]` by arc id.
    pub edge_to_node: Vec<bool>,
    /// Number of updates applied since initialization.
    pub t: usize,
}

impl MessageState {
    /// Messages read off a cascade state: a node sends 1 iff it is active, a
    /// hyperedge sends 1 iff it is active. This is the view the collective
    /// influence indicators are evaluated on.
    pub fn from_cascade(h: &Hypergraph, state: &CascadeState) -> Self {
        let mut node_to_edge = vec![false; h.arc_count()];
        let mut edge_to_node = vec![false; h.arc_count()];
        for e in 0..h.edge_count() {
            for (arc, &i) in h.edge_arcs(e).zip(h.members(e)) {
                node_to_edge[arc] = state.node_active(i);
                edge_to_node[arc] = state.edge_active(e);
            }
        }
        MessageState {
            seeds: state.seeds().clone(),
            node_to_edge,
            edge_to_node,
            t: 0,
        }
    }

    pub fn node_to_edge(&self, h: &Hypergraph, i: NodeId, e: EdgeId) -> Result<bool> {
        Ok(self.node_to_edge[ArcIndex::new(h).arc(i, e)?])
    }

    pub fn edge_to_node(&self, h: &Hypergraph, e: EdgeId, i: NodeId) -> Result<bool> {
        Ok(self.edge_to_node[ArcIndex::new(h).arc(i, e)?])
    }
}

/// `v[i -> e] = n_i`, `v[e -> i] = 0`.
pub fn init_messages(h: &Hypergraph, seeds: &SeedVector) -> Result<MessageState> {
    if seeds.len() != h.node_count() {
        return Err(MsgPassError::SizeMismatch {
            expected: h.node_count(),
            got: seeds.len(),
        });
    }
    let mut node_to_edge = vec![false; h.arc_count()];
    for i in seeds.nodes() {
        for &arc in h.node_arcs(i) {
            node_to_edge[arc] = true;
        }
    }
    Ok(MessageState {
        seeds: seeds.clone(),
        node_to_edge,
        edge_to_node: vec![false; h.arc_count()],
        t: 0,
    })
}

/// One synchronous application of the cavity update to every arc.
pub fn update_step(h: &Hypergraph, state: &MessageState) -> MessageState {
    let mut node_to_edge = vec![false; h.arc_count()];
    let mut edge_to_node = vec![false; h.arc_count()];

    for i in 0..h.node_count() {
        let arcs = h.node_arcs(i);
        if state.seeds.contains(i) {
            for &arc in arcs {
                node_to_edge[arc] = true;
            }
            continue;
        }
        let incoming = arcs.iter().filter(|&&a| state.edge_to_node[a]).count();
        for &arc in arcs {
            node_to_edge[arc] = incoming > usize::from(state.edge_to_node[arc]);
        }
    }

    for e in 0..h.edge_count() {
        let m = h.activation_count(e);
        let arcs = h.edge_arcs(e);
        let incoming = arcs.clone().filter(|&a| state.node_to_edge[a]).count();
        for arc in arcs {
            edge_to_node[arc] = incoming - usize::from(state.node_to_edge[arc]) >= m;
        }
    }

    MessageState {
        seeds: state.seeds.clone(),
        node_to_edge,
        edge_to_node,
        t: state.t + 1,
    }
}

/// Iterates [`update_step`] from [`init_messages`] until nothing changes.
/// `t` of the result is the number of updates that changed something.
pub fn fixed_point(h: &Hypergraph, seeds: &SeedVector) -> Result<MessageState> {
    let mut state = init_messages(h, seeds)?;
    // Each message switches on at most once and every switch is caused by a
    // switch one step earlier, so 2S + 2 updates bound any run.
    let cap = 2 * h.arc_count() + 2;
    for _ in 0..=cap {
        let next = update_step(h, &state);
        if next.node_to_edge == state.node_to_edge && next.edge_to_node == state.edge_to_node {
            return Ok(state);
        }
        state = next;
    }
    Err(MsgPassError::NonConvergence(cap))
}

/// Final node and hyperedge states implied by a fixed point.
pub fn final_state(h: &Hypergraph, fp: &MessageState) -> Result<CascadeState> {
    if fp.seeds.len() != h.node_count() || fp.node_to_edge.len() != h.arc_count() {
        return Err(MsgPassError::SizeMismatch {
            expected: h.node_count(),
            got: fp.seeds.len(),
        });
    }
    let next = update_step(h, fp);
    if next.node_to_edge != fp.node_to_edge || next.edge_to_node != fp.edge_to_node {
        return Err(MsgPassError::NotAFixedPoint);
    }
    let node_active = (0..h.node_count())
        .map(|i| fp.seeds.contains(i) || h.node_arcs(i).iter().any(|&a| fp.edge_to_node[a]))
        .collect();
    let edge_active = (0..h.edge_count())
        .map(|e| h.edge_arcs(e).filter(|&a| fp.node_to_edge[a]).count() >= h.activation_count(e))
        .collect();
    Ok(CascadeState::from_flags(
        h,
        fp.seeds.clone(),
        node_active,
        edge_active,
    ))
}

/// Activation scale: total number of switched-on messages in both directions.
pub fn message_norm(fp: &MessageState) -> f64 {
    let on = fp
        .node_to_edge
        .iter()
        .chain(&fp.edge_to_node)
        .filter(|&&v| v)
        .count();
    on as f64
}

fn check_member(h: &Hypergraph, i: NodeId, e: EdgeId) -> Result<()> {
    if e < h.edge_count() && i < h.node_count() && h.contains(e, i) {
        Ok(())
    } else {
        Err(MsgPassError::NotIncident { node: i, edge: e })
    }
}

/// Active hyperedges reaching `i` other than `from` and `to`.
pub fn indicator_a(
    h: &Hypergraph,
    state: &MessageState,
    from: EdgeId,
    i: NodeId,
    to: EdgeId,
) -> Result<usize> {
    check_member(h, i, from)?;
    check_member(h, i, to)?;
    if from == to {
        return Err(MsgPassError::SameEdge(from));
    }
    Ok(h.incident_edges(i)
        .iter()
        .zip(h.node_arcs(i))
        .filter(|(&e, &arc)| e != from && e != to && state.edge_to_node[arc])
        .count())
}

/// Active members reaching `e` other than `from` and `to`.
pub fn indicator_b(
    h: &Hypergraph,
    state: &MessageState,
    from: NodeId,
    e: EdgeId,
    to: NodeId,
) -> Result<usize> {
    check_member(h, from, e)?;
    check_member(h, to, e)?;
    if from == to {
        return Err(MsgPassError::SameNode(from));
    }
    Ok(h.members(e)
        .iter()
        .zip(h.edge_arcs(e))
        .filter(|(&p, arc)| p != from && p != to && state.node_to_edge[*arc])
        .count())
}

/// Node-side subcritical indicator: `i` has no other active hyperedge, so
/// the activation of `from` alone decides it. The non-seed factor is left to
/// callers.
pub fn indicator_m(
    h: &Hypergraph,
    state: &MessageState,
    from: EdgeId,
    i: NodeId,
    to: EdgeId,
) -> Result<bool> {
    Ok(indicator_a(h, state, from, i, to)? == 0)
}

/// Hyperedge-side subcritical indicator: `e` is exactly one activation
/// (that of `from`) short of firing towards `to`.
pub fn indicator_i(
    h: &Hypergraph,
    state: &MessageState,
    from: NodeId,
    e: EdgeId,
    to: NodeId,
) -> Result<bool> {
    let b = indicator_b(h, state, from, e, to)?;
    Ok(b + 1 == h.activation_count(e))
}

/// CSV dump `kind,source,target,value`. Nodes are written by label, edges by
/// dense index.
pub fn write_messages_csv<W: Write>(h: &Hypergraph, state: &MessageState, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["kind", "source", "target", "value"])?;
    for e in 0..h.edge_count() {
        for (arc, &i) in h.edge_arcs(e).zip(h.members(e)) {
            let label = h.label(i).to_string();
            out.write_record([
                "node_to_edge",
                &label,
                &e.to_string(),
                if state.node_to_edge[arc] { "1" } else { "0" },
            ])?;
            out.write_record([
                "edge_to_node",
                &e.to_string(),
                &label,
                if state.edge_to_node[arc] { "1" } else { "0" },
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
