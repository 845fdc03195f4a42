//! Hypergraph Collective Influence.
//!
//! `HCI_n(i)` counts the subcritical paths that start at an inactive node
//! `i` and have between 1 and `n + 1` arcs, walking only over inactive nodes
//! and hyperedges. A path alternates node -> hyperedge -> node -> ...; it may
//! cross a hyperedge `e` from `u` to `j` only when `e` is one activation
//! short of firing (`I = 1`), and may leave an interior node `j` through `e'`
//! only when `j` is not a seed and has no other active hyperedge (`M = 1`).
//! Nodes and hyperedges never repeat along a path.
//!
//! Orders 0, 1 and 2 have closed forms ([`hci0`], [`hci1`], [`hci2`]); any
//! order is available through [`hci_n`], which counts paths depth-first.
//! [`enumerate_subcritical_paths`] materializes the paths through the message
//! indicators and serves as the reference for both.

use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::cascade::CascadeState;
use crate::hypergraph::{EdgeId, Element, Hypergraph, NodeId};
use crate::msgpass::{indicator_i, indicator_m, MessageState};

/// Largest order accepted by default.
pub const DEFAULT_MAX_ORDER: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HciError {
    #[error("order {requested} exceeds the configured cap {cap}")]
    DepthTooLarge { requested: usize, cap: usize },
    #[error("path length must be at least 1")]
    ZeroLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HciTable {
    pub order: usize,
    pub scores: Vec<u64>,
}

impl HciTable {
    pub fn score(&self, i: NodeId) -> u64 {
        self.scores[i]
    }

    /// CSV `node,hci` by node label, in id order.
    pub fn write_csv<W: Write>(&self, h: &Hypergraph, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", &format!("hci{}", self.order)])?;
        for (i, s) in self.scores.iter().enumerate() {
            out.write_record([h.label(i).to_string(), s.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `e` can be crossed between two inactive members.
#[inline]
fn subcritical(h: &Hypergraph, state: &CascadeState, e: EdgeId) -> bool {
    state.active_members(e) + 1 == h.activation_count(e)
}

/// An interior inactive node `j` passes activation on: not a seed and no
/// active hyperedge besides the (inactive) ones on the path.
#[inline]
fn relays(state: &CascadeState, j: NodeId) -> bool {
    !state.is_seed(j) && state.active_incident(j) == 0
}

#[inline]
fn open_degree(h: &Hypergraph, state: &CascadeState, j: NodeId) -> u64 {
    h.incident_edges(j)
        .iter()
        .filter(|&&e| !state.edge_active(e))
        .count() as u64
}

/// Length-1 paths: inactive hyperedges at inactive `i`.
pub fn score0(h: &Hypergraph, state: &CascadeState, i: NodeId) -> u64 {
    if state.node_active(i) {
        0
    } else {
        open_degree(h, state, i)
    }
}

/// Paths of length at most 3 starting at `i`, split by length.
fn strata3(h: &Hypergraph, state: &CascadeState, i: NodeId) -> [u64; 3] {
    let mut out = [0; 3];
    if state.node_active(i) {
        return out;
    }
    for &e in h.incident_edges(i) {
        if state.edge_active(e) {
            continue;
        }
        out[0] += 1;
        if !subcritical(h, state, e) {
            continue;
        }
        for &j in h.members(e) {
            if j == i || state.node_active(j) {
                continue;
            }
            out[1] += 1;
            if relays(state, j) {
                out[2] += open_degree(h, state, j) - 1;
            }
        }
    }
    out
}

pub fn score1(h: &Hypergraph, state: &CascadeState, i: NodeId) -> u64 {
    let s = strata3(h, state, i);
    s[0] + s[1]
}

pub fn score2(h: &Hypergraph, state: &CascadeState, i: NodeId) -> u64 {
    strata3(h, state, i).iter().sum()
}

fn table(h: &Hypergraph, order: usize, f: impl FnMut(NodeId) -> u64) -> HciTable {
    HciTable {
        order,
        scores: (0..h.node_count()).map(f).collect(),
    }
}

/// Masked hyperdegree.
pub fn hci0(h: &Hypergraph, state: &CascadeState) -> HciTable {
    table(h, 0, |i| score0(h, state, i))
}

pub fn hci1(h: &Hypergraph, state: &CascadeState) -> HciTable {
    table(h, 1, |i| score1(h, state, i))
}

/// Order 2; seeds are read from `state`.
pub fn hci2(h: &Hypergraph, state: &CascadeState) -> HciTable {
    table(h, 2, |i| score2(h, state, i))
}

/// Depth-first path counter with reusable on-path marks.
#[derive(Debug, Clone)]
pub struct PathCounter {
    node_on_path: Vec<bool>,
    edge_on_path: Vec<bool>,
}

impl PathCounter {
    pub fn new(h: &Hypergraph) -> Self {
        PathCounter {
            node_on_path: vec![false; h.node_count()],
            edge_on_path: vec![false; h.edge_count()],
        }
    }

    /// Subcritical paths from `i` with 1 to `max_len` arcs.
    pub fn count(
        &mut self,
        h: &Hypergraph,
        state: &CascadeState,
        i: NodeId,
        max_len: usize,
    ) -> u64 {
        if state.node_active(i) || max_len == 0 {
            return 0;
        }
        self.node_on_path[i] = true;
        let total = self.leave_node(h, state, i, true, 0, max_len);
        self.node_on_path[i] = false;
        total
    }

    fn leave_node(
        &mut self,
        h: &Hypergraph,
        state: &CascadeState,
        j: NodeId,
        start: bool,
        len: usize,
        max_len: usize,
    ) -> u64 {
        if len == max_len || (!start && !relays(state, j)) {
            return 0;
        }
        let mut total = 0;
        for &e in h.incident_edges(j) {
            if state.edge_active(e) || self.edge_on_path[e] {
                continue;
            }
            total += 1;
            if len + 1 < max_len && subcritical(h, state, e) {
                self.edge_on_path[e] = true;
                total += self.cross_edge(h, state, e, len + 1, max_len);
                self.edge_on_path[e] = false;
            }
        }
        total
    }

    fn cross_edge(
        &mut self,
        h: &Hypergraph,
        state: &CascadeState,
        e: EdgeId,
        len: usize,
        max_len: usize,
    ) -> u64 {
        let mut total = 0;
        for &j in h.members(e) {
            if state.node_active(j) || self.node_on_path[j] {
                continue;
            }
            total += 1;
            self.node_on_path[j] = true;
            total += self.leave_node(h, state, j, false, len + 1, max_len);
            self.node_on_path[j] = false;
        }
        total
    }
}

/// `HCI_n` for a single node. Orders up to 2 use the closed forms.
pub fn node_score(
    h: &Hypergraph,
    state: &CascadeState,
    i: NodeId,
    order: usize,
    counter: &mut PathCounter,
) -> u64 {
    match order {
        0 => score0(h, state, i),
        1 => score1(h, state, i),
        2 => score2(h, state, i),
        n => counter.count(h, state, i, n + 1),
    }
}

pub fn hci_n(h: &Hypergraph, state: &CascadeState, n: usize) -> Result<HciTable, HciError> {
    hci_n_capped(h, state, n, DEFAULT_MAX_ORDER)
}

/// [`hci_n`] with an explicit order cap. Always counts depth-first.
pub fn hci_n_capped(
    h: &Hypergraph,
    state: &CascadeState,
    n: usize,
    cap: usize,
) -> Result<HciTable, HciError> {
    if n > cap {
        return Err(HciError::DepthTooLarge { requested: n, cap });
    }
    let mut counter = PathCounter::new(h);
    Ok(table(h, n, |i| counter.count(h, state, i, n + 1)))
}

/// Alternating node/hyperedge sequence starting at a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubcriticalPath {
    pub elements: Vec<Element>,
}

impl SubcriticalPath {
    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.elements.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Every subcritical path from `i` with 1 to `max_len` arcs, checked through
/// the message-passing indicators on the state's message view.
pub fn enumerate_subcritical_paths(
    h: &Hypergraph,
    state: &CascadeState,
    i: NodeId,
    max_len: usize,
) -> Result<Vec<SubcriticalPath>, HciError> {
    if max_len == 0 {
        return Err(HciError::ZeroLength);
    }
    if max_len > DEFAULT_MAX_ORDER + 1 {
        return Err(HciError::DepthTooLarge {
            requested: max_len - 1,
            cap: DEFAULT_MAX_ORDER,
        });
    }
    let mut out = Vec::new();
    if state.node_active(i) {
        return Ok(out);
    }
    let messages = MessageState::from_cascade(h, state);
    let mut path = vec![Element::Node(i)];
    extend(h, state, &messages, &mut path, max_len, &mut out);
    Ok(out)
}

fn extend(
    h: &Hypergraph,
    state: &CascadeState,
    messages: &MessageState,
    path: &mut Vec<Element>,
    max_len: usize,
    out: &mut Vec<SubcriticalPath>,
) {
    if path.len() > max_len {
        return;
    }
    match *path.last().expect("path starts at a node") {
        Element::Node(j) => {
            let came_from = match path.len() {
                1 => None,
                n => match path[n - 2] {
                    Element::Edge(e) => Some(e),
                    Element::Node(_) => unreachable!("paths alternate"),
                },
            };
            for &next in h.incident_edges(j) {
                if state.edge_active(next) || path.contains(&Element::Edge(next)) {
                    continue;
                }
                if let Some(prev) = came_from {
                    let gate = !messages.seeds.contains(j)
                        && indicator_m(h, messages, prev, j, next)
                            .expect("consecutive path elements are incident");
                    if !gate {
                        continue;
                    }
                }
                path.push(Element::Edge(next));
                out.push(SubcriticalPath {
                    elements: path.clone(),
                });
                extend(h, state, messages, path, max_len, out);
                path.pop();
            }
        }
        Element::Edge(e) => {
            let from = match path[path.len() - 2] {
                Element::Node(u) => u,
                Element::Edge(_) => unreachable!("paths alternate"),
            };
            for &to in h.members(e) {
                if to == from || state.node_active(to) || path.contains(&Element::Node(to)) {
                    continue;
                }
                if !indicator_i(h, messages, from, e, to)
                    .expect("consecutive path elements are incident")
                {
                    continue;
                }
                path.push(Element::Node(to));
                out.push(SubcriticalPath {
                    elements: path.clone(),
                });
                extend(h, state, messages, path, max_len, out);
                path.pop();
            }
        }
    }
}

/// Path counts by length, index 0 holding length-1 paths.
pub fn strata(paths: &[SubcriticalPath], max_len: usize) -> Vec<u64> {
    let mut out = vec![0; max_len];
    for p in paths {
        out[p.len() - 1] += 1;
    }
    out
}
