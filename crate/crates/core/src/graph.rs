//! Weighted multigraphs and deterministic shortest paths.
//!
//! Undirected edges are stored as two opposite arcs. Parallel arcs are kept;
//! every query relaxes only the cheapest arc between an ordered node pair.
//!
//! Among paths of equal cost (absolute tolerance [`EPS`]) the one with fewer
//! arcs wins, and among those the lexicographically smallest node sequence.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::sync::OnceLock;

use thiserror::Error;

use crate::EPS;

/// Index of a node in its owning graph.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: f64,
}

impl Arc {
    pub fn new(from: NodeId, to: NodeId, weight: f64) -> Self {
        Self { from, to, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("self-loop on node {0} is not allowed")]
    SelfLoop(NodeId),
    #[error("arc ({from}, {to}) has invalid weight {weight}")]
    InvalidWeight { from: NodeId, to: NodeId, weight: f64 },
}

/// An immutable directed multigraph with non-negative arc weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    arcs: Vec<Arc>,
    symmetric: bool,
    // cheapest arc per (node, neighbour), sorted by neighbour id
    out: Vec<Vec<(NodeId, f64)>>,
    inc: Vec<Vec<(NodeId, f64)>>,
}

impl WeightedGraph {
    /// Builds a graph from directed arcs. Arcs are stored in canonical
    /// `(from, to, weight)` order regardless of input order.
    pub fn new(node_count: usize, mut arcs: Vec<Arc>) -> Result<Self, GraphError> {
        for a in &arcs {
            for node in [a.from, a.to] {
                if node >= node_count {
                    return Err(GraphError::NodeOutOfRange { node, node_count });
                }
            }
            if a.from == a.to {
                return Err(GraphError::SelfLoop(a.from));
            }
            if !a.weight.is_finite() || a.weight < 0.0 {
                return Err(GraphError::InvalidWeight {
                    from: a.from,
                    to: a.to,
                    weight: a.weight,
                });
            }
        }
        arcs.sort_by(|a, b| {
            (a.from, a.to)
                .cmp(&(b.from, b.to))
                .then(a.weight.total_cmp(&b.weight))
        });

        let mut out: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); node_count];
        let mut inc: Vec<Vec<(NodeId, f64)>> = vec![Vec::new(); node_count];
        for a in &arcs {
            // sorted input: the first arc of every (from, to) run is the cheapest
            if out[a.from].last().map(|&(to, _)| to) != Some(a.to) {
                out[a.from].push((a.to, a.weight));
            }
        }
        for (from, list) in out.iter().enumerate() {
            for &(to, w) in list {
                inc[to].push((from, w));
            }
        }

        let symmetric = is_symmetric_sorted(&arcs);
        Ok(Self {
            node_count,
            arcs,
            symmetric,
            out,
            inc,
        })
    }

    /// Builds a symmetric graph; each `(u, v, w)` becomes arcs `u->v` and `v->u`.
    pub fn undirected(node_count: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self, GraphError> {
        let arcs = edges
            .iter()
            .flat_map(|&(u, v, w)| [Arc::new(u, v, w), Arc::new(v, u, w)])
            .collect();
        Self::new(node_count, arcs)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Cheapest arc to every out-neighbour, sorted by neighbour id.
    pub fn out_neighbors(&self, node: NodeId) -> &[(NodeId, f64)] {
        &self.out[node]
    }

    pub fn in_neighbors(&self, node: NodeId) -> &[(NodeId, f64)] {
        &self.inc[node]
    }

    /// Weight of the cheapest arc `from -> to`, if any.
    pub fn arc_weight(&self, from: NodeId, to: NodeId) -> Option<f64> {
        let list = self.out.get(from)?;
        list.binary_search_by_key(&to, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    /// Distinct ordered node pairs joined by at least one arc, in canonical order.
    pub fn arc_pairs(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(v, w)| (u, v, w)))
    }

    /// Undirected edges of a symmetric graph (`u < v`), parallel edges repeated.
    pub fn undirected_edges(&self) -> Vec<(NodeId, NodeId, f64)> {
        self.arcs
            .iter()
            .filter(|a| a.from < a.to)
            .map(|a| (a.from, a.to, a.weight))
            .collect()
    }

    pub fn check_node(&self, node: NodeId) -> Result<(), GraphError> {
        if node < self.node_count {
            Ok(())
        } else {
            Err(GraphError::NodeOutOfRange {
                node,
                node_count: self.node_count,
            })
        }
    }

    /// Total weight of a node walk using the cheapest arc per step.
    pub fn walk_cost(&self, nodes: &[NodeId]) -> Option<f64> {
        nodes
            .windows(2)
            .map(|w| self.arc_weight(w[0], w[1]))
            .sum()
    }
}

fn is_symmetric_sorted(arcs: &[Arc]) -> bool {
    let mut reversed: Vec<(NodeId, NodeId, f64)> = arcs.iter().map(|a| (a.to, a.from, a.weight)).collect();
    reversed.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
    reversed
        .iter()
        .zip(arcs)
        .all(|(r, a)| r.0 == a.from && r.1 == a.to && r.2 == a.weight)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub cost: f64,
    pub nodes: Vec<NodeId>,
}

/// Cost and arc count of a best path; ordered by cost (with tolerance) then arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Label {
    pub cost: f64,
    pub hops: u32,
}

impl Label {
    fn improves_on(&self, other: &Label) -> bool {
        self.cost < other.cost - EPS || ((self.cost - other.cost).abs() <= EPS && self.hops < other.hops)
    }
}

struct HeapEntry {
    label: Label,
    node: NodeId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .label
            .cost
            .total_cmp(&self.label.cost)
            .then(other.label.hops.cmp(&self.label.hops))
            .then(other.node.cmp(&self.node))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Backward,
}

/// Single-source labels. With `blocked`, paths may start or end at a blocked
/// node but never pass through one.
fn dijkstra(g: &WeightedGraph, source: NodeId, blocked: Option<&[bool]>, dir: Direction) -> Vec<Option<Label>> {
    let mut labels: Vec<Option<Label>> = vec![None; g.node_count];
    let mut done = vec![false; g.node_count];
    let mut heap = BinaryHeap::new();
    let start = Label { cost: 0.0, hops: 0 };
    labels[source] = Some(start);
    heap.push(HeapEntry { label: start, node: source });

    while let Some(HeapEntry { label, node }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        if node != source && blocked.is_some_and(|b| b[node]) {
            continue;
        }
        let neighbors = match dir {
            Direction::Forward => &g.out[node],
            Direction::Backward => &g.inc[node],
        };
        for &(next, w) in neighbors {
            if done[next] {
                continue;
            }
            let candidate = Label {
                cost: label.cost + w,
                hops: label.hops + 1,
            };
            if labels[next].is_none_or(|old| candidate.improves_on(&old)) {
                labels[next] = Some(candidate);
                heap.push(HeapEntry { label: candidate, node: next });
            }
        }
    }
    labels
}

/// Walks from `src` to `dst` choosing the smallest admissible next node.
/// `to_dst(x)` is the best label of a path from `x` to `dst`.
fn trace_path(
    g: &WeightedGraph,
    src: NodeId,
    dst: NodeId,
    blocked: Option<&[bool]>,
    to_dst: impl Fn(NodeId) -> Option<Label>,
) -> Option<PathResult> {
    let total = to_dst(src)?;
    let mut nodes = vec![src];
    let mut cur = src;
    let mut remaining = total;
    while cur != dst {
        let mut exact = None;
        let mut fallback: Option<(f64, NodeId, Label)> = None;
        for &(next, w) in &g.out[cur] {
            if next != dst && blocked.is_some_and(|b| b[next]) {
                continue;
            }
            let Some(rest) = to_dst(next) else { continue };
            if rest.hops + 1 != remaining.hops {
                continue;
            }
            let slack = (w + rest.cost - remaining.cost).abs();
            if slack <= EPS {
                exact = Some((next, rest));
                break;
            }
            if fallback.is_none_or(|(s, _, _)| slack < s) {
                fallback = Some((slack, next, rest));
            }
        }
        let (next, rest) = exact.or(fallback.map(|(_, n, l)| (n, l)))?;
        nodes.push(next);
        cur = next;
        remaining = rest;
    }
    let cost = g.walk_cost(&nodes)?;
    Some(PathResult { cost, nodes })
}

/// Minimum-weight walk from `src` to `dst`, or `None` if unreachable.
pub fn shortest_path(g: &WeightedGraph, src: NodeId, dst: NodeId) -> Result<Option<PathResult>, GraphError> {
    g.check_node(src)?;
    g.check_node(dst)?;
    let to_dst = dijkstra(g, dst, None, Direction::Backward);
    Ok(trace_path(g, src, dst, None, |x| to_dst[x]))
}

/// Nearest member of `targets` from `src` (ties: smallest node id) and the path to it.
pub fn shortest_path_to_set(
    g: &WeightedGraph,
    src: NodeId,
    targets: &[NodeId],
) -> Result<Option<(NodeId, PathResult)>, GraphError> {
    g.check_node(src)?;
    for &t in targets {
        g.check_node(t)?;
    }
    let from_src = dijkstra(g, src, None, Direction::Forward);
    let Some(best) = nearest_of(targets.iter().map(|&t| (t, from_src[t].map(|l| l.cost)))) else {
        return Ok(None);
    };
    Ok(shortest_path(g, src, best)?.map(|p| (best, p)))
}

/// Picks the `(node, cost)` with minimum cost; near-equal costs go to the smaller id.
pub(crate) fn nearest_of(candidates: impl Iterator<Item = (NodeId, Option<f64>)>) -> Option<NodeId> {
    let mut best: Option<(NodeId, f64)> = None;
    for (node, cost) in candidates {
        let Some(cost) = cost else { continue };
        best = match best {
            None => Some((node, cost)),
            Some((b, bc)) if cost < bc - EPS || ((cost - bc).abs() <= EPS && node < b) => Some((node, cost)),
            keep => keep,
        };
    }
    best.map(|(n, _)| n)
}

/// True iff every node is reachable from node 0 along stored arc directions.
pub fn is_connected(g: &WeightedGraph) -> bool {
    if g.node_count == 0 {
        return true;
    }
    let mut seen = vec![false; g.node_count];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &(v, _) in &g.out[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                queue.push_back(v);
            }
        }
    }
    count == g.node_count
}

/// All-pairs shortest-path queries. Rows (from a source) and columns (to a
/// target) are computed on first use and cached.
#[derive(Debug, Clone)]
pub struct ShortestPaths {
    graph: WeightedGraph,
    blocked: Option<Vec<bool>>,
    rows: Vec<OnceLock<Vec<Option<Label>>>>,
    columns: Vec<OnceLock<Vec<Option<Label>>>>,
}

impl ShortestPaths {
    pub fn new(graph: &WeightedGraph) -> Self {
        Self::build(graph, None)
    }

    /// Paths whose interior nodes avoid every node flagged in `blocked`.
    pub fn avoiding(graph: &WeightedGraph, blocked: &[bool]) -> Self {
        assert_eq!(blocked.len(), graph.node_count, "blocked mask has wrong length");
        Self::build(graph, Some(blocked.to_vec()))
    }

    fn build(graph: &WeightedGraph, blocked: Option<Vec<bool>>) -> Self {
        let n = graph.node_count;
        Self {
            graph: graph.clone(),
            blocked,
            rows: (0..n).map(|_| OnceLock::new()).collect(),
            columns: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    fn row(&self, from: NodeId) -> &[Option<Label>] {
        self.rows[from].get_or_init(|| dijkstra(&self.graph, from, self.blocked.as_deref(), Direction::Forward))
    }

    fn column(&self, to: NodeId) -> &[Option<Label>] {
        self.columns[to].get_or_init(|| dijkstra(&self.graph, to, self.blocked.as_deref(), Direction::Backward))
    }

    pub fn cost(&self, from: NodeId, to: NodeId) -> Option<f64> {
        self.row(from)[to].map(|l| l.cost)
    }

    /// Cost or `f64::INFINITY` when unreachable.
    pub fn dist(&self, from: NodeId, to: NodeId) -> f64 {
        self.cost(from, to).unwrap_or(f64::INFINITY)
    }

    /// Cost of reaching `to` from every node, indexed by source.
    pub fn dist_to(&self, to: NodeId) -> Vec<f64> {
        self.column(to)
            .iter()
            .map(|l| l.map_or(f64::INFINITY, |l| l.cost))
            .collect()
    }

    pub fn path(&self, from: NodeId, to: NodeId) -> Option<PathResult> {
        let column = self.column(to);
        trace_path(&self.graph, from, to, self.blocked.as_deref(), |x| column[x])
    }

    /// Nearest of `targets` from `from`; ties go to the smallest node id.
    pub fn nearest(&self, from: NodeId, targets: &[NodeId]) -> Option<NodeId> {
        nearest_of(targets.iter().map(|&t| (t, self.cost(from, t))))
    }
}
