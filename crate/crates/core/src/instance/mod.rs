//! Problem instances: graph, depots, required edges and fleet parameters.

mod carp;
mod dummy;
mod format;
mod generate;

use std::fmt;

use thiserror::Error;

use crate::graph::{is_connected, GraphError, NodeId, WeightedGraph};

pub use carp::{parse_carp_benchmark, CarpBenchmark, CarpEdge};
pub use dummy::{add_dummy_nodes, DummyMap};
pub use format::{parse_instance, serialize_instance};
pub use generate::{
    generate_instance, generated_counts, min_service_capacity, random_connected_graph, GenSpec, SetKind,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{entity}: {message}")]
    Semantic { entity: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("generation spec: {0}")]
    Spec(String),
}

impl InstanceError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Self::Syntax {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn semantic(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Semantic {
            entity: entity.into(),
            message: message.into(),
        }
    }
}

/// An edge some vehicle has to traverse. Undirected edges may be covered in
/// either orientation, directed ones only from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RequiredEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub directed: bool,
}

impl RequiredEdge {
    pub fn undirected(from: NodeId, to: NodeId) -> Self {
        Self {
            from,
            to,
            directed: false,
        }
    }

    pub fn directed(from: NodeId, to: NodeId) -> Self {
        Self {
            from,
            to,
            directed: true,
        }
    }

    /// Admissible traversal orientations as `(tail, head)`, forward first.
    pub fn orientations(&self) -> impl Iterator<Item = (NodeId, NodeId)> {
        let reverse = (!self.directed).then_some((self.to, self.from));
        std::iter::once((self.from, self.to)).chain(reverse)
    }

    pub fn is_covered_by(&self, tail: NodeId, head: NodeId) -> bool {
        (tail == self.from && head == self.to) || (!self.directed && tail == self.to && head == self.from)
    }

    /// Whether both describe the same coverage requirement.
    pub fn same_requirement(&self, other: &RequiredEdge) -> bool {
        if self.directed != other.directed {
            return false;
        }
        if self.directed {
            (self.from, self.to) == (other.from, other.to)
        } else {
            let key = |e: &RequiredEdge| (e.from.min(e.to), e.from.max(e.to));
            key(self) == key(other)
        }
    }
}

impl fmt::Display for RequiredEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.directed {
            write!(f, "({} -> {})", self.from, self.to)
        } else {
            write!(f, "({}, {})", self.from, self.to)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub graph: WeightedGraph,
    /// Sorted, without duplicates.
    pub depots: Vec<NodeId>,
    pub required: Vec<RequiredEdge>,
    pub vehicles: usize,
    pub capacity: f64,
    pub recharge_time: f64,
    /// `start_depots[k]` is the depot vehicle `k` starts from.
    pub start_depots: Vec<NodeId>,
}

impl Instance {
    /// Builds and validates an instance.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        graph: WeightedGraph,
        mut depots: Vec<NodeId>,
        required: Vec<RequiredEdge>,
        vehicles: usize,
        capacity: f64,
        recharge_time: f64,
        start_depots: Vec<NodeId>,
    ) -> Result<Self, InstanceError> {
        depots.sort_unstable();
        depots.dedup();
        let inst = Self {
            name: name.into(),
            graph,
            depots,
            required,
            vehicles,
            capacity,
            recharge_time,
            start_depots,
        };
        inst.check()?;
        Ok(inst)
    }

    fn check(&self) -> Result<(), InstanceError> {
        let n = self.graph.node_count();
        if self.depots.is_empty() {
            return Err(InstanceError::semantic("depots", "at least one depot is required"));
        }
        for &d in &self.depots {
            if d >= n {
                return Err(InstanceError::semantic(
                    format!("depot {d}"),
                    format!("not a node (graph has {n} nodes)"),
                ));
            }
        }
        for (i, e) in self.required.iter().enumerate() {
            let entity = || format!("required edge #{i} {e}");
            if e.from >= n || e.to >= n {
                return Err(InstanceError::semantic(entity(), "endpoint is not a node"));
            }
            if self.graph.arc_weight(e.from, e.to).is_none() {
                return Err(InstanceError::semantic(entity(), format!("arc {} -> {} is missing", e.from, e.to)));
            }
            if !e.directed && self.graph.arc_weight(e.to, e.from).is_none() {
                return Err(InstanceError::semantic(entity(), format!("arc {} -> {} is missing", e.to, e.from)));
            }
        }
        if self.vehicles == 0 {
            return Err(InstanceError::semantic("vehicles", "at least one vehicle is required"));
        }
        if !(self.capacity.is_finite() && self.capacity > 0.0) {
            return Err(InstanceError::semantic("capacity", format!("must be positive, got {}", self.capacity)));
        }
        if !(self.recharge_time.is_finite() && self.recharge_time >= 0.0) {
            return Err(InstanceError::semantic(
                "recharge",
                format!("must be non-negative, got {}", self.recharge_time),
            ));
        }
        if self.start_depots.len() != self.vehicles {
            return Err(InstanceError::semantic(
                "start depots",
                format!("{} given for {} vehicles", self.start_depots.len(), self.vehicles),
            ));
        }
        for (k, &b) in self.start_depots.iter().enumerate() {
            if !self.is_depot(b) {
                return Err(InstanceError::semantic(format!("start depot of vehicle {k}"), format!("node {b} is not a depot")));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn is_depot(&self, node: NodeId) -> bool {
        self.depots.binary_search(&node).is_ok()
    }

    pub fn depot_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.node_count()];
        for &d in &self.depots {
            mask[d] = true;
        }
        mask
    }

    /// Indices of required edges covered by traversing `tail -> head`.
    pub fn required_covered_by(&self, tail: NodeId, head: NodeId) -> impl Iterator<Item = usize> + '_ {
        self.required
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.is_covered_by(tail, head))
            .map(|(i, _)| i)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Finding {
    Disconnected,
    DuplicateRequired { first: usize, second: usize },
    StartDepotNotDepot { vehicle: usize, node: NodeId },
    StartDepotCount { expected: usize, found: usize },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::Disconnected => write!(f, "disconnected: some node is unreachable from node 0"),
            Finding::DuplicateRequired { first, second } => {
                write!(f, "duplicate required edge: #{second} repeats #{first}")
            }
            Finding::StartDepotNotDepot { vehicle, node } => {
                write!(f, "start depot of vehicle {vehicle} is node {node}, which is not a depot")
            }
            Finding::StartDepotCount { expected, found } => {
                write!(f, "expected {expected} start depots, found {found}")
            }
        }
    }
}

/// Structural findings that do not prevent solving but usually signal bad data.
pub fn validate_instance(inst: &Instance) -> Vec<Finding> {
    let mut findings = Vec::new();
    if !is_connected(&inst.graph) {
        findings.push(Finding::Disconnected);
    }
    for (j, b) in inst.required.iter().enumerate() {
        if let Some(i) = inst.required[..j].iter().position(|a| a.same_requirement(b)) {
            findings.push(Finding::DuplicateRequired { first: i, second: j });
        }
    }
    if inst.start_depots.len() != inst.vehicles {
        findings.push(Finding::StartDepotCount {
            expected: inst.vehicles,
            found: inst.start_depots.len(),
        });
    }
    for (vehicle, &node) in inst.start_depots.iter().enumerate() {
        if !inst.is_depot(node) {
            findings.push(Finding::StartDepotNotDepot { vehicle, node });
        }
    }
    findings
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// 8 nodes, 11 edges, 3 required, C = 18, K = 1, 2 depots.
    pub fn a1_shaped() -> Instance {
        let edges = [
            (0, 1, 3.0),
            (0, 3, 5.0),
            (1, 2, 4.0),
            (1, 4, 6.0),
            (2, 3, 2.0),
            (2, 5, 7.0),
            (3, 6, 4.5),
            (4, 5, 3.0),
            (4, 7, 9.0),
            (5, 6, 2.5),
            (6, 7, 5.0),
        ];
        let g = WeightedGraph::undirected(8, &edges).unwrap();
        Instance::new(
            "a1",
            g,
            vec![0, 5],
            vec![
                RequiredEdge::undirected(1, 2),
                RequiredEdge::undirected(3, 6),
                RequiredEdge::undirected(4, 7),
            ],
            1,
            18.0,
            2.0,
            vec![0],
        )
        .unwrap()
    }
}
