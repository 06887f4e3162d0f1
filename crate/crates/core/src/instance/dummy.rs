//! Dummy-node preprocessing: moves required edges off depots.
//!
//! For a required edge `(d, j)` with depot `d` a node `n` joined to `d` by
//! zero-weight arcs is inserted, and every arc between `d` and `j` is
//! re-targeted to start or end at `n`. A walk step `d -> j` becomes
//! `d -> n -> j` at no extra cost.

use std::collections::BTreeMap;

use super::{Instance, RequiredEdge};
use crate::graph::{Arc, NodeId, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DummyMap {
    original_node_count: usize,
    /// Replacement node sequence for an original ordered arc.
    chains: BTreeMap<(NodeId, NodeId), Vec<NodeId>>,
    /// `(index, original, modified)` for every re-targeted required edge.
    pub modified: Vec<(usize, RequiredEdge, RequiredEdge)>,
}

impl DummyMap {
    pub fn is_empty(&self) -> bool {
        self.modified.is_empty()
    }

    pub fn original_node_count(&self) -> usize {
        self.original_node_count
    }

    pub fn is_dummy(&self, node: NodeId) -> bool {
        node >= self.original_node_count
    }

    /// Rewrites an original walk onto the modified graph.
    pub fn lift_walk(&self, nodes: &[NodeId]) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(nodes.len());
        if let Some(&first) = nodes.first() {
            out.push(first);
        }
        for w in nodes.windows(2) {
            match self.chains.get(&(w[0], w[1])) {
                Some(chain) => out.extend_from_slice(&chain[1..]),
                None => out.push(w[1]),
            }
        }
        out
    }

    /// Drops dummy nodes from a walk on the modified graph.
    pub fn strip_walk(&self, nodes: &[NodeId]) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = Vec::with_capacity(nodes.len());
        for &n in nodes {
            if !self.is_dummy(n) && out.last() != Some(&n) {
                out.push(n);
            }
        }
        out
    }
}

pub fn add_dummy_nodes(inst: &Instance) -> (Instance, DummyMap) {
    let n0 = inst.node_count();
    let mut map = DummyMap {
        original_node_count: n0,
        ..DummyMap::default()
    };
    // unordered pair -> (image of min endpoint, image of max endpoint)
    let mut images: BTreeMap<(NodeId, NodeId), (NodeId, NodeId)> = BTreeMap::new();
    let mut next = n0;
    let mut required = inst.required.clone();

    for (idx, e) in inst.required.iter().enumerate() {
        if !inst.is_depot(e.from) && !inst.is_depot(e.to) {
            continue;
        }
        let key = (e.from.min(e.to), e.from.max(e.to));
        let &mut (img_lo, img_hi) = images.entry(key).or_insert_with(|| {
            let mut image = |node: NodeId| {
                if inst.is_depot(node) {
                    next += 1;
                    next - 1
                } else {
                    node
                }
            };
            let lo = image(key.0);
            let hi = image(key.1);
            (lo, hi)
        });
        let image = |node: NodeId| if node == key.0 { img_lo } else { img_hi };
        let modified = RequiredEdge {
            from: image(e.from),
            to: image(e.to),
            directed: e.directed,
        };
        map.modified.push((idx, *e, modified));
        required[idx] = modified;
    }

    let mut arcs: Vec<Arc> = inst
        .graph
        .arcs()
        .iter()
        .filter(|a| !images.contains_key(&(a.from.min(a.to), a.from.max(a.to))))
        .copied()
        .collect();
    for (&(lo, hi), &(img_lo, img_hi)) in &images {
        for (node, img) in [(lo, img_lo), (hi, img_hi)] {
            if node != img {
                arcs.push(Arc::new(node, img, 0.0));
                arcs.push(Arc::new(img, node, 0.0));
            }
        }
        for (u, v, iu, iv) in [(lo, hi, img_lo, img_hi), (hi, lo, img_hi, img_lo)] {
            if let Some(w) = inst.graph.arc_weight(u, v) {
                arcs.push(Arc::new(iu, iv, w));
                let mut chain = vec![u];
                chain.extend([iu, iv].into_iter().filter(|&x| x != u && x != v));
                chain.push(v);
                map.chains.insert((u, v), chain);
            }
        }
    }

    let graph = WeightedGraph::new(next, arcs).expect("dummy arcs are valid by construction");
    let modified = Instance {
        name: inst.name.clone(),
        graph,
        depots: inst.depots.clone(),
        required,
        vehicles: inst.vehicles,
        capacity: inst.capacity,
        recharge_time: inst.recharge_time,
        start_depots: inst.start_depots.clone(),
    };
    (modified, map)
}
