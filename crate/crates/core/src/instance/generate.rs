//! Seeded instance generation from a base road graph.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Instance, InstanceError, RequiredEdge};
use crate::graph::{is_connected, Arc, NodeId, ShortestPaths, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    /// Benchmark graphs; capacity is twice the longest edge.
    A,
    /// Road graphs with a fixed capacity.
    B,
    /// Set B with wind: per-direction weights and directed required edges.
    C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub name: String,
    /// Must match the base graph.
    pub node_count: usize,
    /// Undirected edges of the base graph.
    pub edge_count: usize,
    pub seed: u64,
    pub set_kind: SetKind,
    /// Set A: overrides the base graph's longest edge.
    pub max_edge_weight: Option<f64>,
    /// Sets B and C.
    pub capacity_minutes: f64,
    /// Set C, in `[0, 1)`.
    pub wind_ratio: f64,
    pub recharge_time: f64,
    /// Base weights are lengths; travel time is length / speed.
    pub speed: f64,
}

impl GenSpec {
    pub fn new(base: &WeightedGraph, set_kind: SetKind, seed: u64) -> Self {
        Self {
            name: "generated".into(),
            node_count: base.node_count(),
            edge_count: base.undirected_edges().len(),
            seed,
            set_kind,
            max_edge_weight: None,
            capacity_minutes: 31.0,
            wind_ratio: 0.3,
            recharge_time: 1.0,
            speed: 1.0,
        }
    }
}

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Depot, required-edge and vehicle counts for a base graph.
pub fn generated_counts(node_count: usize, edge_count: usize) -> (usize, usize, usize) {
    let depots = round_half_up(node_count as f64 / 5.0).max(2).min(node_count);
    let required = round_half_up(edge_count as f64 / 3.0).max(1).min(edge_count);
    let vehicles = (required / 2).max(1);
    (depots, required, vehicles)
}

pub fn generate_instance(base: &WeightedGraph, spec: &GenSpec) -> Result<Instance, InstanceError> {
    let bad = |msg: String| Err(InstanceError::Spec(msg));
    if !base.is_symmetric() {
        return bad("base graph must be undirected".into());
    }
    let edges = base.undirected_edges();
    if spec.node_count != base.node_count() || spec.edge_count != edges.len() {
        return bad(format!(
            "spec says {} nodes / {} edges but base graph has {} / {}",
            spec.node_count,
            spec.edge_count,
            base.node_count(),
            edges.len()
        ));
    }
    if spec.node_count < 2 || edges.is_empty() {
        return bad("base graph needs at least two nodes and one edge".into());
    }
    if !is_connected(base) {
        return bad("base graph is not connected".into());
    }
    if !(0.0..1.0).contains(&spec.wind_ratio) {
        return bad(format!("wind ratio {} outside [0, 1)", spec.wind_ratio));
    }
    if !(spec.speed.is_finite() && spec.speed > 0.0) {
        return bad(format!("speed {} must be positive", spec.speed));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n_depots, n_required, vehicles) = generated_counts(spec.node_count, edges.len());

    let mut depots: Vec<NodeId> = sample(&mut rng, spec.node_count, n_depots).into_vec();
    depots.sort_unstable();
    let mut picked: Vec<usize> = sample(&mut rng, edges.len(), n_required).into_vec();
    picked.sort_unstable();

    let times: Vec<(NodeId, NodeId, f64)> = edges.iter().map(|&(u, v, w)| (u, v, w / spec.speed)).collect();
    let (graph, required, capacity) = match spec.set_kind {
        SetKind::A | SetKind::B => {
            let graph = WeightedGraph::undirected(spec.node_count, &times)?;
            let required = picked
                .iter()
                .map(|&i| RequiredEdge::undirected(times[i].0, times[i].1))
                .collect();
            let capacity = if spec.set_kind == SetKind::A {
                let longest = times.iter().map(|e| e.2).fold(0.0, f64::max);
                2.0 * spec.max_edge_weight.unwrap_or(longest)
            } else {
                spec.capacity_minutes
            };
            (graph, required, capacity)
        }
        SetKind::C => {
            let mut arcs = Vec::with_capacity(2 * times.len());
            for &(u, v, w) in &times {
                let f = if spec.wind_ratio > 0.0 {
                    rng.gen_range(0.0..=spec.wind_ratio)
                } else {
                    0.0
                };
                let (tail_wind, head_wind) = (w / (1.0 + f), w / (1.0 - f));
                if rng.gen_bool(0.5) {
                    arcs.push(Arc::new(u, v, tail_wind));
                    arcs.push(Arc::new(v, u, head_wind));
                } else {
                    arcs.push(Arc::new(u, v, head_wind));
                    arcs.push(Arc::new(v, u, tail_wind));
                }
            }
            let required = picked
                .iter()
                .map(|&i| {
                    let (u, v, _) = times[i];
                    if rng.gen_bool(0.5) {
                        RequiredEdge::directed(u, v)
                    } else {
                        RequiredEdge::directed(v, u)
                    }
                })
                .collect();
            (WeightedGraph::new(spec.node_count, arcs)?, required, spec.capacity_minutes)
        }
    };

    let start_depots = (0..vehicles).map(|k| depots[k % depots.len()]).collect();
    Instance::new(
        spec.name.clone(),
        graph,
        depots,
        required,
        vehicles,
        capacity,
        spec.recharge_time,
        start_depots,
    )
}

/// Smallest capacity under which every required edge fits in one trip from
/// some depot. Infinite if an edge cannot be reached at all.
pub fn min_service_capacity(inst: &Instance) -> f64 {
    let sp = ShortestPaths::new(&inst.graph);
    let back: Vec<f64> = (0..inst.node_count())
        .map(|n| inst.depots.iter().map(|&d| sp.dist(n, d)).fold(f64::INFINITY, f64::min))
        .collect();
    inst.required
        .iter()
        .map(|e| {
            e.orientations()
                .filter_map(|(t, h)| inst.graph.arc_weight(t, h).map(|w| (t, h, w)))
                .flat_map(|(t, h, w)| inst.depots.iter().map(move |&d| (d, t, h, w)))
                .map(|(d, t, h, w)| sp.dist(d, t) + w + back[h])
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Random connected undirected simple graph: a random spanning tree plus
/// extra distinct edges, weights uniform in `weights` rounded to 0.01.
pub fn random_connected_graph(
    node_count: usize,
    edge_count: usize,
    weights: (f64, f64),
    seed: u64,
) -> Result<WeightedGraph, InstanceError> {
    let max_edges = node_count * node_count.saturating_sub(1) / 2;
    if node_count == 0 || edge_count + 1 < node_count || edge_count > max_edges {
        return Err(InstanceError::Spec(format!(
            "cannot build a connected simple graph with {node_count} nodes and {edge_count} edges"
        )));
    }
    let (lo, hi) = weights;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(InstanceError::Spec(format!("invalid weight range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| {
        let w: f64 = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
        (w * 100.0).round() / 100.0
    };
    let order = sample(&mut rng, node_count, node_count).into_vec();
    let mut adjacent = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(edge_count);
    for i in 1..node_count {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        adjacent.insert((parent.min(child), parent.max(child)));
        edges.push((parent, child, weight(&mut rng)));
    }
    while edges.len() < edge_count {
        let u = rng.gen_range(0..node_count);
        let v = rng.gen_range(0..node_count);
        if u == v || !adjacent.insert((u.min(v), u.max(v))) {
            continue;
        }
        edges.push((u, v, weight(&mut rng)));
    }
    Ok(WeightedGraph::undirected(node_count, &edges)?)
}
