#![allow(dead_code)]

pub mod matrix;

use mdrpp_core::graph::WeightedGraph;
use mdrpp_core::instance::{generate_instance, min_service_capacity, random_connected_graph, GenSpec, SetKind};
use mdrpp_core::Instance;

/// Seeded instance with 5 to 8 nodes, at most 12 edges, at most 4 required
/// edges and at most 2 vehicles. Every fifth seed is directed with wind.
pub fn tiny(seed: u64) -> Instance {
    let n = 5 + (seed % 4) as usize;
    let max_e = (n * (n - 1) / 2).min(12);
    let e = n - 1 + (seed / 4) as usize % (max_e - n + 2);
    let g = random_connected_graph(n, e, (1.0, 9.0), seed).unwrap();
    let kind = if seed % 5 == 4 { SetKind::C } else { SetKind::B };
    let mut spec = GenSpec::new(&g, kind, seed);
    spec.name = format!("tiny{seed}");
    spec.recharge_time = 0.5 + (seed % 3) as f64;
    let mut inst = generate_instance(&g, &spec).unwrap();
    inst.capacity = (min_service_capacity(&inst) * 1.3 * 100.0).round() / 100.0;
    inst
}

/// One vehicle that has to move to the second depot before it can serve (1, 3).
pub fn reposition() -> Instance {
    let edges = [
        (0, 1, 2.3),
        (1, 5, 1.5),
        (1, 3, 2.6),
        (3, 5, 2.6),
        (0, 2, 3.0),
        (2, 4, 3.0),
        (4, 6, 2.0),
        (6, 7, 2.0),
        (7, 5, 3.0),
        (2, 3, 4.0),
        (4, 7, 2.5),
        (6, 5, 4.0),
    ];
    let g = WeightedGraph::undirected(8, &edges).unwrap();
    Instance::new(
        "reposition",
        g,
        vec![0, 5],
        vec![mdrpp_core::RequiredEdge::undirected(1, 3)],
        1,
        7.0,
        1.1,
        vec![0],
    )
    .unwrap()
}

/// Multiplies every time by `factor`.
pub fn scaled(inst: &Instance, factor: f64) -> Instance {
    let arcs = inst
        .graph
        .arcs()
        .iter()
        .map(|a| mdrpp_core::Arc::new(a.from, a.to, a.weight * factor))
        .collect();
    Instance::new(
        inst.name.clone(),
        WeightedGraph::new(inst.node_count(), arcs).unwrap(),
        inst.depots.clone(),
        inst.required.clone(),
        inst.vehicles,
        inst.capacity * factor,
        inst.recharge_time * factor,
        inst.start_depots.clone(),
    )
    .unwrap()
}
