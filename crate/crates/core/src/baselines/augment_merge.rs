use super::BaselineResult;
use crate::graph::{NodeId, ShortestPaths};
use crate::instance::Instance;
use crate::solution::{Route, Solution, Trip};
use crate::EPS;

/// A closed trip from `depot` serving `edges` in order.
#[derive(Debug, Clone)]
struct Tour {
    depot: NodeId,
    edges: Vec<usize>,
    /// Chosen `(tail, head)` per edge.
    oriented: Vec<(NodeId, NodeId)>,
    cost: f64,
}

/// Cheapest orientation of a fixed edge sequence, starting and ending at `depot`.
fn best_orientations(inst: &Instance, sp: &ShortestPaths, depot: NodeId, edges: &[usize]) -> Option<Tour> {
    // layered shortest path: state = orientation of the current edge
    let mut layer: Vec<(f64, Vec<(NodeId, NodeId)>)> = Vec::new();
    for (pos, &e) in edges.iter().enumerate() {
        let mut next = Vec::new();
        for (tail, head) in inst.required[e].orientations() {
            let Some(w) = inst.graph.arc_weight(tail, head) else { continue };
            let best = if pos == 0 {
                Some((sp.dist(depot, tail), Vec::new()))
            } else {
                layer
                    .iter()
                    .map(|(c, seq)| (c + sp.dist(seq.last().unwrap().1, tail), seq))
                    .filter(|(c, _)| c.is_finite())
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(c, seq)| (c, seq.clone()))
            };
            if let Some((c, mut seq)) = best.filter(|(c, _)| c.is_finite()) {
                seq.push((tail, head));
                next.push((c + w, seq));
            }
        }
        if next.is_empty() {
            return None;
        }
        layer = next;
    }
    let (cost, oriented) = layer
        .into_iter()
        .map(|(c, seq)| (c + sp.dist(seq.last().unwrap().1, depot), seq))
        .filter(|(c, _)| c.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0))?;
    Some(Tour {
        depot,
        edges: edges.to_vec(),
        oriented,
        cost,
    })
}

fn tour_walk(sp: &ShortestPaths, tour: &Tour) -> Option<Vec<NodeId>> {
    let mut walk = vec![tour.depot];
    for &(tail, head) in &tour.oriented {
        let leg = sp.path(*walk.last().unwrap(), tail)?.nodes;
        walk.extend_from_slice(&leg[1..]);
        walk.push(head);
    }
    let leg = sp.path(*walk.last().unwrap(), tour.depot)?.nodes;
    walk.extend_from_slice(&leg[1..]);
    Some(walk)
}

pub fn augment_merge(inst: &Instance) -> BaselineResult {
    let sp = ShortestPaths::new(&inst.graph);
    let mut starts = inst.start_depots.clone();
    starts.sort_unstable();
    starts.dedup();

    // augment: one closed trip per edge from the best vehicle depot
    let mut tours = Vec::new();
    for e in 0..inst.required.len() {
        let best = starts
            .iter()
            .filter_map(|&d| best_orientations(inst, &sp, d, &[e]))
            .filter(|t| t.cost <= inst.capacity + EPS)
            .min_by(|a, b| a.cost.total_cmp(&b.cost));
        match best {
            Some(t) => tours.push(t),
            None => return BaselineResult::unsolved(format!("unreachable: required edge #{e}")),
        }
    }

    // drop trips whose edge a longer trip already traverses
    tours.sort_by(|a, b| b.cost.total_cmp(&a.cost).then(a.edges.cmp(&b.edges)));
    let mut kept: Vec<Tour> = Vec::new();
    let mut covered = vec![false; inst.required.len()];
    for t in tours {
        if covered[t.edges[0]] {
            continue;
        }
        let Some(walk) = tour_walk(&sp, &t) else {
            return BaselineResult::unsolved("unreachable");
        };
        for w in walk.windows(2) {
            for i in inst.required_covered_by(w[0], w[1]) {
                covered[i] = true;
            }
        }
        kept.push(t);
    }

    // merge per depot, longest trip first, best saving wins
    let mut merged: Vec<Tour> = Vec::new();
    for &d in &starts {
        let mut group: Vec<Tour> = kept.iter().filter(|t| t.depot == d).cloned().collect();
        'improve: loop {
            group.sort_by(|a, b| b.cost.total_cmp(&a.cost).then(a.edges.cmp(&b.edges)));
            for i in 0..group.len() {
                let mut best: Option<(f64, usize, Tour)> = None;
                for j in (0..group.len()).filter(|&j| j != i) {
                    for seq in [
                        [group[i].edges.clone(), group[j].edges.clone()].concat(),
                        [group[j].edges.clone(), group[i].edges.clone()].concat(),
                    ] {
                        let Some(t) = best_orientations(inst, &sp, d, &seq) else { continue };
                        let saving = group[i].cost + group[j].cost - t.cost;
                        if t.cost <= inst.capacity + EPS
                            && saving > EPS
                            && best.as_ref().is_none_or(|(s, _, _)| saving > s + EPS)
                        {
                            best = Some((saving, j, t));
                        }
                    }
                }
                if let Some((_, j, t)) = best {
                    let (hi, lo) = (i.max(j), i.min(j));
                    group.remove(hi);
                    group.remove(lo);
                    group.push(t);
                    continue 'improve;
                }
            }
            break;
        }
        merged.extend(group);
    }

    // longest-first assignment to the vehicles based at each depot
    merged.sort_by(|a, b| b.cost.total_cmp(&a.cost).then(a.edges.cmp(&b.edges)));
    let mut routes: Vec<Route> = (0..inst.vehicles).map(Route::empty).collect();
    let mut busy = vec![0.0; inst.vehicles];
    for tour in &merged {
        let k = (0..inst.vehicles)
            .filter(|&k| inst.start_depots[k] == tour.depot)
            .min_by(|&a, &b| {
                let after = |k: usize| {
                    busy[k] + tour.cost + if routes[k].trips.is_empty() { 0.0 } else { inst.recharge_time }
                };
                after(a).total_cmp(&after(b)).then(a.cmp(&b))
            })
            .expect("tours start at vehicle depots");
        let Some(trip) = tour_walk(&sp, tour).and_then(|w| Trip::from_walk(inst, w)) else {
            return BaselineResult::unsolved("unreachable");
        };
        busy[k] += trip.duration + if routes[k].trips.is_empty() { 0.0 } else { inst.recharge_time };
        routes[k].trips.push(trip);
    }
    let sol = Solution::from_routes(inst, routes);
    if !sol.is_complete() {
        return BaselineResult::unsolved("uncovered");
    }
    BaselineResult::solved(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::instance::RequiredEdge;
    use crate::solution::check_feasibility;

    /// Depot 0 and a star behind node 1; each edge alone costs 8.
    fn star() -> Instance {
        let g = WeightedGraph::undirected(4, &[(0, 1, 3.0), (1, 2, 1.0), (1, 3, 1.0)]).unwrap();
        Instance::new(
            "star",
            g,
            vec![0],
            vec![RequiredEdge::undirected(1, 2), RequiredEdge::undirected(1, 3)],
            1,
            20.0,
            5.0,
            vec![0],
        )
        .unwrap()
    }

    #[test]
    fn merge_fires_on_nearby_edges() {
        let inst = star();
        let result = augment_merge(&inst);
        let sol = result.solution().unwrap();
        assert!(check_feasibility(&inst, sol).is_empty());
        assert_eq!(sol.trip_count(), 1);
        // 0-1-2-1-3-1-0
        assert!((sol.makespan - 10.0).abs() < 1e-9);
    }

    #[test]
    fn edge_beyond_capacity_is_unsolved() {
        let mut inst = star();
        inst.capacity = 7.9;
        assert!(augment_merge(&inst).solution().is_none());
    }
}
