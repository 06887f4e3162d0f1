use std::collections::{BTreeMap, BTreeSet};

use super::{BaselineResult, Criterion, ScanGraph};
use crate::graph::{Arc, NodeId, ShortestPaths, WeightedGraph};
use crate::instance::Instance;
use crate::solution::{Route, Solution, Trip};
use crate::EPS;

/// Original arcs minus struck ones, plus artificial depot links.
struct Residual<'a> {
    inst: &'a Instance,
    original: ShortestPaths,
    struck: BTreeSet<(NodeId, NodeId)>,
    artificial: BTreeMap<(NodeId, NodeId), f64>,
}

impl<'a> Residual<'a> {
    fn new(inst: &'a Instance) -> Self {
        Self {
            inst,
            original: ShortestPaths::new(&inst.graph),
            struck: BTreeSet::new(),
            artificial: BTreeMap::new(),
        }
    }

    fn graph(&self) -> WeightedGraph {
        let mut arcs: Vec<Arc> = self
            .inst
            .graph
            .arcs()
            .iter()
            .filter(|a| !self.struck.contains(&(a.from, a.to)))
            .copied()
            .collect();
        arcs.extend(self.artificial.iter().map(|(&(u, v), &w)| Arc::new(u, v, w)));
        WeightedGraph::new(self.inst.node_count(), arcs).expect("residual arcs come from a valid graph")
    }

    /// Replaces hops that only exist as artificial arcs by original shortest paths.
    fn expand(&self, residual: &WeightedGraph, walk: &[NodeId]) -> Option<Vec<NodeId>> {
        let mut out = vec![walk[0]];
        for w in walk.windows(2) {
            let used = residual.arc_weight(w[0], w[1])?;
            let real = self
                .inst
                .graph
                .arc_weight(w[0], w[1])
                .filter(|&r| !self.struck.contains(&(w[0], w[1])) && r <= used + EPS);
            if real.is_some() {
                out.push(w[1]);
            } else {
                let path = self.original.path(w[0], w[1])?.nodes;
                out.extend_from_slice(&path[1..]);
            }
        }
        Some(out)
    }

    /// Removes traversed arcs, keeping any arc an uncovered edge still needs.
    fn strike(&mut self, walk: &[NodeId], covered: &[bool]) {
        let needed = |u: NodeId, v: NodeId| {
            self.inst
                .required
                .iter()
                .enumerate()
                .any(|(i, e)| !covered[i] && e.is_covered_by(u, v))
        };
        let mut hit = Vec::new();
        for w in walk.windows(2) {
            hit.push((w[0], w[1]));
            if self.inst.graph.is_symmetric() {
                hit.push((w[1], w[0]));
            }
        }
        for (u, v) in hit {
            if !needed(u, v) {
                self.struck.insert((u, v));
            }
        }
    }

    /// Links every depot with both ends of each uncovered edge. Returns how many arcs were new.
    fn add_artificial(&mut self, covered: &[bool]) -> usize {
        let mut added = 0;
        for (i, e) in self.inst.required.iter().enumerate() {
            if covered[i] {
                continue;
            }
            for &x in &[e.from, e.to] {
                for &d in &self.inst.depots {
                    if d == x {
                        continue;
                    }
                    for (u, v) in [(d, x), (x, d)] {
                        if self.artificial.contains_key(&(u, v)) {
                            continue;
                        }
                        let w = self.original.dist(u, v);
                        if w.is_finite() {
                            self.artificial.insert((u, v), w);
                            added += 1;
                        }
                    }
                }
            }
        }
        added
    }
}

pub fn construct_strike(inst: &Instance) -> BaselineResult {
    construct_strike_with_budget(inst, 10 * inst.required.len())
}

/// Construct-strike with at most `budget` trips.
pub fn construct_strike_with_budget(inst: &Instance, budget: usize) -> BaselineResult {
    let mut res = Residual::new(inst);
    let mut covered = vec![false; inst.required.len()];
    let mut location = inst.start_depots.clone();
    let mut available = vec![0.0f64; inst.vehicles];
    let mut stuck = vec![false; inst.vehicles];
    let mut routes: Vec<Route> = (0..inst.vehicles).map(Route::empty).collect();
    let mut trips = 0;

    while covered.iter().any(|c| !c) {
        let Some(k) = (0..inst.vehicles)
            .filter(|&k| !stuck[k])
            .min_by(|&a, &b| available[a].total_cmp(&available[b]).then(a.cmp(&b)))
        else {
            if res.add_artificial(&covered) == 0 {
                return BaselineResult::unsolved("stuck");
            }
            stuck.iter_mut().for_each(|s| *s = false);
            continue;
        };
        if trips >= budget {
            return BaselineResult::unsolved("budget");
        }

        let residual = res.graph();
        let sp = ShortestPaths::new(&residual);
        let scan = ScanGraph::new(inst, &sp);
        let mut best: Option<(usize, Trip)> = None;
        for criterion in Criterion::ALL {
            let Some(walk) = scan.scan_trip(&covered, location[k], criterion) else { continue };
            let Some(trip) = res.expand(&residual, &walk).and_then(|w| Trip::from_walk(inst, w)) else {
                continue;
            };
            if trip.duration > inst.capacity + EPS {
                continue;
            }
            let gain = trip.covered.iter().filter(|&&i| !covered[i]).count();
            let better = best
                .as_ref()
                .is_none_or(|(g, t)| gain > *g || (gain == *g && trip.duration < t.duration - EPS));
            if gain > 0 && better {
                best = Some((gain, trip));
            }
        }

        match best {
            Some((_, trip)) => {
                for &i in &trip.covered {
                    covered[i] = true;
                }
                res.strike(&trip.nodes, &covered);
                available[k] += trip.duration + inst.recharge_time;
                location[k] = trip.end();
                routes[k].trips.push(trip);
                trips += 1;
            }
            None => stuck[k] = true,
        }
    }
    BaselineResult::solved(Solution::from_routes(inst, routes))
}
