//! The multi-trip constructive heuristic.
//!
//! The next available vehicle either extends its current trip over the
//! closest required edge it can still reach on the remaining charge, or, if
//! none is in reach, moves to a depot closer to the nearest uncovered edge
//! and recharges there. Vehicles that can do neither drop out.

use crate::graph::{NodeId, ShortestPaths};
use crate::instance::Instance;
use crate::solution::{Route, Solution, Trip};
use crate::EPS;

/// Per-vehicle construction state.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleState {
    /// `n_k`
    pub location: NodeId,
    /// `u_k`: time flown since the last recharge.
    pub utilization: f64,
    /// `t_k`
    pub available_at: f64,
    /// `y_k`: arrival time at the last depot.
    pub last_depot_arrival: f64,
    /// Walk of the open trip, starting at its depot.
    pub current: Vec<NodeId>,
    /// Completed trips; with `current` this is `P_k`.
    pub trips: Vec<Trip>,
    pub feasible: bool,
}

impl VehicleState {
    pub fn in_trip(&self) -> bool {
        self.current.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FleetState {
    pub vehicles: Vec<VehicleState>,
    pub covered: Vec<bool>,
}

impl FleetState {
    pub fn new(inst: &Instance) -> Self {
        let vehicles = inst
            .start_depots
            .iter()
            .map(|&b| VehicleState {
                location: b,
                utilization: 0.0,
                available_at: 0.0,
                last_depot_arrival: 0.0,
                current: vec![b],
                trips: Vec::new(),
                feasible: true,
            })
            .collect();
        Self {
            vehicles,
            covered: vec![false; inst.required.len()],
        }
    }

    pub fn remaining(&self) -> usize {
        self.covered.iter().filter(|c| !**c).count()
    }
}

/// Feasible vehicle with the smallest availability time, lowest index on ties.
pub fn select_next_vehicle(state: &FleetState) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (k, v) in state.vehicles.iter().enumerate() {
        if !v.feasible {
            continue;
        }
        if best.is_none_or(|b| v.available_at < state.vehicles[b].available_at) {
            best = Some(k);
        }
    }
    best
}

/// A capacity-feasible way for a vehicle to cover one required edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeChoice {
    pub edge: usize,
    pub tail: NodeId,
    pub head: NodeId,
    /// Walk from the vehicle to the nearest depot after the edge.
    pub trip: Trip,
    /// Position of `head` in `trip.nodes`.
    pub head_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepotChoice {
    pub depot: NodeId,
    pub trip: Trip,
}

pub struct MultiTrip<'a> {
    inst: &'a Instance,
    sp: ShortestPaths,
    /// Distance from each node to its nearest depot.
    to_depot: Vec<f64>,
}

impl<'a> MultiTrip<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let sp = ShortestPaths::new(&inst.graph);
        let mut to_depot = vec![f64::INFINITY; inst.node_count()];
        for &d in &inst.depots {
            for (best, dist) in to_depot.iter_mut().zip(sp.dist_to(d)) {
                *best = best.min(dist);
            }
        }
        Self { inst, sp, to_depot }
    }

    pub fn shortest_paths(&self) -> &ShortestPaths {
        &self.sp
    }

    fn nearest_depot(&self, from: NodeId) -> Option<NodeId> {
        self.sp.nearest(from, &self.inst.depots)
    }

    /// Distance from `from` to the nearer admissible entry point of edge `e`.
    pub fn dist_to_edge(&self, from: NodeId, e: usize) -> f64 {
        let edge = &self.inst.required[e];
        edge.orientations()
            .map(|(tail, _)| self.sp.dist(from, tail))
            .fold(f64::INFINITY, f64::min)
    }

    fn walk(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        self.sp.path(from, to).map(|p| p.nodes).unwrap_or_default()
    }

    pub fn closest_feasible_edge(&self, state: &FleetState, k: usize) -> Option<EdgeChoice> {
        let v = &state.vehicles[k];
        let budget = self.inst.capacity - v.utilization;
        let mut best: Option<(f64, usize, NodeId, NodeId)> = None;
        for (e, edge) in self.inst.required.iter().enumerate() {
            if state.covered[e] {
                continue;
            }
            for (tail, head) in edge.orientations() {
                let Some(w) = self.inst.graph.arc_weight(tail, head) else { continue };
                let duration = self.sp.dist(v.location, tail) + w + self.to_depot[head];
                if duration > budget + EPS {
                    continue;
                }
                if best.is_none_or(|(d, ..)| duration < d - EPS) {
                    best = Some((duration, e, tail, head));
                }
            }
        }
        let (_, edge, tail, head) = best?;
        let mut nodes = self.walk(v.location, tail);
        nodes.push(head);
        let head_index = nodes.len() - 1;
        let depot = self.nearest_depot(head)?;
        nodes.extend(self.walk(head, depot).into_iter().skip(1));
        let trip = Trip::from_walk(self.inst, nodes)?;
        Some(EdgeChoice {
            edge,
            tail,
            head,
            trip,
            head_index,
        })
    }

    /// Uncovered edge nearest to vehicle `k`, lowest index on ties.
    pub fn closest_required_edge(&self, state: &FleetState, k: usize) -> Option<usize> {
        let from = state.vehicles[k].location;
        let mut best: Option<(f64, usize)> = None;
        for e in (0..self.inst.required.len()).filter(|&e| !state.covered[e]) {
            let d = self.dist_to_edge(from, e);
            if d.is_finite() && best.is_none_or(|(bd, _)| d < bd - EPS) {
                best = Some((d, e));
            }
        }
        best.map(|(_, e)| e)
    }

    /// Reachable depot strictly closer to `target` than the vehicle is.
    pub fn closest_feasible_depot(&self, state: &FleetState, k: usize, target: usize) -> Option<DepotChoice> {
        let v = &state.vehicles[k];
        let budget = self.inst.capacity - v.utilization;
        let here = self.dist_to_edge(v.location, target);
        let mut best: Option<(f64, NodeId)> = None;
        for &d in &self.inst.depots {
            if d == v.location || self.sp.dist(v.location, d) > budget + EPS {
                continue;
            }
            let there = self.dist_to_edge(d, target);
            if there >= here - EPS {
                continue;
            }
            if best.is_none_or(|(bd, _)| there < bd - EPS) {
                best = Some((there, d));
            }
        }
        let (_, depot) = best?;
        let trip = Trip::from_walk(self.inst, self.walk(v.location, depot))?;
        Some(DepotChoice { depot, trip })
    }

    /// Moves vehicle `k` along `walk` (which starts at its location).
    fn advance(&self, state: &mut FleetState, k: usize, walk: &[NodeId]) {
        let cost = self.inst.graph.walk_cost(walk).expect("walk follows arcs");
        for w in walk.windows(2) {
            for e in self.inst.required_covered_by(w[0], w[1]) {
                state.covered[e] = true;
            }
        }
        let v = &mut state.vehicles[k];
        debug_assert_eq!(walk.first(), Some(&v.location));
        v.current.extend_from_slice(&walk[1..]);
        v.location = *walk.last().unwrap();
        v.utilization += cost;
        v.available_at += cost;
    }

    /// Flies `walk` to a depot and closes the open trip there.
    fn finish_trip(&self, state: &mut FleetState, k: usize, walk: &[NodeId]) {
        self.advance(state, k, walk);
        let v = &mut state.vehicles[k];
        let nodes = std::mem::replace(&mut v.current, vec![v.location]);
        if nodes.len() > 1 {
            let trip = Trip::from_walk(self.inst, nodes).expect("walk follows arcs");
            v.trips.push(trip);
            v.last_depot_arrival = v.available_at;
            v.available_at += self.inst.recharge_time;
        }
        v.utilization = 0.0;
    }

    /// Depot within reach of the open trip, preferring those close to `target`.
    fn closing_depot(&self, state: &FleetState, k: usize, target: Option<usize>) -> Option<NodeId> {
        let v = &state.vehicles[k];
        let budget = self.inst.capacity - v.utilization;
        let mut best: Option<(f64, f64, NodeId)> = None;
        for &d in &self.inst.depots {
            let reach = self.sp.dist(v.location, d);
            if reach > budget + EPS {
                continue;
            }
            let score = target.map_or(reach, |e| self.dist_to_edge(d, e));
            let better = match best {
                None => true,
                Some((s, r, _)) => score < s - EPS || ((score - s).abs() <= EPS && reach < r - EPS),
            };
            if better {
                best = Some((score, reach, d));
            }
        }
        best.map(|(_, _, d)| d)
    }

    /// One iteration of the main loop for vehicle `k`.
    pub fn step(&self, state: &mut FleetState, k: usize) {
        if let Some(choice) = self.closest_feasible_edge(state, k) {
            self.advance(state, k, &choice.trip.nodes[..=choice.head_index]);
            return;
        }
        let target = self.closest_required_edge(state, k);
        if state.vehicles[k].in_trip() {
            let depot = self
                .closing_depot(state, k, target)
                .or_else(|| self.nearest_depot(state.vehicles[k].location));
            match depot {
                Some(d) => {
                    let walk = self.walk(state.vehicles[k].location, d);
                    self.finish_trip(state, k, &walk);
                }
                None => state.vehicles[k].feasible = false,
            }
            return;
        }
        let Some(target) = target else {
            state.vehicles[k].feasible = false;
            return;
        };
        match self.closest_feasible_depot(state, k, target) {
            Some(choice) => self.finish_trip(state, k, &choice.trip.nodes),
            None => state.vehicles[k].feasible = false,
        }
    }

    /// Closes every open trip at the nearest depot.
    pub fn complete(&self, state: &mut FleetState) {
        for k in 0..state.vehicles.len() {
            if state.vehicles[k].in_trip() {
                let here = state.vehicles[k].location;
                if let Some(d) = self.nearest_depot(here) {
                    let walk = self.walk(here, d);
                    self.finish_trip(state, k, &walk);
                }
            }
        }
    }

    pub fn solve(&self) -> Solution {
        let mut state = FleetState::new(self.inst);
        let m = self.inst.required.len();
        let cap = 4 * (m + 1) * (self.inst.depots.len() + 2) * self.inst.vehicles.max(1) + 64;
        let mut iterations = 0;
        while state.remaining() > 0 && iterations < cap {
            let Some(k) = select_next_vehicle(&state) else { break };
            self.step(&mut state, k);
            iterations += 1;
        }
        self.complete(&mut state);
        let routes = state
            .vehicles
            .into_iter()
            .enumerate()
            .map(|(vehicle, v)| Route {
                vehicle,
                trips: v.trips,
            })
            .collect();
        Solution::from_routes(self.inst, routes)
    }
}

pub fn solve_multitrip(inst: &Instance) -> Solution {
    MultiTrip::new(inst).solve()
}
