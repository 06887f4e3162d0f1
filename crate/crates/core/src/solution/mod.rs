//! Solutions: trips, routes, objective evaluation and feasibility checks.

mod file;

use std::fmt;

use thiserror::Error;

use crate::graph::NodeId;
use crate::instance::Instance;
use crate::EPS;

pub use file::{parse_solution, write_solution, write_unsolved, SolutionFile, SolutionFileError};

/// Tolerance when comparing stored and recomputed times.
pub const TIME_TOLERANCE: f64 = 1e-6;

/// A depot-to-depot walk flown on a single charge.
#[derive(Debug, Clone, PartialEq)]
pub struct Trip {
    pub nodes: Vec<NodeId>,
    pub duration: f64,
    /// Indices into `Instance::required` traversed by this trip, sorted.
    pub covered: Vec<usize>,
}

impl Trip {
    /// Builds a trip from a node walk; `None` if a step is not an arc.
    pub fn from_walk(inst: &Instance, nodes: Vec<NodeId>) -> Option<Trip> {
        let duration = inst.graph.walk_cost(&nodes)?;
        let covered = covered_by_walk(inst, &nodes);
        Some(Trip {
            nodes,
            duration,
            covered,
        })
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }
}

/// Required-edge indices traversed by a walk, sorted and deduplicated.
pub fn covered_by_walk(inst: &Instance, nodes: &[NodeId]) -> Vec<usize> {
    let mut covered: Vec<usize> = nodes
        .windows(2)
        .flat_map(|w| inst.required_covered_by(w[0], w[1]))
        .collect();
    covered.sort_unstable();
    covered.dedup();
    covered
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub vehicle: usize,
    pub trips: Vec<Trip>,
}

impl Route {
    pub fn empty(vehicle: usize) -> Self {
        Self {
            vehicle,
            trips: Vec::new(),
        }
    }

    pub fn time(&self, recharge_time: f64) -> f64 {
        let durations: Vec<f64> = self.trips.iter().map(|t| t.duration).collect();
        route_time(&durations, recharge_time)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// One route per vehicle, indexed by vehicle.
    pub routes: Vec<Route>,
    pub makespan: f64,
    /// Required-edge indices no trip traverses.
    pub uncovered: Vec<usize>,
}

impl Solution {
    /// Derives makespan and uncovered edges from the routes.
    pub fn from_routes(inst: &Instance, routes: Vec<Route>) -> Solution {
        let mut seen = vec![false; inst.required.len()];
        for t in routes.iter().flat_map(|r| &r.trips) {
            for &i in &t.covered {
                seen[i] = true;
            }
        }
        let uncovered = (0..seen.len()).filter(|&i| !seen[i]).collect();
        let makespan = routes.iter().map(|r| r.time(inst.recharge_time)).fold(0.0, f64::max);
        Solution {
            routes,
            makespan,
            uncovered,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn trip_count(&self) -> usize {
        self.routes.iter().map(|r| r.trips.len()).sum()
    }

    pub fn max_trips_per_vehicle(&self) -> usize {
        self.routes.iter().map(|r| r.trips.len()).max().unwrap_or(0)
    }
}

/// Sum of trip durations plus one recharge between consecutive trips.
pub fn route_time(durations: &[f64], recharge_time: f64) -> f64 {
    let recharges = durations.len().saturating_sub(1) as f64;
    durations.iter().sum::<f64>() + recharges * recharge_time
}

/// Makespan: the largest route time over the fleet.
pub fn evaluate_solution(inst: &Instance, sol: &Solution) -> f64 {
    sol.routes
        .iter()
        .map(|r| r.time(inst.recharge_time))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GapError {
    #[error("optimal makespan must be positive, got {0}")]
    NonPositiveOptimum(f64),
}

/// Percentage by which `heuristic` exceeds `optimal`.
pub fn gap(heuristic: f64, optimal: f64) -> Result<f64, GapError> {
    if optimal > 0.0 {
        Ok((heuristic - optimal) / optimal * 100.0)
    } else {
        Err(GapError::NonPositiveOptimum(optimal))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    VehicleCount { expected: usize, found: usize },
    RouteOrder { position: usize, vehicle: usize },
    EmptyTrip { vehicle: usize, trip: usize },
    NotAnArc { vehicle: usize, trip: usize, from: NodeId, to: NodeId },
    EndpointNotDepot { vehicle: usize, trip: usize, node: NodeId },
    OverCapacity { vehicle: usize, trip: usize, duration: f64, capacity: f64 },
    DurationMismatch { vehicle: usize, trip: usize, stored: f64, actual: f64 },
    WrongStartDepot { vehicle: usize, expected: NodeId, found: NodeId },
    Discontinuity { vehicle: usize, trip: usize, previous_end: NodeId, start: NodeId },
    Uncovered { edge: usize, from: NodeId, to: NodeId },
    MakespanMismatch { stored: f64, actual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            VehicleCount { expected, found } => write!(f, "vehicle count: expected {expected} routes, found {found}"),
            RouteOrder { position, vehicle } => write!(f, "route order: position {position} holds vehicle {vehicle}"),
            EmptyTrip { vehicle, trip } => write!(f, "empty trip: vehicle {vehicle} trip {trip}"),
            NotAnArc { vehicle, trip, from, to } => {
                write!(f, "non-arc step: vehicle {vehicle} trip {trip} uses {from} -> {to}")
            }
            EndpointNotDepot { vehicle, trip, node } => {
                write!(f, "trip endpoint not a depot: vehicle {vehicle} trip {trip} at node {node}")
            }
            OverCapacity { vehicle, trip, duration, capacity } => {
                write!(f, "capacity exceeded: vehicle {vehicle} trip {trip} takes {duration} > {capacity}")
            }
            DurationMismatch { vehicle, trip, stored, actual } => {
                write!(f, "duration mismatch: vehicle {vehicle} trip {trip} stored {stored}, walk costs {actual}")
            }
            WrongStartDepot { vehicle, expected, found } => {
                write!(f, "start depot: vehicle {vehicle} must start at {expected}, starts at {found}")
            }
            Discontinuity { vehicle, trip, previous_end, start } => write!(
                f,
                "route discontinuity: vehicle {vehicle} trip {trip} starts at {start} but previous trip ended at {previous_end}"
            ),
            Uncovered { edge, from, to } => write!(f, "required edge uncovered: #{edge} ({from}, {to})"),
            MakespanMismatch { stored, actual } => write!(f, "makespan mismatch: stored {stored}, routes give {actual}"),
        }
    }
}

/// Every violated solution constraint; empty iff feasible and complete.
pub fn check_feasibility(inst: &Instance, sol: &Solution) -> Vec<Violation> {
    let mut out = Vec::new();
    if sol.routes.len() != inst.vehicles {
        out.push(Violation::VehicleCount {
            expected: inst.vehicles,
            found: sol.routes.len(),
        });
    }
    let mut covered = vec![false; inst.required.len()];
    let mut actual_makespan: f64 = 0.0;

    for (position, route) in sol.routes.iter().enumerate() {
        let k = route.vehicle;
        if k != position {
            out.push(Violation::RouteOrder { position, vehicle: k });
        }
        let mut actual_durations = Vec::with_capacity(route.trips.len());
        let mut previous_end: Option<NodeId> = None;
        for (f, trip) in route.trips.iter().enumerate() {
            if trip.nodes.len() < 2 {
                out.push(Violation::EmptyTrip { vehicle: k, trip: f });
                actual_durations.push(trip.duration);
                continue;
            }
            let mut actual = 0.0;
            for w in trip.nodes.windows(2) {
                match (w[0] < inst.node_count() && w[1] < inst.node_count())
                    .then(|| inst.graph.arc_weight(w[0], w[1]))
                    .flatten()
                {
                    Some(cost) => {
                        actual += cost;
                        for i in inst.required_covered_by(w[0], w[1]) {
                            covered[i] = true;
                        }
                    }
                    None => out.push(Violation::NotAnArc {
                        vehicle: k,
                        trip: f,
                        from: w[0],
                        to: w[1],
                    }),
                }
            }
            for node in [trip.start(), trip.end()] {
                if node >= inst.node_count() || !inst.is_depot(node) {
                    out.push(Violation::EndpointNotDepot { vehicle: k, trip: f, node });
                }
            }
            let longest = actual.max(trip.duration);
            if longest > inst.capacity + EPS {
                out.push(Violation::OverCapacity {
                    vehicle: k,
                    trip: f,
                    duration: longest,
                    capacity: inst.capacity,
                });
            }
            if (actual - trip.duration).abs() > TIME_TOLERANCE {
                out.push(Violation::DurationMismatch {
                    vehicle: k,
                    trip: f,
                    stored: trip.duration,
                    actual,
                });
            }
            match previous_end {
                None => {
                    if let Some(&expected) = inst.start_depots.get(k) {
                        if trip.start() != expected {
                            out.push(Violation::WrongStartDepot {
                                vehicle: k,
                                expected,
                                found: trip.start(),
                            });
                        }
                    }
                }
                Some(prev) if prev != trip.start() => out.push(Violation::Discontinuity {
                    vehicle: k,
                    trip: f,
                    previous_end: prev,
                    start: trip.start(),
                }),
                Some(_) => {}
            }
            previous_end = Some(trip.end());
            actual_durations.push(actual);
        }
        actual_makespan = actual_makespan.max(route_time(&actual_durations, inst.recharge_time));
    }

    for (i, e) in inst.required.iter().enumerate() {
        if !covered[i] {
            out.push(Violation::Uncovered {
                edge: i,
                from: e.from,
                to: e.to,
            });
        }
    }
    if (actual_makespan - sol.makespan).abs() > TIME_TOLERANCE {
        out.push(Violation::MakespanMismatch {
            stored: sol.makespan,
            actual: actual_makespan,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::instance::RequiredEdge;

    fn line() -> Instance {
        let g = WeightedGraph::undirected(3, &[(0, 1, 2.0), (1, 2, 3.0)]).unwrap();
        Instance::new("line", g, vec![0, 2], vec![RequiredEdge::undirected(1, 2)], 1, 6.0, 1.5, vec![0]).unwrap()
    }

    #[test]
    fn route_time_examples() {
        assert!((route_time(&[3.8, 6.7], 1.1) - 11.6).abs() <= 1e-9);
        assert_eq!(route_time(&[5.0], 100.0), 5.0);
        assert_eq!(route_time(&[], 9.0), 0.0);
    }

    #[test]
    fn gap_examples() {
        assert!((gap(166.0, 141.0).unwrap() - 17.7).abs() < 0.05);
        assert_eq!(gap(64.0, 64.0).unwrap(), 0.0);
        assert_eq!(gap(100.0, 50.0).unwrap(), 100.0);
        assert!(gap(1.0, 0.0).is_err());
    }

    #[test]
    fn makespan_is_max_route_time() {
        let inst = line();
        let trip = |d: f64| Trip {
            nodes: vec![0, 1, 0],
            duration: d,
            covered: vec![],
        };
        let sol = Solution {
            routes: vec![
                Route {
                    vehicle: 0,
                    trips: vec![trip(18.8)],
                },
                Route {
                    vehicle: 1,
                    trips: vec![trip(5.4)],
                },
            ],
            makespan: 0.0,
            uncovered: vec![],
        };
        assert_eq!(evaluate_solution(&inst, &sol), 18.8);
        let empty = Solution::from_routes(&inst, vec![Route::empty(0)]);
        assert_eq!(empty.makespan, 0.0);
        assert_eq!(empty.uncovered, vec![0]);
    }

    #[test]
    fn feasible_solution_has_empty_report() {
        let inst = line();
        let t = Trip::from_walk(&inst, vec![0, 1, 2]).unwrap();
        assert_eq!(t.covered, vec![0]);
        let sol = Solution::from_routes(&inst, vec![Route { vehicle: 0, trips: vec![t] }]);
        assert_eq!(sol.makespan, 5.0);
        assert!(check_feasibility(&inst, &sol).is_empty());
    }

    #[test]
    fn capacity_and_coverage_findings() {
        let inst = line();
        let mut t = Trip::from_walk(&inst, vec![0, 1, 2, 1, 2]).unwrap();
        let sol = Solution::from_routes(&inst, vec![Route { vehicle: 0, trips: vec![t.clone()] }]);
        let report = check_feasibility(&inst, &sol);
        assert!(report.iter().any(|v| matches!(v, Violation::OverCapacity { .. })), "{report:?}");

        t = Trip::from_walk(&inst, vec![0, 1, 0]).unwrap();
        let sol = Solution::from_routes(&inst, vec![Route { vehicle: 0, trips: vec![t] }]);
        let report = check_feasibility(&inst, &sol);
        assert_eq!(report, vec![Violation::Uncovered { edge: 0, from: 1, to: 2 }]);
    }

    #[test]
    fn structural_findings() {
        let inst = line();
        let a = Trip::from_walk(&inst, vec![2, 1]).unwrap();
        let b = Trip::from_walk(&inst, vec![0, 1, 2]).unwrap();
        let sol = Solution::from_routes(&inst, vec![Route { vehicle: 0, trips: vec![a, b] }]);
        let report = check_feasibility(&inst, &sol);
        assert!(report.contains(&Violation::WrongStartDepot { vehicle: 0, expected: 0, found: 2 }));
        assert!(report.contains(&Violation::EndpointNotDepot { vehicle: 0, trip: 0, node: 1 }));
        assert!(report.iter().any(|v| matches!(v, Violation::Discontinuity { trip: 1, .. })));
    }

    #[test]
    fn directed_coverage_is_direction_sensitive() {
        let g = WeightedGraph::undirected(2, &[(0, 1, 1.0)]).unwrap();
        let inst = Instance::new("d", g, vec![0, 1], vec![RequiredEdge::directed(0, 1)], 1, 5.0, 0.0, vec![1]).unwrap();
        let t = Trip::from_walk(&inst, vec![1, 0]).unwrap();
        assert!(t.covered.is_empty());
        let sol = Solution::from_routes(&inst, vec![Route { vehicle: 0, trips: vec![t] }]);
        assert_eq!(check_feasibility(&inst, &sol).len(), 1);
    }
}
