//! Routing toolkit for the multi-depot rural postman problem with
//! rechargeable, reusable vehicles.
//!
//! A vehicle flies trips that start and end at depots; between consecutive
//! trips it spends a fixed recharge time. Every required edge must be
//! traversed by some vehicle and the goal is to minimise the makespan, the
//! latest completion time over the fleet.
//!
//! * [`graph`]: multigraphs and deterministic shortest paths
//! * [`instance`]: instance model, file formats, generation, dummy nodes
//! * [`solution`]: routes, evaluation, feasibility checking
//! * [`multitrip`]: the multi-trip constructive heuristic
//! * [`baselines`]: path scanning, augment-merge, construct-strike
//! * [`milp`]: MILP model building, LP/MPS writers, encode/decode
//! * [`exact`]: exact solver and brute-force enumerator for tiny instances

pub mod baselines;
pub mod exact;
pub mod graph;
pub mod instance;
pub mod milp;
pub mod multitrip;
pub mod solution;

/// Absolute tolerance for comparing times.
pub const EPS: f64 = 1e-9;

pub use graph::{Arc, GraphError, NodeId, PathResult, ShortestPaths, WeightedGraph};
pub use instance::{Instance, RequiredEdge};
pub use solution::{Route, Solution, Trip};
