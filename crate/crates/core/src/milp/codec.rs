use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::model::{MilpModel, Sense, VarIndex};
use crate::graph::NodeId;
use crate::instance::{DummyMap, Instance};
use crate::solution::{Route, Solution, Trip};

const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodeError {
    #[error("vehicle {vehicle} needs {needed} trips but the model has {available}")]
    TooManyTrips { vehicle: usize, needed: usize, available: usize },
    #[error("vehicle {vehicle} is not in the model")]
    UnknownVehicle { vehicle: usize },
    #[error("trip {trip} of vehicle {vehicle} repeats an arc that cannot be rerouted")]
    RepeatedArc { vehicle: usize, trip: usize },
    #[error("trip {trip} of vehicle {vehicle} uses ({from}, {to}), which has no column")]
    MissingArc { vehicle: usize, trip: usize, from: NodeId, to: NodeId },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("assignment has {got} values, model has {expected} columns")]
    Length { expected: usize, got: usize },
    #[error("value {value} of {name} is not integral")]
    Fractional { name: String, value: f64 },
    #[error("trip {trip} of vehicle {vehicle} is used but has no arcs")]
    EmptyTrip { vehicle: usize, trip: usize },
    #[error("arcs of trip {trip} of vehicle {vehicle} do not form one walk from node {start}")]
    NotAWalk { vehicle: usize, trip: usize, start: NodeId },
    #[error("trip {trip} of vehicle {vehicle} ends at non-depot node {node}")]
    EndsOffDepot { vehicle: usize, trip: usize, node: NodeId },
}

/// A row or bound not satisfied by an assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for RowViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: lhs {} vs rhs {}", self.name, self.lhs, self.rhs)
    }
}

/// Rows, bounds and integrality violated by `values`, within `1e-6`.
pub fn check_assignment(model: &MilpModel, values: &[f64]) -> Vec<RowViolation> {
    let mut out = Vec::new();
    if values.len() != model.columns.len() {
        out.push(RowViolation {
            name: "length".into(),
            lhs: values.len() as f64,
            rhs: model.columns.len() as f64,
        });
        return out;
    }
    for (c, &v) in model.columns.iter().zip(values) {
        if v < c.lower - INT_TOL || v > c.upper + INT_TOL || (c.integer && (v - v.round()).abs() > INT_TOL) {
            out.push(RowViolation {
                name: c.name.clone(),
                lhs: v,
                rhs: if v < c.lower { c.lower } else { c.upper },
            });
        }
    }
    for row in &model.rows {
        let lhs: f64 = row.coeffs.iter().map(|&(c, a)| a * values[c]).sum();
        let tol = INT_TOL * (1.0 + row.rhs.abs());
        let ok = match row.sense {
            Sense::Le => lhs <= row.rhs + tol,
            Sense::Ge => lhs >= row.rhs - tol,
            Sense::Eq => (lhs - row.rhs).abs() <= tol,
        };
        if !ok {
            out.push(RowViolation {
                name: row.name.clone(),
                lhs,
                rhs: row.rhs,
            });
        }
    }
    out
}

/// Cuts a walk at every interior depot visit.
fn split_at_depots(inst: &Instance, walk: &[NodeId]) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut cur = vec![walk[0]];
    for &n in &walk[1..] {
        cur.push(n);
        if inst.is_depot(n) {
            out.push(std::mem::replace(&mut cur, vec![n]));
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    out
}

/// Removes one repeated arc; `None` when the walk already uses each arc once.
fn repair_once(inst: &Instance, walk: &[NodeId]) -> Option<Option<Vec<NodeId>>> {
    let mut seen: BTreeMap<(NodeId, NodeId), usize> = BTreeMap::new();
    for i in 0..walk.len() - 1 {
        let arc = (walk[i], walk[i + 1]);
        let Some(&first) = seen.get(&arc) else {
            seen.insert(arc, i);
            continue;
        };
        // walk = A (u,v) B (u,v) C with B running from v back to u
        let (u, v) = arc;
        let a = &walk[..=first];
        let b = &walk[first + 1..=i];
        let c = &walk[i + 1..];
        let reverse_used = walk.windows(2).any(|w| w[0] == v && w[1] == u);
        let reversible = b.windows(2).all(|w| inst.graph.arc_weight(w[1], w[0]).is_some());
        if !reversible {
            return Some(None);
        }
        let mut out = a.to_vec();
        if !reverse_used && inst.graph.arc_weight(v, u).is_some() {
            out.push(v);
            out.push(u);
        }
        // rev(B) runs from u to v, where C resumes
        out.extend(b.iter().rev().skip(1));
        out.extend_from_slice(&c[1..]);
        return Some(Some(out));
    }
    None
}

/// Rewrites a walk so that no directed arc repeats and no depot is visited
/// mid-trip. Pieces come back in travel order.
fn literal_pieces(inst: &Instance, walk: &[NodeId]) -> Option<Vec<Vec<NodeId>>> {
    let mut done = Vec::new();
    let mut todo: Vec<Vec<NodeId>> = split_at_depots(inst, walk);
    todo.reverse();
    let mut budget = 4 * walk.len() * walk.len() + 16;
    while let Some(piece) = todo.pop() {
        budget = budget.checked_sub(1)?;
        match repair_once(inst, &piece) {
            None => done.push(piece),
            Some(None) => return None,
            Some(Some(fixed)) => {
                let mut parts = split_at_depots(inst, &fixed);
                parts.reverse();
                todo.extend(parts);
            }
        }
    }
    Some(done)
}

/// Encodes a solution on the original instance as an assignment of `model`,
/// which was built on `inst`, the dummy-node version given by `map`.
pub fn encode_solution(
    model: &MilpModel,
    inst: &Instance,
    map: &DummyMap,
    sol: &Solution,
) -> Result<Vec<f64>, EncodeError> {
    let mut values = vec![0.0; model.columns.len()];
    let r = inst.recharge_time;
    let mut beta: f64 = 0.0;
    for route in &sol.routes {
        let k = route.vehicle;
        if k >= model.vehicles {
            return Err(EncodeError::UnknownVehicle { vehicle: k });
        }
        let mut pieces = Vec::new();
        for (t, trip) in route.trips.iter().enumerate() {
            let lifted = map.lift_walk(&trip.nodes);
            pieces.extend(
                literal_pieces(inst, &lifted).ok_or(EncodeError::RepeatedArc { vehicle: k, trip: t })?,
            );
        }
        if pieces.len() > model.trips {
            return Err(EncodeError::TooManyTrips {
                vehicle: k,
                needed: pieces.len(),
                available: model.trips,
            });
        }
        let mut lhs = 0.0;
        for (f, piece) in pieces.iter().enumerate() {
            for w in piece.windows(2) {
                let col = model
                    .column(VarIndex::X { k, f, i: w[0], j: w[1] })
                    .ok_or(EncodeError::MissingArc { vehicle: k, trip: f, from: w[0], to: w[1] })?;
                values[col] = 1.0;
                lhs += model.arcs.iter().find(|a| a.0 == w[0] && a.1 == w[1]).map_or(0.0, |a| a.2);
            }
            let end = *piece.last().unwrap();
            values[model.column(VarIndex::Y { k, f, d: end }).expect("pieces end at depots")] = 1.0;
            values[model.column(VarIndex::Z { k, f }).unwrap()] = 1.0;
            lhs += r;
        }
        beta = beta.max(lhs - r);
    }
    values[model.beta()] = beta;
    Ok(values)
}

fn to_bit(name: &str, v: f64) -> Result<bool, DecodeError> {
    if (v - v.round()).abs() > INT_TOL {
        return Err(DecodeError::Fractional { name: name.into(), value: v });
    }
    Ok(v > 0.5)
}

/// Reconstructs routes from an assignment of `model`, on the same instance.
///
/// Each trip is the Euler walk through its arcs from the trip's start node,
/// taking the smallest unused successor first.
pub fn decode_solution(inst: &Instance, model: &MilpModel, values: &[f64]) -> Result<Solution, DecodeError> {
    if values.len() != model.columns.len() {
        return Err(DecodeError::Length { expected: model.columns.len(), got: values.len() });
    }
    let mut routes = Vec::new();
    for k in 0..model.vehicles {
        let mut route = Route::empty(k);
        let mut start = inst.start_depots[k];
        for f in 0..model.trips {
            let zc = model.column(VarIndex::Z { k, f }).unwrap();
            if !to_bit(&model.columns[zc].name, values[zc])? {
                continue;
            }
            let mut out: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
            let mut total = 0;
            for &(i, j, _) in &model.arcs {
                let c = model.column(VarIndex::X { k, f, i, j }).unwrap();
                if to_bit(&model.columns[c].name, values[c])? {
                    out.entry(i).or_default().push(j);
                    total += 1;
                }
            }
            if total == 0 {
                return Err(DecodeError::EmptyTrip { vehicle: k, trip: f });
            }
            // successors are popped from the back, so keep them descending
            for succ in out.values_mut() {
                succ.sort_unstable_by(|a, b| b.cmp(a));
            }
            let mut stack = vec![start];
            let mut walk = Vec::new();
            while let Some(&top) = stack.last() {
                match out.get_mut(&top).and_then(|s| s.pop()) {
                    Some(next) => stack.push(next),
                    None => walk.push(stack.pop().unwrap()),
                }
            }
            walk.reverse();
            if walk.len() != total + 1 {
                return Err(DecodeError::NotAWalk { vehicle: k, trip: f, start });
            }
            let end = *walk.last().unwrap();
            if !inst.is_depot(end) {
                return Err(DecodeError::EndsOffDepot { vehicle: k, trip: f, node: end });
            }
            let trip = Trip::from_walk(inst, walk).ok_or(DecodeError::NotAWalk { vehicle: k, trip: f, start })?;
            start = end;
            route.trips.push(trip);
        }
        routes.push(route);
    }
    Ok(Solution::from_routes(inst, routes))
}

/// Maps a solution on the dummy-node instance back to `original`.
pub fn restore_solution(original: &Instance, map: &DummyMap, sol: &Solution) -> Solution {
    let routes = sol
        .routes
        .iter()
        .map(|r| Route {
            vehicle: r.vehicle,
            trips: r
                .trips
                .iter()
                .filter_map(|t| {
                    let nodes = map.strip_walk(&t.nodes);
                    (nodes.len() > 1).then(|| Trip::from_walk(original, nodes)).flatten()
                })
                .collect(),
        })
        .collect();
    Solution::from_routes(original, routes)
}
