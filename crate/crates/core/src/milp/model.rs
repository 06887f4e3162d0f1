use std::collections::HashMap;

use super::MilpError;
use crate::graph::NodeId;
use crate::instance::Instance;

/// One decision variable; `k` and `f` are 0-based vehicle and trip numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarIndex {
    X { k: usize, f: usize, i: NodeId, j: NodeId },
    Y { k: usize, f: usize, d: NodeId },
    Z { k: usize, f: usize },
    Beta,
}

impl VarIndex {
    pub fn name(&self) -> String {
        match *self {
            VarIndex::X { k, f, i, j } => format!("x_{k}_{f}_{i}_{j}"),
            VarIndex::Y { k, f, d } => format!("y_{k}_{f}_{d}"),
            VarIndex::Z { k, f } => format!("z_{k}_{f}"),
            VarIndex::Beta => "beta".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub var: VarIndex,
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub integer: bool,
    pub objective: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    /// Constraint family, 1 to 12.
    pub family: usize,
    pub sense: Sense,
    pub rhs: f64,
    pub coeffs: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubtourMode {
    /// One row per free-node subset; refuses more than `cap` free nodes.
    Full { cap: usize },
    None,
}

impl Default for SubtourMode {
    fn default() -> Self {
        SubtourMode::Full { cap: 16 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub name: String,
    pub vehicles: usize,
    pub trips: usize,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
    pub big_m: f64,
    /// Directed node pairs with an x column, with their travel time.
    pub arcs: Vec<(NodeId, NodeId, f64)>,
    lookup: HashMap<VarIndex, usize>,
}

/// Column and per-family row counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelCounts {
    pub columns: usize,
    pub rows: [usize; 12],
}

impl ModelCounts {
    pub fn total_rows(&self) -> usize {
        self.rows.iter().sum()
    }
}

impl MilpModel {
    pub fn column(&self, var: VarIndex) -> Option<usize> {
        self.lookup.get(&var).copied()
    }

    pub fn beta(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn counts(&self) -> ModelCounts {
        let mut rows = [0; 12];
        for r in &self.rows {
            rows[r.family - 1] += 1;
        }
        ModelCounts {
            columns: self.columns.len(),
            rows,
        }
    }
}

fn subtour_nodes(inst: &Instance) -> Vec<NodeId> {
    (0..inst.node_count()).filter(|&i| !inst.is_depot(i)).collect()
}

/// Required-edge orientations with both ends off the depots.
fn subtour_arcs(inst: &Instance) -> Vec<(usize, NodeId, NodeId)> {
    inst.required
        .iter()
        .enumerate()
        .flat_map(|(e, r)| r.orientations().map(move |(p, q)| (e, p, q)))
        .filter(|&(_, p, q)| !inst.is_depot(p) && !inst.is_depot(q))
        .collect()
}

fn check_size(inst: &Instance, trips: usize, mode: SubtourMode) -> Result<(), MilpError> {
    if trips == 0 {
        return Err(MilpError::ZeroTrips);
    }
    if let SubtourMode::Full { cap } = mode {
        let free = subtour_nodes(inst).len();
        if free > cap {
            return Err(MilpError::SubtourCap { cap, free });
        }
    }
    Ok(())
}

/// Counts from the closed-form formulas, without building the model.
pub fn expected_counts(inst: &Instance, trips: usize, mode: SubtourMode) -> Result<ModelCounts, MilpError> {
    check_size(inst, trips, mode)?;
    let k = inst.vehicles;
    let f = trips;
    let nd = inst.depots.len();
    let arcs = inst.graph.arc_pairs().count();
    let free = inst.node_count() - nd;
    let subtour = match mode {
        SubtourMode::None => 0,
        SubtourMode::Full { .. } => k * f * subtour_arcs(inst).len() * (1usize << (free.saturating_sub(2))),
    };
    Ok(ModelCounts {
        columns: k * f * (arcs + nd + 1) + 1,
        rows: [
            k,
            k * (f - 1),
            k * f * nd,
            k * (f - 1) * nd,
            k * f,
            k,
            k * f,
            k * f,
            k * f * free,
            inst.required.len(),
            k * f,
            subtour,
        ],
    })
}

struct Builder {
    columns: Vec<Column>,
    rows: Vec<Row>,
    lookup: HashMap<VarIndex, usize>,
}

impl Builder {
    fn add_column(&mut self, var: VarIndex, upper: f64, integer: bool, objective: f64) {
        self.lookup.insert(var, self.columns.len());
        self.columns.push(Column {
            var,
            name: var.name(),
            lower: 0.0,
            upper,
            integer,
            objective,
        });
    }

    fn col(&self, var: VarIndex) -> usize {
        self.lookup[&var]
    }

    fn add_row(&mut self, name: String, family: usize, sense: Sense, rhs: f64, coeffs: Vec<(usize, f64)>) {
        self.rows.push(Row {
            name,
            family,
            sense,
            rhs,
            coeffs,
        });
    }
}

/// Builds the makespan MILP with `trips` trip slots per vehicle.
///
/// Expects an instance already passed through dummy-node insertion so that no
/// required edge touches a depot directly.
pub fn build_model(inst: &Instance, trips: usize, mode: SubtourMode) -> Result<MilpModel, MilpError> {
    check_size(inst, trips, mode)?;
    let arcs: Vec<(NodeId, NodeId, f64)> = inst.graph.arc_pairs().collect();
    let big_m = arcs.len() as f64 + 1.0;
    let depots = &inst.depots;
    let kk = inst.vehicles;
    let ff = trips;
    let x = |k, f, i, j| VarIndex::X { k, f, i, j };
    let y = |k, f, d| VarIndex::Y { k, f, d };
    let z = |k, f| VarIndex::Z { k, f };

    let mut b = Builder {
        columns: Vec::new(),
        rows: Vec::new(),
        lookup: HashMap::new(),
    };
    for k in 0..kk {
        for f in 0..ff {
            for &(i, j, _) in &arcs {
                b.add_column(x(k, f, i, j), 1.0, true, 0.0);
            }
            for &d in depots {
                b.add_column(y(k, f, d), 1.0, true, 0.0);
            }
            b.add_column(z(k, f), 1.0, true, 0.0);
        }
    }
    b.add_column(VarIndex::Beta, f64::INFINITY, false, 1.0);
    let beta = b.col(VarIndex::Beta);

    // (1) the first trip leaves the vehicle's own depot
    for k in 0..kk {
        let start = inst.start_depots[k];
        let mut c: Vec<(usize, f64)> = arcs
            .iter()
            .filter(|a| a.0 == start)
            .map(|&(i, j, _)| (b.col(x(k, 0, i, j)), 1.0))
            .collect();
        c.push((b.col(z(k, 0)), -1.0));
        b.add_row(format!("c1_{k}"), 1, Sense::Eq, 0.0, c);
    }
    // (2) trips are used in order
    for k in 0..kk {
        for f in 0..ff - 1 {
            let c = vec![(b.col(z(k, f)), 1.0), (b.col(z(k, f + 1)), -1.0)];
            b.add_row(format!("c2_{k}_{f}"), 2, Sense::Ge, 0.0, c);
        }
    }
    // (3) y marks the depot a trip ends at
    for k in 0..kk {
        for f in 0..ff {
            for &d in depots {
                let mut c: Vec<(usize, f64)> = arcs
                    .iter()
                    .filter(|a| a.1 == d)
                    .map(|&(i, j, _)| (b.col(x(k, f, i, j)), 1.0))
                    .collect();
                c.push((b.col(y(k, f, d)), -1.0));
                b.add_row(format!("c3_{k}_{f}_{d}"), 3, Sense::Eq, 0.0, c);
            }
        }
    }
    // (4) a trip leaves from where the previous one ended
    for k in 0..kk {
        for f in 1..ff {
            for &d in depots {
                let mut c = vec![(b.col(y(k, f - 1, d)), 1.0)];
                c.extend(
                    arcs.iter()
                        .filter(|a| a.0 == d)
                        .map(|&(i, j, _)| (b.col(x(k, f, i, j)), -1.0)),
                );
                b.add_row(format!("c4_{k}_{f}_{d}"), 4, Sense::Ge, 0.0, c);
            }
        }
    }
    // (5) a used trip ends at exactly one depot
    for k in 0..kk {
        for f in 0..ff {
            let mut c = vec![(b.col(z(k, f)), 1.0)];
            c.extend(depots.iter().map(|&d| (b.col(y(k, f, d)), -1.0)));
            b.add_row(format!("c5_{k}_{f}"), 5, Sense::Eq, 0.0, c);
        }
    }
    // (6) route time with a recharge between consecutive trips
    let r = inst.recharge_time;
    for k in 0..kk {
        let mut c = Vec::new();
        for f in 0..ff {
            c.extend(arcs.iter().map(|&(i, j, t)| (b.col(x(k, f, i, j)), t)));
            c.push((b.col(z(k, f)), r));
        }
        c.push((beta, -1.0));
        b.add_row(format!("c6_{k}"), 6, Sense::Le, r, c);
    }
    // (7) trip duration within capacity
    for k in 0..kk {
        for f in 0..ff {
            let c = arcs.iter().map(|&(i, j, t)| (b.col(x(k, f, i, j)), t)).collect();
            b.add_row(format!("c7_{k}_{f}"), 7, Sense::Le, inst.capacity, c);
        }
    }
    // (8) as many departures from depots as arrivals
    for k in 0..kk {
        for f in 0..ff {
            let mut net: Vec<(usize, f64)> = Vec::new();
            for &(i, j, _) in &arcs {
                let v = inst.is_depot(i) as i32 - inst.is_depot(j) as i32;
                if v != 0 {
                    net.push((b.col(x(k, f, i, j)), v as f64));
                }
            }
            b.add_row(format!("c8_{k}_{f}"), 8, Sense::Eq, 0.0, net);
        }
    }
    // (9) flow conservation away from the depots
    let free = subtour_nodes(inst);
    for k in 0..kk {
        for f in 0..ff {
            for &n in &free {
                let c = arcs
                    .iter()
                    .filter(|a| (a.0 == n) != (a.1 == n))
                    .map(|&(i, j, _)| (b.col(x(k, f, i, j)), if i == n { 1.0 } else { -1.0 }))
                    .collect();
                b.add_row(format!("c9_{k}_{f}_{n}"), 9, Sense::Eq, 0.0, c);
            }
        }
    }
    // (10) every required edge is traversed
    for (e, req) in inst.required.iter().enumerate() {
        let mut c = Vec::new();
        for k in 0..kk {
            for f in 0..ff {
                for (p, q) in req.orientations() {
                    c.push((b.col(x(k, f, p, q)), 1.0));
                }
            }
        }
        b.add_row(format!("c10_{e}"), 10, Sense::Ge, 1.0, c);
    }
    // (11) arcs only on used trips
    for k in 0..kk {
        for f in 0..ff {
            let mut c: Vec<(usize, f64)> = arcs.iter().map(|&(i, j, _)| (b.col(x(k, f, i, j)), 1.0)).collect();
            c.push((b.col(z(k, f)), -big_m));
            b.add_row(format!("c11_{k}_{f}"), 11, Sense::Le, 0.0, c);
        }
    }
    // (12) a trip serving (p, q) inside S crosses the boundary of S twice
    if let SubtourMode::Full { .. } = mode {
        let position: HashMap<NodeId, usize> = free.iter().enumerate().map(|(p, &n)| (n, p)).collect();
        let targets = subtour_arcs(inst);
        let all = 1usize << free.len();
        // local row templates over arc positions, shared by every (k, f)
        let mut templates: Vec<(String, Vec<(usize, f64)>)> = Vec::new();
        for &(e, p, q) in &targets {
            let must = (1usize << position[&p]) | (1usize << position[&q]);
            let qpos = arcs.iter().position(|a| a.0 == p && a.1 == q).expect("required arcs exist");
            for s in (0..all).filter(|s| s & must == must) {
                let inside = |n: NodeId| position.get(&n).is_some_and(|&b| s >> b & 1 == 1);
                let mut c: Vec<(usize, f64)> = arcs
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| inside(a.0) != inside(a.1))
                    .map(|(pos, _)| (pos, 1.0))
                    .collect();
                c.push((qpos, -2.0));
                templates.push((format!("e{e}_{p}_{q}_s{s:x}"), c));
            }
        }
        for k in (0..kk).filter(|_| !templates.is_empty()) {
            for f in 0..ff {
                let base = b.col(x(k, f, arcs[0].0, arcs[0].1));
                for (tag, c) in &templates {
                    let c = c.iter().map(|&(pos, v)| (base + pos, v)).collect();
                    b.add_row(format!("c12_{k}_{f}_{tag}"), 12, Sense::Ge, 0.0, c);
                }
            }
        }
    }

    Ok(MilpModel {
        name: inst.name.clone(),
        vehicles: kk,
        trips: ff,
        columns: b.columns,
        rows: b.rows,
        big_m,
        arcs,
        lookup: b.lookup,
    })
}
