//! Exact makespan for tiny instances, plus a brute-force enumerator used to
//! cross-check it.
//!
//! The solver tabulates the cheapest trip for every (start depot, served
//! edge set, end depot) by a Held-Karp recursion over edge orientations, then
//! builds per-vehicle route values over subsets with a layered trip DP, and
//! finally splits the edge set among vehicles with a min-max subset DP.

mod enumerate;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{NodeId, ShortestPaths};
use crate::instance::{DummyMap, Instance};
use crate::milp::{encode_solution, MilpModel, SolveStatus};
use crate::multitrip::solve_multitrip;
use crate::solution::{Route, Solution, Trip};
use crate::EPS;

pub use enumerate::enumerate_exhaustive;

/// Largest required-edge count the subset DPs accept.
pub const MAX_EXACT_EDGES: usize = 12;

/// Which walks count as a trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TripSemantics {
    /// Any walk between depots.
    #[default]
    Free,
    /// Depots appear only as the first and last node of a trip, as in the MILP.
    DepotFree,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactConfig {
    pub max_trips: usize,
    pub time_budget: Option<Duration>,
    pub semantics: TripSemantics,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            max_trips: 4,
            time_budget: None,
            semantics: TripSemantics::Free,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome {
    pub solution: Solution,
    /// False when the search was cut short and `solution` is only an incumbent.
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("enumeration is limited to {max_edges} required edges, {max_vehicles} vehicles and {max_trips} trips")]
    TooLarge {
        max_edges: usize,
        max_vehicles: usize,
        max_trips: usize,
    },
}

/// Leg costs and paths under a trip semantics.
pub(crate) struct Legs<'a> {
    inst: &'a Instance,
    sp: ShortestPaths,
    semantics: TripSemantics,
}

impl<'a> Legs<'a> {
    pub fn new(inst: &'a Instance, semantics: TripSemantics) -> Self {
        let sp = match semantics {
            TripSemantics::Free => ShortestPaths::new(&inst.graph),
            TripSemantics::DepotFree => ShortestPaths::avoiding(&inst.graph, &inst.depot_mask()),
        };
        Self { inst, sp, semantics }
    }

    fn strict(&self) -> bool {
        self.semantics == TripSemantics::DepotFree
    }

    /// From the trip's start depot to the first tail.
    pub fn start(&self, d: NodeId, tail: NodeId) -> f64 {
        if self.strict() && self.inst.is_depot(tail) && tail != d {
            return f64::INFINITY;
        }
        self.sp.dist(d, tail)
    }

    /// Between two served edges.
    pub fn middle(&self, head: NodeId, tail: NodeId) -> f64 {
        if self.strict() && (self.inst.is_depot(head) || self.inst.is_depot(tail)) {
            return f64::INFINITY;
        }
        self.sp.dist(head, tail)
    }

    /// From the last head to the end depot.
    pub fn end(&self, head: NodeId, d: NodeId) -> f64 {
        if self.strict() && self.inst.is_depot(head) && head != d {
            return f64::INFINITY;
        }
        self.sp.dist(head, d)
    }

    /// A trip that serves nothing.
    pub fn reposition(&self, d: NodeId, to: NodeId) -> f64 {
        if d == to {
            return f64::INFINITY;
        }
        self.sp.dist(d, to)
    }

    fn path(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        self.sp.path(from, to).expect("finite legs have paths").nodes
    }
}

/// `(tail, head, weight)` per orientation of each required edge.
pub(crate) fn orientations(inst: &Instance) -> Vec<Vec<(NodeId, NodeId, f64)>> {
    inst.required
        .iter()
        .map(|e| {
            e.orientations()
                .filter_map(|(t, h)| inst.graph.arc_weight(t, h).map(|w| (t, h, w)))
                .collect()
        })
        .collect()
}

const NONE: u32 = u32::MAX;

/// Cheapest trips from one start depot.
struct TripTable {
    m: usize,
    /// Previous `(e, o)` per Held-Karp state `(mask * m + e) * 2 + o`.
    parent: Vec<u32>,
    /// `close[mask * nd + j]`: cost to end at depot `j` and the last `(e, o)`.
    close: Vec<(f64, u32)>,
}

struct Solver<'a> {
    inst: &'a Instance,
    legs: Legs<'a>,
    orient: Vec<Vec<(NodeId, NodeId, f64)>>,
    m: usize,
    deadline: Option<Instant>,
}

struct OutOfTime;

impl<'a> Solver<'a> {
    fn check_time(&self) -> Result<(), OutOfTime> {
        match self.deadline {
            Some(t) if Instant::now() > t => Err(OutOfTime),
            _ => Ok(()),
        }
    }

    fn trip_table(&self, d: NodeId) -> Result<TripTable, OutOfTime> {
        let m = self.m;
        let cap = self.inst.capacity + EPS;
        let full = 1usize << m;
        let mut dp = vec![f64::INFINITY; full * m * 2];
        let mut parent = vec![NONE; full * m * 2];
        let at = |mask: usize, e: usize, o: usize| (mask * m + e) * 2 + o;
        for (e, os) in self.orient.iter().enumerate() {
            for (o, &(t, _, w)) in os.iter().enumerate() {
                let c = self.legs.start(d, t) + w;
                if c <= cap {
                    dp[at(1 << e, e, o)] = c;
                }
            }
        }
        for mask in 1..full {
            if mask & 0xff == 0 {
                self.check_time()?;
            }
            for e in (0..m).filter(|e| mask >> e & 1 == 1) {
                for (o, &(_, h, _)) in self.orient[e].iter().enumerate() {
                    let base = dp[at(mask, e, o)];
                    if !base.is_finite() {
                        continue;
                    }
                    for e2 in (0..m).filter(|e2| mask >> e2 & 1 == 0) {
                        for (o2, &(t2, _, w2)) in self.orient[e2].iter().enumerate() {
                            let c = base + self.legs.middle(h, t2) + w2;
                            let slot = at(mask | 1 << e2, e2, o2);
                            if c <= cap && c < dp[slot] - EPS {
                                dp[slot] = c;
                                parent[slot] = (e * 2 + o) as u32;
                            }
                        }
                    }
                }
            }
        }
        let depots = &self.inst.depots;
        let nd = depots.len();
        let mut close = vec![(f64::INFINITY, NONE); full * nd];
        for (j, &dj) in depots.iter().enumerate() {
            let c = self.legs.reposition(d, dj);
            if c <= cap {
                close[j] = (c, NONE);
            }
        }
        for mask in 1..full {
            for e in (0..m).filter(|e| mask >> e & 1 == 1) {
                for (o, &(_, h, _)) in self.orient[e].iter().enumerate() {
                    let base = dp[at(mask, e, o)];
                    if !base.is_finite() {
                        continue;
                    }
                    for (j, &dj) in depots.iter().enumerate() {
                        let c = base + self.legs.end(h, dj);
                        if c <= cap && c < close[mask * nd + j].0 - EPS {
                            close[mask * nd + j] = (c, (e * 2 + o) as u32);
                        }
                    }
                }
            }
        }
        Ok(TripTable { m, parent, close })
    }

    /// Walk of the tabulated trip from depot `d` serving `mask` and ending at depot `to`.
    fn trip_walk(&self, table: &TripTable, d: NodeId, mask: usize, to: usize) -> Vec<NodeId> {
        let nd = self.inst.depots.len();
        let end = self.inst.depots[to];
        let (_, mut last) = table.close[mask * nd + to];
        if last == NONE {
            return self.legs.path(d, end);
        }
        let mut order = Vec::new();
        let mut mask = mask;
        while last != NONE {
            let (e, o) = ((last / 2) as usize, (last % 2) as usize);
            order.push((e, o));
            let prev = table.parent[(mask * table.m + e) * 2 + o];
            mask &= !(1 << e);
            last = prev;
        }
        order.reverse();
        let mut walk = vec![d];
        for &(e, o) in &order {
            let (t, h, _) = self.orient[e][o];
            let cur = *walk.last().unwrap();
            let leg = self.legs.path(cur, t);
            walk.extend_from_slice(&leg[1..]);
            walk.push(h);
        }
        let cur = *walk.last().unwrap();
        walk.extend_from_slice(&self.legs.path(cur, end)[1..]);
        walk
    }

    fn solve(&self, max_trips: usize) -> Result<Option<Solution>, OutOfTime> {
        let inst = self.inst;
        let m = self.m;
        let full = 1usize << m;
        let all = full - 1;
        let depots = &inst.depots;
        let nd = depots.len();
        let r = inst.recharge_time;

        let tables = depots.iter().map(|&d| self.trip_table(d)).collect::<Result<Vec<_>, _>>()?;

        let mut starts = inst.start_depots.clone();
        starts.sort_unstable();
        starts.dedup();

        // per start depot: route value by served set, and how to rebuild it
        struct RouteTable {
            parent: Vec<(u32, u32)>,
            g: Vec<(f64, usize, usize)>,
        }
        let idx = |f: usize, j: usize, s: usize| (f * nd + j) * full + s;
        let mut route_tables = Vec::new();
        for &b in &starts {
            let bj = depots.binary_search(&b).unwrap();
            let mut best = vec![f64::INFINITY; (max_trips + 1) * nd * full];
            let mut parent = vec![(NONE, NONE); best.len()];
            best[idx(0, bj, 0)] = 0.0;
            for f in 0..max_trips {
                self.check_time()?;
                let extra = if f == 0 { 0.0 } else { r };
                for j in 0..nd {
                    for s in 0..full {
                        let base = best[idx(f, j, s)];
                        if !base.is_finite() {
                            continue;
                        }
                        let comp = all & !s;
                        let mut q = comp;
                        loop {
                            for j2 in 0..nd {
                                let c = tables[j].close[q * nd + j2].0;
                                if !c.is_finite() {
                                    continue;
                                }
                                let v = base + extra + c;
                                let slot = idx(f + 1, j2, s | q);
                                if v < best[slot] - EPS {
                                    best[slot] = v;
                                    parent[slot] = (j as u32, q as u32);
                                }
                            }
                            if q == 0 {
                                break;
                            }
                            q = (q - 1) & comp;
                        }
                    }
                }
            }
            let mut g = vec![(f64::INFINITY, 0, 0); full];
            for s in 0..full {
                for f in 0..=max_trips {
                    for j in 0..nd {
                        let v = best[idx(f, j, s)];
                        if v < g[s].0 - EPS {
                            g[s] = (v, f, j);
                        }
                    }
                }
            }
            route_tables.push(RouteTable { parent, g });
        }

        // cheapest route serving at least T: superset minimum, remembering the set
        let mut at_least: Vec<Vec<(f64, usize)>> = Vec::new();
        for rt in &route_tables {
            let mut h: Vec<(f64, usize)> = (0..full).map(|s| (rt.g[s].0, s)).collect();
            for bit in 0..m {
                for s in 0..full {
                    if s >> bit & 1 == 0 && h[s | 1 << bit].0 < h[s].0 - EPS {
                        h[s] = h[s | 1 << bit];
                    }
                }
            }
            at_least.push(h);
        }

        // split the edges among vehicles
        let mut h = vec![f64::INFINITY; full];
        h[0] = 0.0;
        let mut choice = vec![vec![0usize; full]; inst.vehicles];
        for (k, picks) in choice.iter_mut().enumerate() {
            self.check_time()?;
            let si = starts.binary_search(&inst.start_depots[k]).unwrap();
            let gk = &at_least[si];
            let mut next = vec![f64::INFINITY; full];
            for s in 0..full {
                let mut t = s;
                loop {
                    let v = h[s & !t].max(gk[t].0);
                    if v < next[s] - EPS {
                        next[s] = v;
                        picks[s] = t;
                    }
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & s;
                }
            }
            h = next;
        }
        if !h[all].is_finite() {
            return Ok(None);
        }

        let mut routes = vec![Route::empty(0); inst.vehicles];
        let mut s = all;
        for k in (0..inst.vehicles).rev() {
            let t = choice[k][s];
            s &= !t;
            let si = starts.binary_search(&inst.start_depots[k]).unwrap();
            let served = at_least[si][t].1;
            let rt = &route_tables[si];
            let (_, mut f, mut j) = rt.g[served];
            let mut set = served;
            let mut trips = Vec::new();
            while f > 0 {
                let (pj, q) = rt.parent[idx(f, j, set)];
                let (pj, q) = (pj as usize, q as usize);
                let walk = self.trip_walk(&tables[pj], depots[pj], q, j);
                trips.push(Trip::from_walk(inst, walk).expect("tabulated trips follow arcs"));
                set &= !q;
                j = pj;
                f -= 1;
            }
            trips.reverse();
            routes[k] = Route { vehicle: k, trips };
        }
        Ok(Some(Solution::from_routes(inst, routes)))
    }
}

/// Minimum makespan over routes with at most `config.max_trips` trips per vehicle.
///
/// Returns `None` when no such routes exist. With more than
/// [`MAX_EXACT_EDGES`] required edges, or when the time budget runs out, the
/// multi-trip heuristic's solution is returned with `optimal == false`
/// (free trips only).
pub fn solve_exact(inst: &Instance, config: &ExactConfig) -> Option<ExactOutcome> {
    let fallback = || {
        if config.semantics != TripSemantics::Free {
            return None;
        }
        let sol = solve_multitrip(inst);
        sol.is_complete().then_some(ExactOutcome {
            solution: sol,
            optimal: false,
        })
    };
    if inst.required.len() > MAX_EXACT_EDGES {
        return fallback();
    }
    let solver = Solver {
        inst,
        legs: Legs::new(inst, config.semantics),
        orient: orientations(inst),
        m: inst.required.len(),
        deadline: config.time_budget.map(|b| Instant::now() + b),
    };
    match solver.solve(config.max_trips) {
        Ok(Some(solution)) => Some(ExactOutcome { solution, optimal: true }),
        Ok(None) => None,
        Err(OutOfTime) => fallback(),
    }
}

/// A solver callback for the iterative trip-count driver, backed by
/// [`solve_exact`] with depot-free trips. `inst` must be the instance the
/// models are built on.
pub fn oracle_callback(inst: &Instance, time_budget: Option<Duration>) -> impl FnMut(&MilpModel) -> SolveStatus + '_ {
    move |model: &MilpModel| {
        let config = ExactConfig {
            max_trips: model.trips,
            time_budget,
            semantics: TripSemantics::DepotFree,
        };
        match solve_exact(inst, &config) {
            None if inst.required.len() > MAX_EXACT_EDGES => {
                SolveStatus::ResourceLimit(format!("more than {MAX_EXACT_EDGES} required edges"))
            }
            None => SolveStatus::Infeasible,
            Some(out) if !out.optimal => SolveStatus::ResourceLimit("time budget exhausted".into()),
            Some(out) => match encode_solution(model, inst, &DummyMap::default(), &out.solution) {
                Ok(values) => SolveStatus::Optimal(values),
                Err(e) => SolveStatus::ResourceLimit(format!("could not encode oracle routes: {e}")),
            },
        }
    }
}
