//! Multi-depot versions of three classic arc-routing construction heuristics,
//! used as comparison baselines.
//!
//! Each vehicle starts at its own depot and every trip starts where the
//! previous one ended. Capacity is trip time, so the classic demand-based
//! criteria are expressed in terms of remaining flight time.

mod augment_merge;
mod construct_strike;
mod path_scanning;

use std::fmt;

use crate::graph::{NodeId, ShortestPaths};
use crate::instance::Instance;
use crate::solution::Solution;
use crate::EPS;

pub use augment_merge::augment_merge;
pub use construct_strike::{construct_strike, construct_strike_with_budget};
pub use path_scanning::path_scanning;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Solved(Solution),
    /// The heuristic could not cover every required edge.
    Unsolved(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub outcome: Outcome,
    /// Path scanning only: the criterion whose solution was kept.
    pub criterion_used: Option<Criterion>,
}

impl BaselineResult {
    pub fn solved(solution: Solution) -> Self {
        Self {
            outcome: Outcome::Solved(solution),
            criterion_used: None,
        }
    }

    pub fn unsolved(reason: impl Into<String>) -> Self {
        Self {
            outcome: Outcome::Unsolved(reason.into()),
            criterion_used: None,
        }
    }

    pub fn solution(&self) -> Option<&Solution> {
        match &self.outcome {
            Outcome::Solved(s) => Some(s),
            Outcome::Unsolved(_) => None,
        }
    }
}

/// Tie-breaking rule among equally near candidate edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Largest distance from the edge back to a depot.
    MaxReturn,
    MinReturn,
    /// Largest share of capacity left after serving the edge.
    MaxSlack,
    MinSlack,
    /// Nearest edge only, lowest index on ties.
    Nearest,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::MaxReturn,
        Criterion::MinReturn,
        Criterion::MaxSlack,
        Criterion::MinSlack,
        Criterion::Nearest,
    ];

    /// 1-based position in [`Criterion::ALL`].
    pub fn number(self) -> usize {
        Criterion::ALL.iter().position(|&c| c == self).unwrap() + 1
    }

    /// Positive when `a` is preferred over `b`.
    fn prefers(self, a: &Candidate, b: &Candidate, capacity: f64) -> f64 {
        let slack = |c: &Candidate| (capacity - c.used_after) / capacity;
        match self {
            Criterion::MaxReturn => a.back - b.back,
            Criterion::MinReturn => b.back - a.back,
            Criterion::MaxSlack => slack(a) - slack(b),
            Criterion::MinSlack => slack(b) - slack(a),
            Criterion::Nearest => 0.0,
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    tail: NodeId,
    head: NodeId,
    reach: f64,
    back: f64,
    used_after: f64,
}

/// Graph view a trip is scanned on.
pub(crate) struct ScanGraph<'a> {
    pub inst: &'a Instance,
    pub sp: &'a ShortestPaths,
    pub to_depot: Vec<f64>,
}

impl<'a> ScanGraph<'a> {
    pub fn new(inst: &'a Instance, sp: &'a ShortestPaths) -> Self {
        let mut to_depot = vec![f64::INFINITY; inst.node_count()];
        for &d in &inst.depots {
            for (best, dist) in to_depot.iter_mut().zip(sp.dist_to(d)) {
                *best = best.min(dist);
            }
        }
        Self { inst, sp, to_depot }
    }

    /// Builds one trip from depot `start`, adding the nearest reachable
    /// uncovered edge until none fits. `None` when nothing can be served.
    pub fn scan_trip(&self, covered: &[bool], start: NodeId, criterion: Criterion) -> Option<Vec<NodeId>> {
        let g = self.sp.graph();
        let capacity = self.inst.capacity;
        let mut covered = covered.to_vec();
        let mut walk = vec![start];
        let mut cur = start;
        let mut used = 0.0;
        loop {
            let mut best: Option<Candidate> = None;
            for (i, e) in self.inst.required.iter().enumerate() {
                if covered[i] {
                    continue;
                }
                for (tail, head) in e.orientations() {
                    let Some(w) = g.arc_weight(tail, head) else { continue };
                    let reach = self.sp.dist(cur, tail);
                    let back = self.to_depot[head];
                    if used + reach + w + back > capacity + EPS {
                        continue;
                    }
                    let cand = Candidate {
                        tail,
                        head,
                        reach,
                        back,
                        used_after: used + reach + w,
                    };
                    let better = match &best {
                        None => true,
                        Some(b) if cand.reach < b.reach - EPS => true,
                        Some(b) if (cand.reach - b.reach).abs() <= EPS => criterion.prefers(&cand, b, capacity) > EPS,
                        Some(_) => false,
                    };
                    if better {
                        best = Some(cand);
                    }
                }
            }
            let Some(c) = best else { break };
            let path = self.sp.path(cur, c.tail)?.nodes;
            walk.extend_from_slice(&path[1..]);
            walk.push(c.head);
            for w in walk.windows(2) {
                for i in self.inst.required_covered_by(w[0], w[1]) {
                    covered[i] = true;
                }
            }
            used = c.used_after;
            cur = c.head;
        }
        if walk.len() == 1 {
            return None;
        }
        let depot = self.sp.nearest(cur, &self.inst.depots)?;
        let path = self.sp.path(cur, depot)?.nodes;
        walk.extend_from_slice(&path[1..]);
        Some(walk)
    }
}
