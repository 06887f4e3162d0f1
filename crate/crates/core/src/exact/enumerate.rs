use super::{orientations, ExactError, Legs, TripSemantics};
use crate::graph::NodeId;
use crate::instance::Instance;
use crate::EPS;

const MAX_EDGES: usize = 5;
const MAX_VEHICLES: usize = 2;
const MAX_TRIPS: usize = 3;

struct Search<'a> {
    inst: &'a Instance,
    legs: Legs<'a>,
    orient: Vec<Vec<(NodeId, NodeId, f64)>>,
    max_trips: usize,
    all: usize,
    best: f64,
}

impl Search<'_> {
    fn fits(&self, elapsed: f64, head: NodeId) -> bool {
        let back = self
            .inst
            .depots
            .iter()
            .map(|&d| self.legs.end(head, d))
            .fold(f64::INFINITY, f64::min);
        elapsed + back <= self.inst.capacity + EPS
    }

    fn vehicle(&mut self, k: usize, covered: usize, prev: f64) {
        if k == self.inst.vehicles {
            if covered == self.all {
                self.best = self.best.min(prev);
            }
            return;
        }
        self.at_depot(k, self.inst.start_depots[k], 0, 0.0, covered, prev);
    }

    fn at_depot(&mut self, k: usize, node: NodeId, trips: usize, time: f64, covered: usize, prev: f64) {
        if prev.max(time) >= self.best {
            return;
        }
        self.vehicle(k + 1, covered, prev.max(time));
        if trips == self.max_trips {
            return;
        }
        let base = time + if trips > 0 { self.inst.recharge_time } else { 0.0 };
        for e in (0..self.orient.len()).filter(|e| covered >> e & 1 == 0) {
            for o in 0..self.orient[e].len() {
                let (t, h, w) = self.orient[e][o];
                let c = self.legs.start(node, t) + w;
                if self.fits(c, h) {
                    self.in_trip(k, h, c, trips + 1, base, covered | 1 << e, prev);
                }
            }
        }
        for &d in &self.inst.depots {
            let c = self.legs.reposition(node, d);
            if c <= self.inst.capacity + EPS {
                self.at_depot(k, d, trips + 1, base + c, covered, prev);
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn in_trip(&mut self, k: usize, cur: NodeId, elapsed: f64, trips: usize, base: f64, covered: usize, prev: f64) {
        if prev.max(base + elapsed) >= self.best {
            return;
        }
        for e in (0..self.orient.len()).filter(|e| covered >> e & 1 == 0) {
            for o in 0..self.orient[e].len() {
                let (t, h, w) = self.orient[e][o];
                let c = elapsed + self.legs.middle(cur, t) + w;
                if self.fits(c, h) {
                    self.in_trip(k, h, c, trips, base, covered | 1 << e, prev);
                }
            }
        }
        for &d in &self.inst.depots {
            let c = elapsed + self.legs.end(cur, d);
            if c <= self.inst.capacity + EPS {
                self.at_depot(k, d, trips, base + c, covered, prev);
            }
        }
    }
}

/// Brute-force minimum makespan over every assignment of oriented required
/// edges to ordered vehicle trips. `Ok(None)` when nothing is feasible.
pub fn enumerate_exhaustive(
    inst: &Instance,
    max_trips: usize,
    semantics: TripSemantics,
) -> Result<Option<f64>, ExactError> {
    if inst.required.len() > MAX_EDGES || inst.vehicles > MAX_VEHICLES || max_trips > MAX_TRIPS {
        return Err(ExactError::TooLarge {
            max_edges: MAX_EDGES,
            max_vehicles: MAX_VEHICLES,
            max_trips: MAX_TRIPS,
        });
    }
    let mut search = Search {
        inst,
        legs: Legs::new(inst, semantics),
        orient: orientations(inst),
        max_trips,
        all: (1 << inst.required.len()) - 1,
        best: f64::INFINITY,
    };
    search.vehicle(0, 0, 0.0);
    Ok(search.best.is_finite().then_some(search.best))
}
