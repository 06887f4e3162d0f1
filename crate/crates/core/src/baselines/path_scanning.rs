use super::{BaselineResult, Criterion, Outcome, ScanGraph};
use crate::graph::ShortestPaths;
use crate::instance::Instance;
use crate::solution::{Route, Solution, Trip};
use crate::EPS;

/// Routes built with a single criterion, or `None` if some edge is stranded.
pub(crate) fn scan_routes(scan: &ScanGraph<'_>, criterion: Criterion) -> Option<Vec<Route>> {
    let inst = scan.inst;
    let mut covered = vec![false; inst.required.len()];
    let mut location = inst.start_depots.clone();
    let mut available = vec![0.0f64; inst.vehicles];
    let mut stuck = vec![false; inst.vehicles];
    let mut routes: Vec<Route> = (0..inst.vehicles).map(Route::empty).collect();

    while covered.iter().any(|c| !c) {
        let k = (0..inst.vehicles)
            .filter(|&k| !stuck[k])
            .min_by(|&a, &b| available[a].total_cmp(&available[b]).then(a.cmp(&b)))?;
        match scan.scan_trip(&covered, location[k], criterion) {
            Some(walk) => {
                let trip = Trip::from_walk(inst, walk)?;
                for &i in &trip.covered {
                    covered[i] = true;
                }
                available[k] += trip.duration + inst.recharge_time;
                location[k] = trip.end();
                routes[k].trips.push(trip);
            }
            None => stuck[k] = true,
        }
    }
    Some(routes)
}

/// Runs all five criteria and keeps the smallest makespan.
pub fn path_scanning(inst: &Instance) -> BaselineResult {
    let sp = ShortestPaths::new(&inst.graph);
    let scan = ScanGraph::new(inst, &sp);
    let mut best: Option<(Solution, Criterion)> = None;
    for criterion in Criterion::ALL {
        let Some(routes) = scan_routes(&scan, criterion) else { continue };
        let sol = Solution::from_routes(inst, routes);
        if best.as_ref().is_none_or(|(b, _)| sol.makespan < b.makespan - EPS) {
            best = Some((sol, criterion));
        }
    }
    match best {
        Some((sol, criterion)) => BaselineResult {
            outcome: Outcome::Solved(sol),
            criterion_used: Some(criterion),
        },
        None => BaselineResult::unsolved("capacity"),
    }
}
