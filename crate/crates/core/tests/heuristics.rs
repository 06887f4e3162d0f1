mod common;

use mdrpp_core::baselines::{augment_merge, construct_strike, path_scanning};
use mdrpp_core::multitrip::{solve_multitrip, FleetState, MultiTrip};
use mdrpp_core::solution::{check_feasibility, evaluate_solution};
use mdrpp_core::EPS;
use proptest::prelude::*;

proptest! {
    #[test]
    fn solved_baselines_are_feasible(seed in 0u64..400) {
        let inst = common::tiny(seed);
        for result in [path_scanning(&inst), augment_merge(&inst), construct_strike(&inst)] {
            if let Some(sol) = result.solution() {
                prop_assert!(check_feasibility(&inst, sol).is_empty(), "{:?}", check_feasibility(&inst, sol));
                prop_assert!((evaluate_solution(&inst, sol) - sol.makespan).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn multitrip_routes_are_well_formed(seed in 0u64..400) {
        let inst = common::tiny(seed);
        let sol = solve_multitrip(&inst);
        let v = check_feasibility(&inst, &sol);
        // coverage may fail; everything else must hold
        prop_assert!(v.iter().all(|x| matches!(x, mdrpp_core::solution::Violation::Uncovered { .. })), "{v:?}");
        prop_assert_eq!(v.len(), sol.uncovered.len());
    }

    #[test]
    fn closest_feasible_edge_is_a_minimum(seed in 0u64..300, k in 0usize..2) {
        let inst = common::tiny(seed);
        let k = k % inst.vehicles;
        let mt = MultiTrip::new(&inst);
        let state = FleetState::new(&inst);
        let sp = mt.shortest_paths();
        // brute force over every uncovered orientation
        let mut best = f64::INFINITY;
        for e in &inst.required {
            for (t, h) in e.orientations() {
                let w = inst.graph.arc_weight(t, h).unwrap();
                let back = inst.depots.iter().map(|&d| sp.dist(h, d)).fold(f64::INFINITY, f64::min);
                let c = sp.dist(inst.start_depots[k], t) + w + back;
                if c <= inst.capacity + EPS {
                    best = best.min(c);
                }
            }
        }
        match mt.closest_feasible_edge(&state, k) {
            Some(choice) => {
                prop_assert!((choice.trip.duration - best).abs() < 1e-9);
                prop_assert!(choice.trip.duration <= inst.capacity + EPS);
                prop_assert!(inst.is_depot(choice.trip.end()));
            }
            None => prop_assert!(best.is_infinite()),
        }
    }

    #[test]
    fn closest_feasible_depot_is_strictly_closer(seed in 0u64..300) {
        let inst = common::tiny(seed);
        let mt = MultiTrip::new(&inst);
        let state = FleetState::new(&inst);
        for e in 0..inst.required.len() {
            let here = mt.dist_to_edge(inst.start_depots[0], e);
            let brute = inst
                .depots
                .iter()
                .filter(|&&d| d != inst.start_depots[0])
                .filter(|&&d| mt.shortest_paths().dist(inst.start_depots[0], d) <= inst.capacity + EPS)
                .map(|&d| mt.dist_to_edge(d, e))
                .filter(|&x| x < here - EPS)
                .fold(f64::INFINITY, f64::min);
            match mt.closest_feasible_depot(&state, 0, e) {
                Some(choice) => prop_assert!((mt.dist_to_edge(choice.depot, e) - brute).abs() < 1e-9),
                None => prop_assert!(brute.is_infinite()),
            }
        }
    }
}
