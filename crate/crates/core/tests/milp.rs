mod common;

use std::time::Duration;

use mdrpp_core::baselines::{augment_merge, construct_strike, path_scanning};
use mdrpp_core::exact::{oracle_callback, solve_exact, ExactConfig, TripSemantics};
use mdrpp_core::instance::add_dummy_nodes;
use mdrpp_core::milp::{
    build_model, check_assignment, decode_solution, encode_solution, expected_counts, iterative_f_driver,
    restore_solution, write_lp, write_mps, MilpModel, Sense, SubtourMode,
};

use mdrpp_core::multitrip::solve_multitrip;
use mdrpp_core::solution::check_feasibility;

use common::matrix::{from_model, parse_lp, parse_mps};

#[test]
fn lp_and_mps_round_trip_to_the_same_matrix() {
    for seed in 0..12 {
        let (inst, _) = add_dummy_nodes(&common::tiny(seed));
        for trips in [1, 2] {
            let model = build_model(&inst, trips, SubtourMode::default()).unwrap();
            let want = from_model(&model);
            let lp = parse_lp(&write_lp(&model));
            let mps = parse_mps(&write_mps(&model));
            assert_eq!(lp, want, "LP seed {seed}");
            assert_eq!(mps, want, "MPS seed {seed}");
        }
    }
}

#[test]
fn counts_follow_the_formulas() {
    for seed in 0..20 {
        let (inst, _) = add_dummy_nodes(&common::tiny(seed));
        for trips in 1..=3 {
            for mode in [SubtourMode::None, SubtourMode::default()] {
                let model = build_model(&inst, trips, mode).unwrap();
                assert_eq!(model.counts(), expected_counts(&inst, trips, mode).unwrap());
                // independent tally of x columns
                let x = model.columns.iter().filter(|c| c.name.starts_with("x_")).count();
                assert_eq!(x, inst.vehicles * trips * inst.graph.arc_pairs().count());
                assert!(model.big_m > inst.graph.undirected_edges().len() as f64);
            }
        }
    }
}

#[test]
fn heuristic_solutions_satisfy_the_model() {
    let mut checked = 0;
    for seed in 0..30 {
        let original = common::tiny(seed);
        let (inst, map) = add_dummy_nodes(&original);
        let mut sols = vec![solve_multitrip(&original)];
        for r in [path_scanning(&original), augment_merge(&original), construct_strike(&original)] {
            sols.extend(r.solution().cloned());
        }
        for sol in sols.iter().filter(|s| s.is_complete()) {
            let model = build_model(&inst, 12, SubtourMode::default()).unwrap();
            match encode_solution(&model, &inst, &map, sol) {
                Ok(values) => {
                    let bad = check_assignment(&model, &values);
                    assert!(bad.is_empty(), "seed {seed}: {:?}", &bad[..bad.len().min(3)]);
                    let back = restore_solution(&original, &map, &decode_solution(&inst, &model, &values).unwrap());
                    assert!(check_feasibility(&original, &back).is_empty());
                    checked += 1;
                }
                // directed instances may repeat an arc with no way back
                Err(e) => assert!(!original.graph.is_symmetric(), "seed {seed}: {e}"),
            }
        }
    }
    assert!(checked >= 40, "only {checked} encoded");
}

fn solve_with_microlp(model: &MilpModel) -> Option<(f64, Vec<f64>)> {
    use microlp::{ComparisonOp, OptimizationDirection, Problem};
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = model
        .columns
        .iter()
        .map(|c| {
            if c.integer {
                p.add_binary_var(c.objective)
            } else {
                p.add_var(c.objective, (c.lower, c.upper))
            }
        })
        .collect();
    for r in &model.rows {
        let expr: Vec<_> = r.coeffs.iter().map(|&(c, v)| (vars[c], v)).collect();
        let op = match r.sense {
            Sense::Le => ComparisonOp::Le,
            Sense::Ge => ComparisonOp::Ge,
            Sense::Eq => ComparisonOp::Eq,
        };
        p.add_constraint(expr, op, r.rhs);
    }
    let outcome = p.solve().ok()?;
    assert!(outcome.is_optimal());
    let sol = outcome.solution()?;
    let values = model
        .columns
        .iter()
        .zip(&vars)
        .map(|(c, &v)| if c.integer { sol.var_value(v).round() } else { sol.var_value(v) })
        .collect();
    Some((sol.objective(), values))
}

#[test]
fn milp_optimum_matches_the_oracle() {
    let mut compared = 0;
    for seed in 0..40 {
        let original = common::tiny(seed);
        if original.vehicles > 2 || original.required.len() > 3 || original.node_count() > 7 {
            continue;
        }
        let (inst, _) = add_dummy_nodes(&original);
        for trips in 1..=2 {
            let model = build_model(&inst, trips, SubtourMode::default()).unwrap();
            let oracle = solve_exact(
                &inst,
                &ExactConfig {
                    max_trips: trips,
                    time_budget: None,
                    semantics: TripSemantics::DepotFree,
                },
            );
            let milp = solve_with_microlp(&model);
            match (milp, oracle) {
                (None, None) => {}
                (Some((obj, values)), Some(o)) => {
                    assert!(obj >= o.solution.makespan - 1e-6, "seed {seed}");
                    if original.graph.is_symmetric() {
                        assert!((obj - o.solution.makespan).abs() < 1e-6, "seed {seed}: {obj} vs {}", o.solution.makespan);
                    }
                    let decoded = decode_solution(&inst, &model, &values).unwrap();
                    assert!(check_feasibility(&inst, &decoded).is_empty());
                    assert!(
                        (decoded.makespan - values[model.beta()]).abs() < 1e-6,
                        "seed {seed} F {trips}: {} vs beta {} obj {obj} {:?}",
                        decoded.makespan,
                        values[model.beta()],
                        decoded
                    );
                    compared += 1;
                }
                (Some((obj, _)), None) => panic!("seed {seed}: MILP found {obj}, oracle none"),
                (None, Some(_)) if !original.graph.is_symmetric() => {}
                (None, Some(o)) => panic!("seed {seed}: oracle found {}, MILP none", o.solution.makespan),
            }
        }
    }
    assert!(compared >= 20, "only {compared} comparisons");
}

#[test]
fn driver_with_oracle_on_reposition() {
    let inst = common::reposition();
    let (f, model, values) = iterative_f_driver(&inst, oracle_callback(&inst, Some(Duration::from_secs(10)))).unwrap();
    assert_eq!(f, 2);
    assert!(check_assignment(&model, &values).is_empty());
    let sol = decode_solution(&inst, &model, &values).unwrap();
    assert_eq!(sol.trip_count(), 2);
    assert!(check_feasibility(&inst, &sol).is_empty());
}
