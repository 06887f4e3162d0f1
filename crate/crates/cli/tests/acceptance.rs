//! Acceptance suite: prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use mdrpp_cli::bench::{render_csv, run_bench, BenchOptions};
use mdrpp_cli::Algorithm;
use mdrpp_core::baselines::{augment_merge, construct_strike, path_scanning, Outcome};
use mdrpp_core::exact::{enumerate_exhaustive, oracle_callback, solve_exact, ExactConfig, TripSemantics};
use mdrpp_core::instance::{
    add_dummy_nodes, generate_instance, min_service_capacity, parse_instance, random_connected_graph,
    serialize_instance, GenSpec, SetKind,
};
use mdrpp_core::milp::{
    build_model, check_assignment, encode_solution, expected_counts, iterative_f_driver, write_lp, write_mps,
    SubtourMode,
};
use mdrpp_core::multitrip::solve_multitrip;
use mdrpp_core::solution::{check_feasibility, evaluate_solution, gap, route_time};
use mdrpp_core::{Instance, Route, Solution, Trip, WeightedGraph};

use common::matrix::{from_model, parse_lp, parse_mps};

fn fixture(name: &str) -> Instance {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    parse_instance(&fs::read_to_string(path).unwrap()).unwrap()
}

fn exact(inst: &Instance, max_trips: usize, semantics: TripSemantics) -> Option<f64> {
    let config = ExactConfig {
        max_trips,
        time_budget: None,
        semantics,
    };
    solve_exact(inst, &config).map(|o| {
        assert!(o.optimal, "{}: no optimality proof", inst.name);
        o.solution.makespan
    })
}

fn heuristics(inst: &Instance) -> Vec<(&'static str, Option<Solution>)> {
    let mt = solve_multitrip(inst);
    let open = |o: Outcome| match o {
        Outcome::Solved(s) => Some(s),
        Outcome::Unsolved(_) => None,
    };
    vec![
        ("mt", mt.is_complete().then_some(mt)),
        ("ps", open(path_scanning(inst).outcome)),
        ("am", open(augment_merge(inst).outcome)),
        ("cs", open(construct_strike(inst).outcome)),
    ]
}

fn criterion_1() -> String {
    assert!((route_time(&[3.8, 6.7], 1.1) - 11.6).abs() <= 1e-9);
    let inst = common::reposition();
    let single = |vehicle, duration| Route {
        vehicle,
        trips: vec![Trip {
            nodes: vec![0, 1, 0],
            duration,
            covered: vec![],
        }],
    };
    let two = Instance { vehicles: 2, start_depots: vec![0, 0], ..inst };
    let sol = Solution::from_routes(&two, vec![single(0, 18.8), single(1, 5.4)]);
    assert_eq!(evaluate_solution(&two, &sol), 18.8);
    let g = gap(166.0, 141.0).unwrap();
    assert!((g - 17.7).abs() <= 0.05, "gap {g}");
    assert_eq!(gap(64.0, 64.0).unwrap(), 0.0);
    format!("11.6, 18.8, gap {g:.2}, 0.0")
}

fn criterion_2() -> String {
    let start = Instant::now();
    let (mut instances, mut bounded, mut enumerated) = (0, 0, 0);
    for seed in 0..80 {
        let inst = common::tiny(seed);
        assert!(inst.node_count() <= 8 && inst.graph.undirected_edges().len() <= 12);
        assert!(inst.required.len() <= 4 && inst.vehicles <= 2);
        // a start depot can be cut off from every other depot
        let Some(opt) = exact(&inst, 8, TripSemantics::Free) else {
            assert!(heuristics(&inst).iter().all(|(_, s)| s.is_none()), "seed {seed}");
            continue;
        };
        for (alg, sol) in heuristics(&inst) {
            if let Some(sol) = sol {
                let report = check_feasibility(&inst, &sol);
                assert!(report.is_empty(), "{alg} seed {seed}: {report:?}");
                assert!(opt <= sol.makespan + 1e-9, "{alg} seed {seed}: {} < optimum {opt}", sol.makespan);
                bounded += 1;
            }
        }
        for semantics in [TripSemantics::Free, TripSemantics::DepotFree] {
            for f in 1..=3 {
                let brute = enumerate_exhaustive(&inst, f, semantics).unwrap();
                let solved = exact(&inst, f, semantics);
                match (brute, solved) {
                    (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9, "seed {seed} F {f}: {a} vs {b}"),
                    (None, None) => {}
                    other => panic!("seed {seed} F {f}: {other:?}"),
                }
                enumerated += 1;
            }
        }
        instances += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(instances >= 50);
    assert!(secs < 60.0, "took {secs:.1} s");
    format!("{instances} instances, {bounded} heuristic bounds, {enumerated} enumerations, {secs:.1} s")
}

fn criterion_3() -> String {
    let (mut instances, mut encoded) = (0, 0);
    let a1 = {
        // eight nodes, eleven edges, two depots
        let inst = common::reposition();
        let edges: Vec<_> = inst.graph.undirected_edges().into_iter().filter(|e| (e.0, e.1) != (5, 6)).collect();
        let g = WeightedGraph::undirected(8, &edges).unwrap();
        let inst = Instance { graph: g, ..inst };
        let model = build_model(&inst, 1, SubtourMode::default()).unwrap();
        assert_eq!(model.columns.len(), 26);
        assert_eq!(model.counts(), expected_counts(&inst, 1, SubtourMode::default()).unwrap());
        model.columns.len()
    };
    for seed in 0..40 {
        let original = common::tiny(seed);
        if !original.graph.is_symmetric() {
            continue;
        }
        let (inst, map) = add_dummy_nodes(&original);
        for f in [1, 2] {
            let model = build_model(&inst, f, SubtourMode::default()).unwrap();
            assert_eq!(model.counts(), expected_counts(&inst, f, SubtourMode::default()).unwrap());
            let want = from_model(&model);
            assert!(parse_lp(&write_lp(&model)) == want, "LP round trip, seed {seed}");
            assert!(parse_mps(&write_mps(&model)) == want, "MPS round trip, seed {seed}");
        }
        let model = build_model(&inst, 12, SubtourMode::default()).unwrap();
        for (alg, sol) in heuristics(&original) {
            if let Some(sol) = sol {
                let values = encode_solution(&model, &inst, &map, &sol).unwrap_or_else(|e| panic!("{alg} seed {seed}: {e}"));
                let bad = check_assignment(&model, &values);
                assert!(bad.is_empty(), "{alg} seed {seed}: {:?}", &bad[..bad.len().min(3)]);
                encoded += 1;
            }
        }
        instances += 1;
        if instances == 12 {
            break;
        }
    }
    assert!(instances >= 10);
    format!("{instances} instances, {encoded} solutions encoded, {a1} columns on the 8-node fixture")
}

fn criterion_4() -> String {
    let mut checked = 0;
    for seed in 0..200 {
        let inst = common::tiny(seed);
        if !inst.required.iter().any(|e| inst.is_depot(e.from) || inst.is_depot(e.to)) {
            continue;
        }
        let (modified, _) = add_dummy_nodes(&inst);
        let Some(a) = exact(&inst, 4, TripSemantics::Free) else {
            continue;
        };
        let b = exact(&modified, 4, TripSemantics::Free).unwrap_or(f64::INFINITY);
        assert!((a - b).abs() <= 1e-9, "seed {seed}: {a} vs {b}");
        checked += 1;
        if checked == 20 {
            break;
        }
    }
    assert_eq!(checked, 20);
    format!("{checked} instances with depot-incident required edges")
}

fn criterion_5() -> String {
    let budget = Some(Duration::from_secs(30));
    let mut found = Vec::new();
    for (name, want) in [("reposition.mdrpp", 2), ("trivial.mdrpp", 1)] {
        let inst = fixture(name);
        let (modified, _) = add_dummy_nodes(&inst);
        let (f, _, _) = iterative_f_driver(&modified, oracle_callback(&modified, budget)).unwrap();
        assert_eq!(f, want, "{name}");
        found.push(format!("{} F*={f}", inst.name));
    }
    found.join(", ")
}

fn scale_instance(nodes: usize, seed: u64) -> Instance {
    let edges = nodes * 19 / 10;
    let g = random_connected_graph(nodes, edges, (1.0, 10.0), seed).unwrap();
    let mut spec = GenSpec::new(&g, SetKind::B, seed);
    spec.name = format!("scale{nodes}");
    let mut inst = generate_instance(&g, &spec).unwrap();
    inst.capacity = inst.capacity.max((min_service_capacity(&inst) * 1.1).ceil());
    inst
}

fn criterion_6() -> String {
    let sizes = [58, 115, 230, 460];
    let mut medians = Vec::new();
    let mut summary = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let mut times = Vec::new();
        for seed in 0..3 {
            let inst = scale_instance(n, seed);
            let start = Instant::now();
            let sol = solve_multitrip(&inst);
            let secs = start.elapsed().as_secs_f64();
            assert!(sol.is_complete(), "{n} nodes seed {seed}: incomplete");
            assert!(check_feasibility(&inst, &sol).is_empty());
            if i + 1 == sizes.len() {
                assert!(secs < 600.0, "{secs:.1} s on {} arcs", inst.graph.arcs().len());
                if seed == 0 {
                    summary.push(format!("{} nodes / {} arcs in {secs:.2} s", n, inst.graph.arcs().len()));
                }
            }
            times.push(secs);
        }
        times.sort_by(f64::total_cmp);
        medians.push(times[1]);
    }
    let ratios: Vec<f64> = medians.windows(2).map(|w| w[1] / w[0].max(1e-3)).collect();
    for r in &ratios {
        assert!(*r <= 16.0, "growth x{r:.1} per doubling, medians {medians:?}");
    }
    let shown: Vec<String> = ratios.iter().map(|r| format!("x{r:.1}")).collect();
    summary.push(format!("growth per doubling {}", shown.join(" ")));
    summary.join(", ")
}

fn criterion_7() -> String {
    let g = random_connected_graph(10, 15, (1.0, 10.0), 58).unwrap();
    let mut spec = GenSpec::new(&g, SetKind::B, 58);
    spec.name = "stuck".into();
    spec.capacity_minutes = 25.0;
    let inst = generate_instance(&g, &spec).unwrap();
    assert!(matches!(construct_strike(&inst).outcome, Outcome::Unsolved(_)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stuck.mdrpp");
    fs::write(&path, serialize_instance(&inst)).unwrap();
    let opts = BenchOptions {
        algs: vec![Algorithm::Mt, Algorithm::Cs],
        threads: Some(1),
        time_budget: None,
        max_trips: 4,
    };
    let csv = render_csv(&run_bench(&[path], &opts).unwrap(), false);
    let cs_row = csv.lines().find(|l| l.starts_with("stuck,cs,")).unwrap();
    assert_eq!(cs_row, "stuck,cs,-,-");
    format!("bench row `{cs_row}`")
}

/// Written straight to stderr so the lines show even when output is captured.
fn report(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

type Criterion = (&'static str, fn() -> String);

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("aggregation arithmetic", criterion_1),
        ("oracle sandwich", criterion_2),
        ("MILP consistency", criterion_3),
        ("dummy-node neutrality", criterion_4),
        ("iterative trip count", criterion_5),
        ("scale smoke test", criterion_6),
        ("failure semantics", criterion_7),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => report(format!("criterion {}: PASS {name}: {detail}", i + 1)),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                report(format!("criterion {}: FAIL {name}: {msg}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
