use std::fs;
use std::path::{Path, PathBuf};

use mdrpp_core::exact::{solve_exact, ExactConfig};
use mdrpp_core::instance::{add_dummy_nodes, parse_instance};
use mdrpp_core::milp::{expected_counts, SubtourMode};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mdrpp").chain(args.iter().copied());
    let code = mdrpp_cli::run_from_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const GEN: &[&str] = &["generate", "--nodes", "10", "--edges", "15", "--capacity", "25"];

#[test]
fn generate_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (path, seed) in [(&a, "3"), (&b, "3"), (&c, "4")] {
        let mut args = GEN.to_vec();
        args.extend(["--seed", seed, "-o", s(path)]);
        assert_eq!(run(&args).0, 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_ne!(fs::read(&a).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn set_c_writes_asymmetric_arcs() {
    let mut args = GEN.to_vec();
    args.extend(["--set", "c", "--seed", "1"]);
    let (code, text, _) = run(&args);
    assert_eq!(code, 0);
    let inst = parse_instance(&text).unwrap();
    assert!(!inst.graph.is_symmetric());
    assert!(text.lines().any(|l| l.starts_with("REQ") && l.ends_with("DIR")));
}

#[test]
fn generated_instances_solve_and_check() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "5"] {
        let inst = dir.path().join(format!("g{seed}.mdrpp"));
        let mut args = GEN.to_vec();
        args.extend(["--seed", seed, "-o", s(&inst)]);
        assert_eq!(run(&args).0, 0);
        for alg in ["mt", "ps", "am", "cs"] {
            let sol = dir.path().join(format!("g{seed}.{alg}.sol"));
            let (code, line, _) = run(&["solve", s(&inst), "--alg", alg, "-o", s(&sol)]);
            assert_eq!(code, 0);
            let fields: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(fields.len(), 4, "{line}");
            assert_eq!(fields[1], alg);
            if fields[2] != "-" {
                assert_eq!(run(&["check", s(&inst), s(&sol)]).0, 0, "{alg} seed {seed}");
            }
        }
    }
}

#[test]
fn bad_generate_spec_is_a_usage_error() {
    assert_eq!(run(&["generate", "--nodes", "5", "--edges", "40"]).0, 2);
    assert_eq!(run(&["generate"]).0, 2);
    assert_eq!(run(&["generate", "--nodes", "6", "--edges", "8", "--set", "c", "--wind", "1.5"]).0, 2);
    assert_eq!(run(&["solve"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn mt_matches_the_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("mt.sol");
    let (code, line, _) = run(&["solve", s(&fixture("reposition.mdrpp")), "-o", s(&sol)]);
    assert_eq!(code, 0);
    assert!(line.starts_with("reposition mt 11.60 "), "{line}");
    assert_eq!(fs::read_to_string(&sol).unwrap(), fs::read_to_string(fixture("reposition.mt.sol")).unwrap());
    // the golden makespan is the proven optimum
    let inst = parse_instance(&fs::read_to_string(fixture("reposition.mdrpp")).unwrap()).unwrap();
    let opt = solve_exact(&inst, &ExactConfig::default()).unwrap();
    assert!(opt.optimal);
    assert!((opt.solution.makespan - 11.6).abs() < 1e-9);
}

#[test]
fn construct_strike_unsolved_is_not_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("cs.sol");
    let (code, line, _) = run(&["solve", s(&fixture("stuck.mdrpp")), "--alg", "cs", "-o", s(&sol)]);
    assert_eq!(code, 0);
    assert!(line.starts_with("stuck cs - "), "{line}");
    assert!(fs::read_to_string(&sol).unwrap().starts_with("UNSOLVED "));
    let (code, report, _) = run(&["check", s(&fixture("stuck.mdrpp")), s(&sol)]);
    assert_eq!(code, 1);
    assert!(report.starts_with("unsolved"));
}

#[test]
fn exact_summary_carries_the_optimal_flag() {
    let (code, line, _) = run(&["solve", s(&fixture("trivial.mdrpp")), "--alg", "exact"]);
    assert_eq!(code, 0);
    assert_eq!(line.split_whitespace().collect::<Vec<_>>()[..3], ["trivial", "exact", "4.00"]);
    assert!(line.trim_end().ends_with(" optimal"), "{line}");
}

#[test]
fn check_reports_tampering() {
    let inst = fixture("reposition.mdrpp");
    let golden = fs::read_to_string(fixture("reposition.mt.sol")).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let long = dir.path().join("long.sol");
    fs::write(&long, golden.replace("TRIP 3.8 ", "TRIP 9.8 ")).unwrap();
    let (code, report, _) = run(&["check", s(&inst), s(&long)]);
    assert_eq!(code, 1);
    assert!(report.contains("capacity exceeded"), "{report}");

    let missing = dir.path().join("missing.sol");
    let trimmed: String = golden.lines().filter(|l| !l.contains(" 1 3 ")).map(|l| format!("{l}\n")).collect();
    fs::write(&missing, trimmed).unwrap();
    let (code, report, _) = run(&["check", s(&inst), s(&missing)]);
    assert_eq!(code, 1);
    assert!(report.contains("required edge uncovered"), "{report}");

    let (code, _, err) = run(&["check", s(&inst), s(&dir.path().join("absent.sol"))]);
    assert_eq!(code, 1);
    assert!(err.contains("absent.sol"));
}

#[test]
fn export_counts_follow_the_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let path = fixture("reposition.mdrpp");
    let inst = parse_instance(&fs::read_to_string(&path).unwrap()).unwrap();
    let (modified, _) = add_dummy_nodes(&inst);
    for (format, trips) in [("lp", "1"), ("mps", "2")] {
        let out = dir.path().join(format!("m.{format}"));
        let (code, line, _) = run(&["export-milp", s(&path), "--trips", trips, "--format", format, "-o", s(&out)]);
        assert_eq!(code, 0);
        let want = expected_counts(&modified, trips.parse().unwrap(), SubtourMode::default()).unwrap();
        assert_eq!(line.trim(), format!("columns {} rows {}", want.columns, want.total_rows()));
        assert!(fs::metadata(&out).unwrap().len() > 0);
    }
    let (code, text, _) = run(&["export-milp", s(&path), "--trips", "1"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("\\ Problem: reposition") && text.trim_end().ends_with("End"));
}

#[test]
fn export_rejects_zero_trips_and_oversized_models() {
    let path = fixture("stuck.mdrpp");
    assert_eq!(run(&["export-milp", s(&path), "--trips", "0"]).0, 2);
    let (code, _, err) = run(&["export-milp", s(&path), "--trips", "1", "--subtour-cap", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("capped at 4"), "{err}");
    let (code, _, _) = run(&["export-milp", s(&path), "--trips", "1", "--subtour-cap", "4", "--no-subtours"]);
    assert_eq!(code, 0);
}

fn copy_fixtures(dir: &Path) {
    for f in ["reposition.mdrpp", "stuck.mdrpp", "trivial.mdrpp"] {
        fs::copy(fixture(f), dir.join(f)).unwrap();
    }
    fs::write(dir.join("notes.txt"), "not an instance").unwrap();
}

#[test]
fn bench_writes_one_row_per_instance_and_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    let (code, csv, _) = run(&["bench", s(dir.path()), "--algs", "mt", "--threads", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "instance,alg,ET,M");
    let names: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(names, ["reposition", "stuck", "trivial"]);
}

#[test]
fn bench_gap_and_dashes() {
    let dir = tempfile::tempdir().unwrap();
    copy_fixtures(dir.path());
    let out = dir.path().join("table.csv");
    let args = ["bench", s(dir.path()), "--algs", "mt,cs,exact", "-o", s(&out)];
    assert_eq!(run(&args).0, 0);
    let first = fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<&str>> = first.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(first.lines().next(), Some("instance,alg,ET,M,gap"));
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0], ["reposition", "mt", rows[0][2], "11.60", "0.0"]);
    assert_eq!(rows[4][..4], ["stuck", "cs", "-", "-"]);
    let stuck_mt: f64 = rows[3][3].parse().unwrap();
    let stuck_opt: f64 = rows[5][3].parse().unwrap();
    let g: f64 = rows[3][4].parse().unwrap();
    assert!((g - (stuck_mt - stuck_opt) / stuck_opt * 100.0).abs() < 0.1);

    // rerun with one worker: identical apart from timings
    assert_eq!(run(&["bench", s(dir.path()), "--algs", "mt,cs,exact", "-o", s(&out), "--threads", "1"]).0, 0);
    let strip = |t: &str| -> Vec<String> {
        t.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(2);
                f.join(",")
            })
            .collect()
    };
    assert_eq!(strip(&first), strip(&fs::read_to_string(&out).unwrap()));
}

#[test]
fn gap_command() {
    assert_eq!(run(&["gap", "166", "141"]), (0, "17.7\n".into(), String::new()));
    assert_eq!(run(&["gap", "64", "64"]).1, "0.0\n");
    assert_eq!(run(&["gap", "5", "0"]).0, 2);
}

#[test]
fn global_flags_are_validated() {
    let p = fixture("trivial.mdrpp");
    assert_eq!(run(&["--time-budget", "-1", "solve", s(&p)]).0, 2);
    assert_eq!(run(&["solve", s(&p), "--threads", "0"]).0, 2);
    assert_eq!(run(&["--time-budget", "2", "solve", s(&p), "--alg", "exact"]).0, 0);
}
