//! Command-line front end for `mdrpp-core`.
//!
//! Verbs: `generate`, `solve`, `check`, `export-milp`, `bench` and `gap`.
//! Exit codes: 0 on success (an unsolved instance is a result, not an
//! error), 1 on failures and infeasible solution files, 2 on usage errors.

pub mod bench;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use mdrpp_core::baselines::{augment_merge, construct_strike, path_scanning, Outcome};
use mdrpp_core::exact::{solve_exact, ExactConfig};
use mdrpp_core::instance::{
    add_dummy_nodes, generate_instance, parse_carp_benchmark, parse_instance, random_connected_graph,
    serialize_instance, GenSpec, SetKind,
};
use mdrpp_core::milp::{build_model, write_lp, write_mps, MilpError, SubtourMode};
use mdrpp_core::multitrip::solve_multitrip;
use mdrpp_core::solution::{check_feasibility, gap, parse_solution, write_solution, write_unsolved, SolutionFile};
use mdrpp_core::{Instance, Solution};

#[derive(Parser, Debug)]
#[command(name = "mdrpp", version, about = "Multi-depot rural postman routing with rechargeable vehicles")]
pub struct Cli {
    /// Seed for instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for `bench` (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Wall-clock budget in seconds for the exact solver.
    #[arg(long, global = true)]
    pub time_budget: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate an instance from a CARP benchmark file or a random road graph.
    Generate(GenerateArgs),
    /// Solve an instance and write a solution file.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algorithm::Mt)]
        alg: Algorithm,
        /// Solution file to write.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Trips per vehicle for `exact`.
        #[arg(long, default_value_t = 4)]
        max_trips: usize,
    },
    /// Check a solution file against an instance.
    Check { instance: PathBuf, solution: PathBuf },
    /// Write the MILP for an instance, after dummy-node preprocessing.
    ExportMilp {
        instance: PathBuf,
        /// Trips per vehicle.
        #[arg(long)]
        trips: usize,
        #[arg(long, value_enum, default_value_t = MilpFormat::Lp)]
        format: MilpFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Largest free-node count for which subtour rows are enumerated.
        #[arg(long, default_value_t = 16)]
        subtour_cap: usize,
        /// Leave out subtour elimination rows.
        #[arg(long)]
        no_subtours: bool,
    },
    /// Run algorithms over instance files and write a CSV table.
    Bench {
        /// Instance files, or directories scanned for `*.mdrpp`.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "mt,ps,am,cs")]
        algs: Vec<Algorithm>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Percentage gap of a heuristic makespan over an optimum.
    Gap { heuristic: f64, optimal: f64 },
}

#[derive(clap::Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = SetArg::B)]
    pub set: SetArg,
    /// CARP benchmark file providing the road graph.
    #[arg(long, conflicts_with_all = ["nodes", "edges"])]
    pub base: Option<PathBuf>,
    /// Random road graph size.
    #[arg(long, requires = "edges")]
    pub nodes: Option<usize>,
    #[arg(long, requires = "nodes")]
    pub edges: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub min_weight: f64,
    #[arg(long, default_value_t = 10.0)]
    pub max_weight: f64,
    /// Trip capacity in minutes for sets B and C.
    #[arg(long, default_value_t = 31.0)]
    pub capacity: f64,
    #[arg(long, default_value_t = 0.3)]
    pub wind: f64,
    #[arg(long, default_value_t = 1.0)]
    pub recharge: f64,
    #[arg(long, default_value_t = 1.0)]
    pub speed: f64,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Mt,
    Ps,
    Am,
    Cs,
    Exact,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Mt => "mt",
            Algorithm::Ps => "ps",
            Algorithm::Am => "am",
            Algorithm::Cs => "cs",
            Algorithm::Exact => "exact",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetArg {
    A,
    B,
    C,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilpFormat {
    Lp,
    Mps,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Failure(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors go to `err`.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command. `Ok` carries the exit code, which is 1 only when
/// `check` finds violations.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let budget = match cli.time_budget {
        None => None,
        Some(s) if s.is_finite() && s > 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(usage(format!("--time-budget must be a positive number of seconds, got {s}"))),
    };
    if cli.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }
    match &cli.command {
        Command::Generate(args) => cmd_generate(args, cli.seed, out),
        Command::Solve {
            instance,
            alg,
            out: path,
            max_trips,
        } => cmd_solve(instance, *alg, path.as_deref(), *max_trips, budget, out),
        Command::Check { instance, solution } => cmd_check(instance, solution, out),
        Command::ExportMilp {
            instance,
            trips,
            format,
            out: path,
            subtour_cap,
            no_subtours,
        } => {
            let mode = if *no_subtours {
                SubtourMode::None
            } else {
                SubtourMode::Full { cap: *subtour_cap }
            };
            cmd_export_milp(instance, *trips, *format, mode, path.as_deref(), out)
        }
        Command::Bench { inputs, algs, out: path } => {
            let files = bench::collect_inputs(inputs)?;
            let opts = bench::BenchOptions {
                algs: algs.clone(),
                threads: cli.threads,
                time_budget: budget,
                max_trips: 4,
            };
            let csv = bench::render_csv(&bench::run_bench(&files, &opts)?, opts.has_gap());
            match path {
                Some(p) => fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(0)
        }
        Command::Gap { heuristic, optimal } => {
            let g = gap(*heuristic, *optimal).map_err(|e| usage(e.to_string()))?;
            writeln!(out, "{g:.1}")?;
            Ok(0)
        }
    }
}

pub fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_generate(args: &GenerateArgs, seed: u64, out: &mut dyn Write) -> Result<i32, CliError> {
    let (base, base_name) = match (&args.base, args.nodes, args.edges) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let bench = parse_carp_benchmark(&text).with_context(|| format!("parsing {}", path.display()))?;
            (bench.graph, bench.name)
        }
        (None, Some(n), Some(e)) => {
            let g = random_connected_graph(n, e, (args.min_weight, args.max_weight), seed)
                .map_err(|e| usage(e.to_string()))?;
            (g, format!("rand{n}x{e}"))
        }
        _ => return Err(usage("generate needs --base FILE or --nodes N --edges M")),
    };
    let set_kind = match args.set {
        SetArg::A => SetKind::A,
        SetArg::B => SetKind::B,
        SetArg::C => SetKind::C,
    };
    let mut spec = GenSpec::new(&base, set_kind, seed);
    spec.name = args.name.clone().unwrap_or_else(|| format!("{base_name}-s{seed}"));
    spec.capacity_minutes = args.capacity;
    spec.wind_ratio = args.wind;
    spec.recharge_time = args.recharge;
    spec.speed = args.speed;
    let inst = generate_instance(&base, &spec).map_err(|e| usage(e.to_string()))?;
    write_or_print(args.out.as_deref(), &serialize_instance(&inst), out)?;
    Ok(0)
}

/// What one algorithm produced on one instance.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub solution: Option<Solution>,
    pub reason: Option<String>,
    pub seconds: f64,
    /// `exact` only: whether optimality was proven.
    pub optimal: bool,
}

impl RunResult {
    pub fn makespan(&self) -> Option<f64> {
        self.solution.as_ref().map(|s| s.makespan)
    }
}

pub fn run_algorithm(inst: &Instance, alg: Algorithm, max_trips: usize, budget: Option<Duration>) -> RunResult {
    let start = Instant::now();
    let (solution, reason, optimal) = match alg {
        Algorithm::Mt => {
            let sol = solve_multitrip(inst);
            if sol.is_complete() {
                (Some(sol), None, false)
            } else {
                let n = sol.uncovered.len();
                (None, Some(format!("{n} required edges out of reach")), false)
            }
        }
        Algorithm::Ps | Algorithm::Am | Algorithm::Cs => {
            let result = match alg {
                Algorithm::Ps => path_scanning(inst),
                Algorithm::Am => augment_merge(inst),
                _ => construct_strike(inst),
            };
            match result.outcome {
                Outcome::Solved(sol) => (Some(sol), None, false),
                Outcome::Unsolved(reason) => (None, Some(reason), false),
            }
        }
        Algorithm::Exact => {
            let config = ExactConfig {
                max_trips,
                time_budget: budget,
                ..ExactConfig::default()
            };
            match solve_exact(inst, &config) {
                Some(o) => (Some(o.solution), None, o.optimal),
                None => (None, Some(format!("no routes with at most {max_trips} trips per vehicle")), false),
            }
        }
    };
    RunResult {
        solution,
        reason,
        seconds: start.elapsed().as_secs_f64(),
        optimal,
    }
}

fn cmd_solve(
    path: &Path,
    alg: Algorithm,
    sol_path: Option<&Path>,
    max_trips: usize,
    budget: Option<Duration>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if max_trips == 0 {
        return Err(usage("--max-trips must be at least 1"));
    }
    let inst = load_instance(path)?;
    let result = run_algorithm(&inst, alg, max_trips, budget);
    let text = match (&result.solution, &result.reason) {
        (Some(sol), _) => write_solution(&inst, sol),
        (None, reason) => write_unsolved(reason.as_deref().unwrap_or("unsolved")),
    };
    if let Some(p) = sol_path {
        fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    let makespan = result.makespan().map_or("-".to_string(), |m| format!("{m:.2}"));
    write!(out, "{} {} {} {:.1}", inst.name, alg.label(), makespan, result.seconds)?;
    if alg == Algorithm::Exact && result.solution.is_some() {
        write!(out, " {}", if result.optimal { "optimal" } else { "heuristic" })?;
    }
    writeln!(out)?;
    Ok(0)
}

fn cmd_check(inst_path: &Path, sol_path: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let inst = load_instance(inst_path)?;
    let text = fs::read_to_string(sol_path).with_context(|| format!("reading {}", sol_path.display()))?;
    match parse_solution(&inst, &text).map_err(|e| anyhow!(e))? {
        SolutionFile::Unsolved { reason } => {
            writeln!(out, "unsolved: {reason}")?;
            Ok(1)
        }
        SolutionFile::Solved { solution, .. } => {
            let findings = check_feasibility(&inst, &solution);
            for f in &findings {
                writeln!(out, "{f}")?;
            }
            if findings.is_empty() {
                writeln!(out, "feasible, makespan {:.2}", solution.makespan)?;
                Ok(0)
            } else {
                Ok(1)
            }
        }
    }
}

fn cmd_export_milp(
    path: &Path,
    trips: usize,
    format: MilpFormat,
    mode: SubtourMode,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if trips == 0 {
        return Err(usage("--trips must be at least 1"));
    }
    let inst = load_instance(path)?;
    let (modified, _) = add_dummy_nodes(&inst);
    let model = build_model(&modified, trips, mode).map_err(|e| match e {
        MilpError::ZeroTrips => usage(e.to_string()),
        other => CliError::Failure(anyhow!(other)),
    })?;
    let text = match format {
        MilpFormat::Lp => write_lp(&model),
        MilpFormat::Mps => write_mps(&model),
    };
    let counts = model.counts();
    match dest {
        Some(p) => {
            fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            writeln!(out, "columns {} rows {}", counts.columns, counts.total_rows())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(0)
}
