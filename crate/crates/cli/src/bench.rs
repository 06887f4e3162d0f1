//! Benchmark table: one CSV row per instance and algorithm.
//!
//! ```text
//! instance,alg,ET,M,gap
//! b1,mt,0.0,41.62,3.4
//! b1,cs,0.1,-,-
//! b1,exact,0.4,40.25,-
//! ```
//!
//! `ET` is wall-clock seconds with one decimal, `M` the makespan. A dash
//! marks an unsolved run. The `gap` column appears when `exact` is among the
//! algorithms and is filled on the `mt` row once an optimum is proven.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::Context;
use rayon::prelude::*;

use crate::{load_instance, run_algorithm, Algorithm, RunResult};
use mdrpp_core::solution::gap;

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub algs: Vec<Algorithm>,
    pub threads: Option<usize>,
    pub time_budget: Option<Duration>,
    pub max_trips: usize,
}

impl BenchOptions {
    pub fn has_gap(&self) -> bool {
        self.algs.contains(&Algorithm::Exact)
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub instance: String,
    pub alg: Algorithm,
    pub seconds: f64,
    pub makespan: Option<f64>,
    pub gap: Option<f64>,
}

/// Instance files in `inputs`; directories contribute their `*.mdrpp`
/// files in name order.
pub fn collect_inputs(inputs: &[PathBuf]) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && f.extension().is_some_and(|x| x == "mdrpp"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

fn rows_for(path: &Path, opts: &BenchOptions) -> anyhow::Result<Vec<BenchRow>> {
    let inst = load_instance(path)?;
    let results: Vec<(Algorithm, RunResult)> = opts
        .algs
        .iter()
        .map(|&a| (a, run_algorithm(&inst, a, opts.max_trips, opts.time_budget)))
        .collect();
    let optimum = results
        .iter()
        .find(|(a, r)| *a == Algorithm::Exact && r.optimal)
        .and_then(|(_, r)| r.makespan());
    Ok(results
        .into_iter()
        .map(|(alg, r)| {
            let gap = match (alg, r.makespan(), optimum) {
                (Algorithm::Mt, Some(m), Some(opt)) => gap(m, opt).ok(),
                _ => None,
            };
            BenchRow {
                instance: inst.name.clone(),
                alg,
                seconds: r.seconds,
                makespan: r.makespan(),
                gap,
            }
        })
        .collect())
}

/// Runs every algorithm on every file. Instances are spread over a thread
/// pool; rows come back in input order.
pub fn run_bench(files: &[PathBuf], opts: &BenchOptions) -> anyhow::Result<Vec<BenchRow>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().context("starting worker pool")?;
    let per_file: Vec<anyhow::Result<Vec<BenchRow>>> =
        pool.install(|| files.par_iter().map(|f| rows_for(f, opts)).collect());
    let mut rows = Vec::new();
    for r in per_file {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn render_csv(rows: &[BenchRow], with_gap: bool) -> String {
    let dash = |v: Option<f64>, digits: usize| v.map_or("-".to_string(), |x| format!("{x:.digits$}"));
    let mut out = String::from(if with_gap { "instance,alg,ET,M,gap\n" } else { "instance,alg,ET,M\n" });
    for r in rows {
        let et = if r.makespan.is_some() { format!("{:.1}", r.seconds) } else { "-".into() };
        write!(out, "{},{},{},{}", r.instance, r.alg.label(), et, dash(r.makespan, 2)).unwrap();
        if with_gap {
            write!(out, ",{}", dash(r.gap, 1)).unwrap();
        }
        out.push('\n');
    }
    out
}
