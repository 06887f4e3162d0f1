//! Line-oriented solution files.
//!
//! ```text
//! SOLUTION demo 11.6
//! ROUTE 0
//! TRIP 3.8 0 1 5
//! TRIP 6.7 5 1 3 5
//! UNCOVERED 4 6
//! ```
//!
//! A heuristic that gave up is written as `UNSOLVED <reason>`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{covered_by_walk, Route, Solution, Trip};
use crate::graph::NodeId;
use crate::instance::Instance;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("solution line {line}: {message}")]
pub struct SolutionFileError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolutionFile {
    Solved { name: String, solution: Solution },
    Unsolved { reason: String },
}

fn file_name(name: &str) -> String {
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect();
    if cleaned.is_empty() {
        "unnamed".into()
    } else {
        cleaned
    }
}

pub fn write_solution(inst: &Instance, sol: &Solution) -> String {
    let mut out = String::new();
    writeln!(out, "SOLUTION {} {}", file_name(&inst.name), sol.makespan).unwrap();
    for route in &sol.routes {
        writeln!(out, "ROUTE {}", route.vehicle).unwrap();
        for trip in &route.trips {
            write!(out, "TRIP {}", trip.duration).unwrap();
            for n in &trip.nodes {
                write!(out, " {n}").unwrap();
            }
            out.push('\n');
        }
    }
    for &i in &sol.uncovered {
        let e = inst.required[i];
        writeln!(out, "UNCOVERED {} {}", e.from, e.to).unwrap();
    }
    out
}

pub fn write_unsolved(reason: &str) -> String {
    format!("UNSOLVED {}\n", reason.replace('\n', " "))
}

/// Reads a solution file; trip coverage is recomputed from the walks.
pub fn parse_solution(inst: &Instance, text: &str) -> Result<SolutionFile, SolutionFileError> {
    let err = |line: usize, message: String| SolutionFileError { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (first_no, first) = lines.next().ok_or_else(|| err(1, "empty solution file".into()))?;
    if let Some(reason) = first.strip_prefix("UNSOLVED") {
        return Ok(SolutionFile::Unsolved {
            reason: reason.trim().to_string(),
        });
    }
    let head: Vec<&str> = first.split_whitespace().collect();
    if head.len() != 3 || head[0] != "SOLUTION" {
        return Err(err(first_no, "expected 'SOLUTION <name> <makespan>'".into()));
    }
    let name = head[1].to_string();
    let makespan: f64 = head[2]
        .parse()
        .map_err(|_| err(first_no, format!("invalid makespan '{}'", head[2])))?;

    let mut routes: Vec<Route> = Vec::new();
    let mut uncovered = Vec::new();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "ROUTE" => {
                let k = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|_| tokens.len() == 2)
                    .ok_or_else(|| err(no, "expected 'ROUTE <vehicle>'".into()))?;
                routes.push(Route::empty(k));
            }
            "TRIP" => {
                let route = routes
                    .last_mut()
                    .ok_or_else(|| err(no, "TRIP before any ROUTE".into()))?;
                if tokens.len() < 3 {
                    return Err(err(no, "expected 'TRIP <duration> <nodes...>'".into()));
                }
                let duration: f64 = tokens[1]
                    .parse()
                    .map_err(|_| err(no, format!("invalid duration '{}'", tokens[1])))?;
                let nodes = tokens[2..]
                    .iter()
                    .map(|t| t.parse::<NodeId>().map_err(|_| err(no, format!("invalid node '{t}'"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(&bad) = nodes.iter().find(|&&n| n >= inst.node_count()) {
                    return Err(err(no, format!("node {bad} is not in the instance")));
                }
                let covered = covered_by_walk(inst, &nodes);
                route.trips.push(Trip {
                    nodes,
                    duration,
                    covered,
                });
            }
            "UNCOVERED" => {
                let ends: Vec<NodeId> = tokens[1..].iter().filter_map(|t| t.parse().ok()).collect();
                if ends.len() != 2 || tokens.len() != 3 {
                    return Err(err(no, "expected 'UNCOVERED <i> <j>'".into()));
                }
                let idx = inst
                    .required
                    .iter()
                    .enumerate()
                    .position(|(i, e)| e.from == ends[0] && e.to == ends[1] && !uncovered.contains(&i))
                    .ok_or_else(|| err(no, format!("({}, {}) is not a required edge", ends[0], ends[1])))?;
                uncovered.push(idx);
            }
            other => return Err(err(no, format!("unknown keyword '{other}'"))),
        }
    }
    uncovered.sort_unstable();
    Ok(SolutionFile::Solved {
        name,
        solution: Solution {
            routes,
            makespan,
            uncovered,
        },
    })
}
