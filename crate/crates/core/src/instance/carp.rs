//! Reader for the classic `gdb`-style CARP benchmark files.
//!
//! ```text
//! NOMBRE : gdb1
//! VERTICES : 12
//! ARISTAS_REQ : 22
//! ARISTAS_NOREQ : 0
//! LISTA_ARISTAS_REQ :
//!  ( 1, 2)  coste 13 demanda 1
//! DEPOSITO : 1
//! ```
//!
//! Node ids are 1-based in the file and 0-based in the result.

use super::InstanceError;
use crate::graph::{NodeId, WeightedGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct CarpEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub cost: f64,
    pub demand: Option<f64>,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CarpBenchmark {
    pub name: String,
    /// Symmetric: every file edge becomes two arcs.
    pub graph: WeightedGraph,
    /// Edges in file order.
    pub edges: Vec<CarpEdge>,
    pub depot: Option<NodeId>,
    pub vehicles: Option<usize>,
    pub capacity: Option<f64>,
}

fn header_value(line: &str) -> Option<(String, String)> {
    let (key, value) = line.split_once(':')?;
    let key = key.trim().to_ascii_uppercase();
    if key.is_empty() || key.contains(char::is_whitespace) {
        return None;
    }
    Some((key, value.trim().to_string()))
}

fn parse_edge(line: &str, lineno: usize, node_count: usize, required: bool) -> Result<CarpEdge, InstanceError> {
    let cleaned: String = line
        .chars()
        .map(|c| if matches!(c, '(' | ')' | ',') { ' ' } else { c })
        .collect();
    let tokens: Vec<&str> = cleaned.split_whitespace().collect();
    let bad = |msg: &str| InstanceError::syntax(lineno, format!("malformed edge line: {msg}"));
    if tokens.len() < 3 {
        return Err(bad("expected endpoints and cost"));
    }
    let endpoint = |t: &str| -> Result<NodeId, InstanceError> {
        let id: usize = t.parse().map_err(|_| bad(&format!("invalid node '{t}'")))?;
        if id == 0 || id > node_count {
            return Err(bad(&format!("node {id} outside 1..={node_count}")));
        }
        Ok(id - 1)
    };
    let from = endpoint(tokens[0])?;
    let to = endpoint(tokens[1])?;
    let mut rest = &tokens[2..];
    let mut cost = None;
    let mut demand = None;
    while let Some((&head, tail)) = rest.split_first() {
        let lower = head.to_ascii_lowercase();
        let (slot, value, next) = match lower.as_str() {
            "coste" | "cost" => (&mut cost, tail.first(), tail.get(1..).unwrap_or(&[])),
            "demanda" | "demand" => (&mut demand, tail.first(), tail.get(1..).unwrap_or(&[])),
            _ if cost.is_none() => (&mut cost, Some(&head), tail),
            _ => return Err(bad(&format!("unexpected token '{head}'"))),
        };
        let value = value.ok_or_else(|| bad(&format!("missing value after '{head}'")))?;
        *slot = Some(value.parse::<f64>().map_err(|_| bad(&format!("invalid number '{value}'")))?);
        rest = next;
    }
    let cost = cost.ok_or_else(|| bad("missing cost"))?;
    if !cost.is_finite() || cost < 0.0 {
        return Err(bad(&format!("negative or invalid cost {cost}")));
    }
    Ok(CarpEdge {
        from,
        to,
        cost,
        demand,
        required,
    })
}

pub fn parse_carp_benchmark(text: &str) -> Result<CarpBenchmark, InstanceError> {
    let mut name = String::new();
    let mut node_count: Option<usize> = None;
    let mut expected_req: Option<usize> = None;
    let mut expected_noreq: Option<usize> = None;
    let mut depot = None;
    let mut vehicles = None;
    let mut capacity = None;
    let mut edges = Vec::new();
    let mut in_required = true;
    let mut last_line = 0;

    let int = |v: &str, line: usize, key: &str| -> Result<usize, InstanceError> {
        v.parse()
            .map_err(|_| InstanceError::syntax(line, format!("invalid value '{v}' for {key}")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.eq_ignore_ascii_case("END") {
            continue;
        }
        if content.starts_with('(') || content.starts_with(|c: char| c.is_ascii_digit()) {
            let n = node_count.ok_or_else(|| InstanceError::syntax(line, "edge line before VERTICES header"))?;
            edges.push(parse_edge(content, line, n, in_required)?);
            continue;
        }
        let Some((key, value)) = header_value(content) else {
            return Err(InstanceError::syntax(line, format!("unrecognised line '{content}'")));
        };
        match key.as_str() {
            "NOMBRE" | "NAME" => name = value,
            "VERTICES" => node_count = Some(int(&value, line, &key)?),
            "ARISTAS_REQ" => expected_req = Some(int(&value, line, &key)?),
            "ARISTAS_NOREQ" => expected_noreq = Some(int(&value, line, &key)?),
            "VEHICULOS" => vehicles = Some(int(&value, line, &key)?),
            "CAPACIDAD" => {
                capacity = Some(
                    value
                        .parse()
                        .map_err(|_| InstanceError::syntax(line, format!("invalid capacity '{value}'")))?,
                )
            }
            "LISTA_ARISTAS_REQ" => in_required = true,
            "LISTA_ARISTAS_NOREQ" => in_required = false,
            "DEPOSITO" => {
                let d = int(&value, line, &key)?;
                if d == 0 || node_count.is_some_and(|n| d > n) {
                    return Err(InstanceError::syntax(line, format!("depot {d} out of range")));
                }
                depot = Some(d - 1);
            }
            _ => {}
        }
    }

    let node_count = node_count.ok_or_else(|| InstanceError::syntax(last_line, "missing VERTICES header"))?;
    let count = |req: bool| edges.iter().filter(|e: &&CarpEdge| e.required == req).count();
    for (expected, req, key) in [(expected_req, true, "ARISTAS_REQ"), (expected_noreq, false, "ARISTAS_NOREQ")] {
        if let Some(n) = expected {
            if count(req) != n {
                return Err(InstanceError::syntax(
                    last_line,
                    format!("{key} declares {n} edges but {} were listed", count(req)),
                ));
            }
        }
    }
    let triples: Vec<_> = edges.iter().map(|e| (e.from, e.to, e.cost)).collect();
    let graph = WeightedGraph::undirected(node_count, &triples)?;
    Ok(CarpBenchmark {
        name,
        graph,
        edges,
        depot,
        vehicles,
        capacity,
    })
}
