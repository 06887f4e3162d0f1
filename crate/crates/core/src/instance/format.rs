//! Canonical line-oriented instance format.
//!
//! ```text
//! MDRPPRV 1
//! NAME demo
//! NODES 3
//! DEPOTS 0
//! VEHICLES 1
//! CAPACITY 10
//! RECHARGE 2.5
//! START 0
//! ARC 0 1 2
//! ARC 1 0 2
//! REQ 0 1
//! REQ 1 2 DIR
//! ```
//!
//! `#` starts a comment. Arcs are written in canonical order, so serialising
//! is a pure function of the instance content.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{Instance, InstanceError, RequiredEdge};
use crate::graph::{Arc, NodeId, WeightedGraph};

const HEADER: &str = "MDRPPRV 1";

pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let join = |ids: &[NodeId]| ids.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
    writeln!(out, "{HEADER}").unwrap();
    let name = inst.name.replace(['\n', '\r', '#'], "_");
    if !name.trim().is_empty() {
        writeln!(out, "NAME {}", name.trim()).unwrap();
    }
    writeln!(out, "NODES {}", inst.node_count()).unwrap();
    writeln!(out, "DEPOTS {}", join(&inst.depots)).unwrap();
    writeln!(out, "VEHICLES {}", inst.vehicles).unwrap();
    writeln!(out, "CAPACITY {}", inst.capacity).unwrap();
    writeln!(out, "RECHARGE {}", inst.recharge_time).unwrap();
    writeln!(out, "START {}", join(&inst.start_depots)).unwrap();
    for a in inst.graph.arcs() {
        writeln!(out, "ARC {} {} {}", a.from, a.to, a.weight).unwrap();
    }
    for e in &inst.required {
        if e.directed {
            writeln!(out, "REQ {} {} DIR", e.from, e.to).unwrap();
        } else {
            writeln!(out, "REQ {} {}", e.from, e.to).unwrap();
        }
    }
    out
}

#[derive(Default)]
struct Fields {
    name: Option<String>,
    nodes: Option<usize>,
    depots: Option<Vec<NodeId>>,
    vehicles: Option<usize>,
    capacity: Option<f64>,
    recharge: Option<f64>,
    start: Option<Vec<NodeId>>,
    arcs: Vec<Arc>,
    required: Vec<RequiredEdge>,
}

fn number<T: FromStr>(token: &str, line: usize, what: &str) -> Result<T, InstanceError> {
    token
        .parse()
        .map_err(|_| InstanceError::syntax(line, format!("invalid {what} '{token}'")))
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, key: &str) -> Result<(), InstanceError> {
    if slot.is_some() {
        return Err(InstanceError::syntax(line, format!("duplicate {key} line")));
    }
    *slot = Some(value);
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut fields = Fields::default();
    let mut seen_header = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !seen_header {
            if content.split_whitespace().collect::<Vec<_>>() != ["MDRPPRV", "1"] {
                return Err(InstanceError::syntax(line, format!("expected header '{HEADER}'")));
            }
            seen_header = true;
            continue;
        }
        let mut tokens = content.split_whitespace();
        let key = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        let exactly = |n: usize| {
            if rest.len() == n {
                Ok(())
            } else {
                Err(InstanceError::syntax(line, format!("{key} expects {n} value(s), got {}", rest.len())))
            }
        };
        match key {
            "NAME" => {
                let name = content["NAME".len()..].trim().to_string();
                set_once(&mut fields.name, name, line, key)?;
            }
            "NODES" => {
                exactly(1)?;
                set_once(&mut fields.nodes, number(rest[0], line, "node count")?, line, key)?;
            }
            "VEHICLES" => {
                exactly(1)?;
                set_once(&mut fields.vehicles, number(rest[0], line, "vehicle count")?, line, key)?;
            }
            "CAPACITY" => {
                exactly(1)?;
                set_once(&mut fields.capacity, number(rest[0], line, "capacity")?, line, key)?;
            }
            "RECHARGE" => {
                exactly(1)?;
                set_once(&mut fields.recharge, number(rest[0], line, "recharge time")?, line, key)?;
            }
            "DEPOTS" | "START" => {
                let ids = rest
                    .iter()
                    .map(|t| number(t, line, "node id"))
                    .collect::<Result<Vec<NodeId>, _>>()?;
                let slot = if key == "DEPOTS" { &mut fields.depots } else { &mut fields.start };
                set_once(slot, ids, line, key)?;
            }
            "ARC" => {
                exactly(3)?;
                fields.arcs.push(Arc::new(
                    number(rest[0], line, "node id")?,
                    number(rest[1], line, "node id")?,
                    number(rest[2], line, "weight")?,
                ));
            }
            "REQ" => {
                let directed = match rest.len() {
                    2 => false,
                    3 if rest[2] == "DIR" => true,
                    _ => return Err(InstanceError::syntax(line, "REQ expects 'i j' or 'i j DIR'")),
                };
                fields.required.push(RequiredEdge {
                    from: number(rest[0], line, "node id")?,
                    to: number(rest[1], line, "node id")?,
                    directed,
                });
            }
            other => return Err(InstanceError::syntax(line, format!("unknown keyword '{other}'"))),
        }
    }

    if !seen_header {
        return Err(InstanceError::syntax(last_line.max(1), format!("missing header '{HEADER}'")));
    }
    let missing = |key: &str| InstanceError::syntax(last_line, format!("missing {key} line"));
    let nodes = fields.nodes.ok_or_else(|| missing("NODES"))?;
    let graph = WeightedGraph::new(nodes, fields.arcs)?;
    Instance::new(
        fields.name.unwrap_or_default(),
        graph,
        fields.depots.ok_or_else(|| missing("DEPOTS"))?,
        fields.required,
        fields.vehicles.ok_or_else(|| missing("VEHICLES"))?,
        fields.capacity.ok_or_else(|| missing("CAPACITY"))?,
        fields.recharge.ok_or_else(|| missing("RECHARGE"))?,
        fields.start.ok_or_else(|| missing("START"))?,
    )
}
