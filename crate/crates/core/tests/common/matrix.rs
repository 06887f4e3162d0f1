//! Test-side LP and MPS readers, independent of the writers.

use std::collections::{BTreeMap, BTreeSet};

use mdrpp_core::milp::{MilpModel, Sense};

/// Named matrix content: objective, rows, binaries and bounds.
#[derive(Debug, Default, PartialEq)]
pub struct Matrix {
    pub objective: BTreeMap<String, f64>,
    pub rows: BTreeMap<String, (char, f64, BTreeMap<String, f64>)>,
    pub binaries: Vec<String>,
    pub columns: Vec<String>,
}

pub fn from_model(m: &MilpModel) -> Matrix {
    let mut out = Matrix::default();
    for c in &m.columns {
        out.columns.push(c.name.clone());
        if c.objective != 0.0 {
            out.objective.insert(c.name.clone(), c.objective);
        }
        if c.integer {
            out.binaries.push(c.name.clone());
        }
    }
    for r in &m.rows {
        let sense = match r.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        let coeffs = r
            .coeffs
            .iter()
            .filter(|(_, v)| *v != 0.0)
            .map(|&(c, v)| (m.columns[c].name.clone(), v))
            .collect();
        out.rows.insert(r.name.clone(), (sense, r.rhs, coeffs));
    }
    out.columns.sort();
    out.binaries.sort();
    out
}

pub fn parse_lp(text: &str) -> Matrix {
    let mut out = Matrix::default();
    let mut section = "";
    let mut tokens: Vec<String> = Vec::new();
    let mut columns = BTreeSet::new();
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with('\\') || t.is_empty() {
            continue;
        }
        match t {
            "Minimize" | "Subject To" | "Bounds" | "Binary" | "End" => {
                section = match t {
                    "Minimize" => "obj",
                    "Subject To" => "rows",
                    "Bounds" => "bounds",
                    "Binary" => "bin",
                    _ => "end",
                };
                continue;
            }
            _ => {}
        }
        match section {
            "obj" | "rows" => tokens.extend(t.split_whitespace().map(String::from)),
            "bounds" => {
                let parts: Vec<&str> = t.split_whitespace().collect();
                assert_eq!(parts[1], ">=", "{t}");
                columns.insert(parts[0].to_string());
            }
            "bin" => {
                for name in t.split_whitespace() {
                    out.binaries.push(name.into());
                    columns.insert(name.to_string());
                }
            }
            _ => panic!("text after End"),
        }
        if section == "obj" {
            // objective: name ':' terms
            let all: Vec<String> = std::mem::take(&mut tokens);
            assert_eq!(all[0], "obj:");
            for pair in all[1..].chunks(3) {
                let v: f64 = pair[1].parse().unwrap();
                let v = if pair[0] == "-" { -v } else { v };
                out.objective.insert(pair[2].clone(), v);
            }
        }
    }
    let mut it = tokens.into_iter().peekable();
    while let Some(name) = it.next() {
        let name = name.strip_suffix(':').expect("row name").to_string();
        let mut coeffs = BTreeMap::new();
        let sense;
        loop {
            let tok = it.next().unwrap();
            match tok.as_str() {
                "<=" | ">=" | "=" => {
                    sense = match tok.as_str() {
                        "<=" => 'L',
                        ">=" => 'G',
                        _ => 'E',
                    };
                    break;
                }
                "+" | "-" => {
                    let v: f64 = it.next().unwrap().parse().unwrap();
                    let var = it.next().unwrap();
                    columns.insert(var.clone());
                    if v != 0.0 {
                        coeffs.insert(var, if tok == "-" { -v } else { v });
                    }
                }
                "0" => {
                    it.next();
                }
                other => panic!("unexpected token {other}"),
            }
        }
        let rhs: f64 = it.next().unwrap().parse().unwrap();
        out.rows.insert(name, (sense, rhs, coeffs));
    }
    out.columns = columns.into_iter().collect();
    out.binaries.sort();
    out
}

pub fn parse_mps(text: &str) -> Matrix {
    let mut out = Matrix::default();
    let mut section = "";
    let mut senses: BTreeMap<String, char> = BTreeMap::new();
    let mut coeffs: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    let mut rhs: BTreeMap<String, f64> = BTreeMap::new();
    let mut integer = false;
    let mut columns = BTreeSet::new();
    for line in text.lines() {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if !line.starts_with(' ') {
            section = parts[0];
            continue;
        }
        match section {
            "ROWS" => {
                if parts[0] != "N" {
                    senses.insert(parts[1].into(), parts[0].chars().next().unwrap());
                }
            }
            "COLUMNS" => {
                if parts[1] == "'MARKER'" {
                    integer = parts[2] == "'INTORG'";
                    continue;
                }
                let (col, row, v) = (parts[0], parts[1], parts[2].parse::<f64>().unwrap());
                columns.insert(col.to_string());
                if integer && !out.binaries.iter().any(|b| b == col) {
                    out.binaries.push(col.into());
                }
                if row == "obj" {
                    if v != 0.0 {
                        out.objective.insert(col.into(), v);
                    }
                } else if v != 0.0 {
                    coeffs.entry(row.into()).or_default().insert(col.into(), v);
                }
            }
            "RHS" => {
                rhs.insert(parts[1].into(), parts[2].parse().unwrap());
            }
            "BOUNDS" => assert_eq!(parts[0], "BV", "{line}"),
            _ => panic!("unexpected section {section}"),
        }
    }
    for (name, sense) in senses {
        let c = coeffs.remove(&name).unwrap_or_default();
        let r = rhs.get(&name).copied().unwrap_or(0.0);
        out.rows.insert(name, (sense, r, c));
    }
    out.columns = columns.into_iter().collect();
    out.binaries.sort();
    out
}
