use std::fmt::Write as _;

use super::model::{MilpModel, Sense};
use super::sanitize;

fn field(out: &mut String, code: &str, a: &str, b: &str, v: Option<f64>) {
    write!(out, " {code:<2} {a:<8}  {b:<8}").unwrap();
    if let Some(v) = v {
        write!(out, "  {v:>12}").unwrap();
    }
    out.push('\n');
}

/// Fixed-column MPS text; names longer than eight characters widen their field.
pub fn write_mps(model: &MilpModel) -> String {
    let mut out = String::new();
    writeln!(out, "NAME          {}", sanitize(&model.name)).unwrap();
    out.push_str("ROWS\n");
    field(&mut out, "N", "obj", "", None);
    for row in &model.rows {
        let code = match row.sense {
            Sense::Le => "L",
            Sense::Ge => "G",
            Sense::Eq => "E",
        };
        field(&mut out, code, &sanitize(&row.name), "", None);
    }

    let mut by_column: Vec<Vec<(usize, f64)>> = vec![Vec::new(); model.columns.len()];
    for (r, row) in model.rows.iter().enumerate() {
        for &(c, v) in &row.coeffs {
            by_column[c].push((r, v));
        }
    }
    out.push_str("COLUMNS\n");
    let mut in_int = false;
    for (c, col) in model.columns.iter().enumerate() {
        if col.integer != in_int {
            let tag = if col.integer { "'INTORG'" } else { "'INTEND'" };
            writeln!(out, "    MARKER                 'MARKER'                 {tag}").unwrap();
            in_int = col.integer;
        }
        if col.objective != 0.0 {
            field(&mut out, "", &col.name, "obj", Some(col.objective));
        }
        for &(r, v) in &by_column[c] {
            field(&mut out, "", &col.name, &sanitize(&model.rows[r].name), Some(v));
        }
        if col.objective == 0.0 && by_column[c].is_empty() {
            field(&mut out, "", &col.name, "obj", Some(0.0));
        }
    }
    if in_int {
        writeln!(out, "    MARKER                 'MARKER'                 'INTEND'").unwrap();
    }

    out.push_str("RHS\n");
    for row in model.rows.iter().filter(|r| r.rhs != 0.0) {
        field(&mut out, "", "RHS", &sanitize(&row.name), Some(row.rhs));
    }
    out.push_str("BOUNDS\n");
    for col in &model.columns {
        if col.integer && col.lower == 0.0 && col.upper == 1.0 {
            field(&mut out, "BV", "BND", &col.name, None);
            continue;
        }
        if col.lower != 0.0 {
            field(&mut out, "LO", "BND", &col.name, Some(col.lower));
        }
        if col.upper.is_finite() {
            field(&mut out, "UP", "BND", &col.name, Some(col.upper));
        }
    }
    out.push_str("ENDATA\n");
    out
}
