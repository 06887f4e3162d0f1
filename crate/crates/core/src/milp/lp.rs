use std::fmt::Write as _;

use super::model::{MilpModel, Sense};
use super::sanitize;

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, model: &MilpModel, coeffs: &[(usize, f64)]) {
    if coeffs.is_empty() {
        write!(out, " 0 {}", model.columns[model.beta()].name).unwrap();
        return;
    }
    for (n, &(c, v)) in coeffs.iter().enumerate() {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if v < 0.0 { '-' } else { '+' };
        write!(out, " {sign} {} {}", v.abs(), model.columns[c].name).unwrap();
    }
}

/// CPLEX LP text.
pub fn write_lp(model: &MilpModel) -> String {
    let mut out = String::new();
    writeln!(out, "\\ Problem: {}", sanitize(&model.name)).unwrap();
    out.push_str("Minimize\n obj:");
    let objective: Vec<(usize, f64)> = model
        .columns
        .iter()
        .enumerate()
        .filter(|(_, c)| c.objective != 0.0)
        .map(|(i, c)| (i, c.objective))
        .collect();
    write_terms(&mut out, model, &objective);
    out.push_str("\nSubject To\n");
    for row in &model.rows {
        write!(out, " {}:", sanitize(&row.name)).unwrap();
        write_terms(&mut out, model, &row.coeffs);
        let sense = match row.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(out, " {sense} {}", row.rhs).unwrap();
    }
    out.push_str("Bounds\n");
    for c in model.columns.iter().filter(|c| !c.integer) {
        if c.upper.is_finite() {
            writeln!(out, " {} <= {} <= {}", c.lower, c.name, c.upper).unwrap();
        } else {
            writeln!(out, " {} >= {}", c.name, c.lower).unwrap();
        }
    }
    let binaries: Vec<&str> = model
        .columns
        .iter()
        .filter(|c| c.integer)
        .map(|c| c.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binary\n");
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            writeln!(out, " {}", chunk.join(" ")).unwrap();
        }
    }
    out.push_str("End\n");
    out
}
