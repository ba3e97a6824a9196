//! Report serialization: a versioned hierarchical key-value text file per
//! scenario plus a flat comma-separated table for plotting. Floats are
//! written with 17 significant digits so tables round-trip exactly; repeated
//! runs produce bitwise-identical files (timings go to a sidecar).

use std::fmt::Write as _;

use crate::config::{ModelSpec, Scenario};
use crate::runner::{Outcome, ScenarioResult};

pub const REPORT_HEADER: &str = "reilly-workbench report v1";

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.17e}")
    }
}

/// Canonical echo of everything that affects the run, hashed into the report.
pub fn scenario_fingerprint(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite = {}", s.suite.name());
    let _ = writeln!(out, "model = {}", s.model.label());
    let _ = writeln!(out, "profile.a0 = {}", fmt_f(s.profile.a0));
    for (k, &c) in s.profile.cos_coeffs.iter().enumerate() {
        if c != 0.0 {
            let _ = writeln!(out, "profile.cos{} = {}", k + 1, fmt_f(c));
        }
    }
    for (k, &c) in s.profile.sin_coeffs.iter().enumerate() {
        if c != 0.0 {
            let _ = writeln!(out, "profile.sin{} = {}", k + 1, fmt_f(c));
        }
    }
    let levels: Vec<String> = s.levels.iter().map(|l| l.to_string()).collect();
    let _ = writeln!(out, "levels = {}", levels.join(" "));
    let _ = writeln!(out, "field = {:?}", s.field);
    if let Some(p) = &s.potential {
        let _ = writeln!(out, "potential = {p:?}");
    }
    if let Some(k) = s.k {
        let _ = writeln!(out, "k = {}", fmt_f(k));
    }
    let _ = writeln!(
        out,
        "seed = {}",
        s.seed.map(|v| v.to_string()).unwrap_or_else(|| "none".into())
    );
    let _ = writeln!(out, "tol.residual = {}", fmt_f(s.tolerances.residual));
    let _ = writeln!(out, "tol.order = {}", fmt_f(s.tolerances.order));
    let _ = writeln!(out, "tol.cmc = {}", fmt_f(s.tolerances.cmc));
    let _ = writeln!(out, "expect = {}", s.expect.name());
    out
}

pub fn outcome_str(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::VerdictMismatch => "verdict-mismatch",
        Outcome::UnexpectedSolverFailure => "solver-failure",
    }
}

/// The hierarchical report file.
pub fn render_report(r: &ScenarioResult) -> String {
    let s = &r.scenario;
    let fingerprint = scenario_fingerprint(s);
    let mut out = String::new();
    let _ = writeln!(out, "{REPORT_HEADER}");
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "scenario = {}", s.name);
    let _ = writeln!(out, "description = {}", s.description);
    let _ = writeln!(out, "claim = {}", s.claim);
    let _ = writeln!(out, "config_hash = {:016x}", fnv1a(fingerprint.as_bytes()));
    out.push_str(&fingerprint);
    if matches!(s.model, ModelSpec::CustomPoly(_)) {
        let _ = writeln!(out, "screen = sectional curvature lower bound -1");
    }
    for row in &r.rows {
        let _ = writeln!(out, "[level {}]", row.level);
        for (name, val) in r.columns.iter().skip(1).zip(row.values.iter()) {
            let _ = writeln!(out, "term.{name} = {}", fmt_f(*val));
        }
    }
    let _ = writeln!(out, "[convergence]");
    let _ = writeln!(out, "primary = {}", r.primary);
    for (i, o) in r.orders.iter().enumerate() {
        if !o.is_nan() {
            let _ = writeln!(
                out,
                "order.{} = {}",
                r.rows.get(i).map(|row| row.level).unwrap_or(i as u32),
                fmt_f(*o)
            );
        }
    }
    if let Some(ex) = &r.extrapolated {
        let _ = writeln!(out, "extrapolated = {}", fmt_f(ex.value));
        let _ = writeln!(out, "error_estimate = {}", fmt_f(ex.error_estimate));
        if let Some(o) = ex.order {
            let _ = writeln!(out, "extrapolation_order = {}", fmt_f(o));
        }
    }
    let _ = writeln!(out, "[verdict]");
    let _ = writeln!(out, "verdict = {}", r.verdict.as_str());
    let _ = writeln!(out, "strict = {}", r.strict);
    let _ = writeln!(out, "expected = {}", s.expect.name());
    let _ = writeln!(out, "outcome = {}", outcome_str(r.outcome));
    if let Some(e) = &r.solver_error {
        let _ = writeln!(out, "error = {e}");
    }
    for n in &r.notes {
        let _ = writeln!(out, "note = {n}");
    }
    out
}

/// The flat comma-separated table.
pub fn render_table(r: &ScenarioResult) -> String {
    let mut out = String::new();
    out.push_str(&r.columns.join(","));
    out.push('\n');
    for (i, row) in r.rows.iter().enumerate() {
        let mut cells = vec![row.level.to_string()];
        cells.extend(row.values.iter().map(|v| fmt_f(*v)));
        cells.push(fmt_f(*r.orders.get(i).unwrap_or(&f64::NAN)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Timing sidecar (excluded from reproducibility comparisons).
pub fn render_timings(r: &ScenarioResult) -> String {
    let mut out = String::new();
    for (stage, secs) in &r.timings {
        let _ = writeln!(out, "{stage} = {secs:.6} s");
    }
    out
}

/// Parse a table back; used by the round-trip test and available for
/// downstream tooling.
pub fn parse_table(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty table")?;
    let columns: Vec<String> = header.split(',').map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            let v = if cell == "nan" {
                f64::NAN
            } else {
                cell.parse::<f64>()
                    .map_err(|e| format!("row {}: bad cell '{cell}': {e}", i + 2))?
            };
            row.push(v);
        }
        if row.len() != columns.len() {
            return Err(format!(
                "row {} has {} cells, header has {}",
                i + 2,
                row.len(),
                columns.len()
            ));
        }
        rows.push(row);
    }
    Ok((columns, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for v in [
            std::f64::consts::PI,
            -1.234567890123456e-17,
            0.1 + 0.2,
            6.02214076e23,
        ] {
            let s = fmt_f(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{s}");
        }
    }

    #[test]
    fn table_round_trip() {
        let text = "level,h_max,gap,order\n2,1.25000000000000000e-1,3.14159265358979312e0,nan\n3,6.25000000000000000e-2,1.00000000000000005e-3,2.00000000000000000e0\n";
        let (cols, rows) = parse_table(text).unwrap();
        assert_eq!(cols.len(), 4);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][2].to_bits(), std::f64::consts::PI.to_bits());
    }
}
