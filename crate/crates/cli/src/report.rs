//! Human-readable matrices and tables. Reports round to 8 significant
//! digits; model files keep full precision.

use qperceptron::dirac::format_significant;
use qperceptron::{ComplexScalar, Matrix, VerificationReport};

/// Magnitudes below this print as zero.
const PRINT_ZERO: f64 = 1e-13;

/// Eight significant digits, but never more than eight decimals.
fn magnitude(x: f64) -> String {
    if (1e-4..1.0).contains(&x) {
        let s = format!("{x:.8}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format_significant(x, 8)
    }
}

fn real(x: f64) -> String {
    if x.abs() < PRINT_ZERO {
        "0".into()
    } else if x < 0.0 {
        format!("-{}", magnitude(-x))
    } else {
        magnitude(x)
    }
}

pub fn scalar(z: ComplexScalar) -> String {
    if z.im.abs() < PRINT_ZERO {
        return real(z.re);
    }
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", real(z.re), magnitude(z.im.abs()))
}

/// `[[a, b],\n [c, d]]`
pub fn matrix(m: &Matrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| scalar(m.get(i, j))).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let rows: Vec<String> = cells
        .iter()
        .map(|r| {
            let r: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(",\n "))
}

pub fn values(v: &[f64]) -> String {
    v.iter().map(|&x| real(x)).collect::<Vec<_>>().join(", ")
}

pub fn verification_table(report: &VerificationReport) -> String {
    let mut rows = vec![[
        "input".to_string(),
        "expected".to_string(),
        "predicted".to_string(),
        "fidelity".to_string(),
        "result".to_string(),
    ]];
    for r in &report.records {
        let state = |v: &qperceptron::StateVector| {
            let s = qperceptron::format_state(v, 1e-12).unwrap_or_else(|_| format!("{v:?}"));
            if s.is_empty() {
                "0".to_string()
            } else {
                s
            }
        };
        rows.push([
            r.input.clone(),
            state(&r.expected),
            state(&r.predicted),
            format!("{:.10}", r.fidelity),
            if r.pass { "ok".into() } else { "FAIL".into() },
        ]);
    }
    let widths: Vec<usize> = (0..5)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in &rows {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    let verdict = if report.all_pass() { "PASS" } else { "FAIL" };
    out.push_str(&format!(
        "{}/{} {verdict}\n",
        report.pass_count, report.total
    ));
    out
}
