//! Result-table rendering: aligned human table, CSV and JSON with the fixed
//! column set `example,n,algorithm,rel_error,iterations,time_s`.

use crate::harness::ResultRow;

pub const CSV_HEADER: &str = "example,n,algorithm,rel_error,iterations,time_s";

pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:e},{},{:e}\n",
            r.example,
            r.n,
            r.algorithm.as_str(),
            r.rel_error,
            r.iterations,
            r.time_s
        ));
    }
    out
}

pub fn render_json(rows: &[ResultRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialize")
}

pub fn render_table(rows: &[ResultRow]) -> String {
    let header = ["example", "n", "algorithm", "rel_error", "iterations", "time_s"];
    let cells: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.example.clone(),
                r.n.to_string(),
                r.algorithm.as_str().to_string(),
                format!("{:.4e}", r.rel_error),
                r.iterations.to_string(),
                format!("{:.6}", r.time_s),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let fmt_row = |cols: &[String]| -> String {
        cols.iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    out.push_str(&fmt_row(
        &header.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
    ));
    out.push('\n');
    for row in &cells {
        out.push_str(&fmt_row(row.as_slice()));
        out.push('\n');
    }
    out
}
