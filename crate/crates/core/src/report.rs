//! CSV and JSON encodings of experiment reports.
//!
//! Floats are rounded to 10 significant digits and printed in shortest form,
//! so identical reports always serialize to identical bytes.

use serde::Serializer;

use crate::experiment::ExperimentReport;

/// CSV header, in output order.
pub const CSV_COLUMNS: [&str; 14] = [
    "N",
    "k",
    "eta",
    "trials",
    "seed",
    "success_rate",
    "tie_rate",
    "mean_marked_count",
    "exact_marked_probability",
    "approx_9_over_N",
    "quantum_queries",
    "classical_queries",
    "wall_time_ms",
    "probability_gap",
];

/// `x` rounded to 10 significant digits.
pub fn round_sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

pub fn format_float(x: f64) -> String {
    round_sig10(x).to_string()
}

pub(crate) fn sig10<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig10(*x))
}

/// CSV with a header row; no rows gives an empty string.
pub fn to_csv(reports: &[ExperimentReport]) -> String {
    if reports.is_empty() {
        return String::new();
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing into a Vec cannot fail.
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in reports {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.eta.to_string(),
            r.trials.to_string(),
            r.seed.to_string(),
            format_float(r.success_rate),
            format_float(r.tie_rate),
            format_float(r.mean_marked_count),
            format_float(r.exact_marked_probability),
            format_float(r.approx_9_over_n),
            r.quantum_queries.to_string(),
            r.classical_queries.map(|c| c.to_string()).unwrap_or_default(),
            r.wall_time_ms.to_string(),
            format_float(r.probability_gap),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn to_json(reports: &[ExperimentReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<ExperimentReport>> {
    serde_json::from_str(text)
}

/// Human-readable table of saved reports.
pub fn to_table(reports: &[ExperimentReport]) -> String {
    let mut out = format!(
        "{:>6} {:>4} {:>7} {:>6} {:>9} {:>8} {:>11} {:>11} {:>8} {:>9}\n",
        "N", "k", "eta", "trials", "success", "ties", "p_marked", "9/N", "quantum", "classical"
    );
    for r in reports {
        out.push_str(&format!(
            "{:>6} {:>4} {:>7} {:>6} {:>9.4} {:>8.4} {:>11.7} {:>11.7} {:>8} {:>9}\n",
            r.n,
            r.k,
            r.eta,
            r.trials,
            r.success_rate,
            r.tie_rate,
            r.exact_marked_probability,
            r.approx_9_over_n,
            r.quantum_queries,
            r.classical_queries.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
        ));
        for w in &r.warnings {
            out.push_str(&format!("  warning: {w}\n"));
        }
    }
    out
}
