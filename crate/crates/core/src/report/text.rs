use std::fmt::Write;

use super::{EvaluationMetrics, MetricSummary, ProjectReport, StatsReport};

/// One line per finding: `file:line:col kind suite.case evidence`.
pub fn render_findings(report: &ProjectReport) -> String {
    let mut out = String::new();
    for f in &report.findings {
        let _ = writeln!(
            out,
            "{}:{}:{} {} {} {}",
            f.file,
            f.line,
            f.col,
            f.kind,
            f.location_name(),
            f.evidence
        );
    }
    out
}

fn pct(x: f64) -> String {
    format!("{:.2}", x * 100.0)
}

/// A table with one row per smell kind, then summary rows. Rates are percentages.
pub fn render_evaluation(m: &EvaluationMetrics) -> String {
    let width = m.kinds.iter().map(|k| k.kind.len()).max().unwrap_or(4).max(20);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>9}  {:>4}  {:>4}  {:>4}  {:>9}  {:>9}  {:>9}",
        "kind", "instances", "tp", "fp", "fn", "precision", "recall", "f1"
    );
    for k in &m.kinds {
        let _ = writeln!(
            out,
            "{:<width$}  {:>9}  {:>4}  {:>4}  {:>4}  {:>9}  {:>9}  {:>9}",
            k.kind,
            k.instances,
            k.tp,
            k.fp,
            k.fn_,
            pct(k.precision),
            pct(k.recall),
            pct(k.f1)
        );
    }
    let mut summary = |label: &str, s: &Option<MetricSummary>| match s {
        Some(s) => {
            let _ = writeln!(
                out,
                "{:<width$}  {:>9}  {:>4}  {:>4}  {:>4}  {:>9}  {:>9}  {:>9}",
                label,
                s.kinds,
                "",
                "",
                "",
                pct(s.precision),
                pct(s.recall),
                pct(s.f1)
            );
        }
        None => {
            let _ = writeln!(out, "{label:<width$}  (no kind has instances)");
        }
    };
    summary("average (unweighted)", &m.unweighted);
    summary("average (weighted)", &m.weighted);
    for d in &m.diagnostics {
        let _ = writeln!(out, "note: {d}");
    }
    out
}

pub fn render_stats(s: &StatsReport) -> String {
    let p = &s.prevalence;
    let mut out = String::new();
    let _ = writeln!(out, "projects {}  suites {}  cases {}", p.projects, p.suites, p.cases);
    let _ = writeln!(
        out,
        "suites per project: min {} mean {:.2} max {}",
        p.suites_per_project.min, p.suites_per_project.mean, p.suites_per_project.max
    );
    let _ = writeln!(
        out,
        "cases per project:  min {} mean {:.2} max {}",
        p.cases_per_project.min, p.cases_per_project.mean, p.cases_per_project.max
    );
    let _ = writeln!(out, "\n{:<26}  {:>8}  {:>8}", "kind", "suites%", "projects%");
    for k in &p.kinds {
        let _ = writeln!(
            out,
            "{:<26}  {:>8}  {:>8}",
            k.kind,
            pct(k.suite_fraction),
            pct(k.project_fraction)
        );
    }
    let _ = writeln!(out, "\ndistinct kinds per suite:");
    for (k, frac) in s.co_occurrence.histogram.iter() {
        let _ = writeln!(out, "  {k:>3}: {}%", pct(*frac));
    }
    let _ = writeln!(out, "\nP(Y|X) for co-occurring kinds:");
    for (x, row) in s.co_occurrence.conditional.iter() {
        for (y, p) in row.iter().filter(|(y, p)| *y != x && **p > 0.0) {
            let _ = writeln!(out, "  P({y}|{x}) = {}%", pct(*p));
        }
    }
    out
}
