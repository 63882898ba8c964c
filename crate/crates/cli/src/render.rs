//! Plain-text tables for terminal output.

use std::fmt::Write;

use biprom_core::choquet::RankingReport;
use biprom_core::{ElicitationResult, Flows, Level, RelationKind, RorSnapshot};

fn width(ids: &[String]) -> usize {
    ids.iter().map(String::len).max().unwrap_or(0).max(2)
}

pub fn flows_table(flows: &Flows) -> String {
    let ids: Vec<String> = flows.keys().cloned().collect();
    let w = width(&ids);
    let mut out = String::new();
    writeln!(out, "{:w$}  {:>10}  {:>10}  {:>10}", "", "phi+", "phi-", "phi").unwrap();
    for (id, f) in flows {
        writeln!(out, "{id:w$}  {:>10.6}  {:>10.6}  {:>10.6}", f.positive, f.negative, f.net).unwrap();
    }
    out
}

pub fn ranking_table(report: &RankingReport) -> String {
    let mut out = flows_table(&report.flows);
    out.push_str("\nPROMETHEE II\n");
    for (rank, group) in report.promethee2.iter().enumerate() {
        writeln!(out, "{:>3}. {}", rank + 1, group.join(" = ")).unwrap();
    }
    out.push_str("\nPROMETHEE I (P preferred, - dispreferred, I indifferent, R incomparable)\n");
    let w = width(&report.alternatives);
    write!(out, "{:w$}", "").unwrap();
    for id in &report.alternatives {
        write!(out, " {id:>w$}").unwrap();
    }
    out.push('\n');
    for (id, row) in report.alternatives.iter().zip(&report.promethee1) {
        write!(out, "{id:w$}").unwrap();
        for s in row {
            write!(out, " {s:>w$}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn elicitation_table(result: &ElicitationResult) -> String {
    let mut out = String::new();
    writeln!(out, "level: {:?}", result.level).unwrap();
    for step in &result.step_trace {
        let eps = step.epsilon.map_or("infeasible".to_string(), |e| format!("{e:.6}"));
        let verdict = if step.passed { "pass" } else { "fail" };
        writeln!(out, "  {:<18} eps = {eps:<12} {verdict}", format!("{:?}", step.level)).unwrap();
    }
    if let Some(b) = &result.parameters {
        writeln!(out, "parameters: {}", serde_json::to_string(b).expect("serializable")).unwrap();
    }
    if let Some(hint) = &result.infeasibility_hint {
        let list = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(", ");
        writeln!(out, "conflicting statements: {}", list(&hint.conflict)).unwrap();
        writeln!(out, "removing any one of: {}", list(&hint.single_removals)).unwrap();
    }
    out
}

/// Six 0/1 matrices; cells in the diff against the previous iteration carry `*`.
pub fn snapshot_table(snapshot: &RorSnapshot) -> String {
    let ids = &snapshot.alternatives;
    let w = width(ids);
    let mut out = String::new();
    writeln!(out, "iteration {}", snapshot.iteration).unwrap();
    for kind in RelationKind::ALL {
        for level in Level::ALL {
            let mat = snapshot.matrix(kind, level);
            writeln!(out, "\n{} {}", kind.name(), level.short_name()).unwrap();
            write!(out, "{:w$}", "").unwrap();
            for id in ids {
                write!(out, " {id:>w$} ").unwrap();
            }
            out.push('\n');
            for (a, id) in ids.iter().enumerate() {
                write!(out, "{id:w$}").unwrap();
                for (b, other) in ids.iter().enumerate() {
                    let changed = snapshot.diff.as_ref().is_some_and(|d| match kind {
                        RelationKind::Necessary => d.contains_gained_necessary(level, id, other),
                        RelationKind::Possible => d.contains_lost_possible(level, id, other),
                    });
                    let mark = if changed { '*' } else { ' ' };
                    write!(out, " {:>w$}{mark}", u8::from(mat.get(a, b))).unwrap();
                }
                out.push('\n');
            }
        }
    }
    let borderline = snapshot.borderline_cells();
    if !borderline.is_empty() {
        out.push_str("\nborderline cells\n");
        for c in borderline {
            writeln!(out, "  {} ({}, {}) eps = {:e}", c.matrix, c.a, c.b, c.epsilon).unwrap();
        }
    }
    out
}
