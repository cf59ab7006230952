use std::fmt::Write;

use crate::eval::{Cell, EvalReport, MetricsRecord};

fn cell_key(c: &Cell) -> String {
    format!("method={} theta={} partitions={}", c.method.name(), c.theta, c.partitions)
}

/// Human-readable table, one row per grid cell; `*` marks selected cells.
pub fn report_table(report: &EvalReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "target {}  algorithm {}  folds {}",
        report.target, report.algorithm, report.folds
    )
    .unwrap();
    writeln!(
        out,
        "  {:<8} {:>5} {:>3} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "method", "theta", "fs", "P_f", "R_f", "F1_f", "P", "R", "F1", "MSE", "fF1F1"
    )
    .unwrap();
    for (i, r) in report.cells.iter().enumerate() {
        let mark = if i == report.best {
            '*'
        } else if report.best_by_method.iter().any(|(_, b)| *b == i) {
            '+'
        } else {
            ' '
        };
        let m = &r.average;
        writeln!(
            out,
            "{mark} {:<8} {:>5.2} {:>3} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4}",
            r.cell.method.name(),
            r.cell.theta,
            r.cell.partitions,
            m.p_f,
            m.r_f,
            m.f1_f,
            m.p,
            m.r,
            m.f1,
            m.mse,
            m.ff1f1
        )
        .unwrap();
    }
    let w = report.winner();
    writeln!(out, "selected: {}", cell_key(&w.cell)).unwrap();
    let failed: usize = report.cells.iter().flat_map(|c| &c.folds).filter(|f| f.error.is_some()).count();
    if failed > 0 {
        writeln!(out, "folds without a hypothesis: {failed}").unwrap();
    }
    out
}

fn metric_fields(out: &mut String, m: &MetricsRecord) {
    for (k, v) in m.fields() {
        write!(out, " {k}={v}").unwrap();
    }
    write!(out, " undefined_f={} undefined={}", m.undefined_f, m.undefined).unwrap();
}

/// Flat `key=value` records: one per (cell, fold), one aggregate per cell
/// and the selection lines.
pub fn report_kv(report: &EvalReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "record=run target={} algorithm={} folds={} cells={}",
        report.target,
        report.algorithm,
        report.folds,
        report.cells.len()
    )
    .unwrap();
    for r in &report.cells {
        for (f, fold) in r.folds.iter().enumerate() {
            write!(out, "record=fold {} fold={}", cell_key(&r.cell), f + 1).unwrap();
            metric_fields(&mut out, &fold.metrics);
            let rules = fold.hypothesis.as_ref().map_or(0, |h| h.rule_count());
            write!(out, " rules={rules} learned={}", fold.error.is_none()).unwrap();
            out.push('\n');
        }
        write!(out, "record=average {}", cell_key(&r.cell)).unwrap();
        metric_fields(&mut out, &r.average);
        out.push('\n');
    }
    for (m, i) in &report.best_by_method {
        writeln!(out, "record=best_method method={m} {}", cell_key(&report.cells[*i].cell)).unwrap();
    }
    writeln!(out, "record=selected {}", cell_key(&report.winner().cell)).unwrap();
    out
}
