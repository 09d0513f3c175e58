use std::fmt::Write;

use clap::ValueEnum;
use p4metric::table::{report_csv_string, ReportRow, ReportTable};
use p4metric::{ConfusionMatrix, MetricKind, MetricReport};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

/// One `LABEL value` line per metric at 4 dp, `n/a` when undefined.
pub fn report_block(
    title: Option<&str>,
    matrix: &ConfusionMatrix,
    report: &MetricReport,
) -> String {
    let mut out = String::new();
    if let Some(title) = title {
        let _ = writeln!(out, "{title}");
    }
    let _ = writeln!(out, "{matrix} (population {})", matrix.population());
    for (kind, value) in report.entries() {
        let _ = writeln!(out, "{} {}", kind.label(), value.display_4dp());
    }
    out
}

pub fn row_json(key_column: &str, row: &ReportRow) -> Value {
    let mut obj = Map::new();
    obj.insert(key_column.to_string(), Value::String(row.key.clone()));
    for (name, count) in ["tp", "fp", "fn", "tn"]
        .into_iter()
        .zip(row.matrix.counts())
    {
        obj.insert(name.to_string(), json!(count));
    }
    for (kind, value) in row.report.entries() {
        obj.insert(
            kind.column().to_string(),
            serde_json::to_value(value).expect("metric values serialize"),
        );
    }
    Value::Object(obj)
}

pub fn table_json(table: &ReportTable) -> String {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| row_json(&table.key_column, r))
        .collect();
    serde_json::to_string_pretty(&rows).expect("json")
}

/// Compact fixed-width rendering of a multi-row table at 4 dp.
pub fn table_text(table: &ReportTable) -> String {
    let mut out = String::new();
    let _ = write!(
        out,
        "{:>12} {:>7} {:>7} {:>7} {:>7}",
        table.key_column, "TP", "FP", "FN", "TN"
    );
    for kind in MetricKind::ALL {
        let _ = write!(out, " {:>7}", kind.label());
    }
    out.push('\n');
    for row in &table.rows {
        let [tp, fp, fn_, tn] = row.matrix.counts();
        let _ = write!(out, "{:>12} {tp:>7} {fp:>7} {fn_:>7} {tn:>7}", row.key);
        for (_, value) in row.report.entries() {
            let _ = write!(out, " {:>7}", value.display_4dp());
        }
        out.push('\n');
    }
    out
}

pub fn render_table(table: &ReportTable, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => table_text(table),
        OutputFormat::Csv => report_csv_string(table),
        OutputFormat::Json => table_json(table) + "\n",
    }
}
