//! CSV formats.
//!
//! Scored samples are read from a two-column file with the header
//! `score,label`. Reports (threshold curves, sweep series, case tables) are
//! written with one key column followed by
//! `tp,fp,fn,tn,prec,rec,spec,npv,f1,p4,mcc,mcc_scaled,j,j_scaled,mk,mk_scaled`;
//! metric values use the shortest round-trip decimal and `nan` for
//! undefined values.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::confusion::{ConfusionMatrix, Label, ScoredSample};
use crate::error::{Error, Result};
use crate::metrics::{MetricKind, MetricRange, MetricReport, MetricValue};
use crate::simulate::SweepSeries;
use crate::sweep::ThresholdCurve;

const COUNT_COLUMNS: [&str; 4] = ["tp", "fp", "fn", "tn"];

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        kind => Error::Parse {
            line,
            message: format!("{kind:?}"),
        },
    }
}

/// Reads scored samples. Aborts on the first malformed line.
pub fn read_samples<R: Read>(reader: R) -> Result<Vec<ScoredSample>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        None => return Err(Error::EmptyInput),
        Some(h) => h.map_err(csv_error)?,
    };
    let names: Vec<String> = header.iter().map(str::to_ascii_lowercase).collect();
    if names != ["score", "label"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `score,label`, found `{}`", names.join(",")),
        });
    }

    let mut samples = Vec::new();
    for record in records {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse { line, message };
        if record.len() != 2 {
            return Err(bad(format!("expected 2 fields, found {}", record.len())));
        }
        let score: f64 = record[0]
            .parse()
            .map_err(|_| bad(format!("invalid score {:?}", &record[0])))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(bad(format!("score {score} outside [0, 1]")));
        }
        let label: Label = record[1].parse().map_err(bad)?;
        samples.push(ScoredSample::new(score, label)?);
    }
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(samples)
}

pub fn read_samples_path(path: impl AsRef<Path>) -> Result<Vec<ScoredSample>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_samples(file)
}

/// One keyed row of a report table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub key: String,
    pub matrix: ConfusionMatrix,
    pub report: MetricReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportTable {
    pub key_column: String,
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    pub fn header(&self) -> Vec<&str> {
        std::iter::once(self.key_column.as_str())
            .chain(COUNT_COLUMNS)
            .chain(MetricKind::ALL.iter().map(|k| k.column()))
            .collect()
    }
}

impl From<&ThresholdCurve> for ReportTable {
    fn from(curve: &ThresholdCurve) -> Self {
        ReportTable {
            key_column: "tau".into(),
            rows: curve
                .points
                .iter()
                .map(|p| ReportRow {
                    key: format!("{}", p.tau),
                    matrix: p.matrix,
                    report: p.report,
                })
                .collect(),
        }
    }
}

impl From<&SweepSeries> for ReportTable {
    fn from(series: &SweepSeries) -> Self {
        ReportTable {
            key_column: series.varying.column().into(),
            rows: series
                .points
                .iter()
                .map(|p| ReportRow {
                    key: format!("{}", p.value),
                    matrix: p.matrix,
                    report: p.report,
                })
                .collect(),
        }
    }
}

pub fn write_report_csv<W: Write>(writer: W, table: &ReportTable) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(table.header()).map_err(csv_error)?;
    for row in &table.rows {
        let fields = std::iter::once(row.key.clone())
            .chain(row.matrix.counts().map(|c| c.to_string()))
            .chain(row.report.entries().map(|(_, v)| v.display_exact()));
        wtr.write_record(fields).map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn report_csv_string(table: &ReportTable) -> String {
    let mut buf = Vec::new();
    write_report_csv(&mut buf, table).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

fn parse_metric(field: &str, kind: MetricKind) -> std::result::Result<MetricValue, String> {
    let range = kind.range();
    if field.eq_ignore_ascii_case("nan") {
        return Ok(MetricValue::undefined(range));
    }
    let v: f64 = field
        .parse()
        .map_err(|_| format!("invalid {} value {field:?}", kind.column()))?;
    if !range.contains(v) {
        return Err(format!("{} value {v} outside its range", kind.column()));
    }
    Ok(MetricValue::defined(v, range))
}

/// Reads a report table written by [`write_report_csv`]. The key column
/// may have any name; the remaining columns must match exactly.
pub fn read_report_csv<R: Read>(reader: R) -> Result<ReportTable> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let Some(key_column) = headers.get(0).filter(|k| !k.is_empty()) else {
        return Err(Error::EmptyInput);
    };
    let mut table = ReportTable {
        key_column: key_column.to_string(),
        rows: Vec::new(),
    };
    let expected = table
        .header()
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>();
    if headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{}`", expected.join(",")),
        });
    }

    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::Parse { line, message };
        let mut counts = [0u64; 4];
        for (i, slot) in counts.iter_mut().enumerate() {
            *slot = record[i + 1]
                .parse()
                .map_err(|_| bad(format!("invalid count {:?}", &record[i + 1])))?;
        }
        let [tp, fp, fn_, tn] = counts;
        let matrix =
            ConfusionMatrix::from_counts(tp, fp, fn_, tn).map_err(|e| bad(e.to_string()))?;
        let mut values = [MetricValue::undefined(MetricRange::Unit); 12];
        for (i, kind) in MetricKind::ALL.into_iter().enumerate() {
            values[i] = parse_metric(&record[i + 5], kind).map_err(bad)?;
        }
        let [prec, rec, spec, npv, f1, p4, mcc, mcc_scaled, j, j_scaled, mk, mk_scaled] = values;
        table.rows.push(ReportRow {
            key: record[0].to_string(),
            matrix,
            report: MetricReport {
                prec,
                rec,
                spec,
                npv,
                f1,
                p4,
                mcc,
                mcc_scaled,
                j,
                j_scaled,
                mk,
                mk_scaled,
            },
        });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::evaluate_all;

    #[test]
    fn reads_both_label_styles() {
        let data = "score,label\n0.9,1\n0.1,0\n0.5,Positive\n 0.25 , NEGATIVE \n";
        let s = read_samples(data.as_bytes()).unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s[2].label(), Label::Positive);
        assert_eq!(s[3].score(), 0.25);
    }

    #[test]
    fn header_is_required() {
        let err = read_samples("0.9,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err:?}");
    }

    #[test]
    fn empty_inputs() {
        assert_eq!(read_samples("".as_bytes()), Err(Error::EmptyInput));
        assert_eq!(
            read_samples("score,label\n".as_bytes()),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = read_samples("score,label\n0.2,0\n1.5,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = read_samples("score,label\n0.2,0\n0.3,maybe\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = read_samples("score,label\nabc,0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn report_round_trip_with_undefined() {
        let m1 = ConfusionMatrix::from_counts(45, 995, 5, 8955).unwrap();
        let m2 = ConfusionMatrix::from_counts(0, 0, 3, 7).unwrap();
        let table = ReportTable {
            key_column: "case".into(),
            rows: vec![
                ReportRow {
                    key: "a".into(),
                    matrix: m1,
                    report: evaluate_all(&m1),
                },
                ReportRow {
                    key: "b".into(),
                    matrix: m2,
                    report: evaluate_all(&m2),
                },
            ],
        };
        let text = report_csv_string(&table);
        assert!(text.starts_with(
            "case,tp,fp,fn,tn,prec,rec,spec,npv,f1,p4,mcc,mcc_scaled,j,j_scaled,mk,mk_scaled\n"
        ));
        assert!(text.contains("nan"));
        assert_eq!(read_report_csv(text.as_bytes()).unwrap(), table);
    }

    #[test]
    fn report_reader_rejects_wrong_header() {
        let err = read_report_csv("tau,tp,fp\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
