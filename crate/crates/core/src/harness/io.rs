//! CSV and JSON formats read and written by the harness.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which parses back
//! to the identical `f64`. Lines starting with `#` are metadata comments.

use std::io::{Read, Write};

use crate::bounds::CompareRow;
use crate::error::{Error, Result};

use super::ConvergenceRecord;

pub const CONVERGENCE_HEADER: [&str; 7] = [
    "delta",
    "k",
    "node_count",
    "max_error",
    "bound_value",
    "seminorm",
    "condition_estimate",
];

pub const COMPARE_HEADER: [&str; 10] = [
    "n",
    "lambda",
    "case",
    "rho",
    "delta0_const",
    "C",
    "delta_max",
    "omega_prime",
    "log10_one_minus_omega_prime",
    "log10_one_minus_omega",
];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f64(field: &str, what: &str) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid number {field:?} in column {what}")))
}

fn parse_usize(field: &str, what: &str) -> Result<usize> {
    field
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("invalid integer {field:?} in column {what}")))
}

/// Writes convergence records with one leading `#` metadata line per entry of `meta`.
pub fn write_convergence_csv<W: Write>(
    mut out: W,
    meta: &[String],
    records: &[ConvergenceRecord],
) -> Result<()> {
    for line in meta {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CONVERGENCE_HEADER)?;
    for r in records {
        w.write_record([
            fmt_f64(r.delta),
            r.k.to_string(),
            r.node_count.to_string(),
            fmt_f64(r.max_error),
            fmt_f64(r.bound_value),
            fmt_f64(r.seminorm),
            fmt_f64(r.condition_estimate),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a file produced by [`write_convergence_csv`].
pub fn read_convergence_csv<R: Read>(input: R) -> Result<Vec<ConvergenceRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().map(str::trim).ne(CONVERGENCE_HEADER.iter().copied()) {
        return Err(Error::Parse(format!(
            "unexpected convergence header {:?}",
            header.iter().collect::<Vec<_>>()
        )));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != CONVERGENCE_HEADER.len() {
            return Err(Error::Parse(format!("row has {} fields", rec.len())));
        }
        out.push(ConvergenceRecord {
            delta: parse_f64(&rec[0], "delta")?,
            k: parse_usize(&rec[1], "k")?,
            node_count: parse_usize(&rec[2], "node_count")?,
            max_error: parse_f64(&rec[3], "max_error")?,
            bound_value: parse_f64(&rec[4], "bound_value")?,
            seminorm: parse_f64(&rec[5], "seminorm")?,
            condition_estimate: parse_f64(&rec[6], "condition_estimate")?,
        });
    }
    Ok(out)
}

pub fn write_compare_csv<W: Write>(out: W, rows: &[CompareRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COMPARE_HEADER)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.lambda.to_string(),
            r.case.label().to_string(),
            fmt_f64(r.rho),
            fmt_f64(r.delta0_const),
            fmt_f64(r.c_const),
            fmt_f64(r.delta_max),
            fmt_f64(r.omega_prime),
            fmt_f64(r.log10_one_minus_omega_prime),
            fmt_f64(r.log10_one_minus_omega),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Scattered samples: `n` coordinate columns followed by one value column.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleData {
    pub columns: Vec<String>,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl SampleData {
    pub fn dim(&self) -> usize {
        self.columns.len() - 1
    }
}

fn read_numeric_table<R: Read>(input: R, min_columns: usize) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header.len() < min_columns {
        return Err(Error::Parse(format!(
            "expected at least {min_columns} columns, found {}",
            header.len()
        )));
    }
    if header.iter().all(|h| h.parse::<f64>().is_ok()) {
        return Err(Error::Parse("missing header row".into()));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != header.len() {
            return Err(Error::Parse(format!(
                "data row {} has {} fields, header has {}",
                line + 1,
                rec.len(),
                header.len()
            )));
        }
        let row: Vec<f64> = rec
            .iter()
            .zip(&header)
            .map(|(f, h)| parse_f64(f, h))
            .collect::<Result<_>>()?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse(format!("non-finite value in data row {}", line + 1)));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InsufficientData("no data rows".into()));
    }
    Ok((header, rows))
}

/// Parses a sample CSV with a required header row.
pub fn read_sample_csv<R: Read>(input: R) -> Result<SampleData> {
    let (columns, rows) = read_numeric_table(input, 2)?;
    let mut points = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for mut row in rows {
        values.push(row.pop().expect("at least two columns"));
        points.push(row);
    }
    Ok(SampleData {
        columns,
        points,
        values,
    })
}

/// Parses query points: `n` coordinate columns with a header row.
pub fn read_query_csv<R: Read>(input: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    read_numeric_table(input, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sample_csv_parsing() {
        let text = "x,y,f\n0,0,1\n1,0,2.5\n# comment\n0,1,-3e-2\n";
        let d = read_sample_csv(text.as_bytes()).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.points, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(d.values, vec![1.0, 2.5, -0.03]);
    }

    #[test]
    fn sample_csv_errors() {
        assert!(read_sample_csv("0,0,1\n1,0,2\n".as_bytes()).is_err());
        assert!(read_sample_csv("x,y,f\n".as_bytes()).is_err());
        assert!(read_sample_csv("f\n1\n".as_bytes()).is_err());
        assert!(read_sample_csv("x,y,f\n1,2\n".as_bytes()).is_err());
        assert!(read_sample_csv("x,y,f\n1,2,abc\n".as_bytes()).is_err());
        assert!(read_sample_csv("x,y,f\n1,2,NaN\n".as_bytes()).is_err());
    }

    #[test]
    fn convergence_header_is_checked() {
        assert!(read_convergence_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn convergence_csv_round_trips(rows in proptest::collection::vec(
            (1e-6f64..1.0, 1usize..40, 1usize..1000, any::<f64>(), 0.0f64..1e3, 0.0f64..1e3, 1.0f64..1e30), 0..12)
        ) {
            let records: Vec<ConvergenceRecord> = rows.iter().map(|r| ConvergenceRecord {
                delta: r.0, k: r.1, node_count: r.2, max_error: r.3,
                bound_value: r.4, seminorm: r.5, condition_estimate: r.6,
            }).collect();
            let mut buf = Vec::new();
            write_convergence_csv(&mut buf, &["seed=1".to_string()], &records).unwrap();
            let back = read_convergence_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in back.iter().zip(&records) {
                prop_assert!(a.bitwise_eq(b));
            }
        }
    }
}
