//! Tabular field output.
//!
//! CSV: header row, `.` decimal point, shortest round-trip formatting of
//! every double, empty cells where a value is undefined, and a trailing
//! `singular` column of `0`/`1`. JSON carries the same columns.

use std::io::{Read, Write};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub values: Vec<Option<f64>>,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub columns: Vec<String>,
    pub rows: Vec<TableRow>,
}

pub const SINGULAR_COLUMN: &str = "singular";

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed table: {0}")]
    Malformed(String),
}

fn format_f64(v: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(v).to_string()
}

impl FieldTable {
    pub fn new(columns: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, values: Vec<Option<f64>>, singular: bool) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(TableRow { values, singular });
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), TableError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(String::as_str).chain([SINGULAR_COLUMN]))?;
        for row in &self.rows {
            let cells = row.values.iter().map(|v| v.map(format_f64).unwrap_or_default()).chain([if row.singular {
                "1"
            } else {
                "0"
            }
            .to_string()]);
            w.write_record(cells)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, TableError> {
        let mut r = csv::Reader::from_reader(input);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        match header.split_last() {
            Some((last, cols)) if last == SINGULAR_COLUMN => {
                let mut table = FieldTable::new(cols.iter().cloned());
                for record in r.records() {
                    let record = record?;
                    let cells: Vec<&str> = record.iter().collect();
                    let (flag, values) = cells.split_last().expect("csv enforces equal row lengths");
                    let values = values
                        .iter()
                        .map(|c| match *c {
                            "" => Ok(None),
                            c => c
                                .parse::<f64>()
                                .map(Some)
                                .map_err(|_| TableError::Malformed(format!("not a number: {c:?}"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let singular = match *flag {
                        "0" => false,
                        "1" => true,
                        other => return Err(TableError::Malformed(format!("bad singular flag {other:?}"))),
                    };
                    table.push(values, singular);
                }
                Ok(table)
            }
            _ => Err(TableError::Malformed(format!("last column must be `{SINGULAR_COLUMN}`"))),
        }
    }

    pub fn write_json<W: Write>(&self, field: &str, out: W) -> Result<(), TableError> {
        #[derive(Serialize)]
        struct Doc<'a> {
            field: &'a str,
            columns: Vec<&'a str>,
            rows: Vec<Vec<serde_json::Value>>,
        }
        let doc = Doc {
            field,
            columns: self.columns.iter().map(String::as_str).chain([SINGULAR_COLUMN]).collect(),
            rows: self
                .rows
                .iter()
                .map(|row| {
                    row.values
                        .iter()
                        .map(|v| v.map_or(serde_json::Value::Null, serde_json::Value::from))
                        .chain([serde_json::Value::Bool(row.singular)])
                        .collect()
                })
                .collect(),
        };
        serde_json::to_writer(out, &doc).map_err(std::io::Error::from)?;
        Ok(())
    }
}
