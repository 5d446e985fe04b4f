//! Result records and their CSV / JSON-lines encodings.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::BenchError;

pub const CSV_HEADER: [&str; 14] = [
    "problem",
    "N",
    "L",
    "leaf_size",
    "tol",
    "precision",
    "variant",
    "t_f_seconds",
    "t_s_seconds",
    "mem_bytes",
    "relres",
    "flops_factor",
    "flops_solve",
    "ranks",
];

/// Columns that vary from run to run.
pub const TIMING_COLUMNS: [&str; 2] = ["t_f_seconds", "t_s_seconds"];

/// One benchmark cell's outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub problem: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub depth: usize,
    pub leaf_size: usize,
    pub tol: f64,
    pub precision: String,
    pub variant: String,
    pub t_f_seconds: f64,
    pub t_s_seconds: f64,
    pub mem_bytes: u64,
    /// `None` when the exact residual was skipped.
    pub relres: Option<f64>,
    pub flops_factor: u64,
    pub flops_solve: u64,
    /// Maximum off-diagonal rank per level, from level 1 to the leaves.
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "csv" => Some(Format::Csv),
            "jsonl" | "json-lines" => Some(Format::Jsonl),
            _ => None,
        }
    }
}

impl Record {
    fn csv_fields(&self) -> [String; 14] {
        [
            self.problem.clone(),
            self.n.to_string(),
            self.depth.to_string(),
            self.leaf_size.to_string(),
            format!("{:e}", self.tol),
            self.precision.clone(),
            self.variant.clone(),
            format!("{:e}", self.t_f_seconds),
            format!("{:e}", self.t_s_seconds),
            self.mem_bytes.to_string(),
            self.relres.map_or_else(String::new, |r| format!("{r:e}")),
            self.flops_factor.to_string(),
            self.flops_solve.to_string(),
            self.ranks.iter().map(usize::to_string).collect::<Vec<_>>().join("/"),
        ]
    }

    fn from_csv_fields(row: &csv::StringRecord, line: u64) -> Result<Record, BenchError> {
        if row.len() != CSV_HEADER.len() {
            return Err(BenchError::Format(format!("line {line}: expected {} fields, found {}", CSV_HEADER.len(), row.len())));
        }
        let field = |i: usize| &row[i];
        fn num<T: std::str::FromStr>(s: &str, col: &str, line: u64) -> Result<T, BenchError> {
            s.parse().map_err(|_| BenchError::Format(format!("line {line}, column {col}: cannot parse `{s}`")))
        }
        let ranks = match field(13) {
            "" => Vec::new(),
            s => s.split('/').map(|r| num(r, "ranks", line)).collect::<Result<_, _>>()?,
        };
        Ok(Record {
            problem: field(0).to_owned(),
            n: num(field(1), "N", line)?,
            depth: num(field(2), "L", line)?,
            leaf_size: num(field(3), "leaf_size", line)?,
            tol: num(field(4), "tol", line)?,
            precision: field(5).to_owned(),
            variant: field(6).to_owned(),
            t_f_seconds: num(field(7), "t_f_seconds", line)?,
            t_s_seconds: num(field(8), "t_s_seconds", line)?,
            mem_bytes: num(field(9), "mem_bytes", line)?,
            relres: match field(10) {
                "" => None,
                s => Some(num(s, "relres", line)?),
            },
            flops_factor: num(field(11), "flops_factor", line)?,
            flops_solve: num(field(12), "flops_solve", line)?,
            ranks,
        })
    }
}

pub fn write_csv<W: Write>(records: &[Record], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<Record>, BenchError> {
    let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    if rd.headers()?.iter().ne(CSV_HEADER) {
        return Err(BenchError::Format(format!("unexpected CSV header, want {}", CSV_HEADER.join(","))));
    }
    rd.records()
        .map(|row| {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            Record::from_csv_fields(&row, line)
        })
        .collect()
}

pub fn write_jsonl<W: Write>(records: &[Record], mut out: W) -> Result<(), BenchError> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<Record>, BenchError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| BenchError::Format(format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

pub fn write_records<W: Write>(records: &[Record], format: Format, out: W) -> Result<(), BenchError> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Jsonl => write_jsonl(records, out),
    }
}

/// CSV text with the timing columns removed, for reproducibility checks.
pub fn without_timings(csv_text: &str) -> String {
    let drop: Vec<usize> = CSV_HEADER.iter().enumerate().filter(|(_, h)| TIMING_COLUMNS.contains(h)).map(|(i, _)| i).collect();
    csv_text
        .lines()
        .map(|l| l.split(',').enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, f)| f).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}
