//! Prediction records and their file formats.
//!
//! A record holds one instance's true label and the first-order predictions
//! of M ensemble members. Two interchange formats are supported:
//!
//! - CSV with header `id,label,member,p0,...,p{K-1}` and one row per
//!   (instance, member); members of an instance appear as a contiguous
//!   block with member indices counting up from 0. K is inferred from the
//!   header.
//! - JSONL with one object per instance:
//!   `{"id": ..., "label": ..., "members": [[...K floats...] x M]}`.
//!
//! Probability rows are accepted up to a mass slack of 1e-6 and
//! renormalized; anything worse is a schema error naming the line.

use crate::error::{Error, Result};
use crate::simplex::{AtomMixture, Categorical};
use serde::Deserialize;
use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

/// Mass slack accepted per prediction row; files carry float round-off.
pub const MEMBER_MASS_TOLERANCE: f64 = 1e-6;

/// One instance: its true label and the ensemble members' predictions.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionRecord {
    pub id: String,
    pub label: usize,
    pub members: Vec<Categorical>,
}

impl PredictionRecord {
    pub fn new(id: String, label: usize, members: Vec<Categorical>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyMixture);
        }
        let k = members[0].num_labels();
        for m in &members[1..] {
            if m.num_labels() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: m.num_labels(),
                });
            }
        }
        if label >= k {
            return Err(Error::InvalidParameter {
                name: "label",
                reason: format!("label {label} out of range for {k} classes"),
            });
        }
        Ok(Self { id, label, members })
    }

    /// The empirical second-order distribution of this record's ensemble.
    pub fn ensemble(&self) -> AtomMixture {
        AtomMixture::from_ensemble(&self.members).expect("validated at construction")
    }

    pub fn num_labels(&self) -> usize {
        self.members[0].num_labels()
    }

    /// Predicted class: argmax of the ensemble mean, lowest index on ties.
    pub fn predicted_label(&self) -> usize {
        self.ensemble().mean().argmax()
    }
}

/// Supported prediction file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Jsonl,
}

impl fmt::Display for FileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FileFormat::Csv => "csv",
            FileFormat::Jsonl => "jsonl",
        })
    }
}

impl FromStr for FileFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(FileFormat::Csv),
            "jsonl" => Ok(FileFormat::Jsonl),
            other => Err(Error::InvalidParameter {
                name: "format",
                reason: format!("unknown format `{other}` (expected csv or jsonl)"),
            }),
        }
    }
}

fn schema_error(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Schema {
        path: path.display().to_string(),
        line,
        reason: reason.into(),
    }
}

/// Load and validate prediction records from a CSV or JSONL file.
pub fn load_predictions(
    path: impl AsRef<Path>,
    format: FileFormat,
) -> Result<Vec<PredictionRecord>> {
    let path = path.as_ref();
    match format {
        FileFormat::Csv => load_csv(path),
        FileFormat::Jsonl => load_jsonl(path),
    }
}

fn parse_member_probs(path: &Path, line: usize, fields: &[&str]) -> Result<Categorical> {
    let mut probs = Vec::with_capacity(fields.len());
    for (i, field) in fields.iter().enumerate() {
        let v: f64 = field
            .trim()
            .parse()
            .map_err(|_| schema_error(path, line, format!("p{i} is not a number: `{field}`")))?;
        probs.push(v);
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > MEMBER_MASS_TOLERANCE {
        return Err(schema_error(
            path,
            line,
            format!("probabilities sum to {sum}, off the simplex beyond {MEMBER_MASS_TOLERANCE}"),
        ));
    }
    Categorical::with_tolerance(probs, MEMBER_MASS_TOLERANCE)
        .map_err(|e| schema_error(path, line, e.to_string()))
}

fn load_csv(path: &Path) -> Result<Vec<PredictionRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| schema_error(path, 1, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| schema_error(path, 1, e.to_string()))?
        .clone();
    if headers.len() < 5
        || headers.get(0) != Some("id")
        || headers.get(1) != Some("label")
        || headers.get(2) != Some("member")
    {
        return Err(schema_error(
            path,
            1,
            "expected header id,label,member,p0,...,p{K-1} with K >= 2",
        ));
    }
    let k = headers.len() - 3;
    for (i, name) in headers.iter().skip(3).enumerate() {
        if name != format!("p{i}") {
            return Err(schema_error(
                path,
                1,
                format!("probability column {} should be named p{i}", name),
            ));
        }
    }

    let mut records = Vec::new();
    let mut finished: HashSet<String> = HashSet::new();
    let mut current: Option<(String, usize, Vec<Categorical>, usize)> = None; // id, label, members, first line

    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            schema_error(path, line, e.to_string())
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.len() != 3 + k {
            return Err(schema_error(
                path,
                line,
                format!("expected {} fields, got {}", 3 + k, row.len()),
            ));
        }
        let id = row.get(0).unwrap().to_string();
        let label: usize = row
            .get(1)
            .unwrap()
            .trim()
            .parse()
            .map_err(|_| schema_error(path, line, "label is not a nonnegative integer"))?;
        if label >= k {
            return Err(schema_error(
                path,
                line,
                format!("label {label} out of range for {k} classes"),
            ));
        }
        let member: usize = row
            .get(2)
            .unwrap()
            .trim()
            .parse()
            .map_err(|_| schema_error(path, line, "member is not a nonnegative integer"))?;
        let fields: Vec<&str> = (3..3 + k).map(|i| row.get(i).unwrap()).collect();
        let probs = parse_member_probs(path, line, &fields)?;

        match current.as_mut() {
            Some((cur_id, cur_label, members, _)) if *cur_id == id => {
                if label != *cur_label {
                    return Err(schema_error(
                        path,
                        line,
                        format!("label changed within instance `{id}`"),
                    ));
                }
                if member != members.len() {
                    return Err(schema_error(
                        path,
                        line,
                        format!("member index {member}, expected {}", members.len()),
                    ));
                }
                members.push(probs);
            }
            _ => {
                if let Some((done_id, done_label, members, first_line)) = current.take() {
                    records.push(
                        PredictionRecord::new(done_id.clone(), done_label, members)
                            .map_err(|e| schema_error(path, first_line, e.to_string()))?,
                    );
                    finished.insert(done_id);
                }
                if finished.contains(&id) {
                    return Err(schema_error(
                        path,
                        line,
                        format!("instance id `{id}` reappears after its block ended"),
                    ));
                }
                if member != 0 {
                    return Err(schema_error(
                        path,
                        line,
                        format!("instance `{id}` starts at member {member}, expected 0"),
                    ));
                }
                current = Some((id, label, vec![probs], line));
            }
        }
    }
    if let Some((id, label, members, first_line)) = current.take() {
        records.push(
            PredictionRecord::new(id, label, members)
                .map_err(|e| schema_error(path, first_line, e.to_string()))?,
        );
    }
    if records.is_empty() {
        return Err(schema_error(path, 1, "file contains no prediction rows"));
    }
    Ok(records)
}

#[derive(Deserialize)]
struct RawJsonRecord {
    id: String,
    label: usize,
    members: Vec<Vec<f64>>,
}

fn load_jsonl(path: &Path) -> Result<Vec<PredictionRecord>> {
    let file = File::open(path)?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut k: Option<usize> = None;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawJsonRecord =
            serde_json::from_str(&line).map_err(|e| schema_error(path, line_no, e.to_string()))?;
        if !seen.insert(raw.id.clone()) {
            return Err(schema_error(
                path,
                line_no,
                format!("duplicate instance id `{}`", raw.id),
            ));
        }
        if raw.members.is_empty() {
            return Err(schema_error(path, line_no, "members must be nonempty"));
        }
        let record_k = raw.members[0].len();
        if let Some(k) = k {
            if record_k != k {
                return Err(schema_error(
                    path,
                    line_no,
                    format!("record has {record_k} classes, file has {k}"),
                ));
            }
        } else {
            k = Some(record_k);
        }
        let members = raw
            .members
            .iter()
            .map(|probs| {
                let fields: Vec<String> = probs.iter().map(|p| p.to_string()).collect();
                let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
                parse_member_probs(path, line_no, &refs)
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(
            PredictionRecord::new(raw.id, raw.label, members)
                .map_err(|e| schema_error(path, line_no, e.to_string()))?,
        );
    }
    if records.is_empty() {
        return Err(schema_error(path, 1, "file contains no prediction records"));
    }
    Ok(records)
}

/// Write records in the CSV interchange format (one row per member).
pub fn write_predictions_csv(path: impl AsRef<Path>, records: &[PredictionRecord]) -> Result<()> {
    let path = path.as_ref();
    if records.is_empty() {
        return Err(Error::EmptyMixture);
    }
    let k = records[0].num_labels();
    let mut out = String::new();
    out.push_str("id,label,member");
    for i in 0..k {
        out.push_str(&format!(",p{i}"));
    }
    out.push('\n');
    for record in records {
        for (m, member) in record.members.iter().enumerate() {
            out.push_str(&format!("{},{},{m}", record.id, record.label));
            for p in member.probs() {
                out.push_str(&format!(",{p}"));
            }
            out.push('\n');
        }
    }
    File::create(path)?.write_all(out.as_bytes())?;
    Ok(())
}
