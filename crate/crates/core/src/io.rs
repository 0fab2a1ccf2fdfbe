//! Matrix and fusion-frame files, and verification reports.
//!
//! A matrix file is a JSON object
//!
//! ```json
//! {
//!   "field": "complex",
//!   "rows": 1,
//!   "cols": 2,
//!   "data": [
//!     [1.0, 0.0], [0.0, -0.5]
//!   ]
//! }
//! ```
//!
//! with `data` in row-major order and complex entries written as `[re, im]`.
//! Real matrices may also be given as CSV, one row per line. Numbers are
//! written in shortest round-trip form, so serializing, parsing and
//! serializing again reproduces the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{NaimarkError, Result};
use crate::fusion::{FusionBlock, FusionFrame};
use crate::numkernel::{Field, Mat};
use crate::Check;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

/// On-disk matrix layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Entry>,
}

impl MatrixFile {
    pub fn from_mat(m: &Mat) -> MatrixFile {
        let data = m
            .to_row_major()
            .into_iter()
            .map(|z| match m.field() {
                Field::Real => Entry::Real(z.re),
                Field::Complex => Entry::Complex([z.re, z.im]),
            })
            .collect();
        MatrixFile {
            field: m.field(),
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }

    /// Converts to a [`Mat`]; `text` is the source document, used to point
    /// errors at the `data` key.
    fn to_mat(&self, text: &str) -> Result<Mat> {
        let at = |msg: String| {
            let (line, column) = locate(text, "\"data\"");
            NaimarkError::parse(line, column, msg)
        };
        if self.rows.checked_mul(self.cols) != Some(self.data.len()) {
            return Err(at(format!(
                "{}x{} matrix needs {} entries, found {}",
                self.rows,
                self.cols,
                self.rows.saturating_mul(self.cols),
                self.data.len()
            )));
        }
        let mut values = Vec::with_capacity(self.data.len());
        for (i, e) in self.data.iter().enumerate() {
            let z = match (self.field, e) {
                (_, Entry::Real(x)) => Complex64::new(*x, 0.0),
                (Field::Complex, Entry::Complex([re, im])) => Complex64::new(*re, *im),
                (Field::Real, Entry::Complex(_)) => {
                    return Err(at(format!("entry {i}: real matrices take plain numbers")))
                }
            };
            values.push(z);
        }
        let m = Mat::from_complex(self.rows, self.cols, &values)
            .map_err(|e| at(e.to_string()))?;
        m.with_field(self.field).map_err(|e| at(e.to_string()))
    }
}

/// 1-based line and column of the first occurrence of `needle`, or `(1, 1)`.
fn locate(text: &str, needle: &str) -> (usize, usize) {
    let Some(offset) = text.find(needle) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn json_error(e: serde_json::Error) -> NaimarkError {
    NaimarkError::parse(e.line(), e.column(), e.to_string())
}

/// Parses a matrix from JSON text, or from CSV when the text does not start
/// with `{`.
pub fn parse_matrix(text: &str) -> Result<Mat> {
    if text.trim_start().starts_with('{') {
        let file: MatrixFile = serde_json::from_str(text).map_err(json_error)?;
        file.to_mat(text)
    } else {
        parse_csv(text)
    }
}

pub fn read_matrix(path: &Path) -> Result<Mat> {
    parse_matrix(&read_text(path)?)
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| NaimarkError::parse(0, 0, format!("cannot read {}: {e}", path.display())))
}

fn parse_csv(text: &str) -> Result<Mat> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        let mut col = 1;
        for field in line.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| {
                NaimarkError::parse(ln + 1, col, format!("not a number: {:?}", field.trim()))
            })?;
            if !value.is_finite() {
                return Err(NaimarkError::parse(ln + 1, col, "non-finite value"));
            }
            row.push(value);
            col += field.len() + 1;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(NaimarkError::parse(
                    ln + 1,
                    1,
                    format!("row has {} values, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(NaimarkError::parse(1, 1, "empty CSV matrix"));
    }
    Mat::real_from_rows(&rows)
}

fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("finite f64 serializes")
}

fn write_matrix_body(m: &Mat, indent: &str, out: &mut String) {
    let field = match m.field() {
        Field::Real => "real",
        Field::Complex => "complex",
    };
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "{indent}  \"field\": \"{field}\",");
    let _ = writeln!(out, "{indent}  \"rows\": {},", m.rows());
    let _ = writeln!(out, "{indent}  \"cols\": {},", m.cols());
    if m.rows() == 0 || m.cols() == 0 {
        let _ = writeln!(out, "{indent}  \"data\": []");
    } else {
        let _ = writeln!(out, "{indent}  \"data\": [");
        for i in 0..m.rows() {
            let cells: Vec<String> = (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    match m.field() {
                        Field::Real => number(z.re),
                        Field::Complex => format!("[{}, {}]", number(z.re), number(z.im)),
                    }
                })
                .collect();
            let sep = if i + 1 == m.rows() { "" } else { "," };
            let _ = writeln!(out, "{indent}    {}{sep}", cells.join(", "));
        }
        let _ = writeln!(out, "{indent}  ]");
    }
    let _ = write!(out, "{indent}}}");
}

/// Canonical JSON text for a matrix, one matrix row per line.
pub fn serialize_matrix(m: &Mat) -> String {
    let mut out = String::new();
    write_matrix_body(m, "", &mut out);
    out.push('\n');
    out
}

pub fn write_matrix(path: &Path, m: &Mat) -> Result<()> {
    write_text(path, &serialize_matrix(m))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| NaimarkError::invalid(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockFile {
    weight: f64,
    basis: MatrixFile,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FusionFile {
    ambient_dim: usize,
    blocks: Vec<BlockFile>,
}

/// Parses a fusion frame file:
/// `{"ambient_dim": M, "blocks": [{"weight": ν, "basis": <matrix>}, …]}`.
pub fn parse_fusion_frame(text: &str) -> Result<FusionFrame> {
    let file: FusionFile = serde_json::from_str(text).map_err(json_error)?;
    let blocks = file
        .blocks
        .iter()
        .map(|b| {
            Ok(FusionBlock {
                basis: b.basis.to_mat(text)?,
                weight: b.weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FusionFrame::new(file.ambient_dim, blocks)
}

pub fn read_fusion_frame(path: &Path) -> Result<FusionFrame> {
    parse_fusion_frame(&read_text(path)?)
}

pub fn serialize_fusion_frame(ff: &FusionFrame) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"ambient_dim\": {},", ff.ambient_dim());
    if ff.is_empty() {
        let _ = writeln!(out, "  \"blocks\": []");
    } else {
        let _ = writeln!(out, "  \"blocks\": [");
        for (k, b) in ff.blocks().iter().enumerate() {
            let _ = writeln!(out, "    {{");
            let _ = writeln!(out, "      \"weight\": {},", number(b.weight));
            let _ = write!(out, "      \"basis\": ");
            write_matrix_body(&b.basis, "      ", &mut out);
            let sep = if k + 1 == ff.len() { "" } else { "," };
            let _ = writeln!(out, "\n    }}{sep}");
        }
        let _ = writeln!(out, "  ]");
    }
    out.push_str("}\n");
    out
}

/// Machine-readable outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub operation: String,
    pub tool_version: String,
    /// SHA-256 over the inputs (file contents, or the generator parameters).
    pub inputs_digest: String,
    pub seed: Option<u64>,
    pub passed: bool,
    pub checks: BTreeMap<String, Check>,
    pub values: BTreeMap<String, serde_json::Value>,
    /// Produced matrices, inline or as the path they were written to.
    pub artifacts: BTreeMap<String, serde_json::Value>,
    pub notices: Vec<String>,
}

impl Report {
    pub fn new(operation: &str, inputs_digest: String) -> Report {
        Report {
            operation: operation.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs_digest,
            seed: None,
            passed: true,
            checks: BTreeMap::new(),
            values: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            notices: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, check: Check) {
        self.passed &= check.passed;
        self.checks.insert(name.into(), check);
    }

    pub fn value(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.values.insert(name.to_string(), v);
    }

    pub fn inline_matrix(&mut self, name: &str, m: &Mat) {
        let v = serde_json::to_value(MatrixFile::from_mat(m)).unwrap_or(serde_json::Value::Null);
        self.artifacts.insert(name.to_string(), v);
    }

    pub fn artifact_path(&mut self, name: &str, path: &Path) {
        self.artifacts
            .insert(name.to_string(), serde_json::Value::String(path.display().to_string()));
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (naimark {})", self.operation, self.tool_version);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "  seed: {seed}");
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "  {k}: {v}");
        }
        for n in &self.notices {
            let _ = writeln!(out, "  note: {n}");
        }
        for (k, v) in &self.artifacts {
            match v {
                serde_json::Value::String(p) => {
                    let _ = writeln!(out, "  {k}: written to {p}");
                }
                other => {
                    let _ = writeln!(out, "  {k}: {other}");
                }
            }
        }
        for (k, c) in &self.checks {
            let _ = writeln!(
                out,
                "  [{}] {k}: residual {:e} (tolerance {:e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.residual,
                c.tolerance
            );
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

/// Hex SHA-256 over length-prefixed byte strings.
pub fn digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
