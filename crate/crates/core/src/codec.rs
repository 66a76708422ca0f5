//! DT codes and knot-table ingestion.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DtParseError {
    #[error("DT code must be enclosed in brackets")]
    MissingBrackets,
    #[error("malformed token {token:?} at position {position}")]
    MalformedToken { position: usize, token: String },
    #[error("odd entry {value} at position {position}")]
    OddEntry { position: usize, value: i64 },
    #[error("zero entry at position {position}")]
    ZeroEntry { position: usize },
    #[error("absolute value {value} at position {position} repeats position {first}")]
    RepeatedValue { position: usize, first: usize, value: i64 },
    #[error("absolute value {value} at position {position} is outside 2..={max}")]
    OutOfRange { position: usize, value: i64, max: i64 },
}

/// Dowker–Thistlethwaite code: entry `i` is the signed even label paired with odd label `2i + 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DtCode(Vec<i64>);

impl DtCode {
    pub fn new(entries: Vec<i64>) -> Result<Self, DtParseError> {
        let n = entries.len() as i64;
        let mut seen = vec![None; entries.len()];
        for (position, &value) in entries.iter().enumerate() {
            if value == 0 {
                return Err(DtParseError::ZeroEntry { position });
            }
            if value % 2 != 0 {
                return Err(DtParseError::OddEntry { position, value });
            }
            let a = value.abs();
            if a > 2 * n {
                return Err(DtParseError::OutOfRange { position, value, max: 2 * n });
            }
            let slot = (a / 2 - 1) as usize;
            if let Some(first) = seen[slot] {
                return Err(DtParseError::RepeatedValue { position, first, value });
            }
            seen[slot] = Some(position);
        }
        Ok(DtCode(entries))
    }

    pub fn empty() -> Self {
        DtCode(vec![])
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn crossing_count(&self) -> usize {
        self.0.len()
    }

    pub fn with_flip(&self, position: usize) -> DtCode {
        let mut e = self.0.clone();
        e[position] = -e[position];
        DtCode(e)
    }

    /// `(i, code with entry i negated)` for every crossing.
    pub fn flip_neighbors(&self) -> Vec<(usize, DtCode)> {
        (0..self.0.len()).map(|i| (i, self.with_flip(i))).collect()
    }

    /// Space-separated form used inside a single CSV cell.
    pub fn to_cell(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        format!("[{}]", parts.join(" "))
    }
}

pub fn parse_dt(text: &str) -> Result<DtCode, DtParseError> {
    text.parse()
}

pub fn serialize_dt(dt: &DtCode) -> String {
    dt.to_string()
}

pub fn flip_neighbors(dt: &DtCode) -> Vec<(usize, DtCode)> {
    dt.flip_neighbors()
}

impl FromStr for DtCode {
    type Err = DtParseError;

    /// `[a, b, c]`; inside the brackets commas and/or whitespace separate entries.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or(DtParseError::MissingBrackets)?;
        if inner.trim().is_empty() {
            return Ok(DtCode::empty());
        }
        let tokens: Vec<&str> = if inner.contains(',') {
            inner.split(',').map(str::trim).collect()
        } else {
            inner.split_whitespace().collect()
        };
        let entries = tokens
            .iter()
            .enumerate()
            .map(|(position, tok)| {
                tok.parse::<i64>()
                    .map_err(|_| DtParseError::MalformedToken { position, token: tok.to_string() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        DtCode::new(entries)
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DtCode{self}")
    }
}

impl TryFrom<Vec<i64>> for DtCode {
    type Error = DtParseError;
    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        DtCode::new(v)
    }
}

impl From<DtCode> for Vec<i64> {
    fn from(dt: DtCode) -> Self {
        dt.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknottingStatus {
    One,
    Greater,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KnotRecord {
    pub name: String,
    pub dt: DtCode,
    pub alexander: Option<LaurentPoly>,
    pub u_algebraic: Option<u32>,
    pub determinant_claimed: Option<u64>,
    pub unknotting_status: UnknottingStatus,
}

impl KnotRecord {
    pub fn new(name: impl Into<String>, dt: DtCode) -> Self {
        KnotRecord {
            name: name.into(),
            dt,
            alexander: None,
            u_algebraic: None,
            determinant_claimed: None,
            unknotting_status: UnknottingStatus::Unknown,
        }
    }

    /// Claimed determinant if present, otherwise `|Δ(-1)|`.
    pub fn known_determinant(&self) -> Option<u64> {
        self.determinant_claimed.or_else(|| self.alexander.as_ref().map(|a| a.determinant()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RowErrorKind {
    #[error("missing required column {0}")]
    MissingColumn(&'static str),
    #[error("bad DT code: {0}")]
    Dt(#[from] DtParseError),
    #[error("bad Alexander polynomial: {0}")]
    Alexander(String),
    #[error("Alexander polynomial is not admissible: {0}")]
    NotAdmissible(String),
    #[error("bad integer {value:?} in column {column}")]
    BadInteger { column: &'static str, value: String },
    #[error("determinant must be odd and positive, got {0}")]
    BadDeterminant(u64),
    #[error("determinant column {claimed} disagrees with |Δ(-1)| = {computed}")]
    InconsistentDeterminant { claimed: u64, computed: u64 },
    #[error("unreadable row: {0}")]
    Csv(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("row {row}: {kind}")]
pub struct RowError {
    /// 1-based line number in the input, counting the header.
    pub row: u64,
    pub name: Option<String>,
    pub kind: RowErrorKind,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read table: {0}")]
    Csv(#[from] csv::Error),
    #[error("table header lacks required column {0}")]
    MissingHeader(&'static str),
}

#[derive(Debug, Clone, Default)]
pub struct IngestOutcome {
    pub records: Vec<KnotRecord>,
    pub errors: Vec<RowError>,
    pub rows_read: usize,
}

fn is_unknown(cell: &str) -> bool {
    let c = cell.trim();
    c.is_empty() || c == "?"
}

fn parse_u64(column: &'static str, cell: &str) -> Result<Option<u64>, RowErrorKind> {
    if is_unknown(cell) {
        return Ok(None);
    }
    cell.trim()
        .parse::<u64>()
        .map(Some)
        .map_err(|_| RowErrorKind::BadInteger { column, value: cell.to_string() })
}

/// Accepts `1`, `2`, `>1`, `?` and KnotInfo-style ranges such as `[2,3]`.
fn parse_status(cell: &str) -> Result<UnknottingStatus, RowErrorKind> {
    let bad = || RowErrorKind::BadInteger { column: "unknotting_number", value: cell.to_string() };
    let c = cell.trim();
    if is_unknown(c) {
        return Ok(UnknottingStatus::Unknown);
    }
    if let Some(rest) = c.strip_prefix('>') {
        let lo: u64 = rest.trim().parse().map_err(|_| bad())?;
        return Ok(if lo >= 1 { UnknottingStatus::Greater } else { UnknottingStatus::Unknown });
    }
    let bounds: Vec<u64> = c
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split([',', ' ', ';'])
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (lo, hi) = match bounds.as_slice() {
        [u] => (*u, *u),
        [lo, hi] => (*lo, *hi),
        _ => return Err(bad()),
    };
    Ok(if lo >= 2 {
        UnknottingStatus::Greater
    } else if hi == 1 && lo == 1 {
        UnknottingStatus::One
    } else {
        UnknottingStatus::Unknown
    })
}

fn record_from_row(
    headers: &csv::StringRecord,
    row: &csv::StringRecord,
) -> Result<KnotRecord, RowErrorKind> {
    let cell = |name: &str| headers.iter().position(|h| h == name).and_then(|i| row.get(i));
    let name = cell("name").filter(|s| !s.trim().is_empty()).ok_or(RowErrorKind::MissingColumn("name"))?;
    let dt_text = cell("dt_code").filter(|s| !s.trim().is_empty()).ok_or(RowErrorKind::MissingColumn("dt_code"))?;
    let dt = parse_dt(dt_text)?;

    let alexander = match cell("alexander") {
        Some(c) if !is_unknown(c) => {
            let p: LaurentPoly = c.parse().map_err(|e: crate::laurent::LaurentError| RowErrorKind::Alexander(e.to_string()))?;
            if !p.is_admissible() {
                return Err(RowErrorKind::NotAdmissible(p.to_string()));
            }
            Some(p)
        }
        _ => None,
    };
    let u_algebraic = parse_u64("u_algebraic", cell("u_algebraic").unwrap_or("?"))?.map(|u| u as u32);
    let determinant_claimed = parse_u64("determinant", cell("determinant").unwrap_or("?"))?;
    if let Some(d) = determinant_claimed {
        if d % 2 == 0 {
            return Err(RowErrorKind::BadDeterminant(d));
        }
        if let Some(p) = &alexander {
            let computed = p.determinant();
            if computed != d {
                return Err(RowErrorKind::InconsistentDeterminant { claimed: d, computed });
            }
        }
    }
    let unknotting_status = parse_status(cell("unknotting_number").unwrap_or("?"))?;

    Ok(KnotRecord {
        name: name.trim().to_string(),
        dt,
        alexander,
        u_algebraic,
        determinant_claimed,
        unknotting_status,
    })
}

/// Reads a knot table. Row-level problems are collected rather than aborting; only an
/// unreadable header is fatal.
pub fn ingest_table<R: Read>(input: R) -> Result<IngestOutcome, TableError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    for required in ["name", "dt_code"] {
        if !headers.iter().any(|h| h == required) {
            return Err(TableError::MissingHeader(required));
        }
    }

    let mut out = IngestOutcome::default();
    for result in reader.records() {
        out.rows_read += 1;
        match result {
            Ok(row) => {
                let line = row.position().map_or(0, |p| p.line());
                match record_from_row(&headers, &row) {
                    Ok(rec) => out.records.push(rec),
                    Err(kind) => out.errors.push(RowError {
                        row: line,
                        name: row.get(0).map(str::to_string),
                        kind,
                    }),
                }
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.errors.push(RowError { row: line, name: None, kind: RowErrorKind::Csv(e.to_string()) });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const K11N162: &str = "[6, -10, 12, 22, 16, -18, 8, 20, -4, 2, 14]";

    #[test]
    fn parse_11n162() {
        let dt = parse_dt(K11N162).unwrap();
        assert_eq!(dt.crossing_count(), 11);
        assert_eq!(dt.entries()[1], -10);
        assert_eq!(serialize_dt(&dt), K11N162);
    }

    #[test]
    fn parse_trivial_and_small() {
        assert_eq!(parse_dt("[]").unwrap(), DtCode::empty());
        assert_eq!(parse_dt(" [ ] ").unwrap().crossing_count(), 0);
        assert_eq!(parse_dt("[4,6,2]").unwrap().entries(), &[4, 6, 2]);
        assert_eq!(parse_dt("[4 6 2]").unwrap().entries(), &[4, 6, 2]);
        assert_eq!(serialize_dt(&parse_dt("[4 6 2]").unwrap()), "[4, 6, 2]");
        assert_eq!(serialize_dt(&DtCode::empty()), "[]");
    }

    #[test]
    fn parse_errors_name_position() {
        assert_eq!(parse_dt("4, 6, 2"), Err(DtParseError::MissingBrackets));
        assert_eq!(
            parse_dt("[4, x, 2]"),
            Err(DtParseError::MalformedToken { position: 1, token: "x".into() })
        );
        assert_eq!(parse_dt("[4, 5, 2]"), Err(DtParseError::OddEntry { position: 1, value: 5 }));
        assert_eq!(
            parse_dt("[4, -4, 2]"),
            Err(DtParseError::RepeatedValue { position: 1, first: 0, value: -4 })
        );
        assert_eq!(
            parse_dt("[4, 8, 2]"),
            Err(DtParseError::OutOfRange { position: 1, value: 8, max: 6 })
        );
        assert_eq!(parse_dt("[0]"), Err(DtParseError::ZeroEntry { position: 0 }));
        assert!(matches!(parse_dt("[4,,2]"), Err(DtParseError::MalformedToken { position: 1, .. })));
    }

    #[test]
    fn neighbors_of_11n162() {
        let dt = parse_dt(K11N162).unwrap();
        let nb = flip_neighbors(&dt);
        assert_eq!(nb.len(), 11);
        assert_eq!(nb[0].0, 0);
        assert_eq!(nb[0].1.entries(), &[-6, -10, 12, 22, 16, -18, 8, 20, -4, 2, 14]);
        assert!(flip_neighbors(&DtCode::empty()).is_empty());
        for (i, code) in flip_neighbors(&dt) {
            assert_eq!(code.with_flip(i), dt);
        }
    }

    #[test]
    fn status_cells() {
        assert_eq!(parse_status("1"), Ok(UnknottingStatus::One));
        assert_eq!(parse_status("2"), Ok(UnknottingStatus::Greater));
        assert_eq!(parse_status("[2,3]"), Ok(UnknottingStatus::Greater));
        assert_eq!(parse_status("[1,2]"), Ok(UnknottingStatus::Unknown));
        assert_eq!(parse_status("?"), Ok(UnknottingStatus::Unknown));
        assert_eq!(parse_status(">1"), Ok(UnknottingStatus::Greater));
        assert!(parse_status("one").is_err());
    }

    #[test]
    fn ingest_rows() {
        let csv = "\
# comment line
name,dt_code,alexander,u_algebraic,determinant,unknotting_number
3_1,[4 6 2],-1;1 -1 1,1,3,1
bad,[4 6 2],-1;1 -1 1,1,5,1
11n162,[6 -10 12 22 16 -18 8 20 -4 2 14],?,?,55,?
4_1,[4 6 8 2],t^-1 - 3 + t,?,?,?
oops,[4 6 3],?,?,?,?
";
        let out = ingest_table(csv.as_bytes()).unwrap();
        assert_eq!(out.rows_read, 5);
        assert_eq!(out.records.len() + out.errors.len(), out.rows_read);
        assert_eq!(out.records.len(), 3);
        assert_eq!(out.records[0].name, "3_1");
        assert_eq!(out.records[0].unknotting_status, UnknottingStatus::One);
        assert_eq!(out.records[1].determinant_claimed, Some(55));
        assert_eq!(out.records[1].dt.crossing_count(), 11);
        assert_eq!(out.records[2].known_determinant(), Some(5));
        assert_eq!(out.errors[0].row, 4);
        assert_eq!(
            out.errors[0].kind,
            RowErrorKind::InconsistentDeterminant { claimed: 5, computed: 3 }
        );
        assert!(matches!(out.errors[1].kind, RowErrorKind::Dt(DtParseError::OddEntry { .. })));
    }

    #[test]
    fn ingest_requires_header() {
        assert!(matches!(
            ingest_table("name,alexander\n3_1,?\n".as_bytes()),
            Err(TableError::MissingHeader("dt_code"))
        ));
    }

    #[test]
    fn ingest_rejects_inadmissible_alexander() {
        let csv = "name,dt_code,alexander\nx,[4 6 2],0;1 1\n";
        let out = ingest_table(csv.as_bytes()).unwrap();
        assert!(matches!(out.errors[0].kind, RowErrorKind::NotAdmissible(_)));
    }
}
