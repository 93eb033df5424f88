// Copyright 2026 The Compadv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Fixed-width column types and their byte encodings.
//!
//! Every value occupies exactly [`ColumnType::width`] bytes:
//! `INT64` and `DATE` are big-endian two's complement (a date is a day
//! number relative to 1970-01-01) and `CHAR(n)` is `n` bytes padded with
//! trailing NULs. SQL NULL is the all-NUL value of the column's width, which
//! means NULL and integer zero share an encoding.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::DataError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ColumnType {
    Int64,
    /// Fixed-width character column, `1..=255` bytes.
    Char(u8),
    /// Day number stored like `Int64`.
    Date,
}

impl ColumnType {
    pub fn width(self) -> usize {
        match self {
            ColumnType::Int64 | ColumnType::Date => 8,
            ColumnType::Char(n) => n as usize,
        }
    }

    pub fn is_numeric(self) -> bool {
        !matches!(self, ColumnType::Char(_))
    }

    pub fn null(self) -> Vec<u8> {
        vec![0; self.width()]
    }
}

impl fmt::Display for ColumnType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnType::Int64 => f.write_str("int64"),
            ColumnType::Char(n) => write!(f, "char({n})"),
            ColumnType::Date => f.write_str("date"),
        }
    }
}

impl FromStr for ColumnType {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "int64" | "int" | "bigint" => return Ok(ColumnType::Int64),
            "date" => return Ok(ColumnType::Date),
            _ => {}
        }
        let inner = t
            .strip_prefix("char(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| DataError::InvalidType(s.to_string()))?;
        match inner.trim().parse::<u16>() {
            Ok(n) if (1..=255).contains(&n) => Ok(ColumnType::Char(n as u8)),
            _ => Err(DataError::InvalidType(s.to_string())),
        }
    }
}

impl TryFrom<String> for ColumnType {
    type Error = DataError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<ColumnType> for String {
    fn from(t: ColumnType) -> Self {
        t.to_string()
    }
}

/// A constant appearing in a predicate or a fixture. Numbers and strings
/// only; dates may be given either as day numbers or `YYYY-MM-DD`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Str(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(v) => write!(f, "{v}"),
            Literal::Str(s) => write!(f, "'{s}'"),
        }
    }
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch")
}

pub fn parse_date(s: &str) -> Option<i64> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
        .ok()
        .map(|d| d.signed_duration_since(epoch()).num_days())
}

pub fn format_date(day: i64) -> String {
    epoch()
        .checked_add_signed(chrono::Duration::days(day))
        .map(|d| d.format("%Y-%m-%d").to_string())
        .unwrap_or_else(|| day.to_string())
}

fn pad_char(n: u8, bytes: &[u8]) -> Result<Vec<u8>, String> {
    if bytes.len() > n as usize {
        return Err(format!("value of {} bytes exceeds char({n})", bytes.len()));
    }
    if bytes.contains(&0) {
        return Err("NUL byte inside char value".into());
    }
    let mut out = bytes.to_vec();
    out.resize(n as usize, 0);
    Ok(out)
}

/// Parses one CSV field. An empty field is NULL.
pub fn parse_field(ty: ColumnType, field: &str) -> Result<Vec<u8>, String> {
    if field.is_empty() {
        return Ok(ty.null());
    }
    match ty {
        ColumnType::Int64 => field
            .trim()
            .parse::<i64>()
            .map(|v| v.to_be_bytes().to_vec())
            .map_err(|_| format!("'{field}' is not an int64")),
        ColumnType::Date => {
            let day = parse_date(field)
                .or_else(|| field.trim().parse::<i64>().ok())
                .ok_or_else(|| format!("'{field}' is not a date"))?;
            Ok(day.to_be_bytes().to_vec())
        }
        ColumnType::Char(n) => pad_char(n, field.as_bytes()),
    }
}

/// Encodes a literal for comparison against a column of type `ty`.
pub fn encode_literal(ty: ColumnType, lit: &Literal) -> Result<Vec<u8>, String> {
    match (ty, lit) {
        (ColumnType::Int64, Literal::Int(v)) => Ok(v.to_be_bytes().to_vec()),
        (ColumnType::Date, Literal::Int(v)) => Ok(v.to_be_bytes().to_vec()),
        (ColumnType::Date, Literal::Str(s)) => parse_date(s)
            .map(|d| d.to_be_bytes().to_vec())
            .ok_or_else(|| format!("'{s}' is not a date")),
        (ColumnType::Char(n), Literal::Str(s)) => pad_char(n, s.as_bytes()),
        (ty, lit) => Err(format!("literal {lit} does not match column type {ty}")),
    }
}

#[inline]
fn as_i64(bytes: &[u8]) -> i64 {
    i64::from_be_bytes(bytes[..8].try_into().expect("8-byte value"))
}

/// Orders two encoded values of the same type.
#[inline]
pub fn compare(ty: ColumnType, a: &[u8], b: &[u8]) -> Ordering {
    if ty.is_numeric() {
        as_i64(a).cmp(&as_i64(b))
    } else {
        a.cmp(b)
    }
}

/// Monotone numeric image of a value, used for uniform range interpolation.
pub fn ordinal(ty: ColumnType, bytes: &[u8]) -> f64 {
    if ty.is_numeric() {
        as_i64(bytes) as f64
    } else {
        let mut buf = [0u8; 8];
        let n = bytes.len().min(8);
        buf[..n].copy_from_slice(&bytes[..n]);
        u64::from_be_bytes(buf) as f64
    }
}

pub fn is_null(bytes: &[u8]) -> bool {
    bytes.iter().all(|&b| b == 0)
}

/// Renders a value for CSV output; NULL becomes the empty string.
pub fn render(ty: ColumnType, bytes: &[u8]) -> String {
    if is_null(bytes) {
        return String::new();
    }
    match ty {
        ColumnType::Int64 => as_i64(bytes).to_string(),
        ColumnType::Date => format_date(as_i64(bytes)),
        ColumnType::Char(_) => {
            let end = bytes.iter().rposition(|&b| b != 0).map_or(0, |p| p + 1);
            String::from_utf8_lossy(&bytes[..end]).into_owned()
        }
    }
}
