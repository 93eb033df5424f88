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

//! Index construction over fixed-size pages and the page codecs.
//!
//! An index is built by filtering, projecting and sorting the table's rows,
//! packing them into uncompressed pages of [`PAGE_SIZE`] bytes, and then
//! compressing every page with the index's [`CompressionMethod`]. Sizes are
//! measured exactly in bytes; the compression fraction of an index is
//! `bytes_compressed / bytes_raw`.

mod gdict;
mod index;
mod local;
mod ns;
mod page;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{ColumnDef, DataError, Predicate, Table};

pub use gdict::{pointer_width, ColumnDictionary, GlobalDictionary};
pub use index::{
    build_index, estimate_uncompressed_size, filtered_rows_estimate, gdict_index_bytes, rows_per_page, BuiltIndex,
};
pub use local::{encode_local_column, LocalColumnEncoding, LocalEntry};
pub use ns::{ns_decode_value, ns_encode_value};
pub use page::{compress_page, decompress_page, Page, RowLayout};

pub const PAGE_SIZE: usize = 8192;
pub const PAGE_HEADER: usize = 16;

#[derive(Debug, Error)]
pub enum CompressionError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("row of {width} bytes does not fit a page ({capacity} usable bytes)")]
    RowTooWide { width: usize, capacity: usize },
    #[error("global dictionary required to {0} a GDICT page")]
    MissingDictionary(&'static str),
    #[error("corrupt page: {0}")]
    Corrupt(String),
    #[error("unknown method tag {0}")]
    UnknownMethodTag(u8),
    #[error("page is already compressed")]
    AlreadyCompressed,
}

/// Order-independent codecs compress to the same size whatever the tuple
/// order; order-dependent ones depend on which values share a page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    #[serde(rename = "ORD_IND")]
    OrderIndependent,
    #[serde(rename = "ORD_DEP")]
    OrderDependent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub enum CompressionMethod {
    #[default]
    #[serde(rename = "NONE", alias = "none")]
    None,
    /// Null suppression of leading NUL bytes in every value.
    #[serde(rename = "NS", alias = "ns", alias = "ROW", alias = "row")]
    Ns,
    /// One dictionary per column for the whole index.
    #[serde(rename = "GDICT", alias = "gdict")]
    GlobalDict,
    /// Per-page prefix suppression followed by a per-page dictionary.
    #[serde(rename = "PAGE", alias = "page")]
    Page,
}

impl CompressionMethod {
    pub const ALL: [CompressionMethod; 4] = [
        CompressionMethod::None,
        CompressionMethod::Ns,
        CompressionMethod::GlobalDict,
        CompressionMethod::Page,
    ];

    pub fn category(self) -> Option<Category> {
        match self {
            CompressionMethod::None => None,
            CompressionMethod::Ns | CompressionMethod::GlobalDict => Some(Category::OrderIndependent),
            CompressionMethod::Page => Some(Category::OrderDependent),
        }
    }

    pub fn is_compressed(self) -> bool {
        self != CompressionMethod::None
    }

    pub fn tag(self) -> u8 {
        match self {
            CompressionMethod::None => 0,
            CompressionMethod::Ns => 1,
            CompressionMethod::GlobalDict => 2,
            CompressionMethod::Page => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self, CompressionError> {
        Ok(match tag {
            0 => CompressionMethod::None,
            1 => CompressionMethod::Ns,
            2 => CompressionMethod::GlobalDict,
            3 => CompressionMethod::Page,
            t => return Err(CompressionError::UnknownMethodTag(t)),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            CompressionMethod::None => "NONE",
            CompressionMethod::Ns => "NS",
            CompressionMethod::GlobalDict => "GDICT",
            CompressionMethod::Page => "PAGE",
        }
    }
}

impl fmt::Display for CompressionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CompressionMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "NONE" => Ok(CompressionMethod::None),
            "NS" | "ROW" => Ok(CompressionMethod::Ns),
            "GDICT" => Ok(CompressionMethod::GlobalDict),
            "PAGE" => Ok(CompressionMethod::Page),
            _ => Err(format!("unknown compression method '{s}'")),
        }
    }
}

/// An index definition: ordered keys, included columns, optional filter
/// (partial index) and codec. A clustered index stores every table column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexDef {
    pub table: String,
    pub keys: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub include: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<Predicate>,
    #[serde(default)]
    pub method: CompressionMethod,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub clustered: bool,
}

impl IndexDef {
    pub fn new<S: Into<String>>(table: impl Into<String>, keys: impl IntoIterator<Item = S>) -> Self {
        Self {
            table: table.into(),
            keys: keys.into_iter().map(Into::into).collect(),
            include: Vec::new(),
            filter: None,
            method: CompressionMethod::None,
            clustered: false,
        }
    }

    pub fn include<S: Into<String>>(mut self, cols: impl IntoIterator<Item = S>) -> Self {
        self.include = cols.into_iter().map(Into::into).collect();
        self
    }

    pub fn filter(mut self, p: Predicate) -> Self {
        self.filter = Some(p);
        self
    }

    pub fn method(mut self, m: CompressionMethod) -> Self {
        self.method = m;
        self
    }

    pub fn clustered(mut self, c: bool) -> Self {
        self.clustered = c;
        self
    }

    pub fn with_method(&self, m: CompressionMethod) -> Self {
        self.clone().method(m)
    }

    /// Columns physically stored, in row order: the keys, then included
    /// columns (for a clustered index, every other table column in schema
    /// order).
    pub fn stored_columns(&self, schema: &[ColumnDef]) -> Vec<String> {
        let mut cols = self.keys.clone();
        if self.clustered {
            cols.extend(
                schema
                    .iter()
                    .filter(|c| !self.keys.contains(&c.name))
                    .map(|c| c.name.clone()),
            );
        } else {
            cols.extend(self.include.iter().cloned());
        }
        cols
    }

    pub fn row_width(&self, schema: &[ColumnDef]) -> Result<usize, CompressionError> {
        self.stored_columns(schema)
            .iter()
            .map(|n| {
                schema
                    .iter()
                    .find(|c| &c.name == n)
                    .map(|c| c.ty.width())
                    .ok_or_else(|| DataError::UnknownColumn(n.clone()).into())
            })
            .sum()
    }

    /// Checks the definition against `table`.
    pub fn validate(&self, table: &Table) -> Result<(), CompressionError> {
        if self.keys.is_empty() {
            return Err(CompressionError::InvalidIndex("no key columns".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for c in self.keys.iter().chain(&self.include) {
            table.column_index(c)?;
            if !seen.insert(c) {
                return Err(CompressionError::InvalidIndex(format!("column '{c}' listed twice")));
            }
        }
        if let Some(f) = &self.filter {
            f.bind(table)?;
        }
        Ok(())
    }

    /// Identity of the index shape without its codec.
    pub fn shape_id(&self) -> String {
        let mut s = format!("{}({})", self.table, self.keys.join(","));
        if self.clustered {
            s.push_str(" CLUSTERED");
        } else if !self.include.is_empty() {
            s.push_str(&format!(" INCLUDE({})", self.include.join(",")));
        }
        if let Some(f) = &self.filter {
            s.push_str(&format!(" WHERE {f}"));
        }
        s
    }

    pub fn id(&self) -> String {
        format!("{} [{}]", self.shape_id(), self.method)
    }
}

impl fmt::Display for IndexDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ColumnType;

    #[test]
    fn categories() {
        assert_eq!(CompressionMethod::None.category(), None);
        assert_eq!(CompressionMethod::Ns.category(), Some(Category::OrderIndependent));
        assert_eq!(CompressionMethod::GlobalDict.category(), Some(Category::OrderIndependent));
        assert_eq!(CompressionMethod::Page.category(), Some(Category::OrderDependent));
        for m in CompressionMethod::ALL {
            assert_eq!(CompressionMethod::from_tag(m.tag()).unwrap(), m);
        }
        assert!(CompressionMethod::from_tag(9).is_err());
    }

    #[test]
    fn clustered_stores_every_column() {
        let schema = vec![
            ColumnDef::new("a", ColumnType::Int64),
            ColumnDef::new("b", ColumnType::Char(3)),
            ColumnDef::new("c", ColumnType::Date),
        ];
        let def = IndexDef::new("t", ["b"]).clustered(true);
        assert_eq!(def.stored_columns(&schema), vec!["b", "a", "c"]);
        assert_eq!(def.row_width(&schema).unwrap(), 19);
        let def = IndexDef::new("t", ["c"]).include(["a"]);
        assert_eq!(def.stored_columns(&schema), vec!["c", "a"]);
    }

    #[test]
    fn serde_def() {
        let d: IndexDef = serde_json::from_str(
            r#"{"table":"t","keys":["a"],"include":["b"],"method":"PAGE"}"#,
        )
        .unwrap();
        assert_eq!(d.method, CompressionMethod::Page);
        assert_eq!(d.id(), "t(a) INCLUDE(b) [PAGE]");
    }
}
