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

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::value::{self, ColumnType};
use super::DataError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColumnDef {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: ColumnType,
}

impl ColumnDef {
    pub fn new(name: impl Into<String>, ty: ColumnType) -> Self {
        Self {
            name: name.into(),
            ty,
        }
    }
}

/// Column-major table of fixed-width values. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    name: String,
    columns: Vec<ColumnDef>,
    data: Vec<Vec<u8>>,
    rows: usize,
}

impl Table {
    /// An empty table with the given schema.
    pub fn empty(name: impl Into<String>, columns: Vec<ColumnDef>) -> Result<Self, DataError> {
        let n = columns.len();
        Self::from_columns(name, columns, vec![Vec::new(); n])
    }

    /// Builds a table from per-column byte vectors, validating lengths.
    pub fn from_columns(
        name: impl Into<String>,
        columns: Vec<ColumnDef>,
        data: Vec<Vec<u8>>,
    ) -> Result<Self, DataError> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.name.as_str()) {
                return Err(DataError::DuplicateColumn(c.name.clone()));
            }
        }
        assert_eq!(columns.len(), data.len(), "one byte vector per column");
        let rows = match (columns.first(), data.first()) {
            (Some(c), Some(d)) => d.len() / c.ty.width(),
            _ => 0,
        };
        for (c, d) in columns.iter().zip(&data) {
            if d.len() != rows * c.ty.width() {
                return Err(DataError::Length {
                    column: c.name.clone(),
                    expected: rows,
                    found: d.len() / c.ty.width(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            columns,
            data,
            rows,
        })
    }

    /// Builds a table from typed rows of encoded values.
    pub fn from_rows(
        name: impl Into<String>,
        columns: Vec<ColumnDef>,
        rows: &[Vec<Vec<u8>>],
    ) -> Result<Self, DataError> {
        let mut data: Vec<Vec<u8>> = columns.iter().map(|_| Vec::new()).collect();
        for row in rows {
            assert_eq!(row.len(), columns.len(), "row arity");
            for ((buf, v), c) in data.iter_mut().zip(row).zip(&columns) {
                assert_eq!(v.len(), c.ty.width(), "value width for '{}'", c.name);
                buf.extend_from_slice(v);
            }
        }
        Self::from_columns(name, columns, data)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn columns(&self) -> &[ColumnDef] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    /// Sum of column widths.
    pub fn row_width(&self) -> usize {
        self.columns.iter().map(|c| c.ty.width()).sum()
    }

    pub fn column_index(&self, name: &str) -> Result<usize, DataError> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&ColumnDef, DataError> {
        Ok(&self.columns[self.column_index(name)?])
    }

    pub fn column_type(&self, col: usize) -> ColumnType {
        self.columns[col].ty
    }

    /// Raw bytes of one column, `rows * width` long.
    pub fn column_bytes(&self, col: usize) -> &[u8] {
        &self.data[col]
    }

    #[inline]
    pub fn value(&self, col: usize, row: usize) -> &[u8] {
        let w = self.columns[col].ty.width();
        &self.data[col][row * w..(row + 1) * w]
    }

    /// Copies the selected rows (in the given order) into a new table.
    pub fn take(&self, name: impl Into<String>, rows: &[usize]) -> Table {
        let data = self
            .columns
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                let w = c.ty.width();
                let mut out = Vec::with_capacity(rows.len() * w);
                for &r in rows {
                    out.extend_from_slice(&self.data[ci][r * w..(r + 1) * w]);
                }
                out
            })
            .collect();
        Table {
            name: name.into(),
            columns: self.columns.clone(),
            data,
            rows: rows.len(),
        }
    }

    /// Keeps only the named columns, in the given order.
    pub fn project(&self, names: &[String]) -> Result<Table, DataError> {
        let idx = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Result<Vec<_>, _>>()?;
        Table::from_columns(
            self.name.clone(),
            idx.iter().map(|&i| self.columns[i].clone()).collect(),
            idx.iter().map(|&i| self.data[i].clone()).collect(),
        )
    }

    /// Compares two rows on the given column positions.
    pub fn cmp_rows(&self, cols: &[usize], a: usize, b: usize) -> Ordering {
        for &c in cols {
            let ty = self.columns[c].ty;
            match value::compare(ty, self.value(c, a), self.value(c, b)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Concatenated encoding of one row restricted to `cols`.
    pub fn row_key(&self, cols: &[usize], row: usize, out: &mut Vec<u8>) {
        out.clear();
        for &c in cols {
            out.extend_from_slice(self.value(c, row));
        }
    }
}
