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

//! Typed in-memory tables, CSV ingestion, synthetic generation and
//! exact column statistics.

mod csv;
mod predicate;
mod stats;
mod synthetic;
mod table;
pub mod value;

use std::path::PathBuf;

use thiserror::Error;

pub use self::csv::{ingest_csv, parse_schema, read_schema_file, write_csv};
pub use predicate::{BoundPredicate, CmpOp, Predicate, ValueRange};
pub use stats::{compute_stats, ColumnStats, TableStats};
pub use synthetic::{generate_synthetic, Correlation, SyntheticColumn, SyntheticSpec};
pub use table::{ColumnDef, Table};
pub use value::{ColumnType, Literal};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: header {found:?} does not match schema {expected:?}")]
    HeaderMismatch {
        line: usize,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: String,
        message: String,
    },
    #[error("schema line {line}: {message}")]
    Schema { line: usize, message: String },
    #[error("unknown column '{0}'")]
    UnknownColumn(String),
    #[error("duplicate column '{0}'")]
    DuplicateColumn(String),
    #[error("invalid column type '{0}'")]
    InvalidType(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("column length mismatch: column '{column}' has {found} rows, expected {expected}")]
    Length {
        column: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate on '{column}': {message}")]
    Predicate { column: String, message: String },
    #[error("field contains a comma and cannot be written without quoting: {0:?}")]
    Unquotable(String),
}
