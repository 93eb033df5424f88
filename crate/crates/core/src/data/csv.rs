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

//! Minimal CSV reader/writer: comma separated, header line first, no
//! quoting or escaping. Schema files hold one `name:type` per line.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::value::{self, ColumnType};
use super::{ColumnDef, DataError, Table};

/// Parses schema text (`name:type` per line; blank lines and `#` comments
/// are ignored).
pub fn parse_schema(text: &str) -> Result<Vec<ColumnDef>, DataError> {
    let mut cols = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, ty) = line.split_once(':').ok_or_else(|| DataError::Schema {
            line: i + 1,
            message: format!("expected name:type, got '{line}'"),
        })?;
        let ty: ColumnType = ty.parse().map_err(|_| DataError::Schema {
            line: i + 1,
            message: format!("unknown type '{}'", ty.trim()),
        })?;
        cols.push(ColumnDef::new(name.trim(), ty));
    }
    Ok(cols)
}

pub fn read_schema_file(path: &Path) -> Result<Vec<ColumnDef>, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_schema(&text)
}

/// Loads `path` into a table named after the file stem.
pub fn ingest_csv(path: &Path, schema: &[ColumnDef]) -> Result<Table, DataError> {
    let text = fs::read_to_string(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "table".into());
    parse_csv(&name, &text, schema)
}

pub(crate) fn parse_csv(name: &str, text: &str, schema: &[ColumnDef]) -> Result<Table, DataError> {
    let mut lines = text.lines().enumerate();
    let expected: Vec<String> = schema.iter().map(|c| c.name.clone()).collect();
    match lines.next() {
        Some((_, header)) => {
            let found: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
            if found != expected {
                return Err(DataError::HeaderMismatch {
                    line: 1,
                    expected,
                    found,
                });
            }
        }
        None => {
            return Err(DataError::HeaderMismatch {
                line: 1,
                expected,
                found: Vec::new(),
            })
        }
    }
    let mut data: Vec<Vec<u8>> = schema.iter().map(|_| Vec::new()).collect();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != schema.len() {
            return Err(DataError::Arity {
                line: line_no,
                expected: schema.len(),
                found: fields.len(),
            });
        }
        for ((field, col), buf) in fields.iter().zip(schema).zip(data.iter_mut()) {
            if field.contains('"') {
                return Err(DataError::Parse {
                    line: line_no,
                    column: col.name.clone(),
                    message: "quoted fields are not supported".into(),
                });
            }
            let v = value::parse_field(col.ty, field).map_err(|message| DataError::Parse {
                line: line_no,
                column: col.name.clone(),
                message,
            })?;
            buf.extend_from_slice(&v);
        }
    }
    Table::from_columns(name, schema.to_vec(), data)
}

/// Writes `table` as CSV with a header line.
pub fn write_csv<W: Write>(table: &Table, mut out: W) -> Result<(), DataError> {
    let io = |source| DataError::Io {
        path: "<output>".into(),
        source,
    };
    let header: Vec<&str> = table.columns().iter().map(|c| c.name.as_str()).collect();
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    let mut line = String::new();
    for r in 0..table.rows() {
        line.clear();
        for (c, col) in table.columns().iter().enumerate() {
            if c > 0 {
                line.push(',');
            }
            let s = value::render(col.ty, table.value(c, r));
            if s.contains(',') || s.contains('\n') {
                return Err(DataError::Unquotable(s));
            }
            line.push_str(&s);
        }
        writeln!(out, "{line}").map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Vec<ColumnDef> {
        vec![
            ColumnDef::new("a", ColumnType::Int64),
            ColumnDef::new("b", ColumnType::Char(1)),
        ]
    }

    #[test]
    fn three_rows() {
        let t = parse_csv("t", "a,b\n1,x\n2,y\n3,z\n", &schema()).unwrap();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.value(1, 2), b"z");
    }

    #[test]
    fn empty_data_section() {
        let t = parse_csv("t", "a,b\n", &schema()).unwrap();
        assert_eq!(t.rows(), 0);
    }

    #[test]
    fn parse_error_names_line() {
        let err = parse_csv("t", "a,b\nabc,x\n", &schema()).unwrap_err();
        match err {
            DataError::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, "a");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn arity_and_header_errors() {
        assert!(matches!(
            parse_csv("t", "a,b\n1,x,3\n", &schema()),
            Err(DataError::Arity { line: 2, .. })
        ));
        assert!(matches!(
            parse_csv("t", "a,c\n", &schema()),
            Err(DataError::HeaderMismatch { .. })
        ));
    }

    #[test]
    fn missing_file() {
        let err = ingest_csv(Path::new("/definitely/not/here.csv"), &schema()).unwrap_err();
        assert!(matches!(err, DataError::Io { .. }));
    }

    #[test]
    fn schema_text() {
        let s = parse_schema("# sales\nid:int64\n\nstate : char(2)\nshipped:date\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1].ty, ColumnType::Char(2));
        assert!(matches!(
            parse_schema("id int64"),
            Err(DataError::Schema { line: 1, .. })
        ));
    }

    #[test]
    fn write_then_read_is_identity() {
        let t = parse_csv("t", "a,b\n1,x\n,y\n-3,\n", &schema()).unwrap();
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let back = parse_csv("t", std::str::from_utf8(&buf).unwrap(), &schema()).unwrap();
        assert_eq!(t, back);
    }
}
