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


//! Records shared by the line-delimited and the tabular renderings. Both
//! print numbers with the same formatter, so the two agree digit for digit.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Jsonl,
    Table,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: &'static str,
    pub fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            fields: Vec::new(),
        }
    }

    pub fn field(mut self, name: &'static str, v: impl Serialize) -> Self {
        self.fields
            .push((name, serde_json::to_value(v).expect("plain data serializes")));
        self
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

pub fn render(records: &[Record], format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Jsonl => {
            for r in records {
                let mut m = Map::new();
                m.insert("record".into(), Value::String(r.kind.into()));
                for (k, v) in &r.fields {
                    m.insert((*k).into(), v.clone());
                }
                writeln!(out, "{}", Value::Object(m))?;
            }
        }
        Format::Table => {
            let mut start = 0;
            while start < records.len() {
                let kind = records[start].kind;
                let mut end = start;
                while end < records.len() && records[end].kind == kind {
                    end += 1;
                }
                let group = &records[start..end];
                let headers: Vec<&str> = group[0].fields.iter().map(|(k, _)| *k).collect();
                let rows: Vec<Vec<String>> = group
                    .iter()
                    .map(|r| r.fields.iter().map(|(_, v)| cell(v)).collect())
                    .collect();
                let widths: Vec<usize> = headers
                    .iter()
                    .enumerate()
                    .map(|(i, h)| rows.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
                    .collect();
                if start > 0 {
                    writeln!(out)?;
                }
                writeln!(out, "[{kind}]")?;
                let line = |cells: Vec<&str>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                writeln!(out, "{}", line(headers.clone()))?;
                for r in &rows {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
                }
                start = end;
            }
        }
    }
    Ok(())
}
