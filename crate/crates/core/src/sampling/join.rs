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

//! Join synopses: a fact-table sample joined with the complete dimension
//! tables, so every sampled fact row keeps its dimension attributes.

use std::collections::HashSet;

use crate::data::{value, ColumnDef, Table};

use super::base::{build_base_sample, Sample};
use super::SamplingError;

/// One foreign-key join from the fact table to a dimension.
#[derive(Debug, Clone)]
pub struct DimensionJoin<'a> {
    pub foreign_key: String,
    pub dimension: &'a Table,
    pub key: String,
}

#[derive(Debug, Clone)]
pub struct JoinSynopsis {
    pub fact: String,
    pub dimensions: Vec<String>,
    pub fraction: f64,
    pub seed: u64,
    /// Rows of the full fact table.
    pub fact_rows: usize,
    /// Fact columns followed by the non-key columns of each dimension.
    pub rows: Table,
}

impl JoinSynopsis {
    /// The synopsis viewed as a sample of the fact table.
    pub fn as_sample(&self) -> Sample {
        Sample {
            source: self.rows.name().to_string(),
            fraction: self.fraction,
            seed: self.seed,
            source_rows: self.fact_rows,
            rows: self.rows.clone(),
        }
    }
}

/// Sorted `(key, row)` pairs for binary-search lookups.
struct KeyIndex {
    entries: Vec<(Vec<u8>, usize)>,
}

impl KeyIndex {
    fn build(t: &Table, col: usize) -> Option<Self> {
        let mut entries: Vec<(Vec<u8>, usize)> =
            (0..t.rows()).map(|r| (t.value(col, r).to_vec(), r)).collect();
        entries.sort();
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(Self { entries })
    }

    fn get(&self, key: &[u8]) -> Option<usize> {
        self.entries
            .binary_search_by(|(k, _)| k.as_slice().cmp(key))
            .ok()
            .map(|i| self.entries[i].1)
    }
}

pub fn build_join_synopsis(
    fact: &Table,
    dims: &[DimensionJoin<'_>],
    f: f64,
    seed: u64,
) -> Result<JoinSynopsis, SamplingError> {
    let sample = build_base_sample(fact, f, seed)?;
    let s = &sample.rows;

    let mut columns: Vec<ColumnDef> = s.columns().to_vec();
    let mut data: Vec<Vec<u8>> = (0..columns.len()).map(|c| s.column_bytes(c).to_vec()).collect();
    let mut names: HashSet<String> = columns.iter().map(|c| c.name.clone()).collect();

    for j in dims {
        let fk = s.column_index(&j.foreign_key)?;
        let key = j.dimension.column_index(&j.key)?;
        let index = KeyIndex::build(j.dimension, key).ok_or_else(|| SamplingError::DuplicateKey {
            dimension: j.dimension.name().to_string(),
            column: j.key.clone(),
        })?;
        let matches = (0..s.rows())
            .map(|r| {
                index.get(s.value(fk, r)).ok_or_else(|| SamplingError::DanglingForeignKey {
                    fact: fact.name().to_string(),
                    column: j.foreign_key.clone(),
                    dimension: j.dimension.name().to_string(),
                    value: value::render(s.column_type(fk), s.value(fk, r)),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (ci, c) in j.dimension.columns().iter().enumerate() {
            if ci == key {
                continue;
            }
            let mut name = c.name.clone();
            if names.contains(&name) {
                name = format!("{}.{}", j.dimension.name(), c.name);
            }
            names.insert(name.clone());
            let mut bytes = Vec::with_capacity(matches.len() * c.ty.width());
            for &m in &matches {
                bytes.extend_from_slice(j.dimension.value(ci, m));
            }
            columns.push(ColumnDef::new(name, c.ty));
            data.push(bytes);
        }
    }
    let name = format!("{}_synopsis", fact.name());
    Ok(JoinSynopsis {
        fact: fact.name().to_string(),
        dimensions: dims.iter().map(|j| j.dimension.name().to_string()).collect(),
        fraction: f,
        seed,
        fact_rows: fact.rows(),
        rows: Table::from_columns(name, columns, data)?,
    })
}
