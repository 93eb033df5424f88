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

//! Exact column and column-group statistics, computed by full scan.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use super::value;
use super::{DataError, Table};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    /// Exact number of distinct values (NULL counts as one), at least 1.
    pub distinct_count: u64,
    pub null_fraction: f64,
    /// Mean fraction of value bytes shared with the previous value in
    /// sorted order.
    pub avg_prefix_share: f64,
    /// Smallest and largest non-NULL values (NULL encoding when none).
    #[serde(with = "hex_bytes")]
    pub min: Vec<u8>,
    #[serde(with = "hex_bytes")]
    pub max: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableStats {
    pub table: String,
    pub total_tuples: u64,
    pub columns: BTreeMap<String, ColumnStats>,
    /// Exact distinct counts of ordered column lists.
    #[serde(with = "group_map")]
    pub group_distincts: BTreeMap<Vec<String>, u64>,
}

impl TableStats {
    pub fn column(&self, name: &str) -> Result<&ColumnStats, DataError> {
        self.columns
            .get(name)
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    /// Distinct count of a column list; single columns fall back to
    /// column statistics.
    pub fn group_distinct(&self, cols: &[String]) -> Option<u64> {
        if let Some(&d) = self.group_distincts.get(cols) {
            return Some(d);
        }
        if cols.len() == 1 {
            return self.columns.get(&cols[0]).map(|c| c.distinct_count);
        }
        None
    }

    /// Scans `table` for any of `groups` not yet recorded.
    pub fn ensure_groups(&mut self, table: &Table, groups: &[Vec<String>]) -> Result<(), DataError> {
        for g in groups {
            if !self.group_distincts.contains_key(g) {
                let d = group_distinct_count(table, g)?;
                self.group_distincts.insert(g.clone(), d);
            }
        }
        Ok(())
    }
}

fn group_distinct_count(table: &Table, group: &[String]) -> Result<u64, DataError> {
    let cols = group
        .iter()
        .map(|c| table.column_index(c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen = HashSet::with_capacity(table.rows());
    let mut key = Vec::new();
    for r in 0..table.rows() {
        table.row_key(&cols, r, &mut key);
        if !seen.contains(&key) {
            seen.insert(key.clone());
        }
    }
    Ok((seen.len() as u64).max(1))
}

fn column_stats(table: &Table, col: usize) -> ColumnStats {
    let ty = table.column_type(col);
    let w = ty.width();
    let n = table.rows();
    let mut vals: Vec<&[u8]> = (0..n).map(|r| table.value(col, r)).collect();
    vals.sort_unstable_by(|a, b| value::compare(ty, a, b));
    let mut distinct = 0u64;
    let mut shared = 0usize;
    for i in 0..n {
        if i == 0 || vals[i] != vals[i - 1] {
            distinct += 1;
        }
        if i > 0 {
            shared += vals[i]
                .iter()
                .zip(vals[i - 1])
                .take_while(|(a, b)| a == b)
                .count();
        }
    }
    let nulls = vals.iter().filter(|v| value::is_null(v)).count();
    let non_null: Vec<&&[u8]> = vals.iter().filter(|v| !value::is_null(v)).collect();
    let (min, max) = match (non_null.first(), non_null.last()) {
        (Some(a), Some(b)) => (a.to_vec(), b.to_vec()),
        _ => (ty.null(), ty.null()),
    };
    ColumnStats {
        distinct_count: distinct.max(1),
        null_fraction: if n == 0 { 0.0 } else { nulls as f64 / n as f64 },
        avg_prefix_share: if n < 2 {
            0.0
        } else {
            shared as f64 / ((n - 1) * w) as f64
        },
        min,
        max,
    }
}

/// Full-scan statistics for every column plus the requested groups.
pub fn compute_stats(table: &Table, groups: &[Vec<String>]) -> Result<TableStats, DataError> {
    let columns = table
        .columns()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.name.clone(), column_stats(table, i)))
        .collect();
    let mut stats = TableStats {
        table: table.name().to_string(),
        total_tuples: table.rows() as u64,
        columns,
        group_distincts: BTreeMap::new(),
    };
    stats.ensure_groups(table, groups)?;
    Ok(stats)
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        let hex: String = v.iter().map(|b| format!("{b:02x}")).collect();
        s.serialize_str(&hex)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        let s = String::deserialize(d)?;
        (0..s.len())
            .step_by(2)
            .map(|i| {
                s.get(i..i + 2)
                    .and_then(|h| u8::from_str_radix(h, 16).ok())
                    .ok_or_else(|| serde::de::Error::custom("bad hex"))
            })
            .collect()
    }
}

mod group_map {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        columns: Vec<String>,
        distinct: u64,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<Vec<String>, u64>, s: S) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(k, &v)| Entry {
                columns: k.clone(),
                distinct: v,
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<String>, u64>, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| (e.columns, e.distinct))
            .collect())
    }
}
