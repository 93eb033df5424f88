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

use std::collections::BTreeMap;

use crate::compression::{estimate_uncompressed_size, filtered_rows_estimate, rows_per_page, IndexDef};
use crate::data::{compute_stats, ColumnDef, Table, TableStats};

use super::{ErrorModel, EstimateError};

/// Schema, statistics and row count of one table.
#[derive(Debug, Clone)]
pub struct TableInfo {
    pub schema: Vec<ColumnDef>,
    pub stats: TableStats,
    pub rows: u64,
}

/// What the planner and the deductions know about the database.
#[derive(Debug, Clone, Default)]
pub struct EstimationContext {
    pub tables: BTreeMap<String, TableInfo>,
    pub model: ErrorModel,
}

impl EstimationContext {
    pub fn new(model: ErrorModel) -> Self {
        Self {
            tables: BTreeMap::new(),
            model,
        }
    }

    /// Registers a table with exact statistics for the given column groups.
    pub fn add_table(&mut self, table: &Table, groups: &[Vec<String>]) -> Result<(), EstimateError> {
        let stats = compute_stats(table, groups)?;
        self.tables.insert(
            table.name().to_string(),
            TableInfo {
                schema: table.columns().to_vec(),
                stats,
                rows: table.rows() as u64,
            },
        );
        Ok(())
    }

    pub fn from_tables<'a>(tables: impl IntoIterator<Item = &'a Table>) -> Result<Self, EstimateError> {
        let mut ctx = Self::default();
        for t in tables {
            ctx.add_table(t, &[])?;
        }
        Ok(ctx)
    }

    pub fn info(&self, table: &str) -> Result<&TableInfo, EstimateError> {
        self.tables
            .get(table)
            .ok_or_else(|| EstimateError::UnknownTable(table.to_string()))
    }

    pub fn stored_columns(&self, def: &IndexDef) -> Result<Vec<String>, EstimateError> {
        Ok(def.stored_columns(&self.info(&def.table)?.schema))
    }

    pub fn index_rows(&self, def: &IndexDef) -> Result<u64, EstimateError> {
        let info = self.info(&def.table)?;
        Ok(filtered_rows_estimate(def, &info.schema, &info.stats, info.rows)?)
    }

    pub fn uncompressed_pages(&self, def: &IndexDef) -> Result<u64, EstimateError> {
        let info = self.info(&def.table)?;
        Ok(estimate_uncompressed_size(def, &info.schema, &info.stats, info.rows)?)
    }

    pub fn row_width(&self, def: &IndexDef) -> Result<usize, EstimateError> {
        Ok(def.row_width(&self.info(&def.table)?.schema)?)
    }

    /// Uncompressed pages of the index built on an `f` sample: the unit
    /// cost of estimating its size by sampling.
    pub fn sample_cost(&self, def: &IndexDef, f: f64) -> Result<u64, EstimateError> {
        let per_page = rows_per_page(self.row_width(def)?)? as f64;
        let rows = self.index_rows(def)? as f64 * f;
        Ok((rows / per_page).ceil() as u64)
    }

    /// Makes the exact distinct count of every prefix of the stored
    /// columns of `defs` available.
    pub fn ensure_prefix_groups(&mut self, tables: &[&Table], defs: &[IndexDef]) -> Result<(), EstimateError> {
        let mut wanted: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        for d in defs {
            let cols = self.stored_columns(d)?;
            let info = self.info(&d.table)?;
            let entry = wanted.entry(d.table.clone()).or_default();
            for k in 2..=cols.len() {
                let g = cols[..k].to_vec();
                if !info.stats.group_distincts.contains_key(&g) && !entry.contains(&g) {
                    entry.push(g);
                }
            }
        }
        for (name, groups) in wanted {
            if groups.is_empty() {
                continue;
            }
            let table = tables
                .iter()
                .find(|t| t.name() == name)
                .ok_or_else(|| EstimateError::UnknownTable(name.clone()))?;
            let info = self.tables.get_mut(&name).expect("checked above");
            info.stats.ensure_groups(table, &groups)?;
        }
        Ok(())
    }
}
