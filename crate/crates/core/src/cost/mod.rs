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


//! What-if costing of statements against hypothetical configurations.
//!
//! Selectivity is the uniform-range fraction from column statistics with
//! predicates treated as independent. I/O is proportional to the estimated
//! pages touched, so a compressed index pays less I/O in exact proportion to
//! its compression fraction and pays decompression CPU on every tuple read.

mod statement;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compression::{rows_per_page, CompressionError, CompressionMethod, IndexDef};
use crate::data::{DataError, Predicate};
use crate::estimate::{EstimateError, EstimationContext, SizeEstimate};

pub use statement::{InsertStatement, SelectStatement, Statement};

#[derive(Debug, Error)]
pub enum CostError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Compression(#[from] CompressionError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error("statement on '{statement}' costed against an index on '{index}'")]
    TableMismatch { statement: String, index: String },
    #[error("expected a {expected} statement")]
    WrongKind { expected: &'static str },
    #[error("invalid cost parameter: {0}")]
    InvalidParams(String),
    #[error("invalid statement: {0}")]
    InvalidStatement(String),
    #[error("table '{0}' would have two clustered indexes")]
    DuplicateClustered(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostModelParams {
    pub io_page_cost: f64,
    pub cpu_tuple_cost: f64,
    /// Per matching tuple fetched from the heap by a non-covering path.
    pub lookup_cost: f64,
    /// Per tuple written, row-level codecs (NS, GDICT).
    pub alpha_row: f64,
    pub alpha_page: f64,
    /// Per tuple and column read, row-level codecs.
    pub beta_row: f64,
    pub beta_page: f64,
    /// Per index (and heap) per tuple inserted.
    pub maintenance: f64,
}

impl Default for CostModelParams {
    fn default() -> Self {
        Self {
            io_page_cost: 1.0,
            cpu_tuple_cost: 0.001,
            lookup_cost: 0.02,
            alpha_row: 0.002,
            alpha_page: 0.01,
            beta_row: 0.0002,
            beta_page: 0.001,
            maintenance: 0.002,
        }
    }
}

impl CostModelParams {
    pub fn validate(&self) -> Result<(), CostError> {
        let all = [
            ("io_page_cost", self.io_page_cost),
            ("cpu_tuple_cost", self.cpu_tuple_cost),
            ("lookup_cost", self.lookup_cost),
            ("alpha_row", self.alpha_row),
            ("alpha_page", self.alpha_page),
            ("beta_row", self.beta_row),
            ("beta_page", self.beta_page),
            ("maintenance", self.maintenance),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CostError::InvalidParams(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        if self.alpha_page < self.alpha_row {
            return Err(CostError::InvalidParams("alpha_page must be >= alpha_row".into()));
        }
        if self.beta_page < self.beta_row {
            return Err(CostError::InvalidParams("beta_page must be >= beta_row".into()));
        }
        Ok(())
    }

    pub fn alpha(&self, m: CompressionMethod) -> f64 {
        match m {
            CompressionMethod::None => 0.0,
            CompressionMethod::Ns | CompressionMethod::GlobalDict => self.alpha_row,
            CompressionMethod::Page => self.alpha_page,
        }
    }

    pub fn beta(&self, m: CompressionMethod) -> f64 {
        match m {
            CompressionMethod::None => 0.0,
            CompressionMethod::Ns | CompressionMethod::GlobalDict => self.beta_row,
            CompressionMethod::Page => self.beta_page,
        }
    }
}

/// An index of a configuration together with its size estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfiguredIndex {
    pub def: IndexDef,
    pub estimate: SizeEstimate,
}

impl ConfiguredIndex {
    pub fn new(def: IndexDef, estimate: SizeEstimate) -> Self {
        Self { def, estimate }
    }

    pub fn pages(&self) -> f64 {
        self.estimate.pages
    }
}

/// A set of hypothetical indexes, at most one clustered per table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    indexes: Vec<ConfiguredIndex>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_indexes(indexes: impl IntoIterator<Item = ConfiguredIndex>) -> Result<Self, CostError> {
        let mut c = Self::new();
        for i in indexes {
            c.add(i)?;
        }
        Ok(c)
    }

    pub fn add(&mut self, index: ConfiguredIndex) -> Result<(), CostError> {
        if index.def.clustered && !self.accepts_clustered(&index.def.table) {
            return Err(CostError::DuplicateClustered(index.def.table.clone()));
        }
        self.indexes.push(index);
        Ok(())
    }

    /// False when `table` already has a clustered index here.
    pub fn accepts_clustered(&self, table: &str) -> bool {
        !self.indexes.iter().any(|i| i.def.clustered && i.def.table == table)
    }

    pub fn indexes(&self) -> &[ConfiguredIndex] {
        &self.indexes
    }

    pub fn len(&self) -> usize {
        self.indexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indexes.is_empty()
    }

    pub fn total_pages(&self) -> f64 {
        self.indexes.iter().map(ConfiguredIndex::pages).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "path", rename_all = "snake_case")]
pub enum AccessPath {
    HeapScan,
    /// Seek on a key prefix, fetching every match from the heap.
    IndexRangeScan { index: String },
    /// Index-only access, with or without a key-prefix seek.
    CoveringIndexScan { index: String, seek: bool },
    /// Heap insert plus maintenance of every index on the table.
    Insert { indexes: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostedPlan {
    #[serde(flatten)]
    pub path: AccessPath,
    pub io_cost: f64,
    pub cpu_cost: f64,
    pub total: f64,
}

impl CostedPlan {
    fn new(path: AccessPath, io_cost: f64, cpu_cost: f64) -> Self {
        Self {
            path,
            io_cost,
            cpu_cost,
            total: io_cost + cpu_cost,
        }
    }
}

fn predicate_selectivity(p: &Predicate, ctx: &EstimationContext, table: &str) -> Result<f64, CostError> {
    let info = ctx.info(table)?;
    let ty = info
        .schema
        .iter()
        .find(|c| c.name == p.column)
        .ok_or_else(|| DataError::UnknownColumn(p.column.clone()))?
        .ty;
    let cs = info.stats.column(&p.column)?;
    let range = p.range(ty)?;
    Ok(range.uniform_fraction(&cs.min, &cs.max, cs.distinct_count) * (1.0 - cs.null_fraction))
}

/// Combined selectivity of all predicates of `stmt`.
pub fn selectivity(stmt: &SelectStatement, ctx: &EstimationContext) -> Result<f64, CostError> {
    let mut s = 1.0;
    for p in &stmt.predicates {
        s *= predicate_selectivity(p, ctx, &stmt.table)?;
    }
    Ok(s)
}

/// Heap pages of an uncompressed table.
pub fn heap_pages(table: &str, ctx: &EstimationContext) -> Result<f64, CostError> {
    let info = ctx.info(table)?;
    let width: usize = info.schema.iter().map(|c| c.ty.width()).sum();
    let per_page = rows_per_page(width)? as f64;
    Ok((info.rows as f64 / per_page).ceil())
}

/// Predicates usable by a seek on `keys`: equalities on a key prefix, then
/// at most one range predicate on the next key.
fn seek_predicates<'a>(stmt: &'a SelectStatement, keys: &[String]) -> Vec<&'a Predicate> {
    let mut out = Vec::new();
    for k in keys {
        let on_key: Vec<&Predicate> = stmt.predicates.iter().filter(|p| &p.column == k).collect();
        if let Some(eq) = on_key.iter().find(|p| p.is_equality()) {
            out.push(*eq);
            continue;
        }
        out.extend(on_key);
        break;
    }
    out
}

/// True when a partial index's filter admits every row the statement wants.
fn filter_applies(def: &IndexDef, stmt: &SelectStatement, ctx: &EstimationContext) -> Result<bool, CostError> {
    let Some(filter) = &def.filter else { return Ok(true) };
    let info = ctx.info(&def.table)?;
    let Some(col) = info.schema.iter().find(|c| c.name == filter.column) else {
        return Err(DataError::UnknownColumn(filter.column.clone()).into());
    };
    let outer = filter.range(col.ty)?;
    for p in stmt.predicates.iter().filter(|p| p.column == filter.column) {
        if p.range(col.ty)?.within(&outer) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Cost of answering a SELECT from the heap (`index` = None) or from one
/// index. Returns None when the index cannot answer the statement.
pub fn read_cost(
    stmt: &Statement,
    index: Option<&ConfiguredIndex>,
    ctx: &EstimationContext,
    params: &CostModelParams,
) -> Result<Option<CostedPlan>, CostError> {
    let Statement::Select(sel) = stmt else {
        return Err(CostError::WrongKind { expected: "SELECT" });
    };
    let info = ctx.info(&sel.table)?;
    let table_rows = info.rows as f64;
    let Some(ix) = index else {
        let pages = heap_pages(&sel.table, ctx)?;
        return Ok(Some(CostedPlan::new(
            AccessPath::HeapScan,
            pages * params.io_page_cost,
            table_rows * params.cpu_tuple_cost,
        )));
    };
    let def = &ix.def;
    if def.table != sel.table {
        return Err(CostError::TableMismatch {
            statement: sel.table.clone(),
            index: def.table.clone(),
        });
    }
    if !filter_applies(def, sel, ctx)? {
        return Ok(None);
    }
    let stored: BTreeSet<String> = def.stored_columns(&info.schema).into_iter().collect();
    let referenced = sel.referenced_columns();
    let covering = referenced.iter().all(|c| stored.contains(c));
    let seek = seek_predicates(sel, &def.keys);
    if !covering && seek.is_empty() {
        return Ok(None);
    }
    let index_rows = ctx.index_rows(def)? as f64;
    let fraction = if seek.is_empty() || index_rows == 0.0 {
        1.0
    } else {
        let mut s = 1.0;
        for p in &seek {
            s *= predicate_selectivity(p, ctx, &sel.table)?;
        }
        (table_rows * s / index_rows).min(1.0)
    };
    let pages = ix.pages() * fraction;
    let tuples = index_rows * fraction;
    let columns_read = referenced.iter().filter(|c| stored.contains(*c)).count() as f64;
    let mut cpu = tuples * params.cpu_tuple_cost + params.beta(def.method) * tuples * columns_read;
    let path = if covering {
        AccessPath::CoveringIndexScan {
            index: def.id(),
            seek: !seek.is_empty(),
        }
    } else {
        cpu += params.lookup_cost * table_rows * selectivity(sel, ctx)?;
        AccessPath::IndexRangeScan { index: def.id() }
    };
    Ok(Some(CostedPlan::new(path, pages * params.io_page_cost, cpu)))
}

/// Maintenance cost one INSERT statement puts on one index.
pub fn update_cost(
    stmt: &Statement,
    index: &ConfiguredIndex,
    ctx: &EstimationContext,
    params: &CostModelParams,
) -> Result<f64, CostError> {
    let Statement::Insert(ins) = stmt else {
        return Err(CostError::WrongKind { expected: "INSERT" });
    };
    if index.def.table != ins.table {
        return Err(CostError::TableMismatch {
            statement: ins.table.clone(),
            index: index.def.table.clone(),
        });
    }
    let info = ctx.info(&ins.table)?;
    let share = if index.def.filter.is_some() && info.rows > 0 {
        ctx.index_rows(&index.def)? as f64 / info.rows as f64
    } else {
        1.0
    };
    let written = ins.rows_per_exec as f64 * share;
    Ok((params.maintenance + params.alpha(index.def.method)) * written)
}

/// Cheapest way to run `stmt` under `config`. Ties keep the earlier path,
/// heap first, then configuration order.
pub fn best_plan(
    stmt: &Statement,
    config: &Configuration,
    ctx: &EstimationContext,
    params: &CostModelParams,
) -> Result<CostedPlan, CostError> {
    match stmt {
        Statement::Select(sel) => {
            let mut best = read_cost(stmt, None, ctx, params)?.expect("heap scan always applies");
            for ix in config.indexes().iter().filter(|i| i.def.table == sel.table) {
                if let Some(p) = read_cost(stmt, Some(ix), ctx, params)? {
                    if p.total < best.total {
                        best = p;
                    }
                }
            }
            Ok(best)
        }
        Statement::Insert(ins) => {
            ctx.info(&ins.table)?;
            let mut cpu = params.maintenance * ins.rows_per_exec as f64;
            let mut n = 0;
            for ix in config.indexes().iter().filter(|i| i.def.table == ins.table) {
                cpu += update_cost(stmt, ix, ctx, params)?;
                n += 1;
            }
            Ok(CostedPlan::new(AccessPath::Insert { indexes: n }, 0.0, cpu))
        }
    }
}

/// Weighted sum of the best plan costs.
pub fn workload_cost(
    workload: &[Statement],
    config: &Configuration,
    ctx: &EstimationContext,
    params: &CostModelParams,
) -> Result<f64, CostError> {
    let mut total = 0.0;
    for s in workload {
        let w = s.weight();
        if w != 0.0 {
            total += w * best_plan(s, config, ctx, params)?.total;
        }
    }
    Ok(total)
}
