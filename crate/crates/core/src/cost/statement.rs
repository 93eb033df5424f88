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


use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::CostError;
use crate::data::Predicate;
use crate::estimate::EstimationContext;

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectStatement {
    pub table: String,
    #[serde(default)]
    pub predicates: Vec<Predicate>,
    /// Projected columns.
    #[serde(default)]
    pub columns: Vec<String>,
    /// Aggregated columns.
    #[serde(default)]
    pub aggregate: Vec<String>,
    #[serde(default = "one")]
    pub weight: f64,
}

impl SelectStatement {
    pub fn new(table: impl Into<String>) -> Self {
        Self {
            table: table.into(),
            predicates: Vec::new(),
            columns: Vec::new(),
            aggregate: Vec::new(),
            weight: 1.0,
        }
    }

    pub fn filter(mut self, p: Predicate) -> Self {
        self.predicates.push(p);
        self
    }

    pub fn project<S: Into<String>>(mut self, cols: impl IntoIterator<Item = S>) -> Self {
        self.columns.extend(cols.into_iter().map(Into::into));
        self
    }

    pub fn aggregate<S: Into<String>>(mut self, cols: impl IntoIterator<Item = S>) -> Self {
        self.aggregate.extend(cols.into_iter().map(Into::into));
        self
    }

    pub fn weight(mut self, w: f64) -> Self {
        self.weight = w;
        self
    }

    /// Every column projected, predicated or aggregated, once each.
    pub fn referenced_columns(&self) -> BTreeSet<String> {
        self.columns
            .iter()
            .chain(&self.aggregate)
            .cloned()
            .chain(self.predicates.iter().map(|p| p.column.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InsertStatement {
    pub table: String,
    pub rows_per_exec: u64,
    #[serde(default = "one")]
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE")]
pub enum Statement {
    Select(SelectStatement),
    Insert(InsertStatement),
}

impl From<SelectStatement> for Statement {
    fn from(s: SelectStatement) -> Self {
        Statement::Select(s)
    }
}

impl From<InsertStatement> for Statement {
    fn from(s: InsertStatement) -> Self {
        Statement::Insert(s)
    }
}

impl Statement {
    pub fn insert(table: impl Into<String>, rows_per_exec: u64) -> Self {
        Statement::Insert(InsertStatement {
            table: table.into(),
            rows_per_exec,
            weight: 1.0,
        })
    }

    pub fn table(&self) -> &str {
        match self {
            Statement::Select(s) => &s.table,
            Statement::Insert(s) => &s.table,
        }
    }

    pub fn weight(&self) -> f64 {
        match self {
            Statement::Select(s) => s.weight,
            Statement::Insert(s) => s.weight,
        }
    }

    pub fn with_weight(mut self, w: f64) -> Self {
        match &mut self {
            Statement::Select(s) => s.weight = w,
            Statement::Insert(s) => s.weight = w,
        }
        self
    }

    /// Checks the weight and that every referenced column exists.
    pub fn validate(&self, ctx: &EstimationContext) -> Result<(), CostError> {
        let w = self.weight();
        if !(w.is_finite() && w >= 0.0) {
            return Err(CostError::InvalidStatement(format!("weight {w} must be >= 0")));
        }
        let info = ctx.info(self.table())?;
        if let Statement::Select(s) = self {
            for c in s.referenced_columns() {
                let Some(col) = info.schema.iter().find(|d| d.name == c) else {
                    return Err(CostError::InvalidStatement(format!(
                        "unknown column '{c}' on table '{}'",
                        s.table
                    )));
                };
                for p in s.predicates.iter().filter(|p| p.column == c) {
                    p.range(col.ty)?;
                }
            }
        }
        Ok(())
    }
}
