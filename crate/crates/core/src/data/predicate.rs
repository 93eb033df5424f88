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

//! Single-column comparison predicates used by partial indexes, filtered
//! samples and workload statements.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Bound;

use serde::{Deserialize, Serialize};

use super::value::{self, ColumnType, Literal};
use super::{DataError, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    #[serde(rename = "<", alias = "lt")]
    Lt,
    #[serde(rename = "<=", alias = "le")]
    Le,
    #[serde(rename = "=", alias = "eq")]
    Eq,
    #[serde(rename = ">=", alias = "ge")]
    Ge,
    #[serde(rename = ">", alias = "gt")]
    Gt,
    #[serde(rename = "between", alias = "BETWEEN")]
    Between,
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
            CmpOp::Between => "BETWEEN",
        })
    }
}

/// `column op lo [AND hi]`. `hi` is only read for `BETWEEN` (inclusive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub column: String,
    pub op: CmpOp,
    pub lo: Literal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<Literal>,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.op, &self.hi) {
            (CmpOp::Between, Some(hi)) => {
                write!(f, "{} BETWEEN {} AND {}", self.column, self.lo, hi)
            }
            _ => write!(f, "{} {} {}", self.column, self.op, self.lo),
        }
    }
}

impl Predicate {
    pub fn new(column: impl Into<String>, op: CmpOp, lo: Literal) -> Self {
        Self {
            column: column.into(),
            op,
            lo,
            hi: None,
        }
    }

    pub fn between(column: impl Into<String>, lo: Literal, hi: Literal) -> Self {
        Self {
            column: column.into(),
            op: CmpOp::Between,
            lo,
            hi: Some(hi),
        }
    }

    pub fn is_equality(&self) -> bool {
        self.op == CmpOp::Eq
    }

    /// Resolves the column and encodes the constants against `table`'s schema.
    pub fn bind(&self, table: &Table) -> Result<BoundPredicate, DataError> {
        let col = table.column_index(&self.column)?;
        let ty = table.column_type(col);
        Ok(BoundPredicate {
            column: col,
            ty,
            range: self.range(ty)?,
        })
    }

    /// The value interval this predicate admits, for a column of type `ty`.
    pub fn range(&self, ty: ColumnType) -> Result<ValueRange, DataError> {
        let enc = |lit: &Literal| {
            value::encode_literal(ty, lit).map_err(|message| DataError::Predicate {
                column: self.column.clone(),
                message,
            })
        };
        let lo = enc(&self.lo)?;
        let (lo, hi) = match self.op {
            CmpOp::Lt => (Bound::Unbounded, Bound::Excluded(lo)),
            CmpOp::Le => (Bound::Unbounded, Bound::Included(lo)),
            CmpOp::Eq => (Bound::Included(lo.clone()), Bound::Included(lo)),
            CmpOp::Ge => (Bound::Included(lo), Bound::Unbounded),
            CmpOp::Gt => (Bound::Excluded(lo), Bound::Unbounded),
            CmpOp::Between => {
                let hi = self.hi.as_ref().ok_or_else(|| DataError::Predicate {
                    column: self.column.clone(),
                    message: "BETWEEN needs an upper constant".into(),
                })?;
                (Bound::Included(lo), Bound::Included(enc(hi)?))
            }
        };
        Ok(ValueRange { ty, lo, hi })
    }
}

/// Interval of encoded values under the column type's ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueRange {
    pub ty: ColumnType,
    pub lo: Bound<Vec<u8>>,
    pub hi: Bound<Vec<u8>>,
}

impl ValueRange {
    pub fn contains(&self, v: &[u8]) -> bool {
        let ok_lo = match &self.lo {
            Bound::Unbounded => true,
            Bound::Included(b) => value::compare(self.ty, v, b) != Ordering::Less,
            Bound::Excluded(b) => value::compare(self.ty, v, b) == Ordering::Greater,
        };
        ok_lo
            && match &self.hi {
                Bound::Unbounded => true,
                Bound::Included(b) => value::compare(self.ty, v, b) != Ordering::Greater,
                Bound::Excluded(b) => value::compare(self.ty, v, b) == Ordering::Less,
            }
    }

    /// True when every value admitted by `self` is admitted by `outer`.
    pub fn within(&self, outer: &ValueRange) -> bool {
        let lo_ok = match (&outer.lo, &self.lo) {
            (Bound::Unbounded, _) => true,
            (_, Bound::Unbounded) => false,
            (Bound::Included(o), Bound::Included(s) | Bound::Excluded(s)) => {
                value::compare(self.ty, s, o) != Ordering::Less
            }
            (Bound::Excluded(o), Bound::Included(s)) => {
                value::compare(self.ty, s, o) == Ordering::Greater
            }
            (Bound::Excluded(o), Bound::Excluded(s)) => {
                value::compare(self.ty, s, o) != Ordering::Less
            }
        };
        let hi_ok = match (&outer.hi, &self.hi) {
            (Bound::Unbounded, _) => true,
            (_, Bound::Unbounded) => false,
            (Bound::Included(o), Bound::Included(s) | Bound::Excluded(s)) => {
                value::compare(self.ty, s, o) != Ordering::Greater
            }
            (Bound::Excluded(o), Bound::Included(s)) => {
                value::compare(self.ty, s, o) == Ordering::Less
            }
            (Bound::Excluded(o), Bound::Excluded(s)) => {
                value::compare(self.ty, s, o) != Ordering::Greater
            }
        };
        lo_ok && hi_ok
    }

    /// Fraction of `[min, max]` covered, assuming values spread uniformly.
    pub fn uniform_fraction(&self, min: &[u8], max: &[u8], distinct: u64) -> f64 {
        if let (Bound::Included(a), Bound::Included(b)) = (&self.lo, &self.hi) {
            if a == b {
                return if self.contains(a)
                    && value::compare(self.ty, a, min) != Ordering::Less
                    && value::compare(self.ty, a, max) != Ordering::Greater
                {
                    1.0 / distinct.max(1) as f64
                } else {
                    0.0
                };
            }
        }
        let lo_v = value::ordinal(self.ty, min);
        let hi_v = value::ordinal(self.ty, max);
        if hi_v <= lo_v {
            return if self.contains(min) { 1.0 } else { 0.0 };
        }
        let a = match &self.lo {
            Bound::Unbounded => lo_v,
            Bound::Included(b) | Bound::Excluded(b) => value::ordinal(self.ty, b).max(lo_v),
        };
        let b = match &self.hi {
            Bound::Unbounded => hi_v,
            Bound::Included(b) | Bound::Excluded(b) => value::ordinal(self.ty, b).min(hi_v),
        };
        // one distinct value's worth of width so that closed ranges over a
        // discrete domain are not undercounted
        let step = (hi_v - lo_v) / distinct.max(1) as f64;
        (((b - a) + step) / ((hi_v - lo_v) + step)).clamp(0.0, 1.0)
    }
}

/// A predicate resolved against a schema.
#[derive(Debug, Clone)]
pub struct BoundPredicate {
    pub column: usize,
    pub ty: ColumnType,
    pub range: ValueRange,
}

impl BoundPredicate {
    /// NULL never satisfies a comparison.
    pub fn eval(&self, table: &Table, row: usize) -> bool {
        let v = table.value(self.column, row);
        !value::is_null(v) && self.range.contains(v)
    }

    /// Row positions satisfying the predicate, in table order.
    pub fn matching_rows(&self, table: &Table) -> Vec<usize> {
        (0..table.rows()).filter(|&r| self.eval(table, r)).collect()
    }
}
