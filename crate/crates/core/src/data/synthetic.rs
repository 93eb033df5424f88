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

//! Seeded synthetic tables with Zipf-skewed columns.
//!
//! Each column draws a rank `k` in `[0, domain)` with probability
//! proportional to `1 / (k + 1)^z` (inverse CDF over precomputed cumulative
//! weights), then maps the rank to a value of the column type. Columns get
//! independent [`SplitMix64`] sub-streams forked from the table seed, so a
//! spec (seed included) determines the table bit for bit.

use serde::{Deserialize, Serialize};

use super::value::ColumnType;
use super::{ColumnDef, DataError, Table};
use crate::rng::SplitMix64;

/// Day number of 1992-01-01, the first generated date.
const DATE_BASE: i64 = 8035;

/// Makes a column follow another one: with probability `strength` the rank
/// is copied from `source` (modulo this column's domain) instead of drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub source: String,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticColumn {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: ColumnType,
    pub domain: u64,
    #[serde(default)]
    pub zipf: f64,
    #[serde(default)]
    pub null_fraction: f64,
    /// Leading bytes shared by every non-NULL value.
    #[serde(default)]
    pub prefix_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlate: Option<Correlation>,
}

impl SyntheticColumn {
    pub fn new(name: impl Into<String>, ty: ColumnType, domain: u64) -> Self {
        Self {
            name: name.into(),
            ty,
            domain,
            zipf: 0.0,
            null_fraction: 0.0,
            prefix_len: 0,
            correlate: None,
        }
    }

    pub fn zipf(mut self, z: f64) -> Self {
        self.zipf = z;
        self
    }

    pub fn nulls(mut self, fraction: f64) -> Self {
        self.null_fraction = fraction;
        self
    }

    pub fn prefix(mut self, len: usize) -> Self {
        self.prefix_len = len;
        self
    }

    pub fn correlated_with(mut self, source: impl Into<String>, strength: f64) -> Self {
        self.correlate = Some(Correlation {
            source: source.into(),
            strength,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub name: String,
    pub rows: usize,
    #[serde(default)]
    pub seed: u64,
    pub columns: Vec<SyntheticColumn>,
}

fn invalid(msg: impl Into<String>) -> DataError {
    DataError::InvalidSpec(msg.into())
}

/// Number of base-26 letters needed to spell every rank below `domain`.
fn letters_needed(domain: u64) -> usize {
    let mut n = 1;
    let mut cap: u64 = 26;
    while cap < domain {
        n += 1;
        cap = cap.saturating_mul(26);
    }
    n
}

struct ColumnPlan {
    cumulative: Vec<f64>,
    source: Option<(usize, f64)>,
}

impl ColumnPlan {
    fn draw(&self, rng: &mut SplitMix64) -> u64 {
        let u = rng.next_f64() * self.cumulative[self.cumulative.len() - 1];
        self.cumulative.partition_point(|&c| c <= u) as u64
    }
}

fn validate(spec: &SyntheticSpec) -> Result<Vec<ColumnPlan>, DataError> {
    let mut names = std::collections::HashSet::new();
    let mut plans = Vec::with_capacity(spec.columns.len());
    for (i, c) in spec.columns.iter().enumerate() {
        if !names.insert(c.name.as_str()) {
            return Err(DataError::DuplicateColumn(c.name.clone()));
        }
        if c.domain == 0 {
            return Err(invalid(format!("column '{}': domain size must be >= 1", c.name)));
        }
        if !c.zipf.is_finite() || c.zipf < 0.0 {
            return Err(invalid(format!("column '{}': zipf exponent must be >= 0", c.name)));
        }
        if !(0.0..=1.0).contains(&c.null_fraction) {
            return Err(invalid(format!("column '{}': null fraction outside [0,1]", c.name)));
        }
        match c.ty {
            ColumnType::Char(n) => {
                let need = c.prefix_len + letters_needed(c.domain);
                if need > n as usize {
                    return Err(invalid(format!(
                        "column '{}': prefix {} plus {} rank letters exceed char({n})",
                        c.name,
                        c.prefix_len,
                        letters_needed(c.domain)
                    )));
                }
            }
            ColumnType::Int64 => {
                if c.prefix_len >= 8 {
                    return Err(invalid(format!("column '{}': int prefix must be < 8", c.name)));
                }
                let free_bits = 8 * (8 - c.prefix_len) as u32;
                if free_bits < 64 && c.domain >= (1u64 << free_bits.min(63)) {
                    return Err(invalid(format!("column '{}': domain does not fit below the prefix", c.name)));
                }
            }
            ColumnType::Date => {
                if c.prefix_len > 0 {
                    return Err(invalid(format!("column '{}': dates take no prefix", c.name)));
                }
            }
        }
        let source = match &c.correlate {
            None => None,
            Some(corr) => {
                let pos = spec.columns[..i]
                    .iter()
                    .position(|s| s.name == corr.source)
                    .ok_or_else(|| {
                        invalid(format!(
                            "column '{}': correlation source '{}' must be an earlier column",
                            c.name, corr.source
                        ))
                    })?;
                if !(0.0..=1.0).contains(&corr.strength) {
                    return Err(invalid(format!("column '{}': strength outside [0,1]", c.name)));
                }
                Some((pos, corr.strength))
            }
        };
        let mut acc = 0.0;
        let cumulative = (0..c.domain)
            .map(|k| {
                acc += ((k + 1) as f64).powf(-c.zipf);
                acc
            })
            .collect();
        plans.push(ColumnPlan { cumulative, source });
    }
    Ok(plans)
}

fn encode_rank(c: &SyntheticColumn, rank: u64, out: &mut Vec<u8>) {
    match c.ty {
        ColumnType::Int64 => {
            let mut v = rank + 1;
            if c.prefix_len > 0 {
                let shift = 8 * (8 - c.prefix_len);
                // 0x5A in every prefix byte
                let pattern = u64::from_be_bytes([0x5A; 8]);
                v |= pattern << shift;
            }
            out.extend_from_slice(&v.to_be_bytes());
        }
        ColumnType::Date => out.extend_from_slice(&(DATE_BASE + rank as i64).to_be_bytes()),
        ColumnType::Char(n) => {
            let start = out.len();
            out.extend((0..c.prefix_len).map(|i| b'a' + (i % 26) as u8));
            let digits = letters_needed(c.domain);
            let mut buf = vec![b'A'; digits];
            let mut r = rank;
            for slot in buf.iter_mut().rev() {
                *slot = b'A' + (r % 26) as u8;
                r /= 26;
            }
            out.extend_from_slice(&buf);
            out.resize(start + n as usize, 0);
        }
    }
}

/// Generates the table described by `spec`.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Table, DataError> {
    let plans = validate(spec)?;
    let root = SplitMix64::new(spec.seed);
    let mut ranks: Vec<Vec<u64>> = Vec::with_capacity(spec.columns.len());
    let mut data = Vec::with_capacity(spec.columns.len());
    for (i, (c, plan)) in spec.columns.iter().zip(&plans).enumerate() {
        let mut rng = root.fork(i as u64);
        let mut col_ranks = Vec::with_capacity(spec.rows);
        let mut bytes = Vec::with_capacity(spec.rows * c.ty.width());
        for row in 0..spec.rows {
            let null = rng.next_f64() < c.null_fraction;
            let mut rank = plan.draw(&mut rng);
            if let Some((src, strength)) = plan.source {
                if rng.next_f64() < strength {
                    rank = ranks[src][row] % c.domain;
                }
            }
            col_ranks.push(rank);
            if null {
                bytes.extend(std::iter::repeat_n(0, c.ty.width()));
            } else {
                encode_rank(c, rank, &mut bytes);
            }
        }
        ranks.push(col_ranks);
        data.push(bytes);
    }
    let columns = spec
        .columns
        .iter()
        .map(|c| ColumnDef::new(c.name.clone(), c.ty))
        .collect();
    Table::from_columns(spec.name.clone(), columns, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn one(col: SyntheticColumn, rows: usize, seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            name: "t".into(),
            rows,
            seed,
            columns: vec![col],
        }
    }

    fn histogram(t: &Table, col: usize) -> HashMap<Vec<u8>, usize> {
        let mut h = HashMap::new();
        for r in 0..t.rows() {
            *h.entry(t.value(col, r).to_vec()).or_insert(0) += 1;
        }
        h
    }

    #[test]
    fn uniform_covers_domain() {
        let t = generate_synthetic(&one(
            SyntheticColumn::new("a", ColumnType::Int64, 100),
            10_000,
            42,
        ))
        .unwrap();
        assert_eq!(histogram(&t, 0).len(), 100);
    }

    #[test]
    fn extreme_skew_concentrates() {
        let t = generate_synthetic(&one(
            SyntheticColumn::new("a", ColumnType::Int64, 100).zipf(20.0),
            10_000,
            42,
        ))
        .unwrap();
        let top = *histogram(&t, 0).values().max().unwrap();
        assert!(top as f64 > 0.99 * 10_000.0, "{top}");
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = one(
            SyntheticColumn::new("a", ColumnType::Char(6), 500).zipf(1.0).prefix(2),
            2000,
            9,
        );
        assert_eq!(generate_synthetic(&spec).unwrap(), generate_synthetic(&spec).unwrap());
        let mut other = spec.clone();
        other.seed = 10;
        assert_ne!(generate_synthetic(&spec).unwrap(), generate_synthetic(&other).unwrap());
    }

    #[test]
    fn null_fraction_realized() {
        let t = generate_synthetic(&one(
            SyntheticColumn::new("a", ColumnType::Int64, 50).nulls(0.2),
            20_000,
            5,
        ))
        .unwrap();
        let nulls = (0..t.rows())
            .filter(|&r| crate::data::value::is_null(t.value(0, r)))
            .count();
        let frac = nulls as f64 / t.rows() as f64;
        assert!((frac - 0.2).abs() < 0.01, "{frac}");
    }

    #[test]
    fn char_prefix_is_shared() {
        let t = generate_synthetic(&one(
            SyntheticColumn::new("a", ColumnType::Char(8), 1000).prefix(3),
            100,
            1,
        ))
        .unwrap();
        for r in 0..t.rows() {
            assert_eq!(&t.value(0, r)[..3], b"abc");
        }
    }

    #[test]
    fn full_correlation_is_functional() {
        let spec = SyntheticSpec {
            name: "t".into(),
            rows: 5000,
            seed: 3,
            columns: vec![
                SyntheticColumn::new("a", ColumnType::Int64, 40),
                SyntheticColumn::new("b", ColumnType::Int64, 10).correlated_with("a", 1.0),
            ],
        };
        let t = generate_synthetic(&spec).unwrap();
        let mut map = HashMap::new();
        for r in 0..t.rows() {
            let prev = map.insert(t.value(0, r).to_vec(), t.value(1, r).to_vec());
            if let Some(p) = prev {
                assert_eq!(p, t.value(1, r));
            }
        }
    }

    #[test]
    fn invalid_specs() {
        let zero = one(SyntheticColumn::new("a", ColumnType::Int64, 0), 10, 1);
        assert!(matches!(generate_synthetic(&zero), Err(DataError::InvalidSpec(_))));
        let neg = one(SyntheticColumn::new("a", ColumnType::Int64, 5).zipf(-1.0), 10, 1);
        assert!(matches!(generate_synthetic(&neg), Err(DataError::InvalidSpec(_))));
        let narrow = one(SyntheticColumn::new("a", ColumnType::Char(2), 1000), 10, 1);
        assert!(generate_synthetic(&narrow).is_err());
    }
}
