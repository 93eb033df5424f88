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

//! Samples of grouped views and the estimate of their row counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{ColumnDef, ColumnType, Predicate, Table};

use super::base::{Sample, LOW_CONFIDENCE_ROWS};
use super::distinct::{AdaptiveEstimator, DistinctEstimator, FrequencyStats};
use super::join::JoinSynopsis;
use super::SamplingError;

/// A grouped view: `SELECT project, COUNT(*) FROM source WHERE filters
/// GROUP BY group_by`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MvDef {
    #[serde(default)]
    pub project: Vec<String>,
    #[serde(default)]
    pub filters: Vec<Predicate>,
    pub group_by: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
pub enum MvSource<'a> {
    Sample(&'a Sample),
    Synopsis(&'a JoinSynopsis),
}

impl MvSource<'_> {
    fn rows(&self) -> &Table {
        match self {
            MvSource::Sample(s) => &s.rows,
            MvSource::Synopsis(s) => &s.rows,
        }
    }

    fn root_rows(&self) -> usize {
        match self {
            MvSource::Sample(s) => s.source_rows,
            MvSource::Synopsis(s) => s.fact_rows,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MvSample {
    /// Group-by columns plus a `count` column.
    pub rows: Table,
    pub stats: FrequencyStats,
    pub estimated_tuples: u64,
    pub low_confidence: bool,
}

pub const COUNT_COLUMN: &str = "count";

/// Groups the sample, derives its frequency profile and estimates the
/// view's row count with the default estimator.
pub fn create_mv_sample(source: MvSource<'_>, mv: &MvDef) -> Result<MvSample, SamplingError> {
    create_mv_sample_with(source, mv, &AdaptiveEstimator)
}

pub fn create_mv_sample_with(
    source: MvSource<'_>,
    mv: &MvDef,
    estimator: &dyn DistinctEstimator,
) -> Result<MvSample, SamplingError> {
    let t = source.rows();
    for c in &mv.project {
        t.column_index(c)?;
    }
    let group: Vec<usize> = mv
        .group_by
        .iter()
        .map(|c| t.column_index(c))
        .collect::<Result<_, _>>()?;
    let filters = mv
        .filters
        .iter()
        .map(|p| p.bind(t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut groups: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    let mut key = Vec::new();
    for r in (0..t.rows()).filter(|&r| filters.iter().all(|p| p.eval(t, r))) {
        t.row_key(&group, r, &mut key);
        *groups.entry(key.clone()).or_insert(0) += 1;
    }

    let r: u64 = groups.values().sum();
    let filter_factor = if t.rows() == 0 { 0.0 } else { r as f64 / t.rows() as f64 };
    let n = ((source.root_rows() as f64 * filter_factor).round() as u64).max(r);
    let stats = FrequencyStats::from_counts(groups.values().copied(), n)?;
    let estimated_tuples = estimator.estimate(&stats)?;

    let mut columns: Vec<ColumnDef> = group.iter().map(|&c| t.columns()[c].clone()).collect();
    columns.push(ColumnDef::new(COUNT_COLUMN, ColumnType::Int64));
    let mut data = vec![Vec::new(); columns.len()];
    for (k, &count) in &groups {
        let mut off = 0;
        for (i, &c) in group.iter().enumerate() {
            let w = t.column_type(c).width();
            data[i].extend_from_slice(&k[off..off + w]);
            off += w;
        }
        data[group.len()].extend_from_slice(&(count as i64).to_be_bytes());
    }
    Ok(MvSample {
        rows: Table::from_columns(format!("{}_mv", t.name()), columns, data)?,
        stats,
        estimated_tuples,
        low_confidence: (r as usize) < LOW_CONFIDENCE_ROWS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_synthetic, CmpOp, Literal, SyntheticColumn, SyntheticSpec};
    use crate::sampling::build_base_sample;

    fn table() -> Table {
        generate_synthetic(&SyntheticSpec {
            name: "t".into(),
            rows: 20_000,
            seed: 5,
            columns: vec![
                SyntheticColumn::new("id", ColumnType::Int64, 1_000_000),
                SyntheticColumn::new("g", ColumnType::Int64, 50),
                SyntheticColumn::new("c", ColumnType::Int64, 1),
            ],
        })
        .unwrap()
    }

    #[test]
    fn grouping_counts() {
        let t = table();
        let s = build_base_sample(&t, 1.0, 0).unwrap();
        let mv = MvDef {
            group_by: vec!["g".into()],
            ..Default::default()
        };
        let m = create_mv_sample(MvSource::Sample(&s), &mv).unwrap();
        assert_eq!(m.stats.r, 20_000);
        assert_eq!(m.estimated_tuples, 50);
        assert_eq!(m.rows.rows(), 50);
    }

    #[test]
    fn constant_column_estimates_one() {
        let t = table();
        let s = build_base_sample(&t, 0.05, 2).unwrap();
        let mv = MvDef {
            group_by: vec!["c".into()],
            ..Default::default()
        };
        assert_eq!(create_mv_sample(MvSource::Sample(&s), &mv).unwrap().estimated_tuples, 1);
    }

    #[test]
    fn key_grouping_is_all_singletons() {
        let t = table();
        let s = build_base_sample(&t, 0.05, 2).unwrap();
        let mv = MvDef {
            group_by: vec!["id".into()],
            ..Default::default()
        };
        let m = create_mv_sample(MvSource::Sample(&s), &mv).unwrap();
        assert!(m.stats.d as f64 > 0.98 * m.stats.r as f64);
        assert!(m.estimated_tuples > 10 * m.stats.d);
    }

    #[test]
    fn empty_after_filter() {
        let t = table();
        let s = build_base_sample(&t, 0.05, 2).unwrap();
        let mv = MvDef {
            filters: vec![Predicate::new("g", CmpOp::Gt, Literal::Int(1000))],
            group_by: vec!["g".into()],
            ..Default::default()
        };
        let m = create_mv_sample(MvSource::Sample(&s), &mv).unwrap();
        assert_eq!(m.estimated_tuples, 0);
        assert!(m.low_confidence);
    }
}
