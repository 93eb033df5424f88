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

//! Compressed-size estimation: sampling, deductions between related
//! indexes, error propagation, and planning which sizes to sample.

mod context;
mod deduce;
mod error;
mod execute;
mod graph;
mod plan;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compression::CompressionError;
use crate::data::DataError;
use crate::sampling::SamplingError;

pub use context::{EstimationContext, TableInfo};
pub use deduce::{
    deduce_colext_orddep, deduce_colext_ordind, deduce_colset, distinct_per_page, f_ratio,
    run_length_extended, run_length_leading, tuples_per_page,
};
pub use error::{compose_error, prob_within, ErrorModel};
pub use execute::{execute_plan, sample_cf, sample_cf_with_stats};
pub use graph::{DeductionGraph, DeductionNode, IndexNode};
pub use plan::{all_sampled_cost, plan_exact, plan_greedy, EstimationPlan, NodeState, PlannedNode, DEFAULT_F_GRID, EXACT_CLUSTER_LIMIT};

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Compression(#[from] CompressionError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("invalid accuracy requirement: {0}")]
    InvalidRequirement(String),
    #[error("{kind} deduction does not apply: {reason}")]
    Inapplicable { kind: DeductionKind, reason: String },
    #[error("no sampling fraction in {grid:?} meets tolerance {e} with confidence {q}")]
    Infeasible { e: f64, q: f64, grid: Vec<f64> },
    #[error("cluster of {size} indexes exceeds the exact planner limit of {limit}")]
    ClusterTooLarge { size: usize, limit: usize },
    #[error("no targets to plan")]
    NoTargets,
    #[error("unknown table '{0}'")]
    UnknownTable(String),
    #[error("missing estimate for '{0}'")]
    MissingEstimate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeductionKind {
    #[serde(rename = "COLSET")]
    ColSet,
    #[serde(rename = "COLEXT_ORD_IND")]
    ColExtOrdInd,
    #[serde(rename = "COLEXT_ORD_DEP")]
    ColExtOrdDep,
}

impl std::fmt::Display for DeductionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DeductionKind::ColSet => "ColSet",
            DeductionKind::ColExtOrdInd => "ColExt(ORD-IND)",
            DeductionKind::ColExtOrdDep => "ColExt(ORD-DEP)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Exact,
    Sampled { f: f64 },
    Deduced { method: DeductionKind, inputs: Vec<String> },
}

/// Estimated compressed size with the distribution of its error ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeEstimate {
    pub pages: f64,
    pub uncompressed_pages: f64,
    pub cf: f64,
    /// Expected ratio of estimate to true size.
    pub err_mean: f64,
    pub err_var: f64,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub low_confidence: bool,
}

impl SizeEstimate {
    /// A size known exactly, e.g. of an index that already exists.
    pub fn exact(pages: f64, uncompressed_pages: f64) -> Self {
        Self {
            pages,
            uncompressed_pages,
            cf: if uncompressed_pages > 0.0 { pages / uncompressed_pages } else { 1.0 },
            err_mean: 1.0,
            err_var: 0.0,
            provenance: Provenance::Exact,
            low_confidence: false,
        }
    }

    pub fn error(&self) -> (f64, f64) {
        (self.err_mean, self.err_var)
    }

    pub fn stddev(&self) -> f64 {
        self.err_var.sqrt()
    }
}

/// Every estimate must fall within a factor `1 + e` of the truth with
/// probability at least `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRequirement {
    pub e: f64,
    pub q: f64,
}

impl AccuracyRequirement {
    pub fn new(e: f64, q: f64) -> Result<Self, EstimateError> {
        if !(e > 0.0 && e.is_finite()) {
            return Err(EstimateError::InvalidRequirement(format!("tolerance {e} must be positive")));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(EstimateError::InvalidRequirement(format!("confidence {q} must lie in (0, 1)")));
        }
        Ok(Self { e, q })
    }

    pub fn is_met(&self, err: (f64, f64)) -> bool {
        prob_within(self.e, err) >= self.q
    }
}
