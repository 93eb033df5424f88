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

//! Uniform per-table samples, filtered samples, join synopses and samples
//! of grouped views with distinct-count extrapolation.

mod base;
mod distinct;
mod join;
mod manager;
mod mv;

use thiserror::Error;

use crate::data::DataError;

pub use base::{build_base_sample, build_filtered_sample, Sample, LOW_CONFIDENCE_ROWS};
pub use distinct::{
    estimate_distinct, AdaptiveEstimator, DistinctEstimator, FrequencyStats, Gee, Multiply,
};
pub use join::{build_join_synopsis, DimensionJoin, JoinSynopsis};
pub use manager::SampleManager;
pub use mv::{create_mv_sample, create_mv_sample_with, MvDef, MvSample, MvSource, COUNT_COLUMN};

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("sampling fraction {0} outside (0, 1]")]
    Fraction(f64),
    #[error("foreign key {column}={value} of '{fact}' has no match in '{dimension}'")]
    DanglingForeignKey {
        fact: String,
        column: String,
        dimension: String,
        value: String,
    },
    #[error("key '{column}' of dimension '{dimension}' is not unique")]
    DuplicateKey { dimension: String, column: String },
    #[error("sample has {r} tuples but the source only {n}")]
    SampleLargerThanSource { r: u64, n: u64 },
    #[error("inconsistent frequency statistics: {0}")]
    Frequencies(String),
    #[error("unknown table '{0}'")]
    UnknownTable(String),
}

pub(crate) fn check_fraction(f: f64) -> Result<(), SamplingError> {
    if f > 0.0 && f <= 1.0 {
        Ok(())
    } else {
        Err(SamplingError::Fraction(f))
    }
}
