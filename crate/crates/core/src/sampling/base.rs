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

use crate::data::{Predicate, Table};
use crate::rng::SplitMix64;

use super::{check_fraction, SamplingError};

/// Samples smaller than this are usable but flagged.
pub const LOW_CONFIDENCE_ROWS: usize = 30;

/// A Bernoulli sample of a table (or of a synopsis).
#[derive(Debug, Clone)]
pub struct Sample {
    pub source: String,
    pub fraction: f64,
    pub seed: u64,
    /// Row count of the source the sample was drawn from.
    pub source_rows: usize,
    pub rows: Table,
}

impl Sample {
    pub fn len(&self) -> usize {
        self.rows.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.rows() == 0
    }

    pub fn is_low_confidence(&self) -> bool {
        self.rows.rows() < LOW_CONFIDENCE_ROWS
    }
}

/// Keeps each row independently with probability `f`.
pub fn build_base_sample(table: &Table, f: f64, seed: u64) -> Result<Sample, SamplingError> {
    check_fraction(f)?;
    let rows = if f == 1.0 {
        table.clone()
    } else {
        let mut rng = SplitMix64::new(seed);
        let keep: Vec<usize> = (0..table.rows()).filter(|_| rng.next_f64() < f).collect();
        table.take(table.name(), &keep)
    };
    Ok(Sample {
        source: table.name().to_string(),
        fraction: f,
        seed,
        source_rows: table.rows(),
        rows,
    })
}

/// Rows of `base` satisfying `filter`; the fraction is unchanged.
pub fn build_filtered_sample(base: &Sample, filter: &Predicate) -> Result<Sample, SamplingError> {
    let bound = filter.bind(&base.rows)?;
    let keep = bound.matching_rows(&base.rows);
    Ok(Sample {
        rows: base.rows.take(base.rows.name(), &keep),
        ..base.clone()
    })
}
