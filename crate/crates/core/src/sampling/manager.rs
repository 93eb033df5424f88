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

//! Registry of samples: one uniform sample per (table, fraction), shared
//! by every index on that table.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use crate::data::{Predicate, Table};
use crate::rng::mix64;

use super::base::{build_base_sample, build_filtered_sample, Sample};
use super::SamplingError;

type Key = (String, u64, Option<String>);

#[derive(Debug, Default)]
pub struct SampleManager {
    tables: BTreeMap<String, Arc<Table>>,
    seed: u64,
    cache: RwLock<HashMap<Key, Arc<Sample>>>,
}

fn name_seed(seed: u64, name: &str) -> u64 {
    name.bytes().fold(mix64(seed), |h, b| mix64(h ^ b as u64))
}

impl SampleManager {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            ..Default::default()
        }
    }

    pub fn add_table(&mut self, table: Arc<Table>) {
        self.tables.insert(table.name().to_string(), table);
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.add_table(Arc::new(table));
        self
    }

    pub fn table(&self, name: &str) -> Result<&Arc<Table>, SamplingError> {
        self.tables
            .get(name)
            .ok_or_else(|| SamplingError::UnknownTable(name.to_string()))
    }

    pub fn tables(&self) -> impl Iterator<Item = &Arc<Table>> {
        self.tables.values()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of distinct samples materialized so far.
    pub fn samples_built(&self) -> usize {
        self.cache.read().expect("sample cache poisoned").len()
    }

    fn cached(
        &self,
        key: Key,
        build: impl FnOnce() -> Result<Sample, SamplingError>,
    ) -> Result<Arc<Sample>, SamplingError> {
        if let Some(s) = self.cache.read().expect("sample cache poisoned").get(&key) {
            return Ok(s.clone());
        }
        let mut w = self.cache.write().expect("sample cache poisoned");
        if let Some(s) = w.get(&key) {
            return Ok(s.clone());
        }
        let s = Arc::new(build()?);
        w.insert(key, s.clone());
        Ok(s)
    }

    /// The uniform sample of `table` at fraction `f`.
    pub fn sample(&self, table: &str, f: f64) -> Result<Arc<Sample>, SamplingError> {
        let t = self.table(table)?.clone();
        let seed = name_seed(self.seed, table);
        self.cached((table.to_string(), f.to_bits(), None), || build_base_sample(&t, f, seed))
    }

    /// The base sample restricted to rows satisfying `filter`.
    pub fn filtered(&self, table: &str, f: f64, filter: &Predicate) -> Result<Arc<Sample>, SamplingError> {
        let base = self.sample(table, f)?;
        self.cached((table.to_string(), f.to_bits(), Some(filter.to_string())), || {
            build_filtered_sample(&base, filter)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{CmpOp, ColumnDef, ColumnType, Literal};

    #[test]
    fn samples_are_shared() {
        let t = Table::from_columns(
            "t",
            vec![ColumnDef::new("a", ColumnType::Int64)],
            vec![(0..1000i64).flat_map(i64::to_be_bytes).collect()],
        )
        .unwrap();
        let m = SampleManager::new(1).with_table(t);
        let a = m.sample("t", 0.1).unwrap();
        let b = m.sample("t", 0.1).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        let p = Predicate::new("a", CmpOp::Lt, Literal::Int(500));
        let f = m.filtered("t", 0.1, &p).unwrap();
        assert!(f.len() <= a.len());
        assert_eq!(m.samples_built(), 2);
        assert!(m.sample("u", 0.1).is_err());
    }
}
