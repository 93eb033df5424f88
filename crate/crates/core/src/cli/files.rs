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


//! Workload, index-list and configuration files (JSON).

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::advisor::PinnedSize;
use crate::compression::{IndexDef, PAGE_SIZE};
use crate::cost::{CostModelParams, Statement};
use crate::data::{generate_synthetic, ingest_csv, read_schema_file, SyntheticSpec, Table};
use crate::estimate::{ErrorModel, EstimationContext, DEFAULT_F_GRID};

/// A size in pages, written as a number of pages or as a byte count with a
/// `KB`, `MB` or `GB` suffix (powers of 1024).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Pages(pub f64);

impl std::str::FromStr for Pages {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_uppercase();
        let (num, mult) = if let Some(n) = t.strip_suffix("KB") {
            (n, 1024.0)
        } else if let Some(n) = t.strip_suffix("MB") {
            (n, 1024.0 * 1024.0)
        } else if let Some(n) = t.strip_suffix("GB") {
            (n, 1024.0 * 1024.0 * 1024.0)
        } else if let Some(n) = t.strip_suffix("PAGES") {
            (n, PAGE_SIZE as f64)
        } else {
            (t.as_str(), PAGE_SIZE as f64)
        };
        let v: f64 = num.trim().parse().map_err(|_| format!("invalid size '{s}'"))?;
        if !(v.is_finite() && v >= 0.0) {
            return Err(format!("size '{s}' must be >= 0"));
        }
        Ok(Pages(v * mult / PAGE_SIZE as f64))
    }
}

impl<'de> Deserialize<'de> for Pages {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) if v.is_finite() && v >= 0.0 => Ok(Pages(v)),
            Raw::Num(v) => Err(de::Error::custom(format!("size {v} must be >= 0"))),
            Raw::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSource {
    /// Overrides the CSV file stem or the spec name.
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub schema: Option<PathBuf>,
    #[serde(default)]
    pub synthetic: Option<SyntheticSpec>,
    /// Multiplies the row count seen by estimation and costing.
    #[serde(default)]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinnedEntry {
    pub index: IndexDef,
    pub size: Pages,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadFile {
    pub tables: Vec<TableSource>,
    pub statements: Vec<Statement>,
    #[serde(default)]
    pub candidates: Option<Vec<IndexDef>>,
    #[serde(default)]
    pub pinned: Vec<PinnedEntry>,
}

impl WorkloadFile {
    pub fn pinned_sizes(&self) -> Vec<PinnedSize> {
        self.pinned
            .iter()
            .map(|p| PinnedSize {
                index: p.index.clone(),
                pages: p.size.0,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexesFile {
    pub tables: Vec<TableSource>,
    pub indexes: Vec<IndexDef>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub cost: CostModelParams,
    pub error_model: ErrorModel,
    pub f_grid: Option<Vec<f64>>,
    /// Testing only; must equal the compiled page size.
    pub page_size: Option<usize>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn validate(&self) -> Result<(), CliError> {
        self.cost.validate().map_err(|e| CliError::Input(e.to_string()))?;
        if let Some(p) = self.page_size {
            if p != PAGE_SIZE {
                return Err(CliError::Input(format!(
                    "page_size {p} is not supported by this build (compiled for {PAGE_SIZE})"
                )));
            }
        }
        if let Some(g) = &self.f_grid {
            if g.is_empty() || g.iter().any(|f| !(*f > 0.0 && *f <= 1.0)) {
                return Err(CliError::Input("f_grid values must lie in (0, 1]".into()));
            }
        }
        Ok(())
    }

    pub fn f_grid(&self) -> Vec<f64> {
        self.f_grid.clone().unwrap_or_else(|| DEFAULT_F_GRID.to_vec())
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Loaded tables and the estimation context over them.
pub struct Loaded {
    pub tables: Vec<Arc<Table>>,
    pub ctx: EstimationContext,
}

pub fn load_tables(sources: &[TableSource], base: &Path, model: ErrorModel) -> Result<Loaded, CliError> {
    let mut ctx = EstimationContext::new(model);
    let mut tables = Vec::new();
    for src in sources {
        let table = match (&src.csv, &src.schema, &src.synthetic) {
            (Some(csv), Some(schema), None) => {
                let cols = read_schema_file(&resolve(base, schema))?;
                ingest_csv(&resolve(base, csv), &cols)?
            }
            (None, None, Some(spec)) => generate_synthetic(spec)?,
            _ => {
                return Err(CliError::Input(
                    "a table needs either csv and schema, or synthetic".into(),
                ))
            }
        };
        let table = match &src.name {
            Some(n) => table.with_name(n.clone()),
            None => table,
        };
        if tables.iter().any(|t: &Arc<Table>| t.name() == table.name()) {
            return Err(CliError::Input(format!("table '{}' defined twice", table.name())));
        }
        ctx.add_table(&table, &[]).map_err(|e| CliError::Input(e.to_string()))?;
        if let Some(scale) = src.scale {
            if !(scale.is_finite() && scale > 0.0) {
                return Err(CliError::Input(format!("scale {scale} must be > 0")));
            }
            let info = ctx.tables.get_mut(table.name()).expect("just added");
            info.rows = (info.rows as f64 * scale).round() as u64;
        }
        tables.push(Arc::new(table));
    }
    Ok(Loaded { tables, ctx })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!("100".parse::<Pages>().unwrap(), Pages(100.0));
        assert_eq!("8KB".parse::<Pages>().unwrap(), Pages(1.0));
        assert_eq!("1MB".parse::<Pages>().unwrap(), Pages(128.0));
        assert_eq!("1gb".parse::<Pages>().unwrap(), Pages(131072.0));
        assert!("-3".parse::<Pages>().is_err());
        assert!("lots".parse::<Pages>().is_err());
        let p: Pages = serde_json::from_str("\"2MB\"").unwrap();
        assert_eq!(p, Pages(256.0));
    }
}
