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


//! Python bindings: tables, index definitions, size estimation and tuning.

use std::path::PathBuf;
use std::sync::Arc;

use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use compadv::advisor::{self, AdvisorOptions, Enumeration, Selection};
use compadv::compression::{self, CompressionMethod};
use compadv::cost::Statement;
use compadv::data::{self, SyntheticSpec};
use compadv::estimate::{self, AccuracyRequirement, EstimationContext, DEFAULT_F_GRID};
use compadv::sampling::SampleManager;

pyo3::create_exception!(compadv_py, CompadvError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    CompadvError::new_err(e.to_string())
}

/// An in-memory table.
#[pyclass(frozen, module = "compadv_py")]
struct Table {
    inner: Arc<data::Table>,
}

#[pymethods]
impl Table {
    /// Loads a CSV file against a schema file of `name type` lines.
    #[staticmethod]
    fn from_csv(csv: PathBuf, schema: PathBuf) -> PyResult<Self> {
        let cols = data::read_schema_file(&schema).map_err(err)?;
        let t = data::ingest_csv(&csv, &cols).map_err(err)?;
        Ok(Self { inner: Arc::new(t) })
    }

    /// Generates a table from a JSON synthetic spec.
    #[staticmethod]
    fn synthetic(spec_json: &str) -> PyResult<Self> {
        let spec: SyntheticSpec = serde_json::from_str(spec_json).map_err(err)?;
        let t = data::generate_synthetic(&spec).map_err(err)?;
        Ok(Self { inner: Arc::new(t) })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn columns(&self) -> Vec<(String, String)> {
        self.inner
            .columns()
            .iter()
            .map(|c| (c.name.clone(), c.ty.to_string()))
            .collect()
    }

    /// Column statistics as JSON.
    fn stats_json(&self) -> PyResult<String> {
        let s = data::compute_stats(&self.inner, &[]).map_err(err)?;
        serde_json::to_string(&s).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Table({:?}, rows={})", self.inner.name(), self.inner.rows())
    }
}

/// An index definition: key columns, included columns and a codec.
#[pyclass(frozen, skip_from_py_object, module = "compadv_py")]
#[derive(Clone)]
struct Index {
    def: compression::IndexDef,
}

#[pymethods]
impl Index {
    #[new]
    #[pyo3(signature = (table, keys, include = Vec::new(), method = "NONE", clustered = false))]
    fn new(table: &str, keys: Vec<String>, include: Vec<String>, method: &str, clustered: bool) -> PyResult<Self> {
        let m: CompressionMethod = method.parse().map_err(err)?;
        let def = compression::IndexDef::new(table, keys)
            .include(include)
            .method(m)
            .clustered(clustered);
        Ok(Self { def })
    }

    /// Parses the JSON form used in index and workload files.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            def: serde_json::from_str(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.def).map_err(err)
    }

    #[getter]
    fn id(&self) -> String {
        self.def.id()
    }

    #[getter]
    fn method(&self) -> String {
        self.def.method.to_string()
    }

    /// The same shape under another codec.
    fn with_method(&self, method: &str) -> PyResult<Self> {
        let m: CompressionMethod = method.parse().map_err(err)?;
        Ok(Self {
            def: self.def.with_method(m),
        })
    }

    fn __repr__(&self) -> String {
        format!("Index({})", self.def.id())
    }
}

/// Size of an index built on a full table.
#[pyclass(frozen, get_all, module = "compadv_py")]
struct BuiltSize {
    index: String,
    pages: usize,
    compressed_pages: f64,
    cf: f64,
    bytes_raw: usize,
    bytes_compressed: usize,
}

/// Builds and compresses `index` over `table`, returning its true size.
#[pyfunction]
fn build_index(py: Python<'_>, table: &Table, index: &Index) -> PyResult<BuiltSize> {
    let (t, d) = (table.inner.clone(), index.def.clone());
    let b = py.detach(move || compression::build_index(&t, &d)).map_err(err)?;
    Ok(BuiltSize {
        index: index.def.id(),
        pages: b.page_count(),
        compressed_pages: b.compressed_pages(),
        cf: b.cf(),
        bytes_raw: b.bytes_raw,
        bytes_compressed: b.bytes_compressed,
    })
}

/// One estimated size with its error distribution.
#[pyclass(frozen, get_all, module = "compadv_py")]
struct Estimate {
    index: String,
    state: String,
    pages: f64,
    uncompressed_pages: f64,
    cf: f64,
    err_mean: f64,
    err_stddev: f64,
    prob_within: f64,
}

fn context(tables: &[PyRef<'_, Table>]) -> PyResult<(Vec<Arc<data::Table>>, EstimationContext)> {
    let owned: Vec<Arc<data::Table>> = tables.iter().map(|t| t.inner.clone()).collect();
    let ctx = EstimationContext::from_tables(owned.iter().map(|t| t.as_ref())).map_err(err)?;
    Ok((owned, ctx))
}

/// Plans and runs size estimation for `indexes` under tolerance `e` and
/// confidence `q`.
#[pyfunction]
#[pyo3(signature = (tables, indexes, e = 0.1, q = 0.9, seed = 0, exact = false))]
fn estimate_sizes(
    py: Python<'_>,
    tables: Vec<PyRef<'_, Table>>,
    indexes: Vec<PyRef<'_, Index>>,
    e: f64,
    q: f64,
    seed: u64,
    exact: bool,
) -> PyResult<Vec<Estimate>> {
    let (owned, ctx) = context(&tables)?;
    let defs: Vec<compression::IndexDef> = indexes.iter().map(|i| i.def.clone()).collect();
    let req = AccuracyRequirement::new(e, q).map_err(err)?;
    py.detach(move || -> Result<Vec<Estimate>, String> {
        let plan = if exact {
            estimate::plan_exact(&defs, &[], req, &DEFAULT_F_GRID, &ctx)
        } else {
            estimate::plan_greedy(&defs, &[], req, &DEFAULT_F_GRID, &ctx)
        }
        .map_err(|x| x.to_string())?;
        let mut samples = SampleManager::new(seed);
        for t in owned {
            samples.add_table(t);
        }
        let est = estimate::execute_plan(&plan, &samples, &ctx).map_err(|x| x.to_string())?;
        let nodes = plan.nodes();
        let mut out = Vec::new();
        for d in &defs {
            let id = d.id();
            let Some(s) = est.get(&id) else { continue };
            let node = nodes.iter().find(|n| n.index == id);
            out.push(Estimate {
                index: id,
                state: node.map_or("EXACT".into(), |n| match n.state {
                    estimate::NodeState::Sampled => "SAMPLED".to_string(),
                    estimate::NodeState::Deduced(_) => "DEDUCED".to_string(),
                    estimate::NodeState::Exact => "EXACT".to_string(),
                    estimate::NodeState::None => "NONE".to_string(),
                }),
                pages: s.pages,
                uncompressed_pages: s.uncompressed_pages,
                cf: s.cf,
                err_mean: s.err_mean,
                err_stddev: s.stddev(),
                prob_within: estimate::prob_within(e, s.error()),
            });
        }
        Ok(out)
    })
    .map_err(err)
}

/// A tuning result.
#[pyclass(frozen, module = "compadv_py")]
struct Recommendation {
    inner: advisor::Recommendation,
}

#[pymethods]
impl Recommendation {
    #[getter]
    fn indexes(&self) -> Vec<Index> {
        self.inner
            .configuration
            .indexes()
            .iter()
            .map(|i| Index { def: i.def.clone() })
            .collect()
    }

    #[getter]
    fn total_pages(&self) -> f64 {
        self.inner.total_pages
    }

    #[getter]
    fn budget_pages(&self) -> f64 {
        self.inner.budget_pages
    }

    #[getter]
    fn cost_before(&self) -> f64 {
        self.inner.cost_before
    }

    #[getter]
    fn cost_after(&self) -> f64 {
        self.inner.cost_after
    }

    #[getter]
    fn compressed_count(&self) -> usize {
        self.inner.compressed_count()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Recommendation({} indexes, {:.1}/{:.1} pages, cost {:.3} -> {:.3})",
            self.inner.configuration.len(),
            self.inner.total_pages,
            self.inner.budget_pages,
            self.inner.cost_before,
            self.inner.cost_after
        )
    }
}

/// Recommends indexes for `statements` (a JSON array of SELECT/INSERT
/// statements) within `budget_pages`.
#[pyfunction]
#[pyo3(signature = (
    tables, statements_json, budget_pages,
    selection = "skyline", enumeration = "backtrack", staged = false,
    e = 0.1, q = 0.9, seed = 0,
))]
#[allow(clippy::too_many_arguments)]
fn tune(
    py: Python<'_>,
    tables: Vec<PyRef<'_, Table>>,
    statements_json: &str,
    budget_pages: f64,
    selection: &str,
    enumeration: &str,
    staged: bool,
    e: f64,
    q: f64,
    seed: u64,
) -> PyResult<Recommendation> {
    let (owned, ctx) = context(&tables)?;
    let workload: Vec<Statement> = serde_json::from_str(statements_json).map_err(err)?;
    let mut opts = AdvisorOptions::new(budget_pages);
    opts.selection = selection.parse::<Selection>().map_err(err)?;
    opts.enumeration = enumeration.parse::<Enumeration>().map_err(err)?;
    opts.staged = staged;
    opts.accuracy = AccuracyRequirement::new(e, q).map_err(err)?;
    opts.seed = seed;
    let inner = py
        .detach(move || advisor::tune(&workload, &owned, &ctx, &opts))
        .map_err(err)?;
    Ok(Recommendation { inner })
}

/// Runs the command-line interface; returns (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    py.detach(move || {
        let mut out = Vec::new();
        let mut errs = Vec::new();
        let argv = std::iter::once("compadv".to_string()).chain(args);
        let code = compadv::cli::run_cli_with(argv, &mut out, &mut errs);
        (
            code,
            String::from_utf8_lossy(&out).into_owned(),
            String::from_utf8_lossy(&errs).into_owned(),
        )
    })
}

#[pymodule]
fn compadv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CompadvError", m.py().get_type::<CompadvError>())?;
    m.add("PAGE_SIZE", compression::PAGE_SIZE)?;
    m.add_class::<Table>()?;
    m.add_class::<Index>()?;
    m.add_class::<BuiltSize>()?;
    m.add_class::<Estimate>()?;
    m.add_class::<Recommendation>()?;
    m.add_function(wrap_pyfunction!(build_index, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_sizes, m)?)?;
    m.add_function(wrap_pyfunction!(tune, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
