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


//! Compression-aware index selection: candidates per statement, size
//! estimation of every compressed candidate in one planned batch,
//! per-statement shortlisting and budgeted greedy enumeration.

mod candidates;
mod search;
mod select;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compression::IndexDef;
use crate::cost::{best_plan, workload_cost, Configuration, ConfiguredIndex, CostError, CostModelParams, Statement};
use crate::data::Table;
use crate::estimate::{
    execute_plan, plan_greedy, AccuracyRequirement, EstimateError, EstimationContext, NodeState, Provenance,
    SizeEstimate, DEFAULT_F_GRID,
};
use crate::sampling::SampleManager;

pub use candidates::{candidate_shapes, generate_candidates, CandidateRules};
pub use search::{enumerate, EnumCandidate, Enumeration, EnumerationResult, SearchStep};
pub use select::{select_candidates, CandidateConfig, Selection};

#[derive(Debug, Error)]
pub enum AdvisorError {
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error("workload has no statements")]
    EmptyWorkload,
    #[error("invalid advisor option: {0}")]
    InvalidOption(String),
}

/// A candidate whose size is given rather than estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinnedSize {
    pub index: IndexDef,
    pub pages: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvisorOptions {
    /// Storage bound in pages.
    pub budget: f64,
    pub selection: Selection,
    pub enumeration: Enumeration,
    /// Choose indexes ignoring compression, then compress them.
    pub staged: bool,
    pub accuracy: AccuracyRequirement,
    pub seed: u64,
    pub rules: CandidateRules,
    /// Replaces generated candidates for statements on their tables.
    pub candidates: Option<Vec<IndexDef>>,
    pub pinned: Vec<PinnedSize>,
    pub f_grid: Vec<f64>,
    pub params: CostModelParams,
}

impl AdvisorOptions {
    pub fn new(budget: f64) -> Self {
        Self {
            budget,
            selection: Selection::Skyline,
            enumeration: Enumeration::Backtrack,
            staged: false,
            accuracy: AccuracyRequirement { e: 0.1, q: 0.9 },
            seed: 0,
            rules: CandidateRules::default(),
            candidates: None,
            pinned: Vec::new(),
            f_grid: DEFAULT_F_GRID.to_vec(),
            params: CostModelParams::default(),
        }
    }

    fn validate(&self) -> Result<(), AdvisorError> {
        if !(self.budget.is_finite() && self.budget >= 0.0) {
            return Err(AdvisorError::InvalidOption(format!("budget {} must be >= 0", self.budget)));
        }
        if let Selection::TopK(0) = self.selection {
            return Err(AdvisorError::InvalidOption("k must be at least 1".into()));
        }
        if self.rules.methods.is_empty() {
            return Err(AdvisorError::InvalidOption("no compression methods allowed".into()));
        }
        for p in &self.pinned {
            if !(p.pages.is_finite() && p.pages >= 0.0) {
                return Err(AdvisorError::InvalidOption(format!("pinned size of {} is invalid", p.index)));
            }
        }
        self.params.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationSummary {
    pub f: f64,
    pub cost: u64,
    pub sampled: usize,
    pub deduced: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub configuration: Configuration,
    pub budget_pages: f64,
    pub total_pages: f64,
    pub cost_before: f64,
    pub cost_after: f64,
    pub improvement: f64,
    pub staged: bool,
    pub candidates: usize,
    pub estimation: Option<EstimationSummary>,
    pub trace: Vec<SearchStep>,
}

impl Recommendation {
    pub fn compressed_count(&self) -> usize {
        self.configuration
            .indexes()
            .iter()
            .filter(|i| i.def.method.is_compressed())
            .count()
    }
}

/// Candidate definitions for `stmt` under `options`.
fn statement_candidates(stmt: &Statement, options: &AdvisorOptions) -> Vec<IndexDef> {
    let Statement::Select(sel) = stmt else { return Vec::new() };
    match &options.candidates {
        Some(list) => list.iter().filter(|d| d.table == sel.table).cloned().collect(),
        None => generate_candidates(sel, &options.rules),
    }
}

struct Estimated {
    defs: BTreeMap<String, (IndexDef, SizeEstimate)>,
    summary: Option<EstimationSummary>,
}

fn estimate_all(
    defs: &BTreeMap<String, IndexDef>,
    tables: &[Arc<Table>],
    ctx: &EstimationContext,
    options: &AdvisorOptions,
) -> Result<Estimated, AdvisorError> {
    let pinned: BTreeMap<String, f64> = options.pinned.iter().map(|p| (p.index.id(), p.pages)).collect();
    let mut out = BTreeMap::new();
    let mut targets = Vec::new();
    let mut existing = Vec::new();
    for (id, def) in defs {
        let u = ctx.uncompressed_pages(def)? as f64;
        if let Some(&pages) = pinned.get(id) {
            let mut e = SizeEstimate::exact(pages, u.max(pages));
            e.provenance = Provenance::Exact;
            if def.method.is_compressed() {
                existing.push((def.clone(), e.clone()));
            }
            out.insert(id.clone(), (def.clone(), e));
        } else if !def.method.is_compressed() {
            out.insert(id.clone(), (def.clone(), SizeEstimate::exact(u, u)));
        } else {
            targets.push(def.clone());
        }
    }
    let mut summary = None;
    if !targets.is_empty() {
        let plan = plan_greedy(&targets, &existing, options.accuracy, &options.f_grid, ctx)?;
        let mut samples = SampleManager::new(options.seed);
        for t in tables {
            samples.add_table(Arc::clone(t));
        }
        let est = execute_plan(&plan, &samples, ctx)?;
        for t in &targets {
            let node = plan
                .graph
                .find(t)
                .ok_or_else(|| EstimateError::MissingEstimate(t.id()))?;
            let e = est
                .get(&plan.graph.nodes[node].id)
                .ok_or_else(|| EstimateError::MissingEstimate(t.id()))?;
            out.insert(t.id(), (t.clone(), e.clone()));
        }
        let count = |pred: fn(&NodeState) -> bool| {
            plan.graph
                .targets()
                .filter(|&i| pred(&plan.states[i]))
                .count()
        };
        summary = Some(EstimationSummary {
            f: plan.f,
            cost: plan.total_cost,
            sampled: count(|s| matches!(s, NodeState::Sampled)),
            deduced: count(|s| matches!(s, NodeState::Deduced(_))),
        });
    }
    Ok(Estimated { defs: out, summary })
}

fn enum_candidate(def: &IndexDef, est: &SizeEstimate) -> EnumCandidate {
    EnumCandidate {
        id: def.id(),
        shape: def.shape_id(),
        table: def.table.clone(),
        size: est.pages,
        compressed: def.method.is_compressed(),
        clustered: def.clustered,
    }
}

fn configuration(pool: &[(IndexDef, SizeEstimate)], set: &[usize]) -> Result<Configuration, CostError> {
    let mut ids = set.to_vec();
    ids.sort_by(|&a, &b| pool[a].0.id().cmp(&pool[b].0.id()));
    Configuration::from_indexes(ids.iter().map(|&i| ConfiguredIndex::new(pool[i].0.clone(), pool[i].1.clone())))
}

/// Shortlists candidates per SELECT and returns the union, by id.
fn shortlist(
    workload: &[Statement],
    per_stmt: &[Vec<String>],
    est: &BTreeMap<String, (IndexDef, SizeEstimate)>,
    keep: impl Fn(&IndexDef) -> bool,
    ctx: &EstimationContext,
    options: &AdvisorOptions,
) -> Result<Vec<String>, AdvisorError> {
    let mut union: Vec<String> = Vec::new();
    for (stmt, ids) in workload.iter().zip(per_stmt) {
        let mut configs = Vec::new();
        for id in ids {
            let (def, e) = &est[id];
            if !keep(def) {
                continue;
            }
            let config = Configuration::from_indexes([ConfiguredIndex::new(def.clone(), e.clone())])?;
            let cost = best_plan(stmt, &config, ctx, &options.params)?.total;
            configs.push(CandidateConfig {
                indexes: vec![id.clone()],
                cost,
                size: e.pages,
            });
        }
        for k in select_candidates(&configs, options.selection) {
            for id in &configs[k].indexes {
                if !union.contains(id) {
                    union.push(id.clone());
                }
            }
        }
    }
    union.sort();
    Ok(union)
}

/// Recommends a configuration for `workload` within `options.budget`.
pub fn tune(
    workload: &[Statement],
    tables: &[Arc<Table>],
    ctx: &EstimationContext,
    options: &AdvisorOptions,
) -> Result<Recommendation, AdvisorError> {
    if workload.is_empty() {
        return Err(AdvisorError::EmptyWorkload);
    }
    options.validate()?;
    for s in workload {
        s.validate(ctx)?;
    }
    let mut defs: BTreeMap<String, IndexDef> = BTreeMap::new();
    let mut per_stmt = Vec::with_capacity(workload.len());
    for s in workload {
        let mut ids = Vec::new();
        for d in statement_candidates(s, options) {
            let id = d.id();
            ids.push(id.clone());
            defs.entry(id).or_insert(d);
        }
        per_stmt.push(ids);
    }
    for d in defs.values() {
        ctx.info(&d.table)?;
    }
    let Estimated { defs: est, summary } = estimate_all(&defs, tables, ctx, options)?;
    let pool_ids = if options.staged {
        shortlist(workload, &per_stmt, &est, |d| !d.method.is_compressed(), ctx, options)?
    } else {
        shortlist(workload, &per_stmt, &est, |_| true, ctx, options)?
    };
    // staged runs also see the compressed variants when compressing
    let all_ids: Vec<String> = if options.staged {
        let mut v = pool_ids.clone();
        for (id, (d, _)) in &est {
            if d.method.is_compressed() && pool_ids.iter().any(|p| est[p].0.shape_id() == d.shape_id()) {
                v.push(id.clone());
            }
        }
        v.sort();
        v.dedup();
        v
    } else {
        pool_ids.clone()
    };
    let pool: Vec<(IndexDef, SizeEstimate)> = all_ids.iter().map(|id| est[id].clone()).collect();
    let cands: Vec<EnumCandidate> = pool.iter().map(|(d, e)| enum_candidate(d, e)).collect();
    let mut cost_fn = |set: &[usize]| -> Result<f64, AdvisorError> {
        let config = configuration(&pool, set)?;
        Ok(workload_cost(workload, &config, ctx, &options.params)?)
    };
    let mut ev = search::Evaluator::new(&mut cost_fn);
    let cost_before = ev.eval(&[])?;
    let result = if options.staged {
        staged_search(&cands, options, &mut ev)?
    } else {
        search::run(&cands, options.budget, options.enumeration, &[], &mut ev)?
    };
    let config = configuration(&pool, &result.chosen)?;
    let cost_after = result.cost;
    Ok(Recommendation {
        total_pages: config.total_pages(),
        configuration: config,
        budget_pages: options.budget,
        cost_before,
        cost_after,
        improvement: if cost_before > 0.0 { 1.0 - cost_after / cost_before } else { 0.0 },
        staged: options.staged,
        candidates: defs.len(),
        estimation: summary,
        trace: result.trace,
    })
}

/// Selection over uncompressed candidates, then compression of the chosen
/// indexes while it pays off, repeated until nothing changes. Chosen shapes
/// are never dropped.
fn staged_search(
    pool: &[EnumCandidate],
    options: &AdvisorOptions,
    ev: &mut search::Evaluator<'_, AdvisorError>,
) -> Result<EnumerationResult, AdvisorError> {
    let plain: Vec<usize> = (0..pool.len()).filter(|&i| !pool[i].compressed).collect();
    let mode = match options.enumeration {
        Enumeration::Backtrack => Enumeration::Pure,
        m => m,
    };
    let mut set: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    loop {
        // selection sees only uncompressed candidates
        let sub: Vec<EnumCandidate> = plain.iter().map(|&i| pool[i].clone()).collect();
        let used: f64 = search::size_of(pool, &set);
        let fixed = set.clone();
        let mut sub_cost = |s: &[usize]| -> Result<f64, AdvisorError> {
            let mut full = fixed.clone();
            full.extend(s.iter().map(|&k| plain[k]));
            ev.eval(&full)
        };
        let r = enumerate(&sub, (options.budget - used).max(0.0), mode, &[], &mut sub_cost)?;
        let added = r.chosen.iter().map(|&k| plain[k]).filter(|i| !set.contains(i)).collect::<Vec<_>>();
        trace.extend(r.trace);
        set.extend(&added);
        let mut changed = !added.is_empty();
        // compress members, best replacement first
        loop {
            let current = ev.eval(&set)?;
            let mut best: Option<(usize, usize, f64)> = None;
            for (pos, &m) in set.iter().enumerate() {
                for v in 0..pool.len() {
                    if !pool[v].compressed || pool[v].shape != pool[m].shape || set.contains(&v) {
                        continue;
                    }
                    let mut next = set.clone();
                    next[pos] = v;
                    if search::size_of(pool, &next) > options.budget * (1.0 + 1e-12) {
                        continue;
                    }
                    let c = ev.eval(&next)?;
                    if c < current && best.is_none_or(|b| c < b.2) {
                        best = Some((pos, v, c));
                    }
                }
            }
            let Some((pos, v, c)) = best else { break };
            trace.push(SearchStep::Compress {
                from: pool[set[pos]].id.clone(),
                to: pool[v].id.clone(),
                cost: c,
            });
            set[pos] = v;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(EnumerationResult {
        size: search::size_of(pool, &set),
        cost: ev.eval(&set)?,
        chosen: set,
        trace,
    })
}
