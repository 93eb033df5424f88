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

use std::collections::{BTreeMap, HashMap};

use crate::compression::{build_index, gdict_index_bytes, CompressionMethod, IndexDef};
use crate::data::TableStats;
use crate::sampling::{estimate_distinct, FrequencyStats, Sample, SampleManager, LOW_CONFIDENCE_ROWS};

use super::plan::{EstimationPlan, NodeState};
use super::{
    deduce_colext_orddep, deduce_colext_ordind, deduce_colset, DeductionKind, ErrorModel, EstimateError,
    EstimationContext, Provenance, SizeEstimate,
};

/// Builds `def` on the sample and scales its compression fraction to the
/// full index size.
pub fn sample_cf(
    def: &IndexDef,
    sample: &Sample,
    full_uncompressed_pages: f64,
    model: &ErrorModel,
) -> Result<SizeEstimate, EstimateError> {
    sample_cf_with_stats(def, sample, full_uncompressed_pages, model, None)
}

/// Like [`sample_cf`]. A GDICT index's size is fixed by the distinct
/// counts of its columns, so for GDICT the fraction is computed from those
/// counts: exact ones from `stats` for unfiltered indexes, otherwise
/// extrapolated from the sample.
pub fn sample_cf_with_stats(
    def: &IndexDef,
    sample: &Sample,
    full_uncompressed_pages: f64,
    model: &ErrorModel,
    stats: Option<&TableStats>,
) -> Result<SizeEstimate, EstimateError> {
    let built = build_index(&sample.rows, def)?;
    let f = sample.fraction;
    if built.tuple_count == 0 {
        return Ok(SizeEstimate {
            pages: full_uncompressed_pages,
            uncompressed_pages: full_uncompressed_pages,
            cf: 1.0,
            err_mean: 1.0,
            err_var: if f >= 1.0 { 0.0 } else { model.empty_sample_variance },
            provenance: Provenance::Sampled { f },
            low_confidence: true,
        });
    }
    let cf = if def.method == CompressionMethod::GlobalDict && f < 1.0 {
        gdict_cf(def, sample, &built.columns, built.tuple_count as u64, stats)?
    } else {
        built.cf()
    };
    let (err_mean, err_var) = model.sample_cf(def.method, f, Some(built.tuple_count as f64));
    Ok(SizeEstimate {
        pages: cf * full_uncompressed_pages,
        uncompressed_pages: full_uncompressed_pages,
        cf,
        err_mean,
        err_var,
        provenance: Provenance::Sampled { f },
        low_confidence: built.tuple_count < LOW_CONFIDENCE_ROWS,
    })
}

fn gdict_cf(
    def: &IndexDef,
    sample: &Sample,
    columns: &[String],
    sample_tuples: u64,
    stats: Option<&TableStats>,
) -> Result<f64, EstimateError> {
    let t = &sample.rows;
    let exact = stats.filter(|_| def.filter.is_none());
    let rows = match exact {
        Some(s) => s.total_tuples,
        None => (sample_tuples as f64 / sample.fraction).round() as u64,
    };
    let matching: Vec<usize> = match &def.filter {
        Some(p) => p.bind(t)?.matching_rows(t),
        None => (0..t.rows()).collect(),
    };
    let mut widths = Vec::with_capacity(columns.len());
    let mut distinct = Vec::with_capacity(columns.len());
    for c in columns {
        let ci = t.column_index(c)?;
        widths.push(t.column_type(ci).width());
        let d = match exact {
            Some(s) => s.column(c)?.distinct_count,
            None => {
                let mut counts: HashMap<&[u8], u64> = HashMap::new();
                for &r in &matching {
                    *counts.entry(t.value(ci, r)).or_insert(0) += 1;
                }
                let fs = FrequencyStats::from_counts(counts.into_values(), rows.max(sample_tuples))?;
                estimate_distinct(&fs)?
            }
        };
        distinct.push(d);
    }
    let (raw, compressed) = gdict_index_bytes(rows, &widths, &distinct)?;
    Ok(if raw == 0 { 1.0 } else { compressed as f64 / raw as f64 })
}

/// Runs a plan: samples the SAMPLED indexes, then applies deductions in
/// dependency order. Returns estimates keyed by index id.
pub fn execute_plan(
    plan: &EstimationPlan,
    samples: &SampleManager,
    ctx: &EstimationContext,
) -> Result<BTreeMap<String, SizeEstimate>, EstimateError> {
    let g = &plan.graph;
    let needs_groups: Vec<IndexDef> = g
        .nodes
        .iter()
        .zip(&plan.states)
        .filter(|(_, s)| matches!(s, NodeState::Deduced(d) if g.deductions[*d].kind == DeductionKind::ColExtOrdDep))
        .map(|(n, _)| n.def.clone())
        .collect();
    let owned;
    let ctx = if needs_groups.is_empty() {
        ctx
    } else {
        let mut c = ctx.clone();
        let tables: Vec<&crate::data::Table> = samples.tables().map(|t| t.as_ref()).collect();
        c.ensure_prefix_groups(&tables, &needs_groups)?;
        owned = c;
        &owned
    };

    let mut order: Vec<usize> = (0..g.nodes.len()).collect();
    order.sort_by_key(|&i| g.nodes[i].rank);
    let mut out: Vec<Option<SizeEstimate>> = vec![None; g.nodes.len()];
    for i in order {
        let node = &g.nodes[i];
        let est = match plan.states[i] {
            NodeState::None => continue,
            NodeState::Exact => node
                .known
                .clone()
                .ok_or_else(|| EstimateError::MissingEstimate(node.id.clone()))?,
            NodeState::Sampled => {
                let sample = samples.sample(&node.def.table, plan.f)?;
                let stats = &ctx.info(&node.def.table)?.stats;
                sample_cf_with_stats(&node.def, &sample, node.uncompressed_pages as f64, &ctx.model, Some(stats))?
            }
            NodeState::Deduced(d) => {
                let dn = &g.deductions[d];
                let mut parts = Vec::with_capacity(dn.children.len());
                for &c in &dn.children {
                    let e = out[c]
                        .as_ref()
                        .ok_or_else(|| EstimateError::MissingEstimate(g.nodes[c].id.clone()))?;
                    parts.push((&g.nodes[c].def, e));
                }
                match dn.kind {
                    DeductionKind::ColSet => deduce_colset(&node.def, parts[0].0, parts[0].1, ctx)?,
                    DeductionKind::ColExtOrdInd => deduce_colext_ordind(&node.def, &parts, ctx)?,
                    DeductionKind::ColExtOrdDep => deduce_colext_orddep(&node.def, &parts, ctx)?,
                }
            }
        };
        out[i] = Some(est);
    }
    Ok(g.nodes
        .iter()
        .zip(out)
        .filter_map(|(n, e)| e.map(|e| (n.id.clone(), e)))
        .collect())
}
