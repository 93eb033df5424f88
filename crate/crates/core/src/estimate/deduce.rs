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

//! Deducing compressed sizes from the sizes of related indexes.

use std::collections::BTreeSet;

use crate::compression::{rows_per_page, Category, IndexDef};
use crate::data::ColumnStats;

use super::{compose_error, DeductionKind, EstimateError, EstimationContext, Provenance, SizeEstimate};

fn inapplicable(kind: DeductionKind, reason: impl Into<String>) -> EstimateError {
    EstimateError::Inapplicable {
        kind,
        reason: reason.into(),
    }
}

/// Tuples held by one uncompressed page of rows `width` bytes wide.
pub fn tuples_per_page(width: usize) -> Result<u64, EstimateError> {
    Ok(rows_per_page(width)? as u64)
}

/// Fraction of a page's `t` values of a column removed by the local
/// dictionary when `dv` of them are distinct.
pub fn f_ratio(t: u64, dv: u64) -> f64 {
    if t == 0 {
        0.0
    } else {
        t.saturating_sub(dv) as f64 / t as f64
    }
}

/// Average run of equal values of a leading column.
pub fn run_length_leading(total_tuples: u64, distinct: u64) -> u64 {
    total_tuples.div_ceil(distinct.max(1))
}

/// Average run of a column once a leading column with `distinct_combined`
/// joint values breaks its runs apart.
pub fn run_length_extended(run_alone: u64, distinct: u64, distinct_combined: u64) -> u64 {
    (run_alone * distinct).div_ceil(distinct_combined.max(1))
}

/// Expected distinct values of a column among the `t` tuples of a page.
pub fn distinct_per_page(t: u64, run: u64, distinct: u64) -> u64 {
    if run > 1 {
        t.div_ceil(run)
    } else {
        let y = distinct.max(1) as f64;
        (y - y * (1.0 - 1.0 / y).powf(t as f64)).ceil() as u64
    }
}

/// Leading bytes common to every value of a column, NULL included.
fn column_shared_prefix(cs: &ColumnStats) -> usize {
    let p = cs.min.iter().zip(&cs.max).take_while(|(a, b)| a == b).count();
    if cs.null_fraction > 0.0 {
        cs.min[..p].iter().take_while(|&&b| b == 0).count()
    } else {
        p
    }
}

fn column_set(ctx: &EstimationContext, def: &IndexDef) -> Result<BTreeSet<String>, EstimateError> {
    Ok(ctx.stored_columns(def)?.into_iter().collect())
}

fn clamp(pages: f64, uncompressed: f64) -> (f64, bool) {
    if pages < 1.0 && uncompressed >= 1.0 {
        (1.0, true)
    } else {
        (pages.max(0.0), false)
    }
}

/// Copies the size of an index over the same columns and ORD-IND codec.
pub fn deduce_colset(
    target: &IndexDef,
    known_def: &IndexDef,
    known: &SizeEstimate,
    ctx: &EstimationContext,
) -> Result<SizeEstimate, EstimateError> {
    let kind = DeductionKind::ColSet;
    if target.method.category() != Some(Category::OrderIndependent) {
        return Err(inapplicable(kind, format!("{} is not order independent", target.method)));
    }
    if known_def.method != target.method || known_def.table != target.table || known_def.filter != target.filter {
        return Err(inapplicable(kind, "indexes differ in table, filter or method"));
    }
    if column_set(ctx, target)? != column_set(ctx, known_def)? {
        return Err(inapplicable(kind, "column sets differ"));
    }
    let u = ctx.uncompressed_pages(target)? as f64;
    Ok(SizeEstimate {
        pages: known.pages,
        uncompressed_pages: u,
        cf: if u > 0.0 { known.pages / u } else { 1.0 },
        err_mean: 0.0,
        err_var: 0.0,
        provenance: Provenance::Deduced {
            method: kind,
            inputs: vec![known_def.id()],
        },
        low_confidence: known.low_confidence,
    }
    .with_error(compose_error(&[known.error(), ctx.model.colset()])))
}

impl SizeEstimate {
    fn with_error(mut self, (e, v): (f64, f64)) -> Self {
        self.err_mean = e;
        self.err_var = v;
        self
    }
}

fn check_parts(
    kind: DeductionKind,
    target: &IndexDef,
    parts: &[(&IndexDef, &SizeEstimate)],
    ctx: &EstimationContext,
) -> Result<(), EstimateError> {
    if parts.len() < 2 {
        return Err(inapplicable(kind, "needs at least two parts"));
    }
    let want = column_set(ctx, target)?;
    let mut seen = BTreeSet::new();
    for (d, _) in parts {
        if d.method != target.method || d.table != target.table || d.filter != target.filter {
            return Err(inapplicable(kind, format!("part {} differs in table, filter or method", d.id())));
        }
        for c in ctx.stored_columns(d)? {
            if !seen.insert(c.clone()) {
                return Err(inapplicable(kind, format!("column '{c}' appears in two parts")));
            }
        }
    }
    if seen != want {
        return Err(inapplicable(kind, "parts do not cover the target's columns"));
    }
    Ok(())
}

fn deduced(
    kind: DeductionKind,
    target: &IndexDef,
    parts: &[(&IndexDef, &SizeEstimate)],
    u: f64,
    saved: f64,
    ctx: &EstimationContext,
) -> SizeEstimate {
    let (pages, clamped) = clamp(u - saved, u);
    let category = target.method.category().expect("compressed method");
    let mut factors: Vec<(f64, f64)> = parts.iter().map(|(_, s)| s.error()).collect();
    factors.push(ctx.model.colext(category, parts.len()));
    SizeEstimate {
        pages,
        uncompressed_pages: u,
        cf: if u > 0.0 { pages / u } else { 1.0 },
        err_mean: 0.0,
        err_var: 0.0,
        provenance: Provenance::Deduced {
            method: kind,
            inputs: parts.iter().map(|(d, _)| d.id()).collect(),
        },
        low_confidence: clamped || parts.iter().any(|(_, s)| s.low_confidence),
    }
    .with_error(compose_error(&factors))
}

/// Size of an ORD-IND index from indexes on a partition of its columns:
/// the target saves exactly what its parts save.
pub fn deduce_colext_ordind(
    target: &IndexDef,
    parts: &[(&IndexDef, &SizeEstimate)],
    ctx: &EstimationContext,
) -> Result<SizeEstimate, EstimateError> {
    let kind = DeductionKind::ColExtOrdInd;
    if target.method.category() != Some(Category::OrderIndependent) {
        return Err(inapplicable(kind, format!("{} is not order independent", target.method)));
    }
    check_parts(kind, target, parts, ctx)?;
    let u = ctx.uncompressed_pages(target)? as f64;
    let saved: f64 = parts.iter().map(|(_, s)| s.uncompressed_pages - s.pages).sum();
    Ok(deduced(kind, target, parts, u, saved, ctx))
}

/// Size of a PAGE index from indexes on contiguous groups of its columns.
/// Each part's savings are scaled by how much the columns before it in the
/// target shorten its runs of equal values, except for savings from a
/// prefix that every value of the column shares.
pub fn deduce_colext_orddep(
    target: &IndexDef,
    parts: &[(&IndexDef, &SizeEstimate)],
    ctx: &EstimationContext,
) -> Result<SizeEstimate, EstimateError> {
    let kind = DeductionKind::ColExtOrdDep;
    if target.method.category() != Some(Category::OrderDependent) {
        return Err(inapplicable(kind, format!("{} is not order dependent", target.method)));
    }
    check_parts(kind, target, parts, ctx)?;
    let cols = ctx.stored_columns(target)?;
    let stats = &ctx.info(&target.table)?.stats;
    let distinct = |g: &[String]| {
        stats
            .group_distinct(g)
            .ok_or_else(|| inapplicable(kind, format!("no distinct count for ({})", g.join(","))))
    };

    let t_target = tuples_per_page(ctx.row_width(target)?)?;
    let mut saved = 0.0;
    for (def, est) in parts {
        let pc = ctx.stored_columns(def)?;
        let start = cols
            .iter()
            .position(|c| *c == pc[0])
            .expect("parts cover the target");
        if cols.get(start..start + pc.len()) != Some(&pc[..]) {
            return Err(inapplicable(kind, format!("part {} is not a contiguous run of the target", def.id())));
        }
        let r_part = est.uncompressed_pages - est.pages;
        if start == 0 {
            saved += r_part;
            continue;
        }
        // a prefix shared by every value of the column is suppressed on any
        // page whatever the order; only the rest depends on runs
        let mut shared = 0usize;
        for c in &pc {
            shared += column_shared_prefix(stats.column(c)?);
        }
        let width = ctx.row_width(def)?;
        let r_shared = (est.uncompressed_pages * shared as f64 / width as f64).min(r_part.max(0.0));
        let d_part = distinct(&pc)?;
        let d_comb = distinct(&cols[..start + pc.len()])?;
        if d_comb < d_part {
            return Err(inapplicable(kind, "joint distinct count below a part's distinct count"));
        }
        let t_part = tuples_per_page(ctx.row_width(def)?)?;
        let l_part = run_length_leading(ctx.index_rows(def)?, d_part);
        let l_target = run_length_extended(l_part, d_part, d_comb);
        let f_part = f_ratio(t_part, distinct_per_page(t_part, l_part, d_part));
        let f_target = f_ratio(t_target, distinct_per_page(t_target, l_target, d_part));
        let ratio = if f_part == 0.0 { 1.0 } else { f_target / f_part };
        saved += r_shared + (r_part - r_shared) * ratio;
    }
    let u = ctx.uncompressed_pages(target)? as f64;
    Ok(deduced(kind, target, parts, u, saved, ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_intermediates() {
        assert_eq!(f_ratio(4, 1), 0.75);
        let l_a = run_length_leading(8, 2);
        assert_eq!(l_a, 4);
        let l_ba = run_length_extended(l_a, 2, 4);
        assert_eq!(l_ba, 2);
        assert_eq!(distinct_per_page(4, l_ba, 2), 2);
    }

    #[test]
    fn correlated_columns_keep_their_runs() {
        let l = run_length_leading(1000, 10);
        assert_eq!(run_length_extended(l, 10, 10), l);
    }

    #[test]
    fn dice_expectation_for_short_runs() {
        // 6-sided die thrown 6 times: 6 - 6 (5/6)^6 = 3.99
        assert_eq!(distinct_per_page(6, 1, 6), 4);
        assert_eq!(distinct_per_page(100, 1, 1), 1);
    }
}
