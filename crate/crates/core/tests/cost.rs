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


mod common;

use compadv::compression::{CompressionMethod, IndexDef};
use compadv::cost::{
    best_plan, heap_pages, read_cost, selectivity, update_cost, workload_cost, AccessPath, ConfiguredIndex,
    Configuration, CostError, CostModelParams, SelectStatement, Statement,
};
use compadv::data::{CmpOp, ColumnDef, ColumnType, Literal, Predicate, Table};
use compadv::estimate::{EstimationContext, SizeEstimate};
use proptest::prelude::*;

const ROWS: i64 = 10_000;

/// `k` runs 1..=10000, `g` = k mod 100, plus a 48-byte payload.
fn table() -> Table {
    let (mut k, mut g, mut pad) = (Vec::new(), Vec::new(), Vec::new());
    for i in 1..=ROWS {
        k.extend_from_slice(&i.to_be_bytes());
        g.extend_from_slice(&(i % 100).to_be_bytes());
        let mut p = [b'x'; 48];
        p[..8].copy_from_slice(&i.to_be_bytes());
        pad.extend_from_slice(&p);
    }
    Table::from_columns(
        "t",
        vec![
            ColumnDef::new("k", ColumnType::Int64),
            ColumnDef::new("g", ColumnType::Int64),
            ColumnDef::new("pad", ColumnType::Char(48)),
        ],
        vec![k, g, pad],
    )
    .unwrap()
}

fn ctx() -> EstimationContext {
    EstimationContext::from_tables([&table()]).unwrap()
}

fn ix(def: IndexDef, pages: f64, ctx: &EstimationContext) -> ConfiguredIndex {
    let u = ctx.uncompressed_pages(&def).unwrap() as f64;
    ConfiguredIndex::new(def, SizeEstimate::exact(pages, u))
}

fn range_k(lo: i64, hi: i64) -> Predicate {
    Predicate::between("k", Literal::Int(lo), Literal::Int(hi))
}

/// The cost of a covering full scan, written out from the model's terms.
fn covering_scan_oracle(pages: f64, tuples: f64, cols: f64, beta: f64, p: &CostModelParams) -> f64 {
    pages * p.io_page_cost + tuples * p.cpu_tuple_cost + beta * tuples * cols
}

#[test]
fn heap_scan_reads_every_page() {
    let c = ctx();
    let p = CostModelParams::default();
    // 64-byte rows: (8192 - 16) / 64 = 127 per page
    let pages = (ROWS as f64 / 127.0).ceil();
    assert_eq!(heap_pages("t", &c).unwrap(), pages);
    let s: Statement = SelectStatement::new("t").project(["pad"]).into();
    let plan = best_plan(&s, &Configuration::new(), &c, &p).unwrap();
    assert_eq!(plan.path, AccessPath::HeapScan);
    assert!((plan.total - (pages + ROWS as f64 * p.cpu_tuple_cost)).abs() < 1e-9);
}

#[test]
fn range_selectivity_is_uniform() {
    let c = ctx();
    let s = SelectStatement::new("t").filter(range_k(1, 1_000));
    let sel = selectivity(&s, &c).unwrap();
    assert!((sel - 0.1).abs() < 1e-3, "{sel}");
    let both = s.filter(Predicate::new("g", CmpOp::Eq, Literal::Int(7)));
    let sel2 = selectivity(&both, &c).unwrap();
    assert!((sel2 - 0.1 * 0.01).abs() < 1e-4, "{sel2}");
}

#[test]
fn uncompressed_cost_has_no_surcharge() {
    let c = ctx();
    let s: Statement = SelectStatement::new("t").project(["k", "g"]).into();
    let def = IndexDef::new("t", ["k", "g"]);
    let cix = ix(def, 40.0, &c);
    let zero = CostModelParams {
        beta_row: 0.0,
        beta_page: 0.0,
        ..CostModelParams::default()
    };
    for p in [CostModelParams::default(), zero] {
        let got = read_cost(&s, Some(&cix), &c, &p).unwrap().unwrap();
        let want = covering_scan_oracle(40.0, ROWS as f64, 2.0, 0.0, &p);
        assert!((got.total - want).abs() < 1e-9);
    }
}

#[test]
fn decompression_surcharge_is_per_tuple_and_column() {
    let c = ctx();
    let p = CostModelParams::default();
    let s: Statement = SelectStatement::new("t").project(["k", "g"]).into();
    let plain = read_cost(&s, Some(&ix(IndexDef::new("t", ["k", "g"]), 40.0, &c)), &c, &p)
        .unwrap()
        .unwrap();
    for m in [CompressionMethod::Ns, CompressionMethod::GlobalDict, CompressionMethod::Page] {
        let d = IndexDef::new("t", ["k", "g"]).method(m);
        let got = read_cost(&s, Some(&ix(d, 40.0, &c)), &c, &p).unwrap().unwrap();
        // 10^4 tuples times 2 columns
        assert!((got.total - plain.total - p.beta(m) * 1e4 * 2.0).abs() < 1e-9, "{m}");
    }
}

#[test]
fn compression_trades_io_for_cpu() {
    let c = ctx();
    let s: Statement = SelectStatement::new("t").project(["k", "g", "pad"]).into();
    let wide = IndexDef::new("t", ["k", "g", "pad"]);
    let u = c.uncompressed_pages(&wide).unwrap() as f64;
    // 79 pages shrink to 26 while 3 * 10^4 values get decoded
    let plain = ix(wide.clone(), u, &c);
    let packed = ix(wide.with_method(CompressionMethod::Page), u / 3.0, &c);
    let cheap_cpu = CostModelParams::default();
    let dear_cpu = CostModelParams {
        beta_page: 1.0,
        ..CostModelParams::default()
    };
    let cost = |i: &ConfiguredIndex, p: &CostModelParams| read_cost(&s, Some(i), &c, p).unwrap().unwrap().total;
    assert!(cost(&packed, &cheap_cpu) < cost(&plain, &cheap_cpu));
    assert!(cost(&packed, &dear_cpu) > cost(&plain, &dear_cpu));
}

#[test]
fn seek_reads_the_matching_fraction() {
    let c = ctx();
    let p = CostModelParams::default();
    let s: Statement = SelectStatement::new("t").filter(range_k(1, 1_000)).project(["k", "g"]).into();
    let cix = ix(IndexDef::new("t", ["k", "g"]), 40.0, &c);
    let got = read_cost(&s, Some(&cix), &c, &p).unwrap().unwrap();
    assert_eq!(
        got.path,
        AccessPath::CoveringIndexScan {
            index: cix.def.id(),
            seek: true
        }
    );
    let sel = selectivity(&SelectStatement::new("t").filter(range_k(1, 1_000)), &c).unwrap();
    let want = covering_scan_oracle(40.0 * sel, ROWS as f64 * sel, 2.0, 0.0, &p);
    assert!((got.total - want).abs() < 1e-9);
}

#[test]
fn non_covering_index_pays_lookups() {
    let c = ctx();
    let p = CostModelParams::default();
    let s: Statement = SelectStatement::new("t").filter(range_k(1, 100)).project(["pad"]).into();
    let cix = ix(IndexDef::new("t", ["k"]), 20.0, &c);
    let got = read_cost(&s, Some(&cix), &c, &p).unwrap().unwrap();
    assert_eq!(got.path, AccessPath::IndexRangeScan { index: cix.def.id() });
    let sel = selectivity(&SelectStatement::new("t").filter(range_k(1, 100)), &c).unwrap();
    let tuples = ROWS as f64 * sel;
    let want = 20.0 * sel + tuples * p.cpu_tuple_cost + p.lookup_cost * tuples;
    assert!((got.total - want).abs() < 1e-9);
    // no predicate on the leading key and not covering
    let other = ix(IndexDef::new("t", ["g"]), 20.0, &c);
    assert!(read_cost(&s, Some(&other), &c, &p).unwrap().is_none());
}

#[test]
fn partial_index_needs_a_contained_predicate() {
    let c = ctx();
    let p = CostModelParams::default();
    let part = IndexDef::new("t", ["k"]).include(["g"]).filter(range_k(1, 5_000));
    let cix = ix(part, 10.0, &c);
    let inside: Statement = SelectStatement::new("t").filter(range_k(10, 20)).project(["g"]).into();
    let outside: Statement = SelectStatement::new("t").filter(range_k(4_000, 6_000)).project(["g"]).into();
    assert!(read_cost(&inside, Some(&cix), &c, &p).unwrap().is_some());
    assert!(read_cost(&outside, Some(&cix), &c, &p).unwrap().is_none());
}

#[test]
fn insert_cost_grows_with_codec_weight() {
    let c = ctx();
    let p = CostModelParams {
        maintenance: 0.0,
        alpha_row: 0.1,
        alpha_page: 0.5,
        ..CostModelParams::default()
    };
    let ins = Statement::insert("t", 1_000);
    let cost = |m| update_cost(&ins, &ix(IndexDef::new("t", ["k"]).method(m), 10.0, &c), &c, &p).unwrap();
    let (none, ns, page) = (cost(CompressionMethod::None), cost(CompressionMethod::Ns), cost(CompressionMethod::Page));
    assert!(page >= ns && ns >= none);
    assert!((page - 500.0).abs() < 1e-9);
    assert_eq!(none, 0.0);
}

#[test]
fn partial_indexes_are_maintained_for_their_share() {
    let c = ctx();
    let p = CostModelParams::default();
    let ins = Statement::insert("t", 1_000);
    let full = update_cost(&ins, &ix(IndexDef::new("t", ["k"]), 10.0, &c), &c, &p).unwrap();
    let half = update_cost(&ins, &ix(IndexDef::new("t", ["k"]).filter(range_k(1, 5_000)), 5.0, &c), &c, &p).unwrap();
    assert!((half / full - 0.5).abs() < 0.01, "{half} vs {full}");
}

#[test]
fn misuse_is_reported() {
    let c = ctx();
    let p = CostModelParams::default();
    let sel: Statement = SelectStatement::new("t").project(["k"]).into();
    let ins = Statement::insert("t", 1);
    let i = ix(IndexDef::new("t", ["k"]), 1.0, &c);
    assert!(matches!(update_cost(&sel, &i, &c, &p), Err(CostError::WrongKind { .. })));
    assert!(matches!(read_cost(&ins, None, &c, &p), Err(CostError::WrongKind { .. })));
    let bad = CostModelParams {
        alpha_page: 0.0,
        ..CostModelParams::default()
    };
    assert!(bad.validate().is_err());
    let mut cfg = Configuration::new();
    cfg.add(ix(IndexDef::new("t", ["k"]).clustered(true), 1.0, &c)).unwrap();
    assert!(matches!(
        cfg.add(ix(IndexDef::new("t", ["g"]).clustered(true), 1.0, &c)),
        Err(CostError::DuplicateClustered(_))
    ));
}

fn pool(c: &EstimationContext) -> Vec<ConfiguredIndex> {
    let mut out = Vec::new();
    for (keys, inc) in [(vec!["k"], vec![]), (vec!["g"], vec!["k"]), (vec!["k", "g"], vec!["pad"]), (vec!["g", "k"], vec![])] {
        for (m, shrink) in [(CompressionMethod::None, 1.0), (CompressionMethod::Ns, 0.7), (CompressionMethod::Page, 0.4)] {
            let d = IndexDef::new("t", keys.clone()).include(inc.clone()).method(m);
            let u = c.uncompressed_pages(&d).unwrap() as f64;
            out.push(ix(d, u * shrink, c));
        }
    }
    out
}

fn stmt_strategy() -> impl Strategy<Value = Statement> {
    (1i64..ROWS, 0i64..3_000, any::<bool>(), 0usize..3, 0i64..100).prop_map(|(lo, w, eq, proj, g)| {
        let mut s = SelectStatement::new("t").filter(range_k(lo, (lo + w).min(ROWS)));
        if eq {
            s = s.filter(Predicate::new("g", CmpOp::Eq, Literal::Int(g)));
        }
        s = s.project(match proj {
            0 => vec!["k"],
            1 => vec!["g"],
            _ => vec!["pad"],
        });
        s.into()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn best_plan_is_the_cheapest_applicable_path(
        s in stmt_strategy(),
        mask in prop::collection::vec(any::<bool>(), 12),
    ) {
        let c = ctx();
        let p = CostModelParams::default();
        let chosen: Vec<ConfiguredIndex> = pool(&c).into_iter().zip(&mask).filter(|(_, &m)| m).map(|(i, _)| i).collect();
        let cfg = Configuration::from_indexes(chosen.clone()).unwrap();
        let mut brute = read_cost(&s, None, &c, &p).unwrap().unwrap().total;
        for i in &chosen {
            if let Some(pl) = read_cost(&s, Some(i), &c, &p).unwrap() {
                brute = brute.min(pl.total);
            }
        }
        prop_assert_eq!(best_plan(&s, &cfg, &c, &p).unwrap().total, brute);
    }

    #[test]
    fn adding_an_index_never_slows_reads_nor_speeds_inserts(
        s in stmt_strategy(),
        mask in prop::collection::vec(any::<bool>(), 12),
        extra in 0usize..12,
    ) {
        let c = ctx();
        let p = CostModelParams::default();
        let all = pool(&c);
        let chosen: Vec<ConfiguredIndex> = all.iter().zip(&mask).filter(|(_, &m)| m).map(|(i, _)| i.clone()).collect();
        let mut grown = chosen.clone();
        if !mask[extra] {
            grown.push(all[extra].clone());
        }
        let a = Configuration::from_indexes(chosen).unwrap();
        let b = Configuration::from_indexes(grown).unwrap();
        let reads = [s];
        prop_assert!(workload_cost(&reads, &b, &c, &p).unwrap() <= workload_cost(&reads, &a, &c, &p).unwrap());
        let writes = [Statement::insert("t", 100)];
        prop_assert!(workload_cost(&writes, &b, &c, &p).unwrap() >= workload_cost(&writes, &a, &c, &p).unwrap());
    }

    #[test]
    fn free_compression_is_transparent(s in stmt_strategy(), k in 0usize..4) {
        // with no surcharge and equal sizes, the codec cannot matter
        let c = ctx();
        let p = CostModelParams { beta_row: 0.0, beta_page: 0.0, ..CostModelParams::default() };
        let all = pool(&c);
        let base = &all[k * 3];
        for m in [CompressionMethod::Ns, CompressionMethod::Page] {
            let v = ConfiguredIndex::new(base.def.with_method(m), base.estimate.clone());
            let x = read_cost(&s, Some(base), &c, &p).unwrap().map(|pl| pl.total);
            let y = read_cost(&s, Some(&v), &c, &p).unwrap().map(|pl| pl.total);
            prop_assert_eq!(x, y);
        }
    }
}
