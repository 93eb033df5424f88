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

use compadv::compression::{build_index, CompressionMethod, IndexDef};
use compadv::estimate::{
    all_sampled_cost, deduce_colset, distinct_per_page, execute_plan, f_ratio, plan_exact, plan_greedy,
    run_length_extended, run_length_leading, AccuracyRequirement, DeductionGraph, EstimateError,
    EstimationContext, NodeState, Provenance, SizeEstimate, DEFAULT_F_GRID,
};
use compadv::sampling::SampleManager;
use proptest::prelude::*;

fn ctx_for(t: &compadv::data::Table) -> EstimationContext {
    EstimationContext::from_tables([t]).unwrap()
}

#[test]
fn worked_page_example() {
    // a page of four tuples holding a single value of A
    assert_eq!(f_ratio(4, 1), 0.75);
    // eight tuples, |A| = 2, |AB| = 4
    let l_a = run_length_leading(8, 2);
    assert_eq!(l_a, 4);
    let l_ba = run_length_extended(l_a, 2, 4);
    assert_eq!(l_ba, 2);
    assert_eq!(distinct_per_page(4, l_ba, 2), 2);
}

#[test]
fn correlated_columns_keep_their_runs() {
    let l = run_length_leading(1_000, 10);
    assert_eq!(run_length_extended(l, 10, 10), l);
}

#[test]
fn short_runs_use_the_dice_expectation() {
    // |Y| = 6 thrown 6 times: 6 - 6 (5/6)^6 = 3.99 -> 4
    assert_eq!(distinct_per_page(6, 1, 6), 4);
    assert_eq!(distinct_per_page(100, 1, 1), 1);
}

#[test]
fn accuracy_requirement_is_validated() {
    assert!(AccuracyRequirement::new(0.1, 0.9).is_ok());
    for (e, q) in [(0.0, 0.9), (-1.0, 0.9), (0.1, 0.0), (0.1, 1.0), (f64::INFINITY, 0.5)] {
        assert!(matches!(AccuracyRequirement::new(e, q), Err(EstimateError::InvalidRequirement(_))));
    }
}

#[test]
fn colset_copies_a_built_size_exactly() {
    let t = common::lineitem(30_000, 1.0, 3);
    let ctx = ctx_for(&t);
    for m in [CompressionMethod::Ns, CompressionMethod::GlobalDict] {
        let a = IndexDef::new("lineitem", ["shipdate", "discount", "quantity"]).method(m);
        let b = IndexDef::new("lineitem", ["quantity", "shipdate", "discount"]).method(m);
        let ba = build_index(&t, &a).unwrap();
        let bb = build_index(&t, &b).unwrap();
        let known = SizeEstimate::exact(ba.compressed_pages(), ba.page_count() as f64);
        let got = deduce_colset(&b, &a, &known, &ctx).unwrap();
        assert_eq!(got.pages, bb.compressed_pages(), "{m}");
        assert!(matches!(got.provenance, Provenance::Deduced { .. }));
    }
}

#[test]
fn colset_rejects_page() {
    let t = common::lineitem(2_000, 1.0, 3);
    let ctx = ctx_for(&t);
    let a = common::lineitem_index(&["price", "tax"], CompressionMethod::Page);
    let b = common::lineitem_index(&["tax", "price"], CompressionMethod::Page);
    let known = SizeEstimate::exact(3.0, 5.0);
    assert!(matches!(deduce_colset(&b, &a, &known, &ctx), Err(EstimateError::Inapplicable { .. })));
}

#[test]
fn planners_need_targets() {
    let t = common::lineitem(1_000, 1.0, 3);
    let ctx = ctx_for(&t);
    let req = AccuracyRequirement::new(0.1, 0.9).unwrap();
    assert!(matches!(plan_greedy(&[], &[], req, &DEFAULT_F_GRID, &ctx), Err(EstimateError::NoTargets)));
    assert!(matches!(plan_exact(&[], &[], req, &DEFAULT_F_GRID, &ctx), Err(EstimateError::NoTargets)));
}

#[test]
fn unreachable_accuracy_is_infeasible() {
    let t = common::lineitem(5_000, 1.0, 3);
    let ctx = ctx_for(&t);
    let req = AccuracyRequirement::new(1e-6, 0.99).unwrap();
    let targets = [common::lineitem_index(&["partkey"], CompressionMethod::Page)];
    match plan_greedy(&targets, &[], req, &[0.01], &ctx) {
        Err(EstimateError::Infeasible { e, q, grid }) => {
            assert_eq!((e, q), (1e-6, 0.99));
            assert_eq!(grid, vec![0.01]);
        }
        other => panic!("expected infeasible, got {other:?}"),
    }
}

#[test]
fn plans_meet_the_requirement_and_execute() {
    let t = common::lineitem(20_000, 1.0, 4);
    let ctx = ctx_for(&t);
    let targets = common::lineitem_indexes();
    let req = AccuracyRequirement::new(0.5, 0.9).unwrap();
    let plan = plan_greedy(&targets, &[], req, &DEFAULT_F_GRID, &ctx).unwrap();
    for n in plan.nodes().iter().filter(|n| n.target) {
        assert!(n.prob_within >= 0.9 - 1e-12, "{}: {}", n.index, n.prob_within);
        assert_ne!(n.state, NodeState::None);
    }
    let sm = SampleManager::new(1).with_table(t.clone());
    let est = execute_plan(&plan, &sm, &ctx).unwrap();
    for d in &targets {
        let e = est.get(&d.id()).unwrap_or_else(|| panic!("no estimate for {d}"));
        assert!(e.pages >= 0.0 && e.pages <= e.uncompressed_pages + 1.0, "{d}: {e:?}");
    }
    let all = all_sampled_cost(&targets, &[], plan.f, &ctx).unwrap();
    assert!(plan.total_cost <= all);
}

#[test]
fn exact_never_costs_more_than_greedy() {
    let t = common::lineitem(10_000, 1.0, 6);
    let ctx = ctx_for(&t);
    let shapes = common::lineitem_shapes();
    for (k, e) in [(0usize, 0.3), (3, 0.5), (5, 0.8)] {
        let targets: Vec<IndexDef> = shapes[k..k + 4]
            .iter()
            .flat_map(|s| [CompressionMethod::Ns, CompressionMethod::Page].map(|m| common::lineitem_index(s, m)))
            .collect();
        let req = AccuracyRequirement::new(e, 0.9).unwrap();
        let g = plan_greedy(&targets, &[], req, &DEFAULT_F_GRID, &ctx).unwrap();
        let x = plan_exact(&targets, &[], req, &DEFAULT_F_GRID, &ctx).unwrap();
        assert!(x.total_cost <= g.total_cost, "exact {} > greedy {}", x.total_cost, g.total_cost);
    }
}

#[test]
fn known_sizes_are_not_resampled() {
    let t = common::lineitem(10_000, 1.0, 6);
    let ctx = ctx_for(&t);
    let def = common::lineitem_index(&["shipdate"], CompressionMethod::Page);
    let known = vec![(def.clone(), SizeEstimate::exact(10.0, 20.0))];
    let req = AccuracyRequirement::new(0.1, 0.9).unwrap();
    let plan = plan_greedy(std::slice::from_ref(&def), &known, req, &DEFAULT_F_GRID, &ctx).unwrap();
    assert_eq!(plan.total_cost, 0);
    assert_eq!(all_sampled_cost(&[def], &known, 0.05, &ctx).unwrap(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn graphs_are_acyclic(mask in prop::collection::vec(any::<bool>(), 30)) {
        let t = common::lineitem(2_000, 1.0, 1);
        let ctx = ctx_for(&t);
        let targets: Vec<IndexDef> = common::lineitem_indexes()
            .into_iter()
            .zip(&mask)
            .filter(|(_, &m)| m)
            .map(|(d, _)| d)
            .collect();
        prop_assume!(!targets.is_empty());
        let g = DeductionGraph::build(&targets, &[], &ctx).unwrap();
        prop_assert!(g.is_acyclic());
        for d in &g.deductions {
            for &c in &d.children {
                prop_assert!(g.nodes[c].columns.len() <= g.nodes[d.parent].columns.len());
            }
        }
        for t in &targets {
            prop_assert!(g.find(t).is_some());
        }
    }
}
