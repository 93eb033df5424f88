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

#![allow(dead_code)]

use compadv::compression::{CompressionMethod, IndexDef};
use compadv::data::{generate_synthetic, ColumnType, SyntheticColumn, SyntheticSpec, Table};

/// A LINEITEM-shaped table: order and part keys, small-domain flags,
/// dates, prices and a wide comment column.
pub fn lineitem_spec(rows: usize, zipf: f64, seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        name: "lineitem".into(),
        rows,
        seed,
        columns: vec![
            SyntheticColumn::new("orderkey", ColumnType::Int64, (rows / 4).max(1) as u64),
            SyntheticColumn::new("partkey", ColumnType::Int64, 20_000).zipf(zipf),
            SyntheticColumn::new("suppkey", ColumnType::Int64, 1_000).zipf(zipf),
            SyntheticColumn::new("linenumber", ColumnType::Int64, 7),
            SyntheticColumn::new("quantity", ColumnType::Int64, 50).zipf(zipf),
            SyntheticColumn::new("price", ColumnType::Int64, 90_000).zipf(zipf),
            SyntheticColumn::new("discount", ColumnType::Int64, 11).zipf(zipf),
            SyntheticColumn::new("tax", ColumnType::Int64, 9).zipf(zipf),
            SyntheticColumn::new("returnflag", ColumnType::Char(1), 3).zipf(zipf),
            SyntheticColumn::new("linestatus", ColumnType::Char(1), 2).correlated_with("returnflag", 0.8),
            SyntheticColumn::new("shipdate", ColumnType::Date, 2_500).zipf(zipf),
            SyntheticColumn::new("commitdate", ColumnType::Date, 2_500).correlated_with("shipdate", 0.7),
            SyntheticColumn::new("shipinstruct", ColumnType::Char(25), 4).zipf(zipf).prefix(6),
            SyntheticColumn::new("shipmode", ColumnType::Char(10), 7).zipf(zipf),
            SyntheticColumn::new("comment", ColumnType::Char(44), 50_000).zipf(zipf).prefix(3).nulls(0.2),
        ],
    }
}

pub fn lineitem(rows: usize, zipf: f64, seed: u64) -> Table {
    generate_synthetic(&lineitem_spec(rows, zipf, seed)).expect("valid spec")
}

/// Ten index shapes of one to three columns over the LINEITEM table.
pub fn lineitem_shapes() -> Vec<Vec<&'static str>> {
    vec![
        vec!["shipdate"],
        vec!["partkey"],
        vec!["comment"],
        vec!["returnflag", "linestatus"],
        vec!["suppkey", "partkey"],
        vec!["shipdate", "discount", "quantity"],
        vec!["shipmode", "shipinstruct"],
        vec!["orderkey", "linenumber"],
        vec!["price", "tax"],
        vec!["commitdate", "shipdate", "shipmode"],
    ]
}

pub fn lineitem_index(cols: &[&str], method: CompressionMethod) -> IndexDef {
    IndexDef::new("lineitem", cols.iter().copied()).method(method)
}

/// The ten shapes under NS, GDICT and PAGE.
pub fn lineitem_indexes() -> Vec<IndexDef> {
    let mut out = Vec::new();
    for m in [CompressionMethod::Ns, CompressionMethod::GlobalDict, CompressionMethod::Page] {
        for s in lineitem_shapes() {
            out.push(lineitem_index(&s, m));
        }
    }
    out
}

/// A fact table of `rows` line items whose `orderkey` references a
/// dimension of 25 000 orders spread over 2 000 order dates.
pub fn orders_fixture(rows: usize, seed: u64) -> (Table, Table) {
    use compadv::data::ColumnDef;
    let orders = 25_000u64;
    let mut okey = Vec::new();
    let mut odate = Vec::new();
    for k in 0..orders {
        okey.extend_from_slice(&((k + 1) as i64).to_be_bytes());
        // a fixed scramble so dates are not aligned with keys
        let d = (k.wrapping_mul(2_654_435_761) >> 7) % 2_000;
        odate.extend_from_slice(&(8_035 + d as i64).to_be_bytes());
    }
    let dim = Table::from_columns(
        "orders",
        vec![
            ColumnDef::new("o_orderkey", ColumnType::Int64),
            ColumnDef::new("o_orderdate", ColumnType::Date),
        ],
        vec![okey, odate],
    )
    .expect("valid dimension");
    let fact = generate_synthetic(&SyntheticSpec {
        name: "lineitem".into(),
        rows,
        seed,
        columns: vec![
            SyntheticColumn::new("orderkey", ColumnType::Int64, orders),
            SyntheticColumn::new("quantity", ColumnType::Int64, 50).zipf(1.0),
            SyntheticColumn::new("shipmode", ColumnType::Char(10), 7).zipf(1.0),
        ],
    })
    .expect("valid spec");
    (fact, dim)
}

/// A mock pool entry: `benefit[q]` is the time saved on query `q`.
pub struct MockIndex {
    pub name: &'static str,
    pub shape: &'static str,
    pub size: f64,
    pub compressed: bool,
    pub benefit: Vec<f64>,
}

/// Search candidates for a mock pool.
pub fn mock_pool(m: &[MockIndex]) -> Vec<compadv::advisor::EnumCandidate> {
    m.iter()
        .map(|i| compadv::advisor::EnumCandidate {
            id: i.name.into(),
            shape: i.shape.into(),
            table: "t".into(),
            size: i.size,
            compressed: i.compressed,
            clustered: false,
        })
        .collect()
}

/// Each query runs on the best index present for it, so indexes helping
/// the same query compete.
pub fn mock_cost(m: &[MockIndex], base: &[f64], set: &[usize]) -> f64 {
    base.iter()
        .enumerate()
        .map(|(q, b)| b - set.iter().map(|&i| m[i].benefit[q]).fold(0.0, f64::max))
        .sum()
}

/// Cheapest subset of the pool within `budget`, by enumeration.
pub fn mock_optimum(m: &[MockIndex], base: &[f64], budget: f64) -> f64 {
    let n = m.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if set.iter().map(|&i| m[i].size).sum::<f64>() <= budget + 1e-9 {
            best = best.min(mock_cost(m, base, &set));
        }
    }
    best
}

/// One query; I_B and I_C^C compete, I_C helps independently.
pub fn density_scenario() -> (Vec<MockIndex>, Vec<f64>) {
    let m = vec![
        MockIndex { name: "I_B", shape: "B", size: 10.0, compressed: false, benefit: vec![10.0, 0.0] },
        MockIndex { name: "I_C^C", shape: "C", size: 5.0, compressed: true, benefit: vec![8.0, 0.0] },
        MockIndex { name: "I_C", shape: "C", size: 10.0, compressed: false, benefit: vec![0.0, 5.0] },
    ];
    (m, vec![30.0, 30.0])
}

/// Two queries each served by one shape; the larger shape fills most of
/// the budget and the other fits only once the first is compressed.
pub fn backtrack_scenario() -> (Vec<MockIndex>, Vec<f64>) {
    let m = vec![
        MockIndex { name: "I_B", shape: "B", size: 10.0, compressed: false, benefit: vec![10.0, 0.0] },
        MockIndex { name: "I_C", shape: "C", size: 8.0, compressed: false, benefit: vec![0.0, 8.0] },
        MockIndex { name: "I_C^C", shape: "C", size: 6.0, compressed: true, benefit: vec![0.0, 7.0] },
        MockIndex { name: "I_B^C", shape: "B", size: 5.0, compressed: true, benefit: vec![9.0, 0.0] },
    ];
    (m, vec![50.0, 50.0])
}

const SHAPES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
const PLAIN: [&str; 6] = ["I_A", "I_B", "I_C", "I_D", "I_E", "I_F"];
const PACKED: [&str; 6] = ["I_A^C", "I_B^C", "I_C^C", "I_D^C", "I_E^C", "I_F^C"];

/// A random pool of up to six shapes, each with a compressed variant that
/// is smaller and slightly less useful, over four queries. Returns the
/// pool, the base query costs and a budget.
pub fn random_scenario(seed: u64) -> (Vec<MockIndex>, Vec<f64>, f64) {
    let mut rng = compadv::rng::SplitMix64::new(seed);
    let mut uni = |lo: f64, hi: f64| lo + (hi - lo) * rng.next_f64();
    let shapes = 3 + (uni(0.0, 4.0) as usize).min(3);
    let queries = 4;
    let mut m = Vec::new();
    let mut total = 0.0;
    for s in 0..shapes {
        let size = uni(5.0, 40.0);
        let benefit: Vec<f64> = (0..queries)
            .map(|_| if uni(0.0, 1.0) < 0.5 { uni(5.0, 60.0) } else { 0.0 })
            .collect();
        let cf = uni(0.3, 0.7);
        let keep = uni(0.8, 0.97);
        m.push(MockIndex { name: PLAIN[s], shape: SHAPES[s], size, compressed: false, benefit: benefit.clone() });
        m.push(MockIndex {
            name: PACKED[s],
            shape: SHAPES[s],
            size: size * cf,
            compressed: true,
            benefit: benefit.iter().map(|b| b * keep).collect(),
        });
        total += size;
    }
    let budget = total * uni(0.2, 0.6);
    (m, vec![100.0; queries], budget)
}
