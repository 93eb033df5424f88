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

use compadv::compression::{
    build_index, compress_page, decompress_page, estimate_uncompressed_size, ns_decode_value, ns_encode_value,
    CompressionMethod, GlobalDictionary, IndexDef, Page, RowLayout,
};
use compadv::data::{compute_stats, generate_synthetic, value, ColumnType, SyntheticColumn, SyntheticSpec, Table};
use proptest::prelude::*;

/// Column widths and row-major rows drawn from small alphabets so that
/// prefixes, repeats and NULs all occur.
fn page_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<u8>)> {
    prop::collection::vec(1usize..12, 1..5).prop_flat_map(|widths| {
        let rw: usize = widths.iter().sum();
        let max_rows = ((8192 - 16) / rw).min(300);
        let w2 = widths.clone();
        (0..=max_rows).prop_flat_map(move |n| {
            let widths = w2.clone();
            prop::collection::vec(prop::sample::select(vec![0u8, 0, 0, 1, 2, b'a', b'b', 255]), n * rw)
                .prop_map(move |bytes| (widths.clone(), bytes))
        })
    })
}

fn column_slices(rows: &[u8], widths: &[usize]) -> Vec<Vec<u8>> {
    let rw: usize = widths.iter().sum();
    let mut cols = vec![Vec::new(); widths.len()];
    for r in rows.chunks(rw) {
        let mut o = 0;
        for (c, w) in widths.iter().enumerate() {
            cols[c].extend_from_slice(&r[o..o + w]);
            o += w;
        }
    }
    cols
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn page_roundtrip_every_codec((widths, rows) in page_strategy()) {
        let layout = RowLayout::new(widths.clone());
        let page = Page::from_rows(&rows, &layout).unwrap();
        let cols = column_slices(&rows, &widths);
        let refs: Vec<&[u8]> = cols.iter().map(Vec::as_slice).collect();
        let dict = GlobalDictionary::build(&refs, &widths);
        for m in CompressionMethod::ALL {
            let d = (m == CompressionMethod::GlobalDict).then_some(&dict);
            let c = compress_page(&page, m, &layout, d).unwrap();
            prop_assert!(c.len() <= page.len() + 1, "{m}: {} > {}", c.len(), page.len());
            let back = decompress_page(&c, &layout, d).unwrap();
            prop_assert_eq!(back.rows().unwrap(), rows.as_slice());
        }
    }

    #[test]
    fn ns_value_roundtrip(v in prop::collection::vec(prop::sample::select(vec![0u8, 0, 0, 7, 255]), 1..600)) {
        let mut enc = Vec::new();
        ns_encode_value(&v, &mut enc);
        let mut pos = 0;
        let mut out = Vec::new();
        ns_decode_value(&enc, &mut pos, v.len(), &mut out).unwrap();
        prop_assert_eq!(out, v);
        prop_assert_eq!(pos, enc.len());
    }
}

fn small_table(rows: usize, seed: u64) -> Table {
    generate_synthetic(&SyntheticSpec {
        name: "t".into(),
        rows,
        seed,
        columns: vec![
            SyntheticColumn::new("a", ColumnType::Int64, 300).zipf(1.0),
            SyntheticColumn::new("b", ColumnType::Char(6), 40).prefix(2),
            SyntheticColumn::new("c", ColumnType::Date, 900),
            SyntheticColumn::new("d", ColumnType::Char(20), 2000).zipf(0.8).nulls(0.3),
            SyntheticColumn::new("e", ColumnType::Int64, 5),
        ],
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn order_independent_sizes_ignore_column_order(
        perm in Just(vec!["a", "b", "c", "d", "e"]).prop_shuffle(),
        k in 1usize..=5,
        seed in 0u64..4,
    ) {
        let t = small_table(3000, seed);
        let mut base: Vec<&str> = perm[..k].to_vec();
        base.sort_unstable();
        for m in [CompressionMethod::Ns, CompressionMethod::GlobalDict] {
            let sorted = build_index(&t, &IndexDef::new("t", base.iter().copied()).method(m)).unwrap();
            let shuffled = build_index(&t, &IndexDef::new("t", perm[..k].iter().copied()).method(m)).unwrap();
            prop_assert_eq!(sorted.bytes_compressed, shuffled.bytes_compressed);
            prop_assert_eq!(sorted.bytes_raw, shuffled.bytes_raw);
        }
    }

    #[test]
    fn built_index_is_sorted_and_lossless(
        keys in Just(vec!["a", "b", "c", "d", "e"]).prop_shuffle(),
        k in 1usize..=3,
        mi in 0usize..4,
    ) {
        let t = small_table(2500, 9);
        let m = CompressionMethod::ALL[mi];
        let def = IndexDef::new("t", keys[..k].iter().copied()).method(m);
        let built = build_index(&t, &def).unwrap();
        prop_assert!(built.bytes_compressed <= built.bytes_raw + built.page_count());
        let rows = built.decompressed_rows().unwrap();
        let rw = built.layout.row_width();
        prop_assert_eq!(rows.len(), t.rows() * rw);
        let types: Vec<ColumnType> = built.columns.iter().map(|c| t.column(c).unwrap().ty).collect();
        let key = |r: &[u8]| -> Vec<Vec<u8>> {
            let mut o = 0;
            built.layout.widths().iter().map(|w| { let v = r[o..o + w].to_vec(); o += w; v }).collect()
        };
        for pair in rows.chunks(rw).collect::<Vec<_>>().windows(2) {
            let (x, y) = (key(pair[0]), key(pair[1]));
            let ord = x.iter().zip(&y).zip(&types)
                .map(|((a, b), ty)| value::compare(*ty, a, b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal);
            prop_assert!(ord.is_le());
        }
    }
}

#[test]
fn uncompressed_size_estimate_matches_a_large_build() {
    let t = common::lineitem(100_000, 1.0, 5);
    let stats = compute_stats(&t, &[]).unwrap();
    for cols in common::lineitem_shapes() {
        let def = common::lineitem_index(&cols, CompressionMethod::None);
        let built = build_index(&t, &def).unwrap();
        let est = estimate_uncompressed_size(&def, t.columns(), &stats, t.rows() as u64).unwrap();
        let truth = built.page_count() as f64;
        assert!((est as f64 - truth).abs() / truth <= 0.05, "{def}: {est} vs {truth}");
    }
}

#[test]
fn compressed_fraction_never_exceeds_one_page_byte() {
    // 16-byte rows of high-entropy bytes: nothing to gain
    let mut rows = Vec::new();
    let mut x: u64 = 0x9E37_79B9_7F4A_7C15;
    for _ in 0..500 {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        rows.extend_from_slice(&(x | 0x8080_8080_8080_8080).to_be_bytes());
        rows.extend_from_slice(&x.rotate_left(19).to_be_bytes());
    }
    let layout = RowLayout::new(vec![8, 8]);
    let page = Page::from_rows(&rows, &layout).unwrap();
    let c = compress_page(&page, CompressionMethod::Page, &layout, None).unwrap();
    assert!(c.is_stored_raw());
    assert_eq!(c.len(), page.len() + 1);
}
