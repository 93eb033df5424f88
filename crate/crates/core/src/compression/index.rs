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

use std::cmp::Ordering;

use crate::data::{value, ColumnDef, Table, TableStats};

use super::gdict::{pointer_width, GlobalDictionary};
use super::page::{compress_page, decompress_page, encode_body, framed, Page, RowLayout};
use super::{Category, CompressionError, CompressionMethod, IndexDef, PAGE_HEADER, PAGE_SIZE};

/// An index materialized as pages, with exact byte totals.
#[derive(Debug, Clone)]
pub struct BuiltIndex {
    pub def: IndexDef,
    pub columns: Vec<String>,
    pub layout: RowLayout,
    pub pages: Vec<Page>,
    pub tuple_count: usize,
    /// Header plus row bytes of the uncompressed pages.
    pub bytes_raw: usize,
    /// Bytes of the stored pages plus any global dictionary.
    pub bytes_compressed: usize,
    pub dictionary: Option<GlobalDictionary>,
}

impl BuiltIndex {
    pub fn page_count(&self) -> usize {
        self.pages.len()
    }

    /// Compression fraction; 1 for an empty index.
    pub fn cf(&self) -> f64 {
        if self.bytes_raw == 0 {
            1.0
        } else {
            self.bytes_compressed as f64 / self.bytes_raw as f64
        }
    }

    /// Size in pages once compressed: the uncompressed page count scaled by
    /// the compression fraction.
    pub fn compressed_pages(&self) -> f64 {
        self.cf() * self.pages.len() as f64
    }

    /// All rows in index order, decompressed.
    pub fn decompressed_rows(&self) -> Result<Vec<u8>, CompressionError> {
        let mut out = Vec::with_capacity(self.tuple_count * self.layout.row_width());
        for p in &self.pages {
            let raw = decompress_page(p, &self.layout, self.dictionary.as_ref())?;
            out.extend_from_slice(raw.rows()?);
        }
        Ok(out)
    }
}

/// Rows of `width` bytes that fit on one uncompressed page.
pub fn rows_per_page(width: usize) -> Result<usize, CompressionError> {
    let capacity = PAGE_SIZE - PAGE_HEADER;
    if width == 0 || width > capacity {
        return Err(CompressionError::RowTooWide { width, capacity });
    }
    Ok(capacity / width)
}

pub fn build_index(table: &Table, def: &IndexDef) -> Result<BuiltIndex, CompressionError> {
    def.validate(table)?;
    let columns = def.stored_columns(table.columns());
    let idx = columns
        .iter()
        .map(|c| table.column_index(c))
        .collect::<Result<Vec<_>, _>>()?;
    let layout = RowLayout::new(idx.iter().map(|&i| table.column_type(i).width()).collect());
    let per_page = rows_per_page(layout.row_width())?;

    let mut rows: Vec<usize> = match &def.filter {
        Some(f) => f.bind(table)?.matching_rows(table),
        None => (0..table.rows()).collect(),
    };
    // keys first, then the remaining stored columns break ties
    rows.sort_by(|&a, &b| {
        idx.iter()
            .map(|&c| value::compare(table.column_type(c), table.value(c, a), table.value(c, b)))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });

    let mut raw_pages = Vec::with_capacity(rows.len().div_ceil(per_page));
    let mut buf = Vec::new();
    for chunk in rows.chunks(per_page) {
        buf.clear();
        for &r in chunk {
            for &c in &idx {
                buf.extend_from_slice(table.value(c, r));
            }
        }
        raw_pages.push(Page::from_rows(&buf, &layout)?);
    }
    let bytes_raw: usize = raw_pages.iter().map(Page::len).sum();

    let mut dictionary = None;
    let pages = match def.method.category() {
        None => raw_pages,
        Some(Category::OrderDependent) => raw_pages
            .iter()
            .map(|p| compress_page(p, def.method, &layout, None))
            .collect::<Result<_, _>>()?,
        Some(Category::OrderIndependent) => {
            let dict = (def.method == CompressionMethod::GlobalDict).then(|| {
                let cols: Vec<&[u8]> = idx.iter().map(|&c| table.column_bytes(c)).collect();
                let widths = layout.widths().to_vec();
                // the dictionary covers the filtered rows only
                match &def.filter {
                    None => GlobalDictionary::build(&cols, &widths),
                    Some(_) => {
                        let sub = table.take(table.name(), &rows);
                        let cols: Vec<&[u8]> = idx.iter().map(|&c| sub.column_bytes(c)).collect();
                        GlobalDictionary::build(&cols, &widths)
                    }
                }
            });
            let bodies = raw_pages
                .iter()
                .map(|p| encode_body(def.method, p.rows()?, &layout, dict.as_ref()))
                .collect::<Result<Vec<_>, _>>()?;
            let encoded: usize = bodies.iter().map(Vec::len).sum::<usize>()
                + dict.as_ref().map_or(0, GlobalDictionary::stored_bytes);
            let payload: usize = raw_pages.iter().map(|p| p.len() - PAGE_HEADER).sum();
            // decided once for the whole index so that the total does not
            // depend on which rows share a page
            if encoded < payload {
                dictionary = dict;
                raw_pages
                    .iter()
                    .zip(&bodies)
                    .map(|(p, b)| framed(def.method, p.tuple_count(), false, b))
                    .collect()
            } else {
                raw_pages
                    .iter()
                    .map(|p| Ok(framed(def.method, p.tuple_count(), true, p.rows()?)))
                    .collect::<Result<_, CompressionError>>()?
            }
        }
    };
    let bytes_compressed =
        pages.iter().map(Page::len).sum::<usize>() + dictionary.as_ref().map_or(0, GlobalDictionary::stored_bytes);

    Ok(BuiltIndex {
        def: def.clone(),
        columns,
        layout,
        pages,
        tuple_count: rows.len(),
        bytes_raw,
        bytes_compressed,
        dictionary,
    })
}

/// Exact `(bytes_raw, bytes_compressed)` of a GDICT index holding `rows`
/// tuples of columns with the given widths and distinct counts.
pub fn gdict_index_bytes(rows: u64, widths: &[usize], distinct: &[u64]) -> Result<(u64, u64), CompressionError> {
    let width: usize = widths.iter().sum();
    let per_page = rows_per_page(width)? as u64;
    let pages = rows.div_ceil(per_page);
    let raw = pages * PAGE_HEADER as u64 + rows * width as u64;
    let mut encoded_row = 0u64;
    let mut dict = 0u64;
    for (&w, &d) in widths.iter().zip(distinct) {
        let p = pointer_width(d);
        dict += 1;
        if p < w {
            encoded_row += p as u64;
            dict += 4 + d * w as u64;
        } else {
            encoded_row += w as u64;
        }
    }
    let framing = pages * (PAGE_HEADER as u64 + 1);
    let encoded = rows * encoded_row + dict;
    let compressed = if encoded < rows * width as u64 {
        framing + encoded
    } else {
        framing + rows * width as u64
    };
    Ok((raw, compressed))
}

/// Rows of the table the index holds, scaling by the filter's selectivity
/// under a uniform spread between the column's min and max.
pub fn filtered_rows_estimate(
    def: &IndexDef,
    schema: &[ColumnDef],
    stats: &TableStats,
    row_count: u64,
) -> Result<u64, CompressionError> {
    let Some(f) = &def.filter else { return Ok(row_count) };
    let ty = schema
        .iter()
        .find(|c| c.name == f.column)
        .map(|c| c.ty)
        .ok_or_else(|| crate::data::DataError::UnknownColumn(f.column.clone()))?;
    let cs = stats.column(&f.column)?;
    let range = f.range(ty)?;
    let sel = range.uniform_fraction(&cs.min, &cs.max, cs.distinct_count) * (1.0 - cs.null_fraction);
    Ok((sel * row_count as f64).round() as u64)
}

/// Uncompressed page count of the index over `row_count` table rows.
pub fn estimate_uncompressed_size(
    def: &IndexDef,
    schema: &[ColumnDef],
    stats: &TableStats,
    row_count: u64,
) -> Result<u64, CompressionError> {
    for c in def.stored_columns(schema) {
        stats.column(&c)?;
    }
    let per_page = rows_per_page(def.row_width(schema)?)? as u64;
    let rows = filtered_rows_estimate(def, schema, stats, row_count)?;
    Ok(rows.div_ceil(per_page))
}
