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

//! Global dictionary: one sorted dictionary per column for a whole index.
//! A column is dictionary-encoded only when its pointer is narrower than
//! the value; otherwise it is stored verbatim.

use std::collections::BTreeSet;

use super::CompressionError;

/// Bytes needed to address `entries` dictionary slots.
pub fn pointer_width(entries: u64) -> usize {
    match entries {
        0..=0x100 => 1,
        0x101..=0x1_0000 => 2,
        0x1_0001..=0x100_0000 => 3,
        _ => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDictionary {
    entries: Vec<Vec<u8>>,
    pointer_width: usize,
}

impl ColumnDictionary {
    fn build(values: &[u8], width: usize) -> Self {
        let set: BTreeSet<&[u8]> = values.chunks_exact(width).collect();
        let entries: Vec<Vec<u8>> = set.into_iter().map(<[u8]>::to_vec).collect();
        let pointer_width = pointer_width(entries.len() as u64);
        Self {
            entries,
            pointer_width,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pointer_width(&self) -> usize {
        self.pointer_width
    }

    fn lookup(&self, v: &[u8]) -> usize {
        self.entries
            .binary_search_by(|e| e.as_slice().cmp(v))
            .expect("value present in its column dictionary")
    }
}

/// Per-column dictionaries; `None` marks a column stored verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalDictionary {
    columns: Vec<Option<ColumnDictionary>>,
    widths: Vec<usize>,
}

impl GlobalDictionary {
    /// Builds dictionaries from column-major value bytes.
    pub fn build(columns: &[&[u8]], widths: &[usize]) -> Self {
        let columns = columns
            .iter()
            .zip(widths)
            .map(|(vals, &w)| {
                let d = ColumnDictionary::build(vals, w);
                (d.pointer_width < w).then_some(d)
            })
            .collect();
        Self {
            columns,
            widths: widths.to_vec(),
        }
    }

    pub fn column(&self, i: usize) -> Option<&ColumnDictionary> {
        self.columns.get(i).and_then(Option::as_ref)
    }

    /// Stored size: per column a mode byte, and for encoded columns a
    /// 4-byte entry count plus the entries.
    pub fn stored_bytes(&self) -> usize {
        self.columns
            .iter()
            .zip(&self.widths)
            .map(|(c, w)| 1 + c.as_ref().map_or(0, |d| 4 + d.entries.len() * w))
            .sum()
    }

    pub(crate) fn encode_column(&self, col: usize, values: &[u8], width: usize, out: &mut Vec<u8>) {
        match self.column(col) {
            None => out.extend_from_slice(values),
            Some(d) => {
                for v in values.chunks_exact(width) {
                    let idx = d.lookup(v) as u32;
                    out.extend_from_slice(&idx.to_be_bytes()[4 - d.pointer_width..]);
                }
            }
        }
    }

    pub(crate) fn decode_column(
        &self,
        col: usize,
        input: &[u8],
        pos: &mut usize,
        width: usize,
        count: usize,
    ) -> Result<Vec<u8>, CompressionError> {
        let truncated = || CompressionError::Corrupt("truncated GDICT column".into());
        match self.column(col) {
            None => {
                let end = *pos + width * count;
                let out = input.get(*pos..end).ok_or_else(truncated)?.to_vec();
                *pos = end;
                Ok(out)
            }
            Some(d) => {
                let mut out = Vec::with_capacity(width * count);
                for _ in 0..count {
                    let raw = input.get(*pos..*pos + d.pointer_width).ok_or_else(truncated)?;
                    let mut buf = [0u8; 4];
                    buf[4 - d.pointer_width..].copy_from_slice(raw);
                    let idx = u32::from_be_bytes(buf) as usize;
                    let entry = d.entries.get(idx).ok_or_else(|| {
                        CompressionError::Corrupt(format!("dictionary pointer {idx} out of range"))
                    })?;
                    out.extend_from_slice(entry);
                    *pos += d.pointer_width;
                }
                Ok(out)
            }
        }
    }
}
