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

//! Page-local encoding of one column: the common prefix of every value in
//! the page is stored once, then suffixes that repeat in the page go to a
//! local dictionary addressed by 2-byte, 1-based pointers.

use std::collections::HashMap;

use super::CompressionError;

const POINTER: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalEntry {
    /// 1-based position in the local dictionary.
    Ref(u16),
    Literal(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalColumnEncoding {
    pub prefix: Vec<u8>,
    pub dictionary: Vec<Vec<u8>>,
    pub entries: Vec<LocalEntry>,
}

/// Encodes a page's values of one column (`values` holds `width`-byte
/// values back to back).
///
/// A suffix enters the dictionary when it occurs at least twice in the
/// page; entries are numbered in order of first use.
pub fn encode_local_column(values: &[u8], width: usize) -> LocalColumnEncoding {
    let vals: Vec<&[u8]> = values.chunks_exact(width).collect();
    let p = common_prefix(&vals).min(u8::MAX as usize);
    let prefix = vals.first().map_or(Vec::new(), |v| v[..p].to_vec());

    let mut counts: HashMap<&[u8], usize> = HashMap::new();
    for v in &vals {
        *counts.entry(&v[p..]).or_default() += 1;
    }
    let mut slots: HashMap<&[u8], u16> = HashMap::new();
    let mut dictionary = Vec::new();
    let mut entries = Vec::with_capacity(vals.len());
    for v in &vals {
        let s = &v[p..];
        if counts[s] >= 2 && dictionary.len() < u16::MAX as usize {
            let slot = *slots.entry(s).or_insert_with(|| {
                dictionary.push(s.to_vec());
                dictionary.len() as u16
            });
            entries.push(LocalEntry::Ref(slot));
        } else {
            entries.push(LocalEntry::Literal(s.to_vec()));
        }
    }
    LocalColumnEncoding {
        prefix,
        dictionary,
        entries,
    }
}

fn common_prefix(vals: &[&[u8]]) -> usize {
    let Some(first) = vals.first() else { return 0 };
    vals[1..].iter().fold(first.len(), |p, v| {
        first[..p].iter().zip(v.iter()).take_while(|(a, b)| a == b).count()
    })
}

impl LocalColumnEncoding {
    /// Layout: prefix length, prefix, entry count (u16), entries, a
    /// pointer bitmap, then one pointer or literal per value.
    pub fn write(&self, out: &mut Vec<u8>) {
        out.push(self.prefix.len() as u8);
        out.extend_from_slice(&self.prefix);
        out.extend_from_slice(&(self.dictionary.len() as u16).to_be_bytes());
        for e in &self.dictionary {
            out.extend_from_slice(e);
        }
        let mut bitmap = vec![0u8; self.entries.len().div_ceil(8)];
        for (i, e) in self.entries.iter().enumerate() {
            if matches!(e, LocalEntry::Ref(_)) {
                bitmap[i / 8] |= 1 << (i % 8);
            }
        }
        out.extend_from_slice(&bitmap);
        for e in &self.entries {
            match e {
                LocalEntry::Ref(r) => out.extend_from_slice(&r.to_be_bytes()),
                LocalEntry::Literal(s) => out.extend_from_slice(s),
            }
        }
    }

    pub fn encoded_len(&self) -> usize {
        let suffix = self.dictionary.first().map_or(0, Vec::len);
        let body: usize = self
            .entries
            .iter()
            .map(|e| match e {
                LocalEntry::Ref(_) => POINTER,
                LocalEntry::Literal(s) => s.len(),
            })
            .sum();
        1 + self.prefix.len() + 2 + self.dictionary.len() * suffix + self.entries.len().div_ceil(8) + body
    }

    /// Reads an encoding of `count` values of `width` bytes and returns the
    /// decoded values back to back.
    pub fn read(
        input: &[u8],
        pos: &mut usize,
        width: usize,
        count: usize,
    ) -> Result<Vec<u8>, CompressionError> {
        let mut take = |n: usize| -> Result<&[u8], CompressionError> {
            let s = input
                .get(*pos..*pos + n)
                .ok_or_else(|| CompressionError::Corrupt("truncated local column".into()))?;
            *pos += n;
            Ok(s)
        };
        let p = take(1)?[0] as usize;
        if p > width {
            return Err(CompressionError::Corrupt(format!("prefix length {p} exceeds width {width}")));
        }
        let prefix = take(p)?.to_vec();
        let suffix = width - p;
        let d = u16::from_be_bytes(take(2)?.try_into().expect("two bytes")) as usize;
        let dict: Vec<Vec<u8>> = (0..d).map(|_| take(suffix).map(<[u8]>::to_vec)).collect::<Result<_, _>>()?;
        let bitmap = take(count.div_ceil(8))?.to_vec();
        let mut out = Vec::with_capacity(width * count);
        for i in 0..count {
            out.extend_from_slice(&prefix);
            if bitmap[i / 8] & (1 << (i % 8)) != 0 {
                let r = u16::from_be_bytes(take(2)?.try_into().expect("two bytes")) as usize;
                let e = r
                    .checked_sub(1)
                    .and_then(|k| dict.get(k))
                    .ok_or_else(|| CompressionError::Corrupt(format!("local pointer {r} out of range")))?;
                out.extend_from_slice(e);
            } else {
                out.extend_from_slice(take(suffix)?);
            }
        }
        Ok(out)
    }
}
