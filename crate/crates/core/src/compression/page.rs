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

//! Page layout and the per-page codecs.
//!
//! Every page starts with a 16-byte header: method tag (1 byte), tuple
//! count (2 bytes, big-endian), flags (1 byte) and 12 reserved bytes. An
//! uncompressed page stores its rows back to back after the header. A
//! compressed page follows the header with one framing byte (0 = encoded
//! body, 1 = rows stored raw) and then the body. Encoded bodies are laid out
//! column by column.

use super::gdict::GlobalDictionary;
use super::local::{encode_local_column, LocalColumnEncoding};
use super::{ns, CompressionError, CompressionMethod, PAGE_HEADER, PAGE_SIZE};

const FLAG_FRAMED: u8 = 0x01;
const FRAME_ENCODED: u8 = 0;
const FRAME_RAW: u8 = 1;

/// Widths of the stored columns of a row, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowLayout {
    widths: Vec<usize>,
}

impl RowLayout {
    pub fn new(widths: Vec<usize>) -> Self {
        Self { widths }
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn row_width(&self) -> usize {
        self.widths.iter().sum()
    }

    /// Rows that fit in the payload area of one uncompressed page.
    pub fn rows_per_page(&self) -> usize {
        (PAGE_SIZE - PAGE_HEADER) / self.row_width().max(1)
    }

    fn offsets(&self) -> Vec<usize> {
        self.widths
            .iter()
            .scan(0, |acc, w| {
                let o = *acc;
                *acc += w;
                Some(o)
            })
            .collect()
    }

    /// Splits row-major bytes into one buffer per column.
    fn split(&self, rows: &[u8]) -> Vec<Vec<u8>> {
        let rw = self.row_width();
        let n = rows.len().checked_div(rw).unwrap_or(0);
        let offsets = self.offsets();
        self.widths
            .iter()
            .zip(&offsets)
            .map(|(&w, &o)| {
                let mut col = Vec::with_capacity(n * w);
                for r in 0..n {
                    col.extend_from_slice(&rows[r * rw + o..r * rw + o + w]);
                }
                col
            })
            .collect()
    }

    fn join(&self, cols: &[Vec<u8>], n: usize) -> Vec<u8> {
        let mut rows = Vec::with_capacity(n * self.row_width());
        for r in 0..n {
            for (c, &w) in cols.iter().zip(&self.widths) {
                rows.extend_from_slice(&c[r * w..(r + 1) * w]);
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    bytes: Vec<u8>,
}

impl Page {
    /// An uncompressed page holding `rows` (row-major, `layout` widths).
    pub fn from_rows(rows: &[u8], layout: &RowLayout) -> Result<Page, CompressionError> {
        let rw = layout.row_width();
        if rw == 0 || !rows.len().is_multiple_of(rw) {
            return Err(CompressionError::Corrupt(format!(
                "{} payload bytes are not a multiple of the row width {rw}",
                rows.len()
            )));
        }
        if rw > PAGE_SIZE - PAGE_HEADER {
            return Err(CompressionError::RowTooWide {
                width: rw,
                capacity: PAGE_SIZE - PAGE_HEADER,
            });
        }
        let n = rows.len() / rw;
        if n > layout.rows_per_page() {
            return Err(CompressionError::Corrupt(format!("{n} rows exceed the page capacity")));
        }
        let mut bytes = header(CompressionMethod::None, n, 0);
        bytes.extend_from_slice(rows);
        Ok(Page { bytes })
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Result<Page, CompressionError> {
        if bytes.len() < PAGE_HEADER {
            return Err(CompressionError::Corrupt("page shorter than its header".into()));
        }
        CompressionMethod::from_tag(bytes[0])?;
        Ok(Page { bytes })
    }

    pub fn method(&self) -> CompressionMethod {
        CompressionMethod::from_tag(self.bytes[0]).expect("tag checked on construction")
    }

    pub fn tuple_count(&self) -> usize {
        u16::from_be_bytes([self.bytes[1], self.bytes[2]]) as usize
    }

    /// True for a compressed page whose rows were kept raw.
    pub fn is_stored_raw(&self) -> bool {
        self.bytes[3] & FLAG_FRAMED != 0 && self.bytes.get(PAGE_HEADER) == Some(&FRAME_RAW)
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuple_count() == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Row bytes of an uncompressed page.
    pub fn rows(&self) -> Result<&[u8], CompressionError> {
        if self.method().is_compressed() {
            return Err(CompressionError::AlreadyCompressed);
        }
        Ok(&self.bytes[PAGE_HEADER..])
    }
}

fn header(method: CompressionMethod, tuples: usize, flags: u8) -> Vec<u8> {
    let mut h = vec![0u8; PAGE_HEADER];
    h[0] = method.tag();
    h[1..3].copy_from_slice(&(tuples as u16).to_be_bytes());
    h[3] = flags;
    h
}

pub(crate) fn framed(method: CompressionMethod, tuples: usize, raw: bool, body: &[u8]) -> Page {
    let mut bytes = header(method, tuples, FLAG_FRAMED);
    bytes.push(if raw { FRAME_RAW } else { FRAME_ENCODED });
    bytes.extend_from_slice(body);
    Page { bytes }
}

/// Encodes the rows of one page column by column.
pub(crate) fn encode_body(
    method: CompressionMethod,
    rows: &[u8],
    layout: &RowLayout,
    dict: Option<&GlobalDictionary>,
) -> Result<Vec<u8>, CompressionError> {
    let cols = layout.split(rows);
    let mut out = Vec::with_capacity(rows.len());
    match method {
        CompressionMethod::None => out.extend_from_slice(rows),
        CompressionMethod::Ns => {
            for (c, &w) in cols.iter().zip(layout.widths()) {
                ns::encode_column(c, w, &mut out);
            }
        }
        CompressionMethod::GlobalDict => {
            let d = dict.ok_or(CompressionError::MissingDictionary("encode"))?;
            for (i, (c, &w)) in cols.iter().zip(layout.widths()).enumerate() {
                d.encode_column(i, c, w, &mut out);
            }
        }
        CompressionMethod::Page => {
            for (c, &w) in cols.iter().zip(layout.widths()) {
                let enc = encode_local_column(c, w);
                if enc.encoded_len() < c.len() {
                    out.push(1);
                    enc.write(&mut out);
                } else {
                    out.push(0);
                    out.extend_from_slice(c);
                }
            }
        }
    }
    Ok(out)
}

fn decode_body(
    method: CompressionMethod,
    body: &[u8],
    n: usize,
    layout: &RowLayout,
    dict: Option<&GlobalDictionary>,
) -> Result<Vec<u8>, CompressionError> {
    let mut pos = 0;
    let mut cols = Vec::with_capacity(layout.widths().len());
    for (i, &w) in layout.widths().iter().enumerate() {
        let col = match method {
            CompressionMethod::None => unreachable!("uncompressed pages carry no body"),
            CompressionMethod::Ns => ns::decode_column(body, &mut pos, w, n)?,
            CompressionMethod::GlobalDict => {
                let d = dict.ok_or(CompressionError::MissingDictionary("decode"))?;
                d.decode_column(i, body, &mut pos, w, n)?
            }
            CompressionMethod::Page => {
                let mode = *body
                    .get(pos)
                    .ok_or_else(|| CompressionError::Corrupt("truncated PAGE column".into()))?;
                pos += 1;
                match mode {
                    0 => {
                        let c = body
                            .get(pos..pos + n * w)
                            .ok_or_else(|| CompressionError::Corrupt("truncated PAGE column".into()))?
                            .to_vec();
                        pos += n * w;
                        c
                    }
                    1 => LocalColumnEncoding::read(body, &mut pos, w, n)?,
                    m => return Err(CompressionError::Corrupt(format!("unknown column mode {m}"))),
                }
            }
        };
        cols.push(col);
    }
    if pos != body.len() {
        return Err(CompressionError::Corrupt(format!(
            "{} trailing bytes after the last column",
            body.len() - pos
        )));
    }
    Ok(layout.join(&cols, n))
}

/// Compresses an uncompressed page. When the encoded body is not smaller
/// than the raw rows the rows are kept raw, so the result is never more
/// than one byte larger than the input.
pub fn compress_page(
    page: &Page,
    method: CompressionMethod,
    layout: &RowLayout,
    global_dict: Option<&GlobalDictionary>,
) -> Result<Page, CompressionError> {
    let rows = page.rows()?;
    if !method.is_compressed() {
        return Ok(page.clone());
    }
    if method == CompressionMethod::GlobalDict && global_dict.is_none() {
        return Err(CompressionError::MissingDictionary("encode"));
    }
    let body = encode_body(method, rows, layout, global_dict)?;
    let n = page.tuple_count();
    Ok(if body.len() < rows.len() {
        framed(method, n, false, &body)
    } else {
        framed(method, n, true, rows)
    })
}

/// Restores the uncompressed page that `compress_page` was given.
pub fn decompress_page(
    page: &Page,
    layout: &RowLayout,
    global_dict: Option<&GlobalDictionary>,
) -> Result<Page, CompressionError> {
    let method = page.method();
    if !method.is_compressed() {
        return Ok(page.clone());
    }
    let b = page.as_bytes();
    if b[3] & FLAG_FRAMED == 0 || b.len() <= PAGE_HEADER {
        return Err(CompressionError::Corrupt("compressed page without framing byte".into()));
    }
    let n = page.tuple_count();
    let body = &b[PAGE_HEADER + 1..];
    let rows = match b[PAGE_HEADER] {
        FRAME_RAW => body.to_vec(),
        FRAME_ENCODED => decode_body(method, body, n, layout, global_dict)?,
        f => return Err(CompressionError::Corrupt(format!("unknown framing byte {f}"))),
    };
    if rows.len() != n * layout.row_width() {
        return Err(CompressionError::Corrupt("tuple count does not match payload".into()));
    }
    let mut bytes = header(CompressionMethod::None, n, 0);
    bytes.extend_from_slice(&rows);
    Ok(Page { bytes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> RowLayout {
        RowLayout::new(vec![2, 8])
    }

    fn rows(vals: &[(&[u8; 2], u64)]) -> Vec<u8> {
        vals.iter()
            .flat_map(|(a, b)| a.iter().copied().chain(b.to_be_bytes()))
            .collect()
    }

    #[test]
    fn header_fields() {
        let p = Page::from_rows(&rows(&[(b"AA", 1), (b"BB", 2)]), &layout()).unwrap();
        assert_eq!(p.len(), PAGE_HEADER + 20);
        assert_eq!(p.tuple_count(), 2);
        assert_eq!(p.method(), CompressionMethod::None);
    }

    #[test]
    fn incompressible_page_is_stored_raw() {
        let l = RowLayout::new(vec![3]);
        let p = Page::from_rows(b"abcdefghi", &l).unwrap();
        let c = compress_page(&p, CompressionMethod::Page, &l, None).unwrap();
        assert!(c.is_stored_raw());
        assert_eq!(c.len(), p.len() + 1);
        assert_eq!(decompress_page(&c, &l, None).unwrap(), p);
    }

    #[test]
    fn every_method_roundtrips() {
        let r = rows(&[(b"AA", 0), (b"BB", 0), (b"BB", 7), (b"AA", 7), (b"AA", 7), (b"AA", 7)]);
        let p = Page::from_rows(&r, &layout()).unwrap();
        let d = GlobalDictionary::build(&[&layout().split(&r)[0], &layout().split(&r)[1]], &[2, 8]);
        for m in CompressionMethod::ALL {
            let c = compress_page(&p, m, &layout(), Some(&d)).unwrap();
            assert!(c.len() <= p.len() + 1);
            assert_eq!(decompress_page(&c, &layout(), Some(&d)).unwrap(), p, "{m}");
        }
    }

    #[test]
    fn gdict_requires_dictionary() {
        let p = Page::from_rows(&rows(&[(b"AA", 1)]), &layout()).unwrap();
        assert!(matches!(
            compress_page(&p, CompressionMethod::GlobalDict, &layout(), None),
            Err(CompressionError::MissingDictionary(_))
        ));
        let d = GlobalDictionary::build(&[b"AA", &1u64.to_be_bytes()], &[2, 8]);
        let c = compress_page(&p, CompressionMethod::GlobalDict, &layout(), Some(&d)).unwrap();
        assert!(decompress_page(&c, &layout(), None).is_err());
    }

    #[test]
    fn unknown_tag_rejected() {
        let mut b = vec![0u8; PAGE_HEADER];
        b[0] = 7;
        assert!(matches!(Page::from_bytes(b), Err(CompressionError::UnknownMethodTag(7))));
    }

    #[test]
    fn compressing_twice_fails() {
        let p = Page::from_rows(&rows(&[(b"AA", 1)]), &layout()).unwrap();
        let c = compress_page(&p, CompressionMethod::Ns, &layout(), None).unwrap();
        assert!(matches!(
            compress_page(&c, CompressionMethod::Ns, &layout(), None),
            Err(CompressionError::AlreadyCompressed)
        ));
    }
}
