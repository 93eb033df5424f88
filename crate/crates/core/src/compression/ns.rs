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

//! Null suppression: the maximal run of leading NUL bytes of a value is
//! replaced by an escape byte `0x00` followed by the run length (runs
//! longer than 255 are split). Values that do not start with NUL are
//! stored verbatim, so a leading `0x00` always marks an escape.

use super::CompressionError;

const ESCAPE: u8 = 0x00;

pub fn ns_encode_value(value: &[u8], out: &mut Vec<u8>) {
    let mut run = value.iter().take_while(|&&b| b == 0).count();
    let rest = &value[run..];
    while run > 0 {
        let chunk = run.min(255);
        out.push(ESCAPE);
        out.push(chunk as u8);
        run -= chunk;
    }
    out.extend_from_slice(rest);
}

/// Decodes one value of `width` bytes starting at `input[*pos]`.
pub fn ns_decode_value(
    input: &[u8],
    pos: &mut usize,
    width: usize,
    out: &mut Vec<u8>,
) -> Result<(), CompressionError> {
    let mut remaining = width;
    while remaining > 0 && input.get(*pos) == Some(&ESCAPE) {
        let run = *input
            .get(*pos + 1)
            .ok_or_else(|| CompressionError::Corrupt("truncated NS escape".into()))? as usize;
        if run == 0 || run > remaining {
            return Err(CompressionError::Corrupt(format!("NS run {run} exceeds width")));
        }
        out.extend(std::iter::repeat_n(0, run));
        remaining -= run;
        *pos += 2;
    }
    let end = *pos + remaining;
    let tail = input
        .get(*pos..end)
        .ok_or_else(|| CompressionError::Corrupt("truncated NS value".into()))?;
    out.extend_from_slice(tail);
    *pos = end;
    Ok(())
}

pub(crate) fn encode_column(values: &[u8], width: usize, out: &mut Vec<u8>) {
    for v in values.chunks_exact(width) {
        ns_encode_value(v, out);
    }
}

pub(crate) fn decode_column(
    input: &[u8],
    pos: &mut usize,
    width: usize,
    count: usize,
) -> Result<Vec<u8>, CompressionError> {
    let mut out = Vec::with_capacity(width * count);
    for _ in 0..count {
        ns_decode_value(input, pos, width, &mut out)?;
    }
    Ok(out)
}
