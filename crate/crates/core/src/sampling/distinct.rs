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

//! Distinct-count extrapolation from a sample's frequency profile.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SamplingError;

/// Frequency profile of a sample: `freq[k]` groups were seen exactly `k`
/// times among `r` sampled tuples; `n` is the estimated source size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyStats {
    pub freq: BTreeMap<u64, u64>,
    pub d: u64,
    pub r: u64,
    pub n: u64,
}

impl FrequencyStats {
    /// Builds the profile from per-group counts.
    pub fn from_counts(counts: impl IntoIterator<Item = u64>, n: u64) -> Result<Self, SamplingError> {
        let mut freq = BTreeMap::new();
        let (mut d, mut r) = (0, 0);
        for c in counts {
            if c == 0 {
                return Err(SamplingError::Frequencies("group with zero count".into()));
            }
            *freq.entry(c).or_insert(0) += 1;
            d += 1;
            r += c;
        }
        Self::new(freq, n).inspect(|s| debug_assert_eq!((s.d, s.r), (d, r)))
    }

    pub fn new(mut freq: BTreeMap<u64, u64>, n: u64) -> Result<Self, SamplingError> {
        freq.retain(|_, v| *v > 0);
        if freq.contains_key(&0) {
            return Err(SamplingError::Frequencies("f_0 is not observable".into()));
        }
        let d = freq.values().sum();
        let r = freq.iter().map(|(k, v)| k * v).sum();
        if r > n {
            return Err(SamplingError::SampleLargerThanSource { r, n });
        }
        Ok(Self { freq, d, r, n })
    }

    pub fn f(&self, k: u64) -> u64 {
        self.freq.get(&k).copied().unwrap_or(0)
    }
}

/// A distinct-count estimator over a frequency profile.
pub trait DistinctEstimator {
    fn name(&self) -> &'static str;

    /// Unclamped estimate for a proper sample (`0 < r < n`).
    fn raw_estimate(&self, s: &FrequencyStats) -> f64;

    /// Estimate clamped to `[d, n]`; a sample covering the source returns
    /// `d` exactly.
    fn estimate(&self, s: &FrequencyStats) -> Result<u64, SamplingError> {
        if s.r > s.n {
            return Err(SamplingError::SampleLargerThanSource { r: s.r, n: s.n });
        }
        if s.r == s.n || s.d == 0 {
            return Ok(s.d);
        }
        let e = self.raw_estimate(s).round();
        Ok(if e.is_nan() { s.n } else { (e as u64).clamp(s.d, s.n) })
    }
}

/// Scales the sample's distinct count by the inverse sampling rate.
#[derive(Debug, Clone, Copy, Default)]
pub struct Multiply;

impl DistinctEstimator for Multiply {
    fn name(&self) -> &'static str {
        "multiply"
    }

    fn raw_estimate(&self, s: &FrequencyStats) -> f64 {
        s.d as f64 * s.n as f64 / s.r as f64
    }
}

/// Guaranteed-error estimator: `sqrt(n/r) f_1 + sum_{k>=2} f_k`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gee;

impl DistinctEstimator for Gee {
    fn name(&self) -> &'static str {
        "gee"
    }

    fn raw_estimate(&self, s: &FrequencyStats) -> f64 {
        let f1 = s.f(1) as f64;
        (s.n as f64 / s.r as f64).sqrt() * f1 + (s.d as f64 - f1)
    }
}

/// Adaptive estimator: the number of rare groups `m` (seen once or twice)
/// is solved from a fixed-point equation that models their frequencies as
/// exponentially distributed; the estimate is `d + m - f_1 - f_2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AdaptiveEstimator;

impl AdaptiveEstimator {
    fn equation(s: &FrequencyStats) -> impl Fn(f64) -> f64 {
        let f1 = s.f(1) as f64;
        let f2 = s.f(2) as f64;
        let (mut a, mut b) = (0.0, 0.0);
        for (&k, &v) in s.freq.range(3..) {
            let w = (-(k as f64)).exp() * v as f64;
            a += w;
            b += k as f64 * w;
        }
        let c = f1 + 2.0 * f2;
        move |m: f64| {
            let e = (-c / m).exp();
            m - f1 - f2 - f1 * (a + m * e) / (b + c * e)
        }
    }
}

impl DistinctEstimator for AdaptiveEstimator {
    fn name(&self) -> &'static str {
        "ae"
    }

    fn raw_estimate(&self, s: &FrequencyStats) -> f64 {
        let f1 = s.f(1) as f64;
        let f2 = s.f(2) as f64;
        if f1 + f2 == 0.0 {
            return s.d as f64;
        }
        let g = Self::equation(s);
        let lo = f1 + f2;
        // no more rare groups than unseen source tuples allow
        let hi = lo + (s.n - s.r) as f64;
        let m = if f1 == 0.0 || g(hi) <= 0.0 {
            if f1 == 0.0 { lo } else { hi }
        } else {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if g(mid) > 0.0 {
                    b = mid;
                } else {
                    a = mid;
                }
                if b - a < 1e-9 * b.max(1.0) {
                    break;
                }
            }
            0.5 * (a + b)
        };
        s.d as f64 + m - f1 - f2
    }
}

/// Estimates the distinct count with the default (adaptive) estimator.
pub fn estimate_distinct(stats: &FrequencyStats) -> Result<u64, SamplingError> {
    AdaptiveEstimator.estimate(stats)
}
