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

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::compression::{Category, CompressionMethod};

/// Bias and standard deviation of the error ratio of each estimation
/// method. SampleCF terms scale with `ln f`; ColExt terms scale with the
/// number of inputs `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ErrorModel {
    pub sample_ns_bias_ln_f: f64,
    pub sample_ns_stddev_ln_f: f64,
    pub sample_ld_bias_ln_f: f64,
    pub sample_ld_stddev_ln_f: f64,
    pub colset_bias: f64,
    pub colset_stddev: f64,
    pub colext_ns_bias_per_input: f64,
    pub colext_ns_stddev_per_input: f64,
    pub colext_ld_bias_per_input: f64,
    pub colext_ld_stddev_per_input: f64,
    /// Variance assigned to an estimate from an empty sample.
    pub empty_sample_variance: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self {
            sample_ns_bias_ln_f: 0.0,
            sample_ns_stddev_ln_f: -0.0062,
            sample_ld_bias_ln_f: -0.015,
            sample_ld_stddev_ln_f: -0.018,
            colset_bias: 0.0,
            colset_stddev: 0.0003,
            colext_ns_bias_per_input: 0.01,
            colext_ns_stddev_per_input: 0.002,
            colext_ld_bias_per_input: -0.03,
            colext_ld_stddev_per_input: 0.01,
            empty_sample_variance: 1.0,
        }
    }
}

impl ErrorModel {
    /// Error of SampleCF at fraction `f`; `sample_tuples` caps the variance
    /// at `1 / (r f^2)`.
    pub fn sample_cf(&self, method: CompressionMethod, f: f64, sample_tuples: Option<f64>) -> (f64, f64) {
        if f >= 1.0 || !method.is_compressed() {
            return (1.0, 0.0);
        }
        let ln_f = f.ln();
        let (b, s) = match method {
            CompressionMethod::Ns => (self.sample_ns_bias_ln_f, self.sample_ns_stddev_ln_f),
            _ => (self.sample_ld_bias_ln_f, self.sample_ld_stddev_ln_f),
        };
        let mut var = (s * ln_f).powi(2);
        if let Some(r) = sample_tuples.filter(|r| *r > 0.0) {
            var = var.min(1.0 / (r * f * f));
        }
        (1.0 + b * ln_f, var)
    }

    pub fn colset(&self) -> (f64, f64) {
        (1.0 + self.colset_bias, self.colset_stddev.powi(2))
    }

    pub fn colext(&self, category: Category, inputs: usize) -> (f64, f64) {
        let a = inputs as f64;
        let (b, s) = match category {
            Category::OrderIndependent => (self.colext_ns_bias_per_input, self.colext_ns_stddev_per_input),
            Category::OrderDependent => (self.colext_ld_bias_per_input, self.colext_ld_stddev_per_input),
        };
        (1.0 + b * a, (s * a).powi(2))
    }
}

/// Mean and variance of a product of independent error ratios.
pub fn compose_error(factors: &[(f64, f64)]) -> (f64, f64) {
    let mean: f64 = factors.iter().map(|(e, _)| e).product();
    let second: f64 = factors.iter().map(|(e, v)| v + e * e).product();
    let sq: f64 = factors.iter().map(|(e, _)| e * e).product();
    (mean, (second - sq).max(0.0))
}

/// Probability that a normal error ratio lies in `[1/(1+e), 1+e]`.
pub fn prob_within(e: f64, (mean, var): (f64, f64)) -> f64 {
    let lo = 1.0 / (1.0 + e);
    let hi = 1.0 + e;
    if var <= 0.0 {
        return if (lo..=hi).contains(&mean) { 1.0 } else { 0.0 };
    }
    let n = Normal::new(mean, var.sqrt()).expect("positive standard deviation");
    (n.cdf(hi) - n.cdf(lo)).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_cf_vanishes_at_full_fraction() {
        let m = ErrorModel::default();
        for method in [CompressionMethod::Ns, CompressionMethod::Page, CompressionMethod::GlobalDict] {
            assert_eq!(m.sample_cf(method, 1.0, None), (1.0, 0.0));
        }
        let (e, v) = m.sample_cf(CompressionMethod::Page, 0.05, None);
        assert!((e - (1.0 - 0.015 * 0.05f64.ln())).abs() < 1e-12);
        assert!((v.sqrt() + 0.018 * 0.05f64.ln()).abs() < 1e-12);
        let (_, capped) = m.sample_cf(CompressionMethod::Page, 0.05, Some(1e9));
        assert!(capped < v);
    }

    #[test]
    fn composition() {
        assert_eq!(compose_error(&[(1.0, 0.0)]), (1.0, 0.0));
        let (e, v) = compose_error(&[(1.0, 0.01), (1.0, 0.01)]);
        assert_eq!(e, 1.0);
        assert!((v - 0.0201).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_is_a_step() {
        assert_eq!(prob_within(0.1, (1.0, 0.0)), 1.0);
        assert_eq!(prob_within(0.1, (1.2, 0.0)), 0.0);
        // the interval tends to (0, inf), leaving P(X > 0) for X ~ N(1, 4)
        assert!((prob_within(1e6, (1.0, 4.0)) - 0.691_462).abs() < 1e-5);
    }
}
