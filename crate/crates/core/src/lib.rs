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

//! Compression-aware physical design advisor.
//!
//! Given tables, a structured workload and a storage budget, the advisor
//! recommends a set of compressed and uncompressed indexes that minimizes
//! estimated workload cost. Compressed index sizes come from sampling
//! (building the index on a sample and measuring its compression fraction)
//! or from cheap deductions over other estimates, planned so that every
//! estimate meets a requested `(tolerance, confidence)` accuracy bound.

pub mod advisor;
pub mod cli;
pub mod compression;
pub mod cost;
pub mod data;
pub mod estimate;
pub mod rng;
pub mod sampling;
