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

/// How per-statement configurations are shortlisted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    TopK(usize),
    Skyline,
}

impl std::str::FromStr for Selection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "skyline" {
            return Ok(Selection::Skyline);
        }
        if let Some(k) = t.strip_prefix("topk:") {
            let k: usize = k.parse().map_err(|_| format!("bad k in '{s}'"))?;
            if k == 0 {
                return Err("k must be at least 1".into());
            }
            return Ok(Selection::TopK(k));
        }
        Err(format!("unknown selection '{s}' (expected skyline or topk:K)"))
    }
}

/// A set of candidate indexes for one statement with its cost and size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateConfig {
    pub indexes: Vec<String>,
    pub cost: f64,
    pub size: f64,
}

fn dominates(a: &CandidateConfig, b: &CandidateConfig) -> bool {
    a.cost <= b.cost && a.size <= b.size && (a.cost < b.cost || a.size < b.size)
}

/// Positions of the configurations kept, in input order.
pub fn select_candidates(configs: &[CandidateConfig], mode: Selection) -> Vec<usize> {
    match mode {
        Selection::Skyline => (0..configs.len())
            .filter(|&i| !configs.iter().any(|o| dominates(o, &configs[i])))
            .collect(),
        Selection::TopK(k) => {
            let mut order: Vec<usize> = (0..configs.len()).collect();
            order.sort_by(|&a, &b| {
                configs[a]
                    .cost
                    .total_cmp(&configs[b].cost)
                    .then(configs[a].size.total_cmp(&configs[b].size))
                    .then(a.cmp(&b))
            });
            order.truncate(k);
            order.sort_unstable();
            order
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(cost: f64, size: f64) -> CandidateConfig {
        CandidateConfig {
            indexes: Vec::new(),
            cost,
            size,
        }
    }

    #[test]
    fn dominated_is_removed() {
        assert_eq!(select_candidates(&[c(10.0, 10.0), c(12.0, 11.0)], Selection::Skyline), vec![0]);
        assert_eq!(select_candidates(&[c(10.0, 10.0)], Selection::Skyline), vec![0]);
        assert_eq!(select_candidates(&[c(10.0, 12.0), c(12.0, 10.0)], Selection::Skyline), vec![0, 1]);
    }

    #[test]
    fn topk_keeps_cheapest() {
        let cs = [c(5.0, 1.0), c(1.0, 9.0), c(3.0, 2.0)];
        assert_eq!(select_candidates(&cs, Selection::TopK(2)), vec![1, 2]);
    }

    #[test]
    fn parse() {
        assert_eq!("skyline".parse::<Selection>().unwrap(), Selection::Skyline);
        assert_eq!("topk:3".parse::<Selection>().unwrap(), Selection::TopK(3));
        assert!("topk:0".parse::<Selection>().is_err());
        assert!("best".parse::<Selection>().is_err());
    }
}
