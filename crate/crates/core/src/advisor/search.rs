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


//! Budgeted greedy enumeration over a candidate pool. The cost of a
//! configuration is supplied by the caller so that the search can be driven
//! by the what-if cost model or by a scripted cost table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Enumeration {
    /// Largest cost reduction first.
    Pure,
    /// Largest cost reduction per page first.
    Density,
    /// Pure, plus recovery of a choice that does not fit by swapping
    /// members for compressed variants.
    Backtrack,
}

impl std::str::FromStr for Enumeration {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pure" => Ok(Enumeration::Pure),
            "density" => Ok(Enumeration::Density),
            "backtrack" => Ok(Enumeration::Backtrack),
            _ => Err(format!("unknown enumeration '{s}' (expected pure, density or backtrack)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumCandidate {
    pub id: String,
    /// Identity without the codec; variants share it.
    pub shape: String,
    pub table: String,
    pub size: f64,
    pub compressed: bool,
    pub clustered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum SearchStep {
    Add {
        index: String,
        benefit: f64,
        score: f64,
        cost: f64,
    },
    Backtrack {
        wanted: String,
        replaced: Vec<(String, String)>,
        cost: f64,
    },
    Compress {
        from: String,
        to: String,
        cost: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub chosen: Vec<usize>,
    pub cost: f64,
    pub size: f64,
    pub trace: Vec<SearchStep>,
}

pub(crate) struct Evaluator<'c, E> {
    cost: &'c mut dyn FnMut(&[usize]) -> Result<f64, E>,
    memo: BTreeMap<Vec<usize>, f64>,
}

impl<'c, E> Evaluator<'c, E> {
    pub(crate) fn new(cost: &'c mut dyn FnMut(&[usize]) -> Result<f64, E>) -> Self {
        Self {
            cost,
            memo: BTreeMap::new(),
        }
    }

    pub(crate) fn eval(&mut self, set: &[usize]) -> Result<f64, E> {
        let mut key = set.to_vec();
        key.sort_unstable();
        if let Some(&c) = self.memo.get(&key) {
            return Ok(c);
        }
        let c = (self.cost)(&key)?;
        self.memo.insert(key, c);
        Ok(c)
    }
}

pub(crate) fn size_of(pool: &[EnumCandidate], set: &[usize]) -> f64 {
    set.iter().map(|&i| pool[i].size).sum()
}

pub(crate) fn clustered_ok(pool: &[EnumCandidate], set: &[usize], add: usize) -> bool {
    !pool[add].clustered || !set.iter().any(|&i| pool[i].clustered && pool[i].table == pool[add].table)
}

fn fits(size: f64, budget: f64) -> bool {
    size <= budget + SLACK * budget.max(1.0)
}

fn improves(new: f64, old: f64) -> bool {
    new < old - SLACK * old.abs().max(1.0)
}

/// True when `a` beats `b`: higher score, then smaller, then lower id.
fn better(pool: &[EnumCandidate], a: (usize, f64), b: Option<(usize, f64)>) -> bool {
    let Some(b) = b else { return true };
    match a.1.total_cmp(&b.1) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => {
            let (sa, sb) = (pool[a.0].size, pool[b.0].size);
            sa < sb || (sa == sb && pool[a.0].id < pool[b.0].id)
        }
    }
}

struct Pick {
    index: usize,
    benefit: f64,
    score: f64,
    cost: f64,
}

/// Best single addition to `set`, under the budget when `budgeted`.
fn best_addition<E>(
    pool: &[EnumCandidate],
    set: &[usize],
    current: f64,
    budget: Option<f64>,
    density: bool,
    ev: &mut Evaluator<'_, E>,
) -> Result<Option<Pick>, E> {
    let used = size_of(pool, set);
    let mut best: Option<Pick> = None;
    for i in 0..pool.len() {
        if set.contains(&i) || !clustered_ok(pool, set, i) {
            continue;
        }
        if let Some(b) = budget {
            if !fits(used + pool[i].size, b) {
                continue;
            }
        }
        let mut next = set.to_vec();
        next.push(i);
        let cost = ev.eval(&next)?;
        if !improves(cost, current) {
            continue;
        }
        let benefit = current - cost;
        let score = if density {
            if pool[i].size > 0.0 {
                benefit / pool[i].size
            } else {
                f64::INFINITY
            }
        } else {
            benefit
        };
        if better(pool, (i, score), best.as_ref().map(|p| (p.index, p.score))) {
            best = Some(Pick {
                index: i,
                benefit,
                score,
                cost,
            });
        }
    }
    Ok(best)
}

/// Compressed variants of `member` not already in `set`, smaller than it.
fn variants(pool: &[EnumCandidate], set: &[usize], member: usize) -> Vec<usize> {
    (0..pool.len())
        .filter(|&j| {
            j != member
                && !set.contains(&j)
                && pool[j].compressed
                && pool[j].shape == pool[member].shape
                && pool[j].size < pool[member].size
        })
        .collect()
}

type Recovery = (Vec<usize>, Vec<(usize, usize)>, f64);
type ApplySwaps<'a> = &'a dyn Fn(&[(usize, usize)]) -> Vec<usize>;

fn cheapest_fit<E>(
    pool: &[EnumCandidate],
    budget: f64,
    swaps: Vec<Vec<(usize, usize)>>,
    apply: ApplySwaps<'_>,
    ev: &mut Evaluator<'_, E>,
) -> Result<Option<Recovery>, E> {
    let mut best: Option<Recovery> = None;
    for sw in swaps {
        let set = apply(&sw);
        if !fits(size_of(pool, &set), budget) {
            continue;
        }
        let c = ev.eval(&set)?;
        if best.as_ref().is_none_or(|b| c < b.2) {
            best = Some((set, sw, c));
        }
    }
    Ok(best)
}

/// Cheapest way to make `over` fit by replacing one member, or failing
/// that two members, with compressed variants of the same shape.
fn recover<E>(
    pool: &[EnumCandidate],
    over: &[usize],
    budget: f64,
    ev: &mut Evaluator<'_, E>,
) -> Result<Option<Recovery>, E> {
    let options: Vec<(usize, Vec<usize>)> = over.iter().map(|&m| (m, variants(pool, over, m))).collect();
    let swap = |pairs: &[(usize, usize)]| -> Vec<usize> {
        over.iter()
            .map(|&i| pairs.iter().find(|p| p.0 == i).map_or(i, |p| p.1))
            .collect()
    };
    let mut singles = Vec::new();
    for (m, vs) in &options {
        for &v in vs {
            singles.push(vec![(*m, v)]);
        }
    }
    let mut best = cheapest_fit(pool, budget, singles, &swap, ev)?;
    if best.is_none() {
        let mut doubles = Vec::new();
        for a in 0..options.len() {
            for b in a + 1..options.len() {
                for &x in &options[a].1 {
                    for &y in &options[b].1 {
                        if x != y {
                            doubles.push(vec![(options[a].0, x), (options[b].0, y)]);
                        }
                    }
                }
            }
        }
        best = cheapest_fit(pool, budget, doubles, &swap, ev)?;
    }
    Ok(best)
}

/// Greedy search from `initial` for a configuration within `budget`.
pub fn enumerate<E>(
    pool: &[EnumCandidate],
    budget: f64,
    mode: Enumeration,
    initial: &[usize],
    cost: &mut dyn FnMut(&[usize]) -> Result<f64, E>,
) -> Result<EnumerationResult, E> {
    let mut ev = Evaluator::new(cost);
    run(pool, budget, mode, initial, &mut ev)
}

pub(crate) fn run<E>(
    pool: &[EnumCandidate],
    budget: f64,
    mode: Enumeration,
    initial: &[usize],
    ev: &mut Evaluator<'_, E>,
) -> Result<EnumerationResult, E> {
    let mut set = initial.to_vec();
    let mut current = ev.eval(&set)?;
    let mut trace = Vec::new();
    let density = mode == Enumeration::Density;
    for _ in 0..=pool.len() * 4 {
        let fitting = best_addition(pool, &set, current, Some(budget), density, ev)?;
        let mut recovered = None;
        if mode == Enumeration::Backtrack {
            if let Some(want) = best_addition(pool, &set, current, None, false, ev)? {
                let used = size_of(pool, &set);
                if !fits(used + pool[want.index].size, budget) {
                    let mut over = set.clone();
                    over.push(want.index);
                    if let Some(r) = recover(pool, &over, budget, ev)? {
                        if improves(r.2, current) {
                            recovered = Some((want.index, r));
                        }
                    }
                }
            }
        }
        let take_recovered = match (&recovered, &fitting) {
            (Some((_, r)), Some(f)) => r.2 < f.cost,
            (Some(_), None) => true,
            _ => false,
        };
        if take_recovered {
            let (wanted, (next, swaps, c)) = recovered.expect("checked");
            trace.push(SearchStep::Backtrack {
                wanted: pool[wanted].id.clone(),
                replaced: swaps
                    .iter()
                    .map(|&(a, b)| (pool[a].id.clone(), pool[b].id.clone()))
                    .collect(),
                cost: c,
            });
            set = next;
            current = c;
        } else if let Some(p) = fitting {
            trace.push(SearchStep::Add {
                index: pool[p.index].id.clone(),
                benefit: p.benefit,
                score: p.score,
                cost: p.cost,
            });
            set.push(p.index);
            current = p.cost;
        } else {
            break;
        }
    }
    Ok(EnumerationResult {
        size: size_of(pool, &set),
        chosen: set,
        cost: current,
        trace,
    })
}
