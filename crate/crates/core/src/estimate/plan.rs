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

//! Choosing which index sizes to sample and which to deduce.

use serde::{Deserialize, Serialize};

use crate::compression::IndexDef;

use super::{
    compose_error, prob_within, AccuracyRequirement, DeductionGraph, DeductionKind, EstimateError,
    EstimationContext, SizeEstimate,
};

pub const DEFAULT_F_GRID: [f64; 5] = [0.01, 0.025, 0.05, 0.075, 0.10];

/// Largest cluster of unknown-size indexes the exact planner accepts.
pub const EXACT_CLUSTER_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NodeState {
    None,
    Exact,
    Sampled,
    /// Deduced through the given deduction node.
    Deduced(usize),
}

/// One index of a plan, in a form suitable for reports.
#[derive(Debug, Clone, Serialize)]
pub struct PlannedNode {
    pub index: String,
    pub target: bool,
    pub state: NodeState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deduction: Option<DeductionKind>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    pub cost: u64,
    pub err_mean: f64,
    pub err_var: f64,
    pub prob_within: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimationPlan {
    pub f: f64,
    pub requirement: AccuracyRequirement,
    pub total_cost: u64,
    #[serde(skip)]
    pub graph: DeductionGraph,
    #[serde(skip)]
    pub states: Vec<NodeState>,
    #[serde(skip)]
    pub errors: Vec<(f64, f64)>,
    #[serde(skip)]
    pub costs: Vec<u64>,
}

impl EstimationPlan {
    pub fn nodes(&self) -> Vec<PlannedNode> {
        let mut order: Vec<usize> = (0..self.graph.nodes.len())
            .filter(|&i| self.states[i] != NodeState::None)
            .collect();
        order.sort_by_key(|&i| self.graph.nodes[i].rank);
        order
            .into_iter()
            .map(|i| {
                let n = &self.graph.nodes[i];
                let (deduction, inputs) = match self.states[i] {
                    NodeState::Deduced(d) => {
                        let dn = &self.graph.deductions[d];
                        (
                            Some(dn.kind),
                            dn.children.iter().map(|&c| self.graph.nodes[c].id.clone()).collect(),
                        )
                    }
                    _ => (None, Vec::new()),
                };
                PlannedNode {
                    index: n.id.clone(),
                    target: n.target,
                    state: self.states[i],
                    deduction,
                    inputs,
                    cost: if self.states[i] == NodeState::Sampled { self.costs[i] } else { 0 },
                    err_mean: self.errors[i].0,
                    err_var: self.errors[i].1,
                    prob_within: prob_within(self.requirement.e, self.errors[i]),
                }
            })
            .collect()
    }

    pub fn state_of(&self, def: &IndexDef) -> Option<NodeState> {
        self.graph.find(def).map(|i| self.states[i])
    }
}

/// Per-fraction quantities shared by both planners.
struct Setup<'a> {
    g: &'a DeductionGraph,
    ctx: &'a EstimationContext,
    req: AccuracyRequirement,
    costs: Vec<u64>,
    sample_err: Vec<(f64, f64)>,
    /// Node indices in increasing rank.
    by_rank: Vec<usize>,
}

impl<'a> Setup<'a> {
    fn new(g: &'a DeductionGraph, ctx: &'a EstimationContext, req: AccuracyRequirement, f: f64) -> Result<Self, EstimateError> {
        let mut costs = Vec::with_capacity(g.nodes.len());
        let mut sample_err = Vec::with_capacity(g.nodes.len());
        for n in &g.nodes {
            if n.known.is_some() {
                costs.push(0);
                sample_err.push((1.0, 0.0));
            } else {
                costs.push(ctx.sample_cost(&n.def, f)?);
                sample_err.push(ctx.model.sample_cf(n.def.method, f, Some(f * n.rows as f64)));
            }
        }
        let mut by_rank: Vec<usize> = (0..g.nodes.len()).collect();
        by_rank.sort_by_key(|&i| g.nodes[i].rank);
        Ok(Self {
            g,
            ctx,
            req,
            costs,
            sample_err,
            by_rank,
        })
    }

    fn initial_states(&self) -> Vec<NodeState> {
        self.g
            .nodes
            .iter()
            .map(|n| if n.known.is_some() { NodeState::Exact } else { NodeState::None })
            .collect()
    }

    fn deduction_error(&self, d: usize, errs: &[(f64, f64)]) -> (f64, f64) {
        let dn = &self.g.deductions[d];
        let mut factors: Vec<(f64, f64)> = dn.children.iter().map(|&c| errs[c]).collect();
        let model = &self.ctx.model;
        factors.push(match dn.kind {
            DeductionKind::ColSet => model.colset(),
            DeductionKind::ColExtOrdInd => model.colext(crate::compression::Category::OrderIndependent, dn.children.len()),
            DeductionKind::ColExtOrdDep => model.colext(crate::compression::Category::OrderDependent, dn.children.len()),
        });
        compose_error(&factors)
    }

    /// Errors of every node under `states`, children before parents.
    fn propagate(&self, states: &[NodeState]) -> Vec<(f64, f64)> {
        let mut errs = vec![(1.0, 0.0); states.len()];
        for &i in &self.by_rank {
            errs[i] = match states[i] {
                NodeState::None | NodeState::Exact => (1.0, 0.0),
                NodeState::Sampled => self.sample_err[i],
                NodeState::Deduced(d) => self.deduction_error(d, &errs),
            };
        }
        errs
    }

    fn prob(&self, err: (f64, f64)) -> f64 {
        prob_within(self.req.e, err)
    }

    fn targets_met(&self, states: &[NodeState], errs: &[(f64, f64)]) -> bool {
        self.g
            .targets()
            .all(|t| states[t] != NodeState::None && self.prob(errs[t]) >= self.req.q)
    }

    fn cost(&self, states: &[NodeState]) -> u64 {
        states
            .iter()
            .zip(&self.costs)
            .filter(|(s, _)| **s == NodeState::Sampled)
            .map(|(_, c)| c)
            .sum()
    }

    fn finish(&self, f: f64, states: Vec<NodeState>) -> EstimationPlan {
        let errors = self.propagate(&states);
        EstimationPlan {
            f,
            requirement: self.req,
            total_cost: self.cost(&states),
            graph: self.g.clone(),
            states,
            errors,
            costs: self.costs.clone(),
        }
    }
}

fn resolve_grid(f_grid: &[f64]) -> Vec<f64> {
    if f_grid.is_empty() {
        DEFAULT_F_GRID.to_vec()
    } else {
        f_grid.to_vec()
    }
}

fn greedy_at(s: &Setup<'_>) -> Option<Vec<NodeState>> {
    let g = s.g;
    let mut states = s.initial_states();
    let mut errs = s.propagate(&states);

    let mut targets: Vec<usize> = g.targets().collect();
    targets.sort_by_key(|&t| g.nodes[t].rank);
    for t in targets {
        if states[t] != NodeState::None {
            continue;
        }
        // deduce from what is already known, most accurate first
        let mut best: Option<(f64, usize)> = None;
        for &d in g.deductions_of(t) {
            if g.deductions[d].children.iter().all(|&c| states[c] != NodeState::None) {
                let p = s.prob(s.deduction_error(d, &errs));
                if best.is_none_or(|(bp, _)| p > bp) {
                    best = Some((p, d));
                }
            }
        }
        if let Some((p, d)) = best {
            if p >= s.req.q {
                states[t] = NodeState::Deduced(d);
                errs = s.propagate(&states);
                continue;
            }
        }
        // sample children to enable a deduction, if cheaper than sampling t
        let mut cheapest: Option<(u64, f64, Vec<NodeState>)> = None;
        for &d in g.deductions_of(t) {
            let children = &g.deductions[d].children;
            for switch_deduced in [false, true] {
                let mut trial = states.clone();
                let mut extra = 0;
                for &c in children {
                    let switch = match trial[c] {
                        NodeState::None => true,
                        NodeState::Deduced(_) => switch_deduced,
                        _ => false,
                    };
                    if switch {
                        trial[c] = NodeState::Sampled;
                        extra += s.costs[c];
                    }
                }
                if extra >= s.costs[t] {
                    continue;
                }
                trial[t] = NodeState::Deduced(d);
                let trial_errs = s.propagate(&trial);
                let p = s.prob(trial_errs[t]);
                if p < s.req.q {
                    continue;
                }
                if switch_deduced
                    && !g
                        .targets()
                        .filter(|&x| trial[x] != NodeState::None)
                        .all(|x| s.prob(trial_errs[x]) >= s.req.q)
                {
                    continue;
                }
                let better = match &cheapest {
                    None => true,
                    Some((c, bp, _)) => extra < *c || (extra == *c && p > *bp),
                };
                if better {
                    cheapest = Some((extra, p, trial));
                }
            }
        }
        match cheapest {
            Some((_, _, trial)) => states = trial,
            None => states[t] = NodeState::Sampled,
        }
        errs = s.propagate(&states);
    }

    // drop sampled helpers that no deduction ended up using, wide to narrow
    for &i in s.by_rank.iter().rev() {
        if g.nodes[i].target || matches!(states[i], NodeState::None | NodeState::Exact) {
            continue;
        }
        let used = g
            .consumers_of(i)
            .iter()
            .any(|&d| states[g.deductions[d].parent] == NodeState::Deduced(d));
        if !used {
            states[i] = NodeState::None;
        }
    }
    let errs = s.propagate(&states);
    s.targets_met(&states, &errs).then_some(states)
}

fn best_over_grid(
    g: &DeductionGraph,
    ctx: &EstimationContext,
    req: AccuracyRequirement,
    grid: &[f64],
    mut solve: impl FnMut(&Setup<'_>) -> Result<Option<Vec<NodeState>>, EstimateError>,
) -> Result<EstimationPlan, EstimateError> {
    let mut best: Option<EstimationPlan> = None;
    for &f in grid {
        let s = Setup::new(g, ctx, req, f)?;
        if let Some(states) = solve(&s)? {
            let plan = s.finish(f, states);
            if best.as_ref().is_none_or(|b| plan.total_cost < b.total_cost) {
                best = Some(plan);
            }
        }
    }
    best.ok_or_else(|| EstimateError::Infeasible {
        e: req.e,
        q: req.q,
        grid: grid.to_vec(),
    })
}

/// Greedy planner: targets are handled narrow to wide, deducing when an
/// available deduction is accurate enough, otherwise sampling the cheaper
/// of the target or the inputs of one of its deductions. The cheapest
/// feasible plan over the fraction grid is returned.
pub fn plan_greedy(
    targets: &[IndexDef],
    existing: &[(IndexDef, SizeEstimate)],
    req: AccuracyRequirement,
    f_grid: &[f64],
    ctx: &EstimationContext,
) -> Result<EstimationPlan, EstimateError> {
    if targets.is_empty() {
        return Err(EstimateError::NoTargets);
    }
    let g = DeductionGraph::build(targets, existing, ctx)?;
    best_over_grid(&g, ctx, req, &resolve_grid(f_grid), |s| Ok(greedy_at(s)))
}

struct Search<'s, 'a> {
    s: &'s Setup<'a>,
    order: Vec<usize>,
    states: Vec<NodeState>,
    required: Vec<u32>,
    best_cost: u64,
    best: Option<Vec<NodeState>>,
}

impl Search<'_, '_> {
    fn run(&mut self, pos: usize, cost: u64) {
        if cost >= self.best_cost {
            return;
        }
        let Some(&i) = self.order.get(pos) else {
            let errs = self.s.propagate(&self.states);
            let ok = self
                .order
                .iter()
                .filter(|&&t| self.s.g.nodes[t].target)
                .all(|&t| self.s.prob(errs[t]) >= self.s.req.q);
            if ok {
                self.best_cost = cost;
                self.best = Some(self.states.clone());
            }
            return;
        };
        if !self.s.g.nodes[i].target && self.required[i] == 0 {
            self.states[i] = NodeState::None;
            self.run(pos + 1, cost);
            return;
        }
        self.states[i] = NodeState::Sampled;
        self.run(pos + 1, cost + self.s.costs[i]);
        for &d in self.s.g.deductions_of(i) {
            let children = self.s.g.deductions[d].children.clone();
            for &c in &children {
                self.required[c] += 1;
            }
            self.states[i] = NodeState::Deduced(d);
            self.run(pos + 1, cost);
            for &c in &children {
                self.required[c] -= 1;
            }
        }
        self.states[i] = NodeState::None;
    }
}

fn exact_at(s: &Setup<'_>) -> Result<Option<Vec<NodeState>>, EstimateError> {
    let mut states = s.initial_states();
    for cluster in s.g.clusters() {
        if !cluster.iter().any(|&i| s.g.nodes[i].target) {
            continue;
        }
        if cluster.len() > EXACT_CLUSTER_LIMIT {
            return Err(EstimateError::ClusterTooLarge {
                size: cluster.len(),
                limit: EXACT_CLUSTER_LIMIT,
            });
        }
        let mut order = cluster.clone();
        order.sort_by_key(|&i| std::cmp::Reverse(s.g.nodes[i].rank));
        let mut search = Search {
            s,
            order,
            states: states.clone(),
            required: vec![0; states.len()],
            best_cost: u64::MAX,
            best: None,
        };
        search.run(0, 0);
        let Some(found) = search.best else { return Ok(None) };
        for &i in &cluster {
            states[i] = found[i];
        }
    }
    Ok(Some(states))
}

/// Exhaustive planner over each connected cluster of the deduction graph,
/// with branch-and-bound on the sampling cost.
pub fn plan_exact(
    targets: &[IndexDef],
    existing: &[(IndexDef, SizeEstimate)],
    req: AccuracyRequirement,
    f_grid: &[f64],
    ctx: &EstimationContext,
) -> Result<EstimationPlan, EstimateError> {
    if targets.is_empty() {
        return Err(EstimateError::NoTargets);
    }
    let g = DeductionGraph::build(targets, existing, ctx)?;
    best_over_grid(&g, ctx, req, &resolve_grid(f_grid), exact_at)
}

/// Cost of sampling every target at fraction `f`.
pub fn all_sampled_cost(
    targets: &[IndexDef],
    existing: &[(IndexDef, SizeEstimate)],
    f: f64,
    ctx: &EstimationContext,
) -> Result<u64, EstimateError> {
    let known: Vec<String> = existing.iter().map(|(d, _)| d.id()).collect();
    let mut total = 0;
    for t in targets {
        if t.method.is_compressed() && !known.contains(&t.id()) {
            total += ctx.sample_cost(t, f)?;
        }
    }
    Ok(total)
}
