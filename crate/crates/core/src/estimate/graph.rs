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

//! The deduction graph: index nodes joined through deduction nodes to the
//! narrower indexes whose sizes determine theirs.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::compression::{Category, CompressionMethod, IndexDef};

use super::{DeductionKind, EstimateError, EstimationContext, SizeEstimate};

#[derive(Debug, Clone, Serialize)]
pub struct IndexNode {
    pub def: IndexDef,
    pub id: String,
    pub columns: Vec<String>,
    pub target: bool,
    /// Known size of an index that already exists (or is uncompressed).
    pub known: Option<SizeEstimate>,
    pub rows: u64,
    pub uncompressed_pages: u64,
    /// Children always rank below their parents.
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeductionNode {
    pub kind: DeductionKind,
    pub parent: usize,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeductionGraph {
    pub nodes: Vec<IndexNode>,
    pub deductions: Vec<DeductionNode>,
    #[serde(skip)]
    by_parent: Vec<Vec<usize>>,
    #[serde(skip)]
    by_child: Vec<Vec<usize>>,
}

/// Physical identity: two definitions with the same stored columns in the
/// same order, filter and codec hold the same rows in the same order.
fn physical_key(def: &IndexDef, columns: &[String]) -> String {
    let filter = def.filter.as_ref().map(ToString::to_string).unwrap_or_default();
    format!("{}|{}|{}|{}", def.table, columns.join(","), filter, def.method)
}

fn part_def(like: &IndexDef, columns: &[String]) -> IndexDef {
    IndexDef {
        table: like.table.clone(),
        keys: columns.to_vec(),
        include: Vec::new(),
        filter: like.filter.clone(),
        method: like.method,
        clustered: false,
    }
}

struct Builder<'a> {
    ctx: &'a EstimationContext,
    nodes: Vec<IndexNode>,
    keys: HashMap<String, usize>,
    deductions: Vec<DeductionNode>,
}

impl Builder<'_> {
    fn add(&mut self, def: &IndexDef, target: bool, known: Option<SizeEstimate>) -> Result<(usize, bool), EstimateError> {
        let columns = self.ctx.stored_columns(def)?;
        let key = physical_key(def, &columns);
        if let Some(&i) = self.keys.get(&key) {
            let n = &mut self.nodes[i];
            n.target |= target;
            if n.known.is_none() {
                n.known = known;
            }
            return Ok((i, false));
        }
        let uncompressed_pages = self.ctx.uncompressed_pages(def)?;
        let known = known.or_else(|| {
            (!def.method.is_compressed())
                .then(|| SizeEstimate::exact(uncompressed_pages as f64, uncompressed_pages as f64))
        });
        self.nodes.push(IndexNode {
            def: def.clone(),
            id: def.id(),
            rows: self.ctx.index_rows(def)?,
            uncompressed_pages,
            columns,
            target,
            known,
            rank: 0,
        });
        self.keys.insert(key, self.nodes.len() - 1);
        Ok((self.nodes.len() - 1, true))
    }

    fn expand(&mut self, start: usize) -> Result<(), EstimateError> {
        let mut work = vec![start];
        while let Some(i) = work.pop() {
            let node = &self.nodes[i];
            let Some(category) = node.def.method.category() else { continue };
            if node.known.is_some() {
                continue;
            }
            let cols = node.columns.clone();
            let def = node.def.clone();
            let m = cols.len();
            if m < 2 {
                continue;
            }
            let kind = match category {
                Category::OrderIndependent => DeductionKind::ColExtOrdInd,
                Category::OrderDependent => DeductionKind::ColExtOrdDep,
            };
            let mut splits = vec![vec![cols[..m - 1].to_vec(), cols[m - 1..].to_vec()]];
            if m >= 3 {
                splits.push(cols.iter().map(|c| vec![c.clone()]).collect());
            }
            for parts in splits {
                let mut children = Vec::with_capacity(parts.len());
                for p in &parts {
                    let (c, new) = self.add(&part_def(&def, p), false, None)?;
                    if new {
                        work.push(c);
                    }
                    children.push(c);
                }
                self.deductions.push(DeductionNode {
                    kind,
                    parent: i,
                    children,
                });
            }
        }
        Ok(())
    }
}

impl DeductionGraph {
    /// Builds the graph over `targets`, reusing the known sizes of
    /// `existing` indexes.
    pub fn build(
        targets: &[IndexDef],
        existing: &[(IndexDef, SizeEstimate)],
        ctx: &EstimationContext,
    ) -> Result<Self, EstimateError> {
        let mut b = Builder {
            ctx,
            nodes: Vec::new(),
            keys: HashMap::new(),
            deductions: Vec::new(),
        };
        for (d, s) in existing {
            b.add(d, false, Some(s.clone()))?;
        }
        let mut roots = Vec::new();
        for t in targets {
            roots.push(b.add(t, true, None)?.0);
        }
        for r in roots {
            b.expand(r)?;
        }

        // existing first, then narrow to wide
        let mut order: Vec<usize> = (0..b.nodes.len()).collect();
        order.sort_by(|&x, &y| {
            let (nx, ny) = (&b.nodes[x], &b.nodes[y]);
            (nx.known.is_none(), nx.columns.len(), &nx.id).cmp(&(ny.known.is_none(), ny.columns.len(), &ny.id))
        });
        for (rank, &i) in order.iter().enumerate() {
            b.nodes[i].rank = rank;
        }

        let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, n) in b.nodes.iter().enumerate() {
            if n.def.method.category() == Some(Category::OrderIndependent) {
                let set: BTreeSet<&String> = n.columns.iter().collect();
                let filter = n.def.filter.as_ref().map(ToString::to_string).unwrap_or_default();
                let key = format!("{}|{:?}|{}|{}", n.def.table, set, filter, n.def.method);
                groups.entry(key).or_default().push(i);
            }
        }
        for mut g in groups.into_values() {
            g.sort_by_key(|&i| b.nodes[i].rank);
            for (k, &parent) in g.iter().enumerate() {
                if b.nodes[parent].known.is_some() {
                    continue;
                }
                for &child in &g[..k] {
                    b.deductions.push(DeductionNode {
                        kind: DeductionKind::ColSet,
                        parent,
                        children: vec![child],
                    });
                }
            }
        }

        let n = b.nodes.len();
        let mut by_parent = vec![Vec::new(); n];
        let mut by_child = vec![Vec::new(); n];
        for (d, dn) in b.deductions.iter().enumerate() {
            by_parent[dn.parent].push(d);
            for &c in &dn.children {
                by_child[c].push(d);
            }
        }
        let g = DeductionGraph {
            nodes: b.nodes,
            deductions: b.deductions,
            by_parent,
            by_child,
        };
        debug_assert!(g.is_acyclic());
        Ok(g)
    }

    /// Every deduction's children rank strictly below its parent.
    pub fn is_acyclic(&self) -> bool {
        self.deductions
            .iter()
            .all(|d| d.children.iter().all(|&c| self.nodes[c].rank < self.nodes[d.parent].rank))
    }

    /// Deductions that can produce the size of `node`.
    pub fn deductions_of(&self, node: usize) -> &[usize] {
        &self.by_parent[node]
    }

    /// Deductions that consume the size of `node`.
    pub fn consumers_of(&self, node: usize) -> &[usize] {
        &self.by_child[node]
    }

    pub fn find(&self, def: &IndexDef) -> Option<usize> {
        let id = def.id();
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].target)
    }

    /// Connected groups of nodes of unknown size, linked through deductions.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for d in &self.deductions {
            for &c in &d.children {
                if self.nodes[c].known.is_none() {
                    let (a, b) = (root(&mut parent, d.parent), root(&mut parent, c));
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            if self.nodes[i].known.is_none() {
                let r = root(&mut parent, i);
                groups.entry(r).or_default().push(i);
            }
        }
        groups.into_values().collect()
    }

    pub fn method_of(&self, node: usize) -> CompressionMethod {
        self.nodes[node].def.method
    }
}
