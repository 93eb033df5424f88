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


use crate::compression::{CompressionMethod, IndexDef};
use crate::cost::SelectStatement;

/// Which candidate shapes and codecs to produce.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRules {
    pub methods: Vec<CompressionMethod>,
    pub partial: bool,
    pub clustered: bool,
}

impl Default for CandidateRules {
    fn default() -> Self {
        Self {
            methods: vec![CompressionMethod::None, CompressionMethod::Ns, CompressionMethod::Page],
            partial: true,
            clustered: true,
        }
    }
}

fn push_unique(out: &mut Vec<IndexDef>, def: IndexDef) {
    if !out.iter().any(|d| d.id() == def.id()) {
        out.push(def);
    }
}

/// Uncompressed index shapes relevant to one SELECT.
pub fn candidate_shapes(stmt: &SelectStatement, rules: &CandidateRules) -> Vec<IndexDef> {
    let mut pred_cols: Vec<String> = Vec::new();
    for p in &stmt.predicates {
        if !pred_cols.contains(&p.column) {
            pred_cols.push(p.column.clone());
        }
    }
    let referenced = stmt.referenced_columns();
    let mut shapes = Vec::new();
    if pred_cols.is_empty() {
        if rules.clustered {
            let lead = stmt
                .columns
                .iter()
                .chain(&stmt.aggregate)
                .next()
                .cloned()
                .or_else(|| referenced.iter().next().cloned());
            if let Some(c) = lead {
                push_unique(&mut shapes, IndexDef::new(stmt.table.clone(), [c]).clustered(true));
            }
        }
        return shapes;
    }
    for lead in &pred_cols {
        let mut keys = vec![lead.clone()];
        keys.extend(pred_cols.iter().filter(|c| *c != lead).cloned());
        let rest: Vec<String> = referenced.iter().filter(|c| !keys.contains(c)).cloned().collect();
        let seek = IndexDef::new(stmt.table.clone(), keys.clone());
        let covering = seek.clone().include(rest.clone());
        push_unique(&mut shapes, seek);
        push_unique(&mut shapes, covering.clone());
        if rules.partial {
            let filter = stmt
                .predicates
                .iter()
                .find(|p| &p.column == lead)
                .cloned()
                .expect("lead is a predicate column");
            push_unique(&mut shapes, covering.clone().filter(filter));
        }
        if rules.clustered {
            push_unique(&mut shapes, IndexDef::new(stmt.table.clone(), keys).clustered(true));
        }
    }
    shapes
}

/// Every candidate shape under every configured codec.
pub fn generate_candidates(stmt: &SelectStatement, rules: &CandidateRules) -> Vec<IndexDef> {
    let shapes = candidate_shapes(stmt, rules);
    let mut out = Vec::with_capacity(shapes.len() * rules.methods.len());
    for s in &shapes {
        for &m in &rules.methods {
            out.push(s.with_method(m));
        }
    }
    out
}
