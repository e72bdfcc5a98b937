//! Exact constrained shortest paths by Pareto label setting.
//!
//! Labels are settled in lexicographic `(cost, length)` order, so a label is
//! dominated exactly when an already settled label at the same vertex is at
//! least as short. Labels that cannot reach the target within the length
//! budget are never created.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::dijkstra::reverse_dijkstra;
use crate::graph::{ArcId, Graph, GraphError, Path, VertexId, NO_ARC};
use crate::weight::WeightView;

pub const DEFAULT_LABEL_BUDGET: usize = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("oracle overflow: more than {0} labels")]
    OracleOverflow(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy)]
struct Label {
    vertex: VertexId,
    parent: u32,
    arc: ArcId,
}

/// Min-cost `s`-`t` path with length at most `beta`, `None` if none exists.
pub fn exact_csp(g: &Graph, s: VertexId, t: VertexId, beta: u64) -> Result<Option<Path>, ExactError> {
    exact_csp_with_budget(g, s, t, beta, DEFAULT_LABEL_BUDGET)
}

pub fn exact_csp_with_budget(
    g: &Graph,
    s: VertexId,
    t: VertexId,
    beta: u64,
    budget: usize,
) -> Result<Option<Path>, ExactError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let to_t = reverse_dijkstra(g, t, &WeightView::length_first());
    let min_to_t = |v: VertexId| to_t.scaled_dist(v).map(|d| d as u64);
    match min_to_t(s) {
        Some(d) if d <= beta => {}
        _ => return Ok(None),
    }
    if s == t {
        return Ok(Some(Path::empty(s)));
    }

    let mut labels = vec![Label { vertex: s, parent: u32::MAX, arc: NO_ARC }];
    let mut settled_len = vec![u64::MAX; g.n()];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, 0u64, 0u32)));
    while let Some(Reverse((cost, length, id))) = heap.pop() {
        let v = labels[id as usize].vertex;
        if length >= settled_len[v as usize] {
            continue;
        }
        settled_len[v as usize] = length;
        if v == t {
            return Ok(Some(rebuild(g, s, &labels, id)));
        }
        for a in g.out_arcs(v) {
            let w = g.head(a);
            let len = length + g.length(a);
            if len >= settled_len[w as usize] {
                continue;
            }
            match min_to_t(w) {
                Some(rest) if len + rest <= beta => {}
                _ => continue,
            }
            if labels.len() >= budget {
                return Err(ExactError::OracleOverflow(budget));
            }
            labels.push(Label { vertex: w, parent: id, arc: a });
            heap.push(Reverse((cost + g.cost(a), len, labels.len() as u32 - 1)));
        }
    }
    Ok(None)
}

fn rebuild(g: &Graph, s: VertexId, labels: &[Label], mut id: u32) -> Path {
    let mut arcs = Vec::new();
    while labels[id as usize].arc != NO_ARC {
        arcs.push(labels[id as usize].arc);
        id = labels[id as usize].parent;
    }
    arcs.reverse();
    Path::from_arcs(g, s, arcs).expect("settled labels form simple paths")
}
