//! Breadth-first hop distances and diameter estimation.

use std::collections::VecDeque;

use rand::Rng;
use thiserror::Error;

use crate::dijkstra::dijkstra;
use crate::graph::{Graph, VertexId};
use crate::rng;
use crate::weight::WeightView;

pub const UNVISITED: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiameterError {
    #[error("graph has no vertices")]
    Empty,
}

/// Hop distance from `s` to every vertex, `UNVISITED` where unreachable.
pub fn bfs_hops(g: &Graph, s: VertexId) -> Vec<u32> {
    let mut dist = vec![UNVISITED; g.n()];
    let mut queue = VecDeque::new();
    dist[s as usize] = 0;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for arc in g.out_arcs(u) {
            let v = g.head(arc);
            if dist[v as usize] == UNVISITED {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Farthest reached vertex (smallest id on ties) and its distance.
fn farthest(dist: &[u32]) -> (VertexId, u32) {
    let mut best = (0, 0);
    for (v, &d) in dist.iter().enumerate() {
        if d != UNVISITED && d > best.1 {
            best = (v as VertexId, d);
        }
    }
    best
}

/// Lower bound on the hop diameter with the default sweep budget.
pub fn estimate_diameter(g: &Graph) -> Result<u32, DiameterError> {
    estimate_diameter_with(g, 4, 0x5eed)
}

/// Repeated double sweeps: start at vertex 0 and at `sweeps - 1` seeded
/// random vertices; from each start, BFS to the farthest vertex and BFS
/// again from there. The largest eccentricity seen is returned.
pub fn estimate_diameter_with(g: &Graph, sweeps: usize, seed: u64) -> Result<u32, DiameterError> {
    if g.n() == 0 {
        return Err(DiameterError::Empty);
    }
    let mut rng = rng::seeded(seed);
    let mut best = 0;
    for i in 0..sweeps.max(1) {
        let start = if i == 0 { 0 } else { rng.random_range(0..g.n()) as VertexId };
        let (far, d0) = farthest(&bfs_hops(g, start));
        let (_, d1) = farthest(&bfs_hops(g, far));
        best = best.max(d0).max(d1);
    }
    Ok(best)
}

/// Same double-sweep scheme on arc lengths instead of hops.
pub fn estimate_length_diameter(g: &Graph, sweeps: usize, seed: u64) -> Result<u64, DiameterError> {
    if g.n() == 0 {
        return Err(DiameterError::Empty);
    }
    let w = WeightView::length_first();
    let ecc = |s: VertexId| {
        let tree = dijkstra(g, s, &w);
        let mut best: (VertexId, i128) = (s, 0);
        for v in 0..g.n() as VertexId {
            if let Some(d) = tree.scaled_dist(v) {
                if d > best.1 {
                    best = (v, d);
                }
            }
        }
        best
    };
    let mut rng = rng::seeded(seed);
    let mut best = 0i128;
    for i in 0..sweeps.max(1) {
        let start = if i == 0 { 0 } else { rng.random_range(0..g.n()) as VertexId };
        let (far, d0) = ecc(start);
        let (_, d1) = ecc(far);
        best = best.max(d0).max(d1);
    }
    Ok(best as u64)
}
