//! Immutable bi-weighted directed multigraph in compressed adjacency form.
//!
//! Every arc carries a non-negative integer *cost* and *length*. Arc ids are
//! positions in the out-adjacency arrays, so the out-arcs of a vertex form a
//! contiguous id range. A second, in-arc index is kept for reverse searches.

use std::ops::Range;

use thiserror::Error;

pub type VertexId = u32;
pub type ArcId = u32;

/// Sentinel used in parent arrays and adjacency lookups.
pub const NO_ARC: ArcId = ArcId::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("coordinate count {got} does not match vertex count {n}")]
    CoordinateCount { got: usize, n: usize },
    #[error("arc {arc} does not start at vertex {expected}")]
    Disconnected { arc: ArcId, expected: VertexId },
    #[error("path is not simple: vertex {0} repeats")]
    NotSimple(VertexId),
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<u32>,
    tails: Vec<VertexId>,
    heads: Vec<VertexId>,
    costs: Vec<u64>,
    lengths: Vec<u64>,
    in_offsets: Vec<u32>,
    in_arcs: Vec<ArcId>,
    coords: Option<Vec<(f64, f64)>>,
    max_cost: u64,
    max_length: u64,
}

impl Graph {
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.heads.len()
    }

    /// Largest arc cost (`A`).
    pub fn max_cost(&self) -> u64 {
        self.max_cost
    }

    /// Largest arc length (`B`).
    pub fn max_length(&self) -> u64 {
        self.max_length
    }

    #[inline]
    pub fn out_arcs(&self, v: VertexId) -> Range<ArcId> {
        self.offsets[v as usize]..self.offsets[v as usize + 1]
    }

    #[inline]
    pub fn in_arcs(&self, v: VertexId) -> &[ArcId] {
        let lo = self.in_offsets[v as usize] as usize;
        let hi = self.in_offsets[v as usize + 1] as usize;
        &self.in_arcs[lo..hi]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        let r = self.out_arcs(v);
        (r.end - r.start) as usize
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_arcs(v).len()
    }

    #[inline]
    pub fn tail(&self, arc: ArcId) -> VertexId {
        self.tails[arc as usize]
    }

    #[inline]
    pub fn head(&self, arc: ArcId) -> VertexId {
        self.heads[arc as usize]
    }

    #[inline]
    pub fn cost(&self, arc: ArcId) -> u64 {
        self.costs[arc as usize]
    }

    #[inline]
    pub fn length(&self, arc: ArcId) -> u64 {
        self.lengths[arc as usize]
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        self.coords.as_deref()
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        0..self.m() as ArcId
    }

    /// Returns a copy with planar coordinates attached.
    pub fn with_coords(mut self, coords: Vec<(f64, f64)>) -> Result<Self, GraphError> {
        if coords.len() != self.n() {
            return Err(GraphError::CoordinateCount { got: coords.len(), n: self.n() });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Graph with every arc reversed; arc `i` of the result reverses the
    /// `i`-th arc in tail-sorted order of the reversed arc list.
    pub fn reversed(&self) -> Graph {
        let mut b = GraphBuilder::new(self.n());
        for arc in self.arcs() {
            b.add_arc(self.head(arc), self.tail(arc), self.cost(arc), self.length(arc));
        }
        let g = b.build();
        match &self.coords {
            Some(c) => g.with_coords(c.clone()).expect("same vertex count"),
            None => g,
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v as usize, n: self.n() })
        }
    }
}

/// Collects arcs in any order; `build` groups them by tail, keeping the
/// insertion order within each tail.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    n: usize,
    arcs: Vec<(VertexId, VertexId, u64, u64)>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        assert!(n < u32::MAX as usize, "vertex count exceeds u32 id space");
        Self { n, arcs: Vec::new() }
    }

    pub fn with_capacity(n: usize, arcs: usize) -> Self {
        let mut b = Self::new(n);
        b.arcs.reserve(arcs);
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, tail: VertexId, head: VertexId, cost: u64, length: u64) -> &mut Self {
        assert!((tail as usize) < self.n && (head as usize) < self.n, "arc endpoint out of range");
        self.arcs.push((tail, head, cost, length));
        self
    }

    /// Adds an undirected edge as two opposite arcs with identical weights.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, cost: u64, length: u64) -> &mut Self {
        self.add_arc(u, v, cost, length);
        self.add_arc(v, u, cost, length)
    }

    pub fn build(self) -> Graph {
        let n = self.n;
        let m = self.arcs.len();
        assert!(m < u32::MAX as usize, "arc count exceeds u32 id space");

        let mut offsets = vec![0u32; n + 1];
        for &(t, ..) in &self.arcs {
            offsets[t as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut tails = vec![0; m];
        let mut heads = vec![0; m];
        let mut costs = vec![0; m];
        let mut lengths = vec![0; m];
        for &(t, h, c, l) in &self.arcs {
            let slot = cursor[t as usize] as usize;
            cursor[t as usize] += 1;
            tails[slot] = t;
            heads[slot] = h;
            costs[slot] = c;
            lengths[slot] = l;
        }

        let mut in_offsets = vec![0u32; n + 1];
        for &h in &heads {
            in_offsets[h as usize + 1] += 1;
        }
        for i in 0..n {
            in_offsets[i + 1] += in_offsets[i];
        }
        let mut in_cursor = in_offsets.clone();
        let mut in_arcs = vec![0; m];
        for (arc, &h) in heads.iter().enumerate() {
            let slot = in_cursor[h as usize] as usize;
            in_cursor[h as usize] += 1;
            in_arcs[slot] = arc as ArcId;
        }

        let max_cost = costs.iter().copied().max().unwrap_or(0);
        let max_length = lengths.iter().copied().max().unwrap_or(0);
        Graph {
            offsets,
            tails,
            heads,
            costs,
            lengths,
            in_offsets,
            in_arcs,
            coords: None,
            max_cost,
            max_length,
        }
    }
}

/// A simple `source -> target` path with its cost `a(P)` and length `b(P)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub source: VertexId,
    pub target: VertexId,
    pub arcs: Vec<ArcId>,
    pub cost: u64,
    pub length: u64,
}

impl Path {
    pub fn empty(v: VertexId) -> Self {
        Path { source: v, target: v, arcs: Vec::new(), cost: 0, length: 0 }
    }

    /// Validates connectivity and simplicity and sums the weights.
    pub fn from_arcs(g: &Graph, source: VertexId, arcs: Vec<ArcId>) -> Result<Self, GraphError> {
        g.check_vertex(source)?;
        let mut seen = std::collections::HashSet::with_capacity(arcs.len() + 1);
        seen.insert(source);
        let (mut at, mut cost, mut length) = (source, 0u64, 0u64);
        for &arc in &arcs {
            if arc as usize >= g.m() || g.tail(arc) != at {
                return Err(GraphError::Disconnected { arc, expected: at });
            }
            at = g.head(arc);
            if !seen.insert(at) {
                return Err(GraphError::NotSimple(at));
            }
            cost += g.cost(arc);
            length += g.length(arc);
        }
        Ok(Path { source, target: at, arcs, cost, length })
    }

    /// Builds a simple path from a connected walk by cutting out cycles.
    /// Cost and length can only shrink since weights are non-negative.
    pub fn from_walk(g: &Graph, source: VertexId, walk: &[ArcId]) -> Result<Self, GraphError> {
        let mut position = std::collections::HashMap::<VertexId, usize>::new();
        position.insert(source, 0);
        let mut kept: Vec<ArcId> = Vec::with_capacity(walk.len());
        let mut at = source;
        for &arc in walk {
            if arc as usize >= g.m() || g.tail(arc) != at {
                return Err(GraphError::Disconnected { arc, expected: at });
            }
            at = g.head(arc);
            if let Some(&pos) = position.get(&at) {
                for dropped in kept.drain(pos..) {
                    position.remove(&g.head(dropped));
                }
                position.insert(at, pos);
            } else {
                kept.push(arc);
                position.insert(at, kept.len());
            }
        }
        Path::from_arcs(g, source, kept)
    }

    pub fn vertices<'a>(&'a self, g: &'a Graph) -> impl Iterator<Item = VertexId> + 'a {
        std::iter::once(self.source).chain(self.arcs.iter().map(move |&a| g.head(a)))
    }

    pub fn is_feasible(&self, beta: u64) -> bool {
        self.length <= beta
    }

    pub fn hops(&self) -> usize {
        self.arcs.len()
    }
}

/// One CSP query: source, target and length budget `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct InstanceSpec {
    pub source: VertexId,
    pub target: VertexId,
    pub beta: u64,
}

impl InstanceSpec {
    pub fn new(source: VertexId, target: VertexId, beta: u64) -> Result<Self, GraphError> {
        if source == target {
            return Err(GraphError::InvalidInstance("source equals target"));
        }
        if beta == 0 {
            return Err(GraphError::InvalidInstance("beta must be positive"));
        }
        Ok(Self { source, target, beta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        let mut b = GraphBuilder::new(4);
        b.add_arc(0, 1, 1, 5).add_arc(0, 2, 4, 2).add_arc(1, 3, 0, 0).add_arc(2, 3, 0, 0);
        b.build()
    }

    #[test]
    fn builder_groups_by_tail_and_tracks_maxima() {
        let mut b = GraphBuilder::new(3);
        b.add_arc(2, 0, 7, 1).add_arc(0, 1, 3, 9).add_arc(0, 2, 1, 1);
        let g = b.build();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.out_arcs(0), 0..2);
        assert_eq!(g.head(0), 1);
        assert_eq!(g.head(1), 2);
        assert_eq!(g.tail(2), 2);
        assert_eq!(g.max_cost(), 7);
        assert_eq!(g.max_length(), 9);
        assert_eq!(g.in_arcs(0), &[2]);
        assert_eq!(g.in_degree(1), 1);
    }

    #[test]
    fn edges_are_symmetric_arc_pairs() {
        let mut b = GraphBuilder::new(2);
        b.add_edge(0, 1, 4, 6);
        let g = b.build();
        assert_eq!(g.m(), 2);
        assert_eq!((g.cost(0), g.length(0)), (g.cost(1), g.length(1)));
        assert_eq!(g.head(0), g.tail(1));
    }

    #[test]
    fn path_from_arcs_sums_weights() {
        let g = diamond();
        let p = Path::from_arcs(&g, 0, vec![0, 2]).unwrap();
        assert_eq!((p.cost, p.length, p.target), (1, 5, 3));
        assert!(!p.is_feasible(4));
        assert!(Path::from_arcs(&g, 0, vec![2]).is_err());
    }

    #[test]
    fn walk_loop_erasure() {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1, 1, 1).add_arc(1, 2, 1, 1);
        let g = b.build();
        // 0 -> 1 -> 0 -> 1 -> 2
        let a01 = g.out_arcs(0).start;
        let a10 = g.out_arcs(1).find(|&a| g.head(a) == 0).unwrap();
        let a12 = g.out_arcs(1).find(|&a| g.head(a) == 2).unwrap();
        let p = Path::from_walk(&g, 0, &[a01, a10, a01, a12]).unwrap();
        assert_eq!(p.arcs, vec![a01, a12]);
        assert_eq!(p.cost, 2);
    }

    #[test]
    fn instance_spec_validation() {
        assert!(InstanceSpec::new(1, 1, 3).is_err());
        assert!(InstanceSpec::new(1, 2, 0).is_err());
        assert!(InstanceSpec::new(1, 2, 1).is_ok());
    }
}
