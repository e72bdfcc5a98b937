//! Replaces chains of degree-2 vertices by single arcs.
//!
//! A vertex is *internal* when it is not protected and either
//! - has exactly one in-arc and one out-arc, from and to two different
//!   neighbours (a directed chain link), or
//! - has exactly two distinct neighbours joined by symmetric arc pairs
//!   (one in-arc and one out-arc per neighbour, equal weights in both
//!   directions), i.e. an undirected chain link.
//!
//! Every maximal run of internal vertices between two non-internal ones
//! becomes one arc carrying the summed cost and length. Internal vertices
//! are dropped and the remaining ones renumbered densely in original order.

use crate::graph::{ArcId, Graph, GraphBuilder, GraphError, Path, VertexId};

#[derive(Debug, Clone)]
pub struct Contracted {
    pub graph: Graph,
    /// Original arcs behind each arc of `graph`, in traversal order.
    pub arc_chains: Vec<Vec<ArcId>>,
    /// Original vertex -> contracted vertex, `None` for removed vertices.
    pub vertex_map: Vec<Option<VertexId>>,
    /// Contracted vertex -> original vertex.
    pub original_vertex: Vec<VertexId>,
}

impl Contracted {
    pub fn map_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.get(v as usize).copied().flatten()
    }

    /// Rewrites a path of the contracted graph into original arcs.
    pub fn expand_path(&self, original: &Graph, path: &Path) -> Result<Path, GraphError> {
        let arcs = path.arcs.iter().flat_map(|&a| self.arc_chains[a as usize].iter().copied()).collect();
        Path::from_arcs(original, self.original_vertex[path.source as usize], arcs)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Link {
    Keep,
    Directed,
    Undirected,
}

fn classify(g: &Graph, v: VertexId) -> Link {
    let outs: Vec<ArcId> = g.out_arcs(v).collect();
    let ins = g.in_arcs(v);
    if outs.iter().any(|&a| g.head(a) == v) {
        return Link::Keep;
    }
    if outs.len() == 1 && ins.len() == 1 {
        let (pred, succ) = (g.tail(ins[0]), g.head(outs[0]));
        if pred != succ {
            return Link::Directed;
        }
    }
    if outs.len() == 2 && ins.len() == 2 {
        let (x, y) = (g.head(outs[0]), g.head(outs[1]));
        if x == y {
            return Link::Keep;
        }
        let back = |to: VertexId, out: ArcId| {
            ins.iter().any(|&a| g.tail(a) == to && g.cost(a) == g.cost(out) && g.length(a) == g.length(out))
        };
        let (t0, t1) = (g.tail(ins[0]), g.tail(ins[1]));
        let same_neighbours = (t0 == x && t1 == y) || (t0 == y && t1 == x);
        if same_neighbours && back(x, outs[0]) && back(y, outs[1]) {
            return Link::Undirected;
        }
    }
    Link::Keep
}

fn next_link_arc(g: &Graph, link: Link, prev: VertexId, at: VertexId) -> ArcId {
    match link {
        Link::Directed => g.out_arcs(at).start,
        _ => g.out_arcs(at).find(|&a| g.head(a) != prev).expect("two distinct neighbours"),
    }
}

/// Contracts all degree-2 chains; vertices in `protect` (typically `s` and
/// `t`) are never treated as internal.
pub fn contract_degree2(g: &Graph, protect: &[VertexId]) -> Contracted {
    let n = g.n();
    let mut link: Vec<Link> = (0..n as VertexId).map(|v| classify(g, v)).collect();
    for &p in protect {
        link[p as usize] = Link::Keep;
    }
    // rings made only of internal vertices have no endpoint to anchor a
    // chain; they are kept as they are
    let mut anchored = vec![false; n];
    for x in 0..n as VertexId {
        if link[x as usize] != Link::Keep {
            continue;
        }
        for first in g.out_arcs(x) {
            let (mut prev, mut at) = (x, g.head(first));
            while link[at as usize] != Link::Keep && !anchored[at as usize] {
                anchored[at as usize] = true;
                let next = next_link_arc(g, link[at as usize], prev, at);
                prev = at;
                at = g.head(next);
            }
        }
    }
    for v in 0..n {
        if link[v] != Link::Keep && !anchored[v] {
            link[v] = Link::Keep;
        }
    }

    let mut vertex_map = vec![None; n];
    let mut original_vertex = Vec::new();
    for v in 0..n {
        if link[v] == Link::Keep {
            vertex_map[v] = Some(original_vertex.len() as VertexId);
            original_vertex.push(v as VertexId);
        }
    }

    let mut builder = GraphBuilder::with_capacity(original_vertex.len(), g.m());
    let mut arc_chains = Vec::new();
    for &x in &original_vertex {
        for first in g.out_arcs(x) {
            let mut chain = vec![first];
            let (mut prev, mut at) = (x, g.head(first));
            while link[at as usize] != Link::Keep {
                let next = next_link_arc(g, link[at as usize], prev, at);
                chain.push(next);
                prev = at;
                at = g.head(next);
            }
            if at == x {
                continue;
            }
            let cost = chain.iter().map(|&a| g.cost(a)).sum();
            let length = chain.iter().map(|&a| g.length(a)).sum();
            builder.add_arc(vertex_map[x as usize].unwrap(), vertex_map[at as usize].unwrap(), cost, length);
            arc_chains.push(chain);
        }
    }

    // arcs are added in tail order, so builder ids match `arc_chains`
    let graph = builder.build();
    let graph = match g.coords() {
        Some(c) => {
            let kept = original_vertex.iter().map(|&v| c[v as usize]).collect();
            graph.with_coords(kept).expect("one coordinate per kept vertex")
        }
        None => graph,
    };
    Contracted { graph, arc_chains, vertex_map, original_vertex }
}
