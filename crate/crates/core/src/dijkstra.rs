//! Label-setting shortest paths under a [`WeightView`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::{ArcId, Graph, Path, VertexId, NO_ARC};
use crate::weight::{Key, Rational, WeightView, UNREACHABLE};

/// Per-vertex distances and the arc used to reach each vertex.
///
/// For trees produced by [`reverse_dijkstra`] the stored arc is the first
/// arc of the shortest path *towards* the root.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    pub root: VertexId,
    pub key: Vec<Key>,
    pub parent: Vec<ArcId>,
    weights: WeightView,
}

impl ShortestPathTree {
    pub fn is_reachable(&self, v: VertexId) -> bool {
        self.key[v as usize] != UNREACHABLE
    }

    /// Aggregated distance `c(α)` of `v`, or `None` if unreachable.
    pub fn dist(&self, v: VertexId) -> Option<Rational> {
        self.is_reachable(v).then(|| self.weights.unscale(self.key[v as usize].0))
    }

    /// Distance in the scaled integer units of the weight view.
    pub fn scaled_dist(&self, v: VertexId) -> Option<i128> {
        self.is_reachable(v).then(|| self.key[v as usize].0)
    }

    pub fn weights(&self) -> &WeightView {
        &self.weights
    }
}

/// Reusable search buffers; only touched entries are reset between runs.
#[derive(Debug, Default)]
pub struct Dijkstra {
    key: Vec<Key>,
    parent: Vec<ArcId>,
    settled: Vec<bool>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(Key, VertexId)>>,
}

impl Dijkstra {
    pub fn new(n: usize) -> Self {
        Dijkstra {
            key: vec![UNREACHABLE; n],
            parent: vec![NO_ARC; n],
            settled: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self, n: usize) {
        if self.key.len() != n {
            *self = Dijkstra::new(n);
            return;
        }
        for &v in &self.touched {
            self.key[v as usize] = UNREACHABLE;
            self.parent[v as usize] = NO_ARC;
            self.settled[v as usize] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs from `s`, stopping once `target` is settled when one is given.
    pub fn run(&mut self, g: &Graph, s: VertexId, target: Option<VertexId>, w: &WeightView) {
        self.reset(g.n());
        self.key[s as usize] = (0, 0);
        self.touched.push(s);
        self.heap.push(Reverse(((0, 0), s)));
        while let Some(Reverse((key, u))) = self.heap.pop() {
            if self.settled[u as usize] || key > self.key[u as usize] {
                continue;
            }
            self.settled[u as usize] = true;
            if Some(u) == target {
                break;
            }
            for arc in g.out_arcs(u) {
                let v = g.head(arc);
                if self.settled[v as usize] {
                    continue;
                }
                let ak = w.arc_key(g, arc);
                let cand = (key.0 + ak.0, key.1 + ak.1);
                if cand < self.key[v as usize] {
                    if self.key[v as usize] == UNREACHABLE {
                        self.touched.push(v);
                    }
                    self.key[v as usize] = cand;
                    self.parent[v as usize] = arc;
                    self.heap.push(Reverse((cand, v)));
                }
            }
        }
    }

    /// Path to `t` from the last run, if `t` was reached.
    pub fn path_to(&self, g: &Graph, s: VertexId, t: VertexId) -> Option<Path> {
        walk_parents(g, &self.parent, &self.key, s, t)
    }

    pub fn key(&self, v: VertexId) -> Key {
        self.key[v as usize]
    }
}

/// Single-source shortest-path tree from `s`.
pub fn dijkstra(g: &Graph, s: VertexId, w: &WeightView) -> ShortestPathTree {
    let mut d = Dijkstra::new(g.n());
    d.run(g, s, None, w);
    ShortestPathTree { root: s, key: d.key, parent: d.parent, weights: w.clone() }
}

/// Distances *to* `t` along original arc directions.
pub fn reverse_dijkstra(g: &Graph, t: VertexId, w: &WeightView) -> ShortestPathTree {
    let n = g.n();
    let mut key = vec![UNREACHABLE; n];
    let mut next = vec![NO_ARC; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    key[t as usize] = (0, 0);
    heap.push(Reverse(((0, 0), t)));
    while let Some(Reverse((k, v))) = heap.pop() {
        if settled[v as usize] {
            continue;
        }
        settled[v as usize] = true;
        for &arc in g.in_arcs(v) {
            let u = g.tail(arc);
            if settled[u as usize] {
                continue;
            }
            let ak = w.arc_key(g, arc);
            let cand = (k.0 + ak.0, k.1 + ak.1);
            if cand < key[u as usize] {
                key[u as usize] = cand;
                next[u as usize] = arc;
                heap.push(Reverse((cand, u)));
            }
        }
    }
    ShortestPathTree { root: t, key, parent: next, weights: w.clone() }
}

/// Follows parent arcs back from `t`. `None` when `t` is unreachable.
pub fn extract_path(g: &Graph, tree: &ShortestPathTree, s: VertexId, t: VertexId) -> Option<Path> {
    debug_assert_eq!(tree.root, s);
    walk_parents(g, &tree.parent, &tree.key, s, t)
}

fn walk_parents(g: &Graph, parent: &[ArcId], key: &[Key], s: VertexId, t: VertexId) -> Option<Path> {
    if s == t {
        return Some(Path::empty(s));
    }
    if key[t as usize] == UNREACHABLE {
        return None;
    }
    let mut arcs = Vec::new();
    let mut at = t;
    while at != s {
        let arc = parent[at as usize];
        if arc == NO_ARC {
            return None;
        }
        arcs.push(arc);
        at = g.tail(arc);
    }
    arcs.reverse();
    Some(Path::from_arcs(g, s, arcs).expect("parent arcs form a simple path"))
}
