//! Hierarchical structures: leveled DAGs of vertex copies in which a
//! min-weight `s`-`t` path is found with one scan over the arcs.
//!
//! Two layouts are built:
//! - the DAG layout, for acyclic inputs, places each vertex once at the
//!   maximum arc count of any `s`-path reaching it and keeps every arc;
//! - the `k`-layered layout places `k` consecutive copies of each vertex
//!   starting at its BFS hop distance from `s` and keeps only arcs between
//!   neighbouring levels, except that the target has a single copy fed by
//!   every copy of each of its in-neighbours.
//!
//! Copies are numbered in scan order (level, then vertex), with the target
//! copy last, so every arc leads from a smaller to a larger copy id. A
//! layer of shortcut arcs compressing chains of perspective arcs can be
//! laid over either layout.

mod build;
mod perspective;

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{ArcId, Graph, GraphError, Path, VertexId};
use crate::weight::{Key, WeightView, UNREACHABLE};

pub use perspective::{compute_perspective_arcs, perspective_arc, perspective_score, PerspectiveMap};

pub type CopyId = u32;

const NO_COPY: CopyId = CopyId::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HsError {
    #[error("target {0} is unreachable from the source")]
    Unreachable(VertexId),
    #[error("graph has a cycle through vertex {0}")]
    Cycle(VertexId),
    #[error("copies per vertex must be in 1..=32, got {0}")]
    InvalidK(u32),
    #[error("perspective arcs need vertex coordinates")]
    MissingCoordinates,
    #[error("source and target coincide")]
    SameEndpoints,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Dag,
    Layered { k: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    /// Between copies on neighbouring levels.
    Level,
    /// Into the single target copy, from any level.
    Sink,
    /// Original arc of an acyclic input; any forward level jump.
    Dag,
    /// Compressed chain of perspective arcs.
    Shortcut,
}

impl ArcKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArcKind::Level => "level",
            ArcKind::Sink => "sink",
            ArcKind::Dag => "dag",
            ArcKind::Shortcut => "shortcut",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HsArc {
    pub head: CopyId,
    pub kind: ArcKind,
    /// Original arc id, or shortcut index for [`ArcKind::Shortcut`].
    pub origin: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortcut {
    pub tail: CopyId,
    pub head: CopyId,
    pub cost: u64,
    pub length: u64,
    chain: std::ops::Range<u32>,
}

#[derive(Debug, Clone)]
pub struct HierStructure {
    layout: Layout,
    source: VertexId,
    target: VertexId,
    copy_vertex: Vec<VertexId>,
    copy_level: Vec<u32>,
    out_offsets: Vec<u32>,
    out: Vec<HsArc>,
    /// Per original vertex: level of its first copy and how many copies.
    first_level: Vec<u32>,
    copy_count: Vec<u32>,
    /// Copy ids of vertex `v` live at `vertex_copies[vertex_start[v]..]`.
    vertex_start: Vec<u32>,
    vertex_copies: Vec<CopyId>,
    target_copy: CopyId,
    last_level: u32,
    p_max: u32,
    shortcuts: Vec<Shortcut>,
    shortcut_arcs: Vec<ArcId>,
    shortcut_offsets: Vec<u32>,
}

impl HierStructure {
    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn copy_count(&self) -> usize {
        self.copy_vertex.len()
    }

    pub fn copy(&self, c: CopyId) -> (VertexId, u32) {
        (self.copy_vertex[c as usize], self.copy_level[c as usize])
    }

    pub fn target_copy(&self) -> CopyId {
        self.target_copy
    }

    /// Index `L` of the last level.
    pub fn last_level(&self) -> u32 {
        self.last_level
    }

    pub fn p_max(&self) -> u32 {
        self.p_max
    }

    /// Levels hosting a copy of `v`, ascending.
    pub fn levels_of(&self, v: VertexId) -> std::ops::Range<u32> {
        let first = self.first_level[v as usize];
        first..first + self.copy_count[v as usize]
    }

    /// Copy of `v` on `level`, if any.
    pub fn copy_at(&self, v: VertexId, level: u32) -> Option<CopyId> {
        let first = self.first_level[v as usize];
        if level < first || level - first >= self.copy_count[v as usize] {
            return None;
        }
        Some(self.vertex_copies[(self.vertex_start[v as usize] + level - first) as usize])
    }

    pub fn out_arcs(&self, c: CopyId) -> &[HsArc] {
        &self.out[self.out_offsets[c as usize] as usize..self.out_offsets[c as usize + 1] as usize]
    }

    /// Arcs of the layout without shortcuts.
    pub fn base_arc_count(&self) -> usize {
        self.out.len()
    }

    pub fn arc_count(&self) -> usize {
        self.out.len() + self.shortcuts.len()
    }

    pub fn shortcuts(&self) -> &[Shortcut] {
        &self.shortcuts
    }

    pub fn shortcut_chain(&self, s: &Shortcut) -> &[ArcId] {
        &self.shortcut_arcs[s.chain.start as usize..s.chain.end as usize]
    }

    fn shortcuts_from(&self, c: CopyId) -> std::ops::Range<usize> {
        if self.shortcut_offsets.is_empty() {
            return 0..0;
        }
        self.shortcut_offsets[c as usize] as usize..self.shortcut_offsets[c as usize + 1] as usize
    }

    /// All arcs, shortcuts included, as `(tail, arc)` pairs.
    pub fn all_arcs(&self) -> impl Iterator<Item = (CopyId, HsArc)> + '_ {
        let base = (0..self.copy_count() as CopyId).flat_map(move |c| self.out_arcs(c).iter().map(move |&a| (c, a)));
        let extra = self.shortcuts.iter().enumerate().map(|(i, s)| {
            (s.tail, HsArc { head: s.head, kind: ArcKind::Shortcut, origin: i as u32 })
        });
        base.chain(extra)
    }

    /// Original arcs represented by an hs-arc.
    pub fn expand(&self, arc: &HsArc) -> Vec<ArcId> {
        match arc.kind {
            ArcKind::Shortcut => self.shortcut_chain(&self.shortcuts[arc.origin as usize]).to_vec(),
            _ => vec![arc.origin],
        }
    }

    /// Upper bound on the number of original arcs in any `s`-`t` walk.
    pub fn max_walk_arcs(&self) -> usize {
        (self.last_level as usize + 1) * self.p_max.max(1) as usize
    }

    /// Plain-text dump: a `hs <copies> <arcs>` header, one `vertex level`
    /// line per copy in id order, then one `tail head kind` line per arc.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "hs {} {}", self.copy_count(), self.arc_count()).unwrap();
        for c in 0..self.copy_count() {
            writeln!(out, "{} {}", self.copy_vertex[c], self.copy_level[c]).unwrap();
        }
        for (tail, arc) in self.all_arcs() {
            writeln!(out, "{} {} {}", tail, arc.head, arc.kind.as_str()).unwrap();
        }
        out
    }

    /// Checks the structural invariants; returns the first violation.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let copies_of = |v: VertexId| (0..self.copy_count()).filter(|&c| self.copy_vertex[c] == v).count();
        if self.copy_vertex[0] != self.source || self.copy_level[0] != 0 || copies_of(self.source) != 1 {
            return Err("source must have exactly one copy, at level 0".into());
        }
        if copies_of(self.target) != 1 || self.copy_vertex[self.target_copy as usize] != self.target {
            return Err("target must have exactly one copy".into());
        }
        let k = match self.layout {
            Layout::Layered { k } => Some(k),
            Layout::Dag => None,
        };
        for v in 0..g.n() as VertexId {
            let levels: Vec<u32> = (0..self.copy_count())
                .filter(|&c| self.copy_vertex[c] == v)
                .map(|c| self.copy_level[c])
                .collect();
            if levels.is_empty() {
                continue;
            }
            if levels.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(format!("copies of {v} are not on consecutive levels"));
            }
            if let Some(k) = k {
                if levels.len() > k as usize {
                    return Err(format!("vertex {v} has {} > k copies", levels.len()));
                }
            }
        }
        for (tail, arc) in self.all_arcs() {
            if arc.head <= tail {
                return Err(format!("arc {tail}->{} does not respect scan order", arc.head));
            }
            let (tl, hl) = (self.copy_level[tail as usize], self.copy_level[arc.head as usize]);
            let expanded = self.expand(&arc);
            let (mut at, ok) = (self.copy_vertex[tail as usize], true);
            for &a in &expanded {
                if g.tail(a) != at {
                    return Err(format!("arc {tail}->{} expands to a broken walk", arc.head));
                }
                at = g.head(a);
            }
            if !ok || at != self.copy_vertex[arc.head as usize] {
                return Err(format!("arc {tail}->{} expands to the wrong endpoint", arc.head));
            }
            match arc.kind {
                ArcKind::Level if hl != tl + 1 => return Err(format!("level arc {tail}->{} skips levels", arc.head)),
                ArcKind::Dag | ArcKind::Shortcut if arc.head != self.target_copy && hl <= tl => {
                    return Err(format!("arc {tail}->{} does not go down the levels", arc.head))
                }
                ArcKind::Sink if arc.head != self.target_copy => return Err("sink arc not into target".into()),
                _ => {}
            }
        }
        Ok(())
    }
}

/// Result of a scan: the min key at the target and the walk achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HsPath {
    pub key: Key,
    /// Original arcs, shortcuts expanded.
    pub walk: Vec<ArcId>,
    pub cost: u64,
    pub length: u64,
}

impl HsPath {
    /// Simple path obtained by cutting the cycles out of the walk.
    pub fn to_path(&self, g: &Graph, source: VertexId) -> Path {
        Path::from_walk(g, source, &self.walk).expect("hs walks are connected")
    }
}

#[derive(Debug, Clone, Copy)]
enum Pred {
    None,
    Base(CopyId, HsArc),
    Shortcut(CopyId, u32),
}

/// Scan buffers, reusable across calls on structures of any size.
#[derive(Debug, Default)]
pub struct HsScratch {
    key: Vec<Key>,
    pred: Vec<Pred>,
}

/// Min-weight `s`-`t` walk among those representable in `hs`.
pub fn hs_shortest_path(g: &Graph, hs: &HierStructure, w: &WeightView) -> Option<HsPath> {
    hs_shortest_path_with(g, hs, w, &mut HsScratch::default())
}

pub fn hs_shortest_path_with(g: &Graph, hs: &HierStructure, w: &WeightView, scratch: &mut HsScratch) -> Option<HsPath> {
    let copies = hs.copy_count();
    scratch.key.clear();
    scratch.key.resize(copies, UNREACHABLE);
    scratch.pred.clear();
    scratch.pred.resize(copies, Pred::None);
    let (key, pred) = (&mut scratch.key, &mut scratch.pred);
    key[0] = (0, 0);

    for c in 0..copies as CopyId {
        let kc = key[c as usize];
        if kc == UNREACHABLE {
            continue;
        }
        for arc in hs.out_arcs(c) {
            let ak = w.arc_key(g, arc.origin);
            let cand = (kc.0 + ak.0, kc.1 + ak.1);
            if cand < key[arc.head as usize] {
                key[arc.head as usize] = cand;
                pred[arc.head as usize] = Pred::Base(c, *arc);
            }
        }
        for i in hs.shortcuts_from(c) {
            let s = &hs.shortcuts[i];
            let ak = w.key_of(s.cost, s.length);
            let cand = (kc.0 + ak.0, kc.1 + ak.1);
            if cand < key[s.head as usize] {
                key[s.head as usize] = cand;
                pred[s.head as usize] = Pred::Shortcut(c, i as u32);
            }
        }
    }

    let t = hs.target_copy;
    if key[t as usize] == UNREACHABLE {
        return None;
    }
    let mut pieces: Vec<&[ArcId]> = Vec::new();
    let mut at = t;
    while at != 0 {
        match &pred[at as usize] {
            Pred::Base(tail, arc) => {
                pieces.push(std::slice::from_ref(&arc.origin));
                at = *tail;
            }
            Pred::Shortcut(tail, i) => {
                pieces.push(hs.shortcut_chain(&hs.shortcuts[*i as usize]));
                at = *tail;
            }
            Pred::None => unreachable!("reached copy without predecessor"),
        }
    }
    let walk: Vec<ArcId> = pieces.iter().rev().flat_map(|p| p.iter().copied()).collect();
    let cost = walk.iter().map(|&a| g.cost(a)).sum();
    let length = walk.iter().map(|&a| g.length(a)).sum();
    Some(HsPath { key: key[t as usize], walk, cost, length })
}
