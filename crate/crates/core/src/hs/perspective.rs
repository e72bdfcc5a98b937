//! Perspective arcs and the shortcut layer built from them.
//!
//! The perspective arc of `i` is the out-arc `(i, j)` maximising
//! `|ij| · cos∠(ij, it) / c_ij`, i.e. the progress of the arc projected on
//! the direction towards the target, per unit of aggregated weight. Arcs
//! with zero weight are not candidates; a vertex gets no perspective arc
//! when the best score is not positive.

use super::{CopyId, HierStructure, HsError, Shortcut, NO_COPY};
use crate::graph::{ArcId, Graph, VertexId, NO_ARC};
use crate::weight::WeightView;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerspectiveMap {
    arc: Vec<ArcId>,
}

impl PerspectiveMap {
    pub fn get(&self, v: VertexId) -> Option<ArcId> {
        let a = self.arc[v as usize];
        (a != NO_ARC).then_some(a)
    }

    pub fn len(&self) -> usize {
        self.arc.iter().filter(|&&a| a != NO_ARC).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Score of `arc` towards `t`; `None` for zero-weight arcs or when the
/// tail sits on the target.
pub fn perspective_score(g: &Graph, coords: &[(f64, f64)], arc: ArcId, t: VertexId, w: &WeightView) -> Option<f64> {
    let (i, j) = (g.tail(arc) as usize, g.head(arc) as usize);
    let weight = w.aggregated_f64(g.cost(arc), g.length(arc));
    if weight <= 0.0 {
        return None;
    }
    let (pi, pj, pt) = (coords[i], coords[j], coords[t as usize]);
    let (ij, it) = ((pj.0 - pi.0, pj.1 - pi.1), (pt.0 - pi.0, pt.1 - pi.1));
    let norm_it = it.0.hypot(it.1);
    if norm_it == 0.0 {
        return None;
    }
    // |ij| cos∠(ij, it) is the projection of ij on the unit vector towards t
    Some((ij.0 * it.0 + ij.1 * it.1) / norm_it / weight)
}

/// Best-scoring out-arc of `v`; ties go to the smaller arc id.
pub fn perspective_arc(g: &Graph, coords: &[(f64, f64)], v: VertexId, t: VertexId, w: &WeightView) -> Option<ArcId> {
    if v == t {
        return None;
    }
    let (pv, pt) = (coords[v as usize], coords[t as usize]);
    let it = (pt.0 - pv.0, pt.1 - pv.1);
    if it.0 == 0.0 && it.1 == 0.0 {
        return None;
    }
    // the norm of `it` is common to all candidates and does not change the order
    let mut best = (0.0f64, NO_ARC);
    for a in g.out_arcs(v) {
        let weight = w.aggregated_f64(g.cost(a), g.length(a));
        if weight <= 0.0 {
            continue;
        }
        let pj = coords[g.head(a) as usize];
        let score = ((pj.0 - pv.0) * it.0 + (pj.1 - pv.1) * it.1) / weight;
        if score > best.0 {
            best = (score, a);
        }
    }
    (best.1 != NO_ARC).then_some(best.1)
}

/// Picks the perspective arc of every vertex.
pub fn compute_perspective_arcs(g: &Graph, t: VertexId, w: &WeightView) -> Result<PerspectiveMap, HsError> {
    let coords = g.coords().ok_or(HsError::MissingCoordinates)?;
    g.check_vertex(t)?;
    let arc = (0..g.n() as VertexId).map(|v| perspective_arc(g, coords, v, t, w).unwrap_or(NO_ARC)).collect();
    Ok(PerspectiveMap { arc })
}

impl HierStructure {
    /// Replaces the shortcut layer: for every vertex `v` with a copy and
    /// every `p` in `2..=p_max`, the chain of `p` perspective arcs from `v`
    /// (when it exists and does not revisit a vertex) becomes one arc from
    /// the first copy of `v` to the earliest copy of the chain's end on a
    /// deeper level, or to the target copy. At most `n·(p_max − 1)` arcs.
    pub fn set_shortcuts(&mut self, g: &Graph, pm: &PerspectiveMap, p_max: u32) {
        self.set_shortcuts_by(g, p_max, |v| pm.get(v));
    }

    /// As [`set_shortcuts`](Self::set_shortcuts), asking `pick` for the
    /// perspective arc of each vertex a chain passes through.
    pub fn set_shortcuts_by(&mut self, g: &Graph, p_max: u32, mut pick: impl FnMut(VertexId) -> Option<ArcId>) {
        self.p_max = p_max.max(1);
        self.shortcuts.clear();
        self.shortcut_arcs.clear();
        self.shortcut_offsets.clear();
        if p_max < 2 {
            return;
        }
        let mut chain: Vec<ArcId> = Vec::with_capacity(p_max as usize);
        let mut on_chain: Vec<VertexId> = Vec::with_capacity(p_max as usize + 1);
        for v in 0..g.n() as VertexId {
            if v == self.target || self.copy_count[v as usize] == 0 {
                continue;
            }
            let tail = self.vertex_copies[self.vertex_start[v as usize] as usize];
            let tail_level = self.copy_level[tail as usize];
            chain.clear();
            on_chain.clear();
            on_chain.push(v);
            let (mut at, mut cost, mut length) = (v, 0u64, 0u64);
            for p in 1..=p_max {
                let Some(a) = pick(at) else { break };
                let next = g.head(a);
                if on_chain.contains(&next) {
                    break;
                }
                chain.push(a);
                on_chain.push(next);
                cost += g.cost(a);
                length += g.length(a);
                at = next;
                if p >= 2 {
                    let head = self.shortcut_head(at, tail_level);
                    if head != NO_COPY && head != tail {
                        let start = self.shortcut_arcs.len() as u32;
                        self.shortcut_arcs.extend_from_slice(&chain);
                        self.shortcuts.push(Shortcut {
                            tail,
                            head,
                            cost,
                            length,
                            chain: start..self.shortcut_arcs.len() as u32,
                        });
                    }
                }
                if at == self.target {
                    break;
                }
            }
        }
        self.shortcuts.sort_by_key(|s| s.tail);
        let mut offsets = vec![0u32; self.copy_count() + 1];
        for s in &self.shortcuts {
            offsets[s.tail as usize + 1] += 1;
        }
        for c in 0..self.copy_count() {
            offsets[c + 1] += offsets[c];
        }
        self.shortcut_offsets = offsets;
    }

    /// Shortcut layer added to a copy of the structure.
    pub fn with_shortcuts(mut self, g: &Graph, pm: &PerspectiveMap, p_max: u32) -> Self {
        self.set_shortcuts(g, pm, p_max);
        self
    }

    fn shortcut_head(&self, y: VertexId, tail_level: u32) -> CopyId {
        if y == self.target {
            return self.target_copy;
        }
        let levels = self.levels_of(y);
        if levels.is_empty() || levels.end <= tail_level + 1 {
            return NO_COPY;
        }
        self.copy_at(y, levels.start.max(tail_level + 1)).unwrap_or(NO_COPY)
    }
}
