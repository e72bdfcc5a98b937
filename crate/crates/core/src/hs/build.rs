use std::collections::VecDeque;

use super::{ArcKind, CopyId, HierStructure, HsArc, HsError, Layout, NO_COPY};
use crate::graph::{Graph, VertexId};
use crate::traverse::{bfs_hops, UNVISITED};

/// Copy placement shared by both layouts before arcs are attached.
struct Placement {
    first_level: Vec<u32>,
    copy_count: Vec<u32>,
}

impl HierStructure {
    /// Layout of an acyclic graph: one copy per vertex on an `s`-`t` path,
    /// at the largest arc count of any `s`-path to it; all arcs kept.
    pub fn dag(g: &Graph, s: VertexId, t: VertexId) -> Result<Self, HsError> {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
        if s == t {
            return Err(HsError::SameEndpoints);
        }
        let n = g.n();
        let forward = bfs_hops(g, s);
        if forward[t as usize] == UNVISITED {
            return Err(HsError::Unreachable(t));
        }

        // Kahn over the part reachable from s; leftovers lie on a cycle
        let mut indeg = vec![0u32; n];
        for v in 0..n as VertexId {
            if forward[v as usize] != UNVISITED {
                for arc in g.out_arcs(v) {
                    indeg[g.head(arc) as usize] += 1;
                }
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([s]);
        if indeg[s as usize] != 0 {
            return Err(HsError::Cycle(s));
        }
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for arc in g.out_arcs(u) {
                let v = g.head(arc);
                indeg[v as usize] -= 1;
                if indeg[v as usize] == 0 {
                    queue.push_back(v);
                }
            }
        }
        let reachable = forward.iter().filter(|&&d| d != UNVISITED).count();
        if order.len() != reachable {
            let stuck = (0..n).find(|&v| forward[v] != UNVISITED && indeg[v] > 0).unwrap();
            return Err(HsError::Cycle(stuck as VertexId));
        }

        let mut to_target = vec![false; n];
        to_target[t as usize] = true;
        for &u in order.iter().rev() {
            if !to_target[u as usize] {
                to_target[u as usize] = g.out_arcs(u).any(|a| to_target[g.head(a) as usize]);
            }
        }

        let mut level = vec![UNVISITED; n];
        level[s as usize] = 0;
        for &u in &order {
            if !to_target[u as usize] || level[u as usize] == UNVISITED {
                continue;
            }
            for arc in g.out_arcs(u) {
                let v = g.head(arc) as usize;
                if to_target[v] {
                    let cand = level[u as usize] + 1;
                    if level[v] == UNVISITED || cand > level[v] {
                        level[v] = cand;
                    }
                }
            }
        }

        let placement = Placement {
            copy_count: level.iter().map(|&l| u32::from(l != UNVISITED)).collect(),
            first_level: level.iter().map(|&l| if l == UNVISITED { 0 } else { l }).collect(),
        };
        let mut hs = HierStructure::from_placement(Layout::Dag, s, t, placement);
        let mut out = Vec::new();
        let mut offsets = Vec::with_capacity(hs.copy_count() + 1);
        offsets.push(0);
        for c in 0..hs.copy_count() {
            let u = hs.copy_vertex[c];
            if u != t {
                for arc in g.out_arcs(u) {
                    let v = g.head(arc);
                    if to_target[v as usize] && v != s {
                        let head = hs.copy_at(v, level[v as usize]).expect("placed vertex");
                        out.push(HsArc { head, kind: ArcKind::Dag, origin: arc });
                    }
                }
            }
            offsets.push(out.len() as u32);
        }
        hs.out = out;
        hs.out_offsets = offsets;
        Ok(hs)
    }

    /// Layered layout with `k` copies per vertex (one for `s` and `t`).
    ///
    /// Copies that cannot reach the target copy are pruned; the survivors
    /// of each vertex always form a prefix of its `k` levels.
    pub fn k_layered(g: &Graph, s: VertexId, t: VertexId, k: u32) -> Result<Self, HsError> {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
        if s == t {
            return Err(HsError::SameEndpoints);
        }
        if !(1..=32).contains(&k) {
            return Err(HsError::InvalidK(k));
        }
        let n = g.n();
        let hop = bfs_hops(g, s);
        if hop[t as usize] == UNVISITED {
            return Err(HsError::Unreachable(t));
        }
        let span = |v: VertexId| -> u32 {
            if v == s || v == t {
                1
            } else {
                k
            }
        };

        // vertices grouped by hop distance
        let max_hop = hop.iter().filter(|&&h| h != UNVISITED).max().copied().unwrap_or(0);
        let top = max_hop + k;
        let mut by_hop: Vec<Vec<VertexId>> = vec![Vec::new(); max_hop as usize + 1];
        for v in 0..n as VertexId {
            if hop[v as usize] != UNVISITED && v != t {
                by_hop[hop[v as usize] as usize].push(v);
            }
        }

        // alive[v] bit i: copy on level hop(v) + i can reach the target
        let mut alive = vec![0u32; n];
        let is_alive = |alive: &[u32], w: VertexId, level: u32| -> bool {
            let h = hop[w as usize];
            h != UNVISITED && level >= h && level - h < 32 && alive[w as usize] >> (level - h) & 1 == 1
        };
        for level in (0..top).rev() {
            let lo = level.saturating_sub(k - 1);
            for h in lo..=level.min(max_hop) {
                for &v in &by_hop[h as usize] {
                    if level - h >= span(v) {
                        continue;
                    }
                    let reaches = g.out_arcs(v).any(|arc| {
                        let w = g.head(arc);
                        w == t || (w != s && is_alive(&alive, w, level + 1))
                    });
                    if reaches {
                        alive[v as usize] |= 1 << (level - h);
                    }
                }
            }
        }
        debug_assert!(alive[s as usize] & 1 == 1);

        let mut placement = Placement { first_level: vec![0; n], copy_count: vec![0; n] };
        for v in 0..n {
            if hop[v] == UNVISITED {
                continue;
            }
            placement.first_level[v] = hop[v];
            placement.copy_count[v] = if v as VertexId == t { 1 } else { alive[v].trailing_ones() };
            debug_assert_eq!(alive[v].count_ones(), alive[v].trailing_ones(), "alive copies form a prefix");
        }
        let mut hs = HierStructure::from_placement(Layout::Layered { k }, s, t, placement);

        let target_copy = hs.target_copy;
        let mut out = Vec::new();
        let mut offsets = Vec::with_capacity(hs.copy_count() + 1);
        offsets.push(0);
        for c in 0..hs.copy_count() {
            let (u, level) = (hs.copy_vertex[c], hs.copy_level[c]);
            if c as CopyId != target_copy {
                for arc in g.out_arcs(u) {
                    let w = g.head(arc);
                    if w == t {
                        out.push(HsArc { head: target_copy, kind: ArcKind::Sink, origin: arc });
                    } else if w != s {
                        if let Some(head) = hs.copy_at(w, level + 1) {
                            out.push(HsArc { head, kind: ArcKind::Level, origin: arc });
                        }
                    }
                }
            }
            offsets.push(out.len() as u32);
        }
        hs.out = out;
        hs.out_offsets = offsets;
        Ok(hs)
    }

    /// Numbers copies by (level, vertex) with the target last.
    fn from_placement(layout: Layout, s: VertexId, t: VertexId, p: Placement) -> Self {
        let n = p.first_level.len();
        let last_level = (0..n)
            .filter(|&v| p.copy_count[v] > 0)
            .map(|v| p.first_level[v] + p.copy_count[v] - 1)
            .max()
            .unwrap_or(0);

        let mut per_level = vec![0u32; last_level as usize + 2];
        for v in 0..n {
            if v as VertexId != t {
                for l in p.first_level[v]..p.first_level[v] + p.copy_count[v] {
                    per_level[l as usize + 1] += 1;
                }
            }
        }
        for l in 0..=last_level as usize {
            per_level[l + 1] += per_level[l];
        }
        let total = per_level[last_level as usize + 1] as usize + 1;

        let mut vertex_start = vec![0u32; n];
        let mut acc = 0u32;
        for (start, &count) in vertex_start.iter_mut().zip(&p.copy_count) {
            *start = acc;
            acc += count;
        }
        let mut vertex_copies = vec![NO_COPY; acc as usize];
        let mut copy_vertex = vec![0; total];
        let mut copy_level = vec![0; total];
        let mut cursor = per_level.clone();
        for v in 0..n {
            if v as VertexId == t {
                continue;
            }
            for (i, l) in (p.first_level[v]..p.first_level[v] + p.copy_count[v]).enumerate() {
                let c = cursor[l as usize];
                cursor[l as usize] += 1;
                copy_vertex[c as usize] = v as VertexId;
                copy_level[c as usize] = l;
                vertex_copies[vertex_start[v] as usize + i] = c;
            }
        }
        let target_copy = (total - 1) as CopyId;
        copy_vertex[total - 1] = t;
        copy_level[total - 1] = p.first_level[t as usize];
        vertex_copies[vertex_start[t as usize] as usize] = target_copy;
        debug_assert_eq!(copy_vertex[0], s);

        HierStructure {
            layout,
            source: s,
            target: t,
            copy_vertex,
            copy_level,
            out_offsets: Vec::new(),
            out: Vec::new(),
            first_level: p.first_level,
            copy_count: p.copy_count,
            vertex_start,
            vertex_copies,
            target_copy,
            last_level,
            p_max: 1,
            shortcuts: Vec::new(),
            shortcut_arcs: Vec::new(),
            shortcut_offsets: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn levels(hs: &HierStructure, v: VertexId) -> Vec<u32> {
        hs.levels_of(v).collect()
    }

    #[test]
    fn dag_single_arc() {
        let mut b = GraphBuilder::new(2);
        b.add_arc(0, 1, 1, 1);
        let g = b.build();
        let hs = HierStructure::dag(&g, 0, 1).unwrap();
        assert_eq!((levels(&hs, 0), levels(&hs, 1)), (vec![0], vec![1]));
        hs.validate(&g).unwrap();
    }

    #[test]
    fn dag_diamond_uses_longest_paths() {
        // s=0, a=1, b=2, t=3
        let mut b = GraphBuilder::new(4);
        b.add_arc(0, 1, 1, 1).add_arc(0, 2, 1, 1).add_arc(1, 2, 1, 1).add_arc(2, 3, 1, 1);
        let g = b.build();
        let hs = HierStructure::dag(&g, 0, 3).unwrap();
        let got: Vec<_> = (0..4).map(|v| levels(&hs, v)[0]).collect();
        assert_eq!(got, vec![0, 1, 2, 3]);
        assert_eq!(hs.base_arc_count(), g.m());
        hs.validate(&g).unwrap();
    }

    #[test]
    fn dag_rejects_cycles_and_unreachable_targets() {
        let mut b = GraphBuilder::new(3);
        b.add_arc(0, 1, 1, 1).add_arc(1, 0, 1, 1).add_arc(1, 2, 1, 1);
        assert!(matches!(HierStructure::dag(&b.build(), 0, 2), Err(HsError::Cycle(_))));
        let mut b = GraphBuilder::new(3);
        b.add_arc(0, 1, 1, 1);
        assert_eq!(HierStructure::dag(&b.build(), 0, 2).unwrap_err(), HsError::Unreachable(2));
    }

    #[test]
    fn dag_prunes_vertices_off_st_paths() {
        let mut b = GraphBuilder::new(4);
        b.add_arc(0, 1, 1, 1).add_arc(0, 2, 1, 1).add_arc(2, 3, 1, 1);
        let g = b.build();
        let hs = HierStructure::dag(&g, 0, 1).unwrap();
        assert_eq!(hs.copy_count(), 2);
        assert_eq!(hs.base_arc_count(), 1);
    }

    #[test]
    fn layered_single_arc_k2() {
        let mut b = GraphBuilder::new(2);
        b.add_arc(0, 1, 1, 1);
        let g = b.build();
        let hs = HierStructure::k_layered(&g, 0, 1, 2).unwrap();
        assert_eq!(hs.copy_count(), 2);
        assert_eq!(hs.base_arc_count(), 1);
        assert_eq!((levels(&hs, 0), levels(&hs, 1)), (vec![0], vec![1]));
    }

    #[test]
    fn cycle_back_arc_is_dropped_for_k1() {
        // s=0 -> a=1 -> b=2 -> s, b -> t=3
        let mut b = GraphBuilder::new(4);
        b.add_arc(0, 1, 1, 1).add_arc(1, 2, 1, 1).add_arc(2, 0, 1, 1).add_arc(2, 3, 1, 1);
        let g = b.build();
        let hs = HierStructure::k_layered(&g, 0, 3, 1).unwrap();
        let got: Vec<_> = (0..4).map(|v| levels(&hs, v)).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(hs.base_arc_count(), 3);
        assert!(hs.all_arcs().all(|(_, a)| a.origin != 2));
        hs.validate(&g).unwrap();
    }

    #[test]
    fn two_copies_receive_arcs_by_tail_level() {
        // s=0; 1 and 2 at hop 1; 3 at hop 2 via 2; 4 at hop 2 via 1;
        // 3 -> 4 joins a hop-2 tail; 4 -> t=5
        let mut b = GraphBuilder::new(6);
        b.add_arc(0, 1, 1, 1).add_arc(0, 2, 1, 1).add_arc(2, 3, 1, 1);
        b.add_arc(1, 4, 1, 1).add_arc(3, 4, 1, 1).add_arc(4, 5, 1, 1);
        let g = b.build();
        let hs = HierStructure::k_layered(&g, 0, 5, 2).unwrap();
        hs.validate(&g).unwrap();
        assert_eq!(levels(&hs, 4), vec![2, 3]);
        let into_4 = |origin: u32| -> Vec<u32> {
            hs.all_arcs().filter(|(_, a)| a.origin == origin && a.kind == ArcKind::Level).map(|(_, a)| hs.copy(a.head).1).collect()
        };
        let arc_1_4 = g.out_arcs(1).find(|&a| g.head(a) == 4).unwrap();
        let arc_3_4 = g.out_arcs(3).find(|&a| g.head(a) == 4).unwrap();
        assert!(into_4(arc_1_4).contains(&2));
        assert_eq!(into_4(arc_3_4), vec![3]);
    }

    #[test]
    fn dead_end_copies_are_pruned() {
        // 0 -> 1 -> 2(t), plus 1 -> 3 which leads nowhere
        let mut b = GraphBuilder::new(4);
        b.add_arc(0, 1, 1, 1).add_arc(1, 2, 1, 1).add_arc(1, 3, 1, 1);
        let g = b.build();
        let hs = HierStructure::k_layered(&g, 0, 2, 3).unwrap();
        assert_eq!(hs.levels_of(3).len(), 0);
        // every copy of 1 owns a sink arc
        assert_eq!(levels(&hs, 1), vec![1, 2, 3]);
        hs.validate(&g).unwrap();
    }

    #[test]
    fn invalid_parameters() {
        let mut b = GraphBuilder::new(2);
        b.add_arc(0, 1, 1, 1);
        let g = b.build();
        assert_eq!(HierStructure::k_layered(&g, 0, 1, 0).unwrap_err(), HsError::InvalidK(0));
        assert_eq!(HierStructure::k_layered(&g, 1, 0, 1).unwrap_err(), HsError::Unreachable(0));
        assert_eq!(HierStructure::k_layered(&g, 1, 1, 1).unwrap_err(), HsError::SameEndpoints);
    }
}
