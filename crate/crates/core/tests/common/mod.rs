#![allow(dead_code)]

use csp_hs::graph::{ArcId, Graph, GraphBuilder, VertexId};
use csp_hs::weight::Rational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random digraph: arc `(u, v)`, `u ≠ v`, present with probability `p`,
/// weights uniform in `1..=max_w`.
pub fn random_graph(seed: u64, n: usize, p: f64, max_w: u64) -> Graph {
    let mut r = rng(seed);
    let mut b = GraphBuilder::new(n);
    for u in 0..n as VertexId {
        for v in 0..n as VertexId {
            if u != v && r.random_bool(p) {
                b.add_arc(u, v, r.random_range(1..=max_w), r.random_range(1..=max_w));
            }
        }
    }
    b.build()
}

/// Random DAG over a random topological order.
pub fn random_dag(seed: u64, n: usize, p: f64, max_w: u64) -> Graph {
    let mut r = rng(seed);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    for i in (1..n).rev() {
        order.swap(i, r.random_range(0..=i));
    }
    let mut b = GraphBuilder::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if r.random_bool(p) {
                b.add_arc(order[i], order[j], r.random_range(0..=max_w), r.random_range(0..=max_w));
            }
        }
    }
    b.build()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePath {
    pub arcs: Vec<ArcId>,
    pub cost: u64,
    pub length: u64,
}

/// Every simple `s`-`t` path, by depth-first search.
pub fn all_simple_paths(g: &Graph, s: VertexId, t: VertexId) -> Vec<SimplePath> {
    fn go(g: &Graph, v: VertexId, t: VertexId, on: &mut Vec<bool>, arcs: &mut Vec<ArcId>, out: &mut Vec<SimplePath>) {
        if v == t {
            let cost = arcs.iter().map(|&a| g.cost(a)).sum();
            let length = arcs.iter().map(|&a| g.length(a)).sum();
            out.push(SimplePath { arcs: arcs.clone(), cost, length });
            return;
        }
        for a in g.out_arcs(v) {
            let w = g.head(a);
            if !on[w as usize] {
                on[w as usize] = true;
                arcs.push(a);
                go(g, w, t, on, arcs, out);
                arcs.pop();
                on[w as usize] = false;
            }
        }
    }
    let mut on = vec![false; g.n()];
    on[s as usize] = true;
    let mut out = Vec::new();
    go(g, s, t, &mut on, &mut Vec::new(), &mut out);
    out
}

/// Min of `a + α·b` over the given paths.
pub fn min_weight(paths: &[SimplePath], alpha: Rational) -> Option<Rational> {
    paths.iter().map(|p| line(p.cost, p.length, alpha)).min()
}

pub fn line(cost: u64, length: u64, alpha: Rational) -> Rational {
    Rational::from_integer(cost as i128) + alpha * Rational::from_integer(length as i128)
}

/// Bellman-Ford distances under `a + α·b` (`None` for unreachable).
pub fn bellman_ford(g: &Graph, s: VertexId, alpha: Rational) -> Vec<Option<Rational>> {
    let mut d: Vec<Option<Rational>> = vec![None; g.n()];
    d[s as usize] = Some(Rational::zero());
    for _ in 0..g.n() {
        let mut changed = false;
        for a in g.arcs() {
            if let Some(du) = d[g.tail(a) as usize] {
                let cand = du + line(g.cost(a), g.length(a), alpha);
                let slot = &mut d[g.head(a) as usize];
                if slot.is_none_or(|x| cand < x) {
                    *slot = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d
}

/// Optimum of the constrained problem by enumeration.
pub fn brute_csp(paths: &[SimplePath], beta: u64) -> Option<u64> {
    paths.iter().filter(|p| p.length <= beta).map(|p| p.cost).min()
}

/// The multiplier where the cheapest feasible line first meets the lower
/// envelope of the infeasible ones. Requires both sets non-empty.
pub fn minorant_alpha_star(paths: &[SimplePath], beta: u64) -> Rational {
    let (feas, infeas): (Vec<&SimplePath>, Vec<&SimplePath>) = paths.iter().partition(|p| p.length <= beta);
    let min_of = |set: &[&SimplePath], a: Rational| set.iter().map(|p| line(p.cost, p.length, a)).min().unwrap();
    let mut candidates = vec![Rational::zero()];
    for f in &feas {
        for i in &infeas {
            if i.length != f.length {
                let a = Rational::new(f.cost as i128 - i.cost as i128, i.length as i128 - f.length as i128);
                if a >= Rational::zero() {
                    candidates.push(a);
                }
            }
        }
    }
    candidates.sort();
    candidates.into_iter().find(|&a| min_of(&feas, a) <= min_of(&infeas, a)).expect("feasible lines win eventually")
}

/// All-pairs hop diameter over reachable pairs.
pub fn exact_hop_diameter(g: &Graph) -> u32 {
    (0..g.n() as VertexId)
        .map(|s| csp_hs::traverse::bfs_hops(g, s).into_iter().filter(|&h| h != u32::MAX).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// `β` by the default rule, from enumerated paths.
pub fn theta_beta(paths: &[SimplePath], theta: f64) -> u64 {
    let b_min = paths.iter().map(|p| p.length).min().unwrap();
    let cheapest = paths.iter().map(|p| (p.cost, p.length)).min().unwrap();
    let span = cheapest.1.saturating_sub(b_min) as f64;
    (b_min + (theta * span).floor() as u64).max(1)
}
