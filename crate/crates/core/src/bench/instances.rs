//! Random `s`-`t` pairs at a fixed fraction of the graph diameter.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dijkstra::{dijkstra, Dijkstra};
use crate::graph::{Graph, InstanceSpec, VertexId};
use crate::rng;
use crate::traverse::{bfs_hops, estimate_diameter, estimate_length_diameter, DiameterError, UNVISITED};
use crate::weight::WeightView;

/// Relative half-width of the accepted distance band.
pub const DISTANCE_TOLERANCE: f64 = 0.10;
pub const DEFAULT_THETA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    #[default]
    Hops,
    Length,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SampleError {
    #[error("class {class}%: found {found} of {wanted} pairs within the retry budget")]
    RetryBudget { class: u32, found: usize, wanted: usize },
    #[error("class must be a percentage in 1..=100, got {0}")]
    BadClass(u32),
    #[error(transparent)]
    Diameter(#[from] DiameterError),
}

/// A sampled pair with its distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pair {
    pub source: VertexId,
    pub target: VertexId,
    pub distance: u64,
}

/// `β = b_min + ⌊θ·(b(P₀) − b_min)⌋`, at least 1, where `b_min` is the
/// shortest possible length and `P₀` the min-cost path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaChoice {
    pub beta: u64,
    pub b_min: u64,
    pub b_cost: u64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchInstance {
    pub spec: InstanceSpec,
    pub class: u32,
    pub distance: u64,
    pub beta: BetaChoice,
}

/// Target distance and accepted band for `class` percent of the diameter.
pub fn distance_band(diameter: u64, class: u32) -> (u64, u64) {
    let target = diameter as f64 * class as f64 / 100.0;
    let lo = (target * (1.0 - DISTANCE_TOLERANCE)).ceil() as u64;
    let hi = (target * (1.0 + DISTANCE_TOLERANCE)).floor() as u64;
    (lo.max(1), hi.max(lo.max(1)))
}

pub fn estimate(g: &Graph, metric: DistanceMetric) -> Result<u64, DiameterError> {
    match metric {
        DistanceMetric::Hops => estimate_diameter(g).map(u64::from),
        DistanceMetric::Length => estimate_length_diameter(g, 4, 0x5eed),
    }
}

/// Draws `count` pairs whose distance lies in the band of `class`.
pub fn sample_pairs(
    g: &Graph,
    diameter: u64,
    metric: DistanceMetric,
    class: u32,
    count: usize,
    seed: u64,
) -> Result<Vec<Pair>, SampleError> {
    if class == 0 || class > 100 {
        return Err(SampleError::BadClass(class));
    }
    let (lo, hi) = distance_band(diameter, class);
    let mut rng = rng::seeded(seed ^ (class as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut search = Dijkstra::new(g.n());
    let budget = 20 * count + 50;
    let mut pairs = Vec::with_capacity(count);
    let mut in_band = Vec::new();
    for _ in 0..budget {
        if pairs.len() == count {
            break;
        }
        let s = rng.random_range(0..g.n()) as VertexId;
        in_band.clear();
        match metric {
            DistanceMetric::Hops => {
                let hops = bfs_hops(g, s);
                for (v, &h) in hops.iter().enumerate() {
                    if h != UNVISITED && (lo..=hi).contains(&(h as u64)) {
                        in_band.push((v as VertexId, h as u64));
                    }
                }
            }
            DistanceMetric::Length => {
                search.run(g, s, None, &WeightView::length_first());
                for v in 0..g.n() as VertexId {
                    let (d, _) = search.key(v);
                    if d != i128::MAX && (lo as i128..=hi as i128).contains(&d) {
                        in_band.push((v, d as u64));
                    }
                }
            }
        }
        if in_band.is_empty() {
            continue;
        }
        let (t, distance) = in_band[rng.random_range(0..in_band.len())];
        pairs.push(Pair { source: s, target: t, distance });
    }
    if pairs.len() < count {
        return Err(SampleError::RetryBudget { class, found: pairs.len(), wanted: count });
    }
    Ok(pairs)
}

pub fn choose_beta(g: &Graph, s: VertexId, t: VertexId, theta: f64) -> Option<BetaChoice> {
    let cheap = dijkstra(g, s, &WeightView::at_int(0));
    let short = dijkstra(g, s, &WeightView::length_first());
    let (_, b_cost) = cheap_key(&cheap, t)?;
    let (b_min, _) = cheap_key(&short, t)?;
    let span = b_cost.saturating_sub(b_min) as f64;
    let beta = (b_min + (theta.clamp(0.0, 1.0) * span).floor() as u64).max(1);
    Some(BetaChoice { beta, b_min, b_cost, theta })
}

fn cheap_key(tree: &crate::dijkstra::ShortestPathTree, t: VertexId) -> Option<(u64, u64)> {
    let (primary, secondary) = tree.key[t as usize];
    (primary != i128::MAX).then_some((primary as u64, secondary as u64))
}

/// Pairs for `class` with `β` from the `θ` rule.
pub fn sample_instances(
    g: &Graph,
    class: u32,
    count: usize,
    seed: u64,
    theta: f64,
) -> Result<Vec<BenchInstance>, SampleError> {
    let diameter = estimate(g, DistanceMetric::Hops)?;
    sample_instances_with(g, diameter, DistanceMetric::Hops, class, count, seed, theta)
}

pub fn sample_instances_with(
    g: &Graph,
    diameter: u64,
    metric: DistanceMetric,
    class: u32,
    count: usize,
    seed: u64,
    theta: f64,
) -> Result<Vec<BenchInstance>, SampleError> {
    let pairs = sample_pairs(g, diameter, metric, class, count, seed)?;
    Ok(pairs
        .into_iter()
        .map(|p| {
            let beta = choose_beta(g, p.source, p.target, theta).expect("sampled pairs are connected");
            let spec = InstanceSpec::new(p.source, p.target, beta.beta).expect("distinct endpoints and positive beta");
            BenchInstance { spec, class, distance: p.distance, beta }
        })
        .collect())
}
