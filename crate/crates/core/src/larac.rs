//! Lagrangian search for the constrained shortest path.
//!
//! Minimises `a(P)` subject to `b(P) ≤ β` by probing the engine with the
//! aggregated weights `a + α·b`. Every probe is a line `a + α·b` in the
//! `(α, weight)` plane; the search keeps the last infeasible line
//! `(a₁, b₁)` and the first feasible one `(a₂, b₂)` and reports their
//! intersection `α*`, the lower bound `e = a₂ − (β − b₂)·α*` and the ratio
//! bound `a₂ / e`.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::engine::{EngineConfig, PathEngine, Probe};
use crate::graph::{Graph, Path, VertexId};
use crate::hs::HsError;
use crate::weight::{intersection, Rational, WeightView};

/// Upper limit on update steps; only reachable with heuristic engines.
const MAX_UPDATES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchRule {
    /// Bisection of `α` over `[0, A·N]`.
    Dichotomy,
    /// Jump to the intersection of the current lines.
    #[default]
    Juttner,
}

impl std::str::FromStr for SearchRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dichotomy" | "bisect" => Ok(SearchRule::Dichotomy),
            "juttner" | "update" => Ok(SearchRule::Juttner),
            _ => Err(format!("unknown search rule `{s}`; expected dichotomy or juttner")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    OptimalAtZero,
    FeasibleApprox,
    Infeasible,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::OptimalAtZero => "optimal-at-zero",
            Status::FeasibleApprox => "feasible-approx",
            Status::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub cost: u64,
    pub length: u64,
}

impl Line {
    fn of(p: &Probe) -> Self {
        Line { cost: p.cost, length: p.length }
    }

    pub fn at(&self, alpha: Rational) -> Rational {
        Rational::from_integer(self.cost as i128) + alpha * Rational::from_integer(self.length as i128)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinorantLines {
    pub infeasible: Line,
    pub feasible: Line,
}

impl MinorantLines {
    pub fn intersection(&self) -> Rational {
        intersection(
            (self.infeasible.cost, self.infeasible.length),
            (self.feasible.cost, self.feasible.length),
        )
    }
}

/// One engine call; `alpha` is `None` for the length-first probe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeRecord {
    pub alpha: Option<Rational>,
    pub cost: Option<u64>,
    pub length: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct LaracResult {
    pub status: Status,
    pub path: Option<Path>,
    /// Min-length path found when the instance is infeasible.
    pub witness: Option<Path>,
    pub alpha_star: Rational,
    pub lower_bound: Option<Rational>,
    /// `a₂ / e`; absent when `e` is not positive.
    pub ratio_bound: Option<Rational>,
    /// Analytic ceiling of the ratio bound on integer data.
    pub ratio_ceiling: u64,
    pub iterations: usize,
    pub engine: String,
    /// Set when the engine only sees part of the path space, so `e`
    /// bounds the engine's optimum rather than the true one.
    pub heuristic: bool,
    pub lines: Option<MinorantLines>,
    pub probes: Vec<ProbeRecord>,
}

impl LaracResult {
    pub fn cost(&self) -> Option<u64> {
        self.path.as_ref().map(|p| p.cost)
    }

    /// `alpha_num alpha_den cost length engine` per probe; the
    /// length-first probe is written as `1 0`, a missing path as `- -`.
    pub fn probe_log(&self) -> String {
        let mut out = String::new();
        for p in &self.probes {
            let (num, den) = match p.alpha {
                Some(a) => (*a.numer(), *a.denom()),
                None => (1, 0),
            };
            match (p.cost, p.length) {
                (Some(c), Some(l)) => writeln!(out, "{num} {den} {c} {l} {}", self.engine).unwrap(),
                _ => writeln!(out, "{num} {den} - - {}", self.engine).unwrap(),
            }
        }
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaracError {
    #[error("beta must be positive")]
    ZeroBeta,
    #[error("aggregated weights at alpha = {0} would overflow")]
    Overflow(Rational),
    #[error(transparent)]
    Hs(#[from] HsError),
}

/// Builds the engine for `config` and runs the search.
pub fn solve(
    g: &Graph,
    s: VertexId,
    t: VertexId,
    beta: u64,
    config: &EngineConfig,
    rule: SearchRule,
) -> Result<LaracResult, LaracError> {
    let mut engine = config.build(g, s, t)?;
    solve_with(engine.as_mut(), beta, rule)
}

pub fn solve_with(engine: &mut dyn PathEngine, beta: u64, rule: SearchRule) -> Result<LaracResult, LaracError> {
    if beta == 0 {
        return Err(LaracError::ZeroBeta);
    }
    let mut run = Run::new(engine);
    let mut result = LaracResult {
        status: Status::Infeasible,
        path: None,
        witness: None,
        alpha_star: Rational::zero(),
        lower_bound: None,
        ratio_bound: None,
        ratio_ceiling: beta,
        iterations: 0,
        engine: run.engine.name(),
        heuristic: !run.engine.is_exact(),
        lines: None,
        probes: Vec::new(),
    };

    let Some(p0) = run.probe(Some(Rational::zero()))? else {
        result.probes = run.log;
        return Ok(result);
    };
    if p0.length <= beta {
        let a = Rational::from_integer(p0.cost as i128);
        result.status = Status::OptimalAtZero;
        result.path = Some(run.path(&p0));
        result.lower_bound = Some(a);
        result.ratio_bound = apriori_ratio(a, p0.cost);
        result.probes = run.log;
        return Ok(result);
    }
    let short = run.probe(None)?;
    match short {
        Some(ref p) if p.length <= beta => {}
        _ => {
            result.witness = short.as_ref().map(|p| run.path(p));
            result.probes = run.log;
            return Ok(result);
        }
    }
    let short = short.unwrap();

    let outcome = match rule {
        SearchRule::Dichotomy => run.dichotomy(beta, &p0)?,
        SearchRule::Juttner => Some(run.juttner(beta, &p0, &short)?),
    };
    let Some(outcome) = outcome else {
        result.witness = Some(run.path(&short));
        result.probes = run.log;
        return Ok(result);
    };
    let e = lower_bound(&outcome.lines, beta, outcome.alpha_star);
    result.status = Status::FeasibleApprox;
    result.path = Some(run.path(&outcome.feasible));
    result.alpha_star = outcome.alpha_star;
    result.lower_bound = Some(e);
    result.ratio_bound = apriori_ratio(e, outcome.lines.feasible.cost);
    result.iterations = outcome.iterations;
    result.lines = Some(outcome.lines);
    result.probes = run.log;
    Ok(result)
}

/// Result of either search rule.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub lines: MinorantLines,
    pub alpha_star: Rational,
    pub iterations: usize,
    pub feasible: Probe,
}

/// Bisection search; expects `P(0)` to be infeasible. `None` when no
/// feasible path turns up at the top of the bracket.
pub fn dichotomy_search(engine: &mut dyn PathEngine, beta: u64) -> Result<Option<SearchOutcome>, LaracError> {
    let mut run = Run::new(engine);
    let Some(p0) = run.probe(Some(Rational::zero()))? else { return Ok(None) };
    assert!(p0.length > beta, "min-cost path is already feasible");
    run.dichotomy(beta, &p0)
}

/// Intersection-update search; expects `P(0)` to be infeasible.
pub fn juttner_update_search(engine: &mut dyn PathEngine, beta: u64) -> Result<Option<SearchOutcome>, LaracError> {
    let mut run = Run::new(engine);
    let Some(p0) = run.probe(Some(Rational::zero()))? else { return Ok(None) };
    assert!(p0.length > beta, "min-cost path is already feasible");
    match run.probe(None)? {
        Some(short) if short.length <= beta => Ok(Some(run.juttner(beta, &p0, &short)?)),
        _ => Ok(None),
    }
}

/// `e = a₂ − (β − b₂)·α*`.
pub fn lower_bound(lines: &MinorantLines, beta: u64, alpha_star: Rational) -> Rational {
    let slack = Rational::from_integer(beta as i128 - lines.feasible.length as i128);
    Rational::from_integer(lines.feasible.cost as i128) - slack * alpha_star
}

/// `a₂ / e`, absent unless `e > 0`.
pub fn apriori_ratio(e: Rational, a2: u64) -> Option<Rational> {
    e.is_positive().then(|| Rational::from_integer(a2 as i128) / e)
}

/// `⌈log₂(A·N·B²·N²)⌉ + 1`.
pub fn dichotomy_iteration_bound(max_cost: u64, max_length: u64, n: usize) -> u32 {
    let n = n as u128;
    let span = (max_cost as u128 * n).saturating_mul((max_length as u128).pow(2)).saturating_mul(n * n);
    if span <= 1 {
        1
    } else {
        (u128::BITS - (span - 1).leading_zeros()) + 1
    }
}

struct Run<'e> {
    engine: &'e mut dyn PathEngine,
    max_cost: u128,
    max_length: u128,
    log: Vec<ProbeRecord>,
}

impl<'e> Run<'e> {
    fn new(engine: &'e mut dyn PathEngine) -> Self {
        let n = engine.arc_bound() as u128;
        let (a, b) = (engine.graph().max_cost() as u128, engine.graph().max_length() as u128);
        Run { max_cost: a * n, max_length: b * n, engine, log: Vec::new() }
    }

    fn path(&self, p: &Probe) -> Path {
        p.to_path(self.engine.graph(), self.engine.source())
    }

    fn probe(&mut self, alpha: Option<Rational>) -> Result<Option<Probe>, LaracError> {
        let w = match alpha {
            Some(a) => WeightView::at(a),
            None => WeightView::length_first(),
        };
        if !w.fits(self.max_cost, self.max_length) {
            return Err(LaracError::Overflow(alpha.unwrap_or_default()));
        }
        let found = self.engine.probe(&w);
        self.log.push(ProbeRecord {
            alpha,
            cost: found.as_ref().map(|p| p.cost),
            length: found.as_ref().map(|p| p.length),
        });
        Ok(found)
    }

    fn dichotomy(&mut self, beta: u64, p0: &Probe) -> Result<Option<SearchOutcome>, LaracError> {
        let graph = self.engine.graph();
        let n = self.engine.arc_bound() as i128;
        let (a_max, b_max) = (graph.max_cost() as i128, graph.max_length() as i128);
        let mut hi = Rational::from_integer(a_max.max(1) * n);
        let mut lo = Rational::zero();
        let gap = Rational::new(1, (b_max.max(1) * n).pow(2));

        let mut feasible = match self.probe(Some(hi))? {
            Some(p) if p.length <= beta => p,
            _ => return Ok(None),
        };
        let mut infeasible = Line::of(p0);
        let mut iterations = 0;
        while hi - lo >= gap {
            let mid = (lo + hi) / Rational::from_integer(2);
            iterations += 1;
            match self.probe(Some(mid))? {
                Some(p) if p.length <= beta => {
                    hi = mid;
                    feasible = p;
                }
                Some(p) => {
                    lo = mid;
                    infeasible = Line::of(&p);
                }
                None => lo = mid,
            }
        }
        let lines = MinorantLines { infeasible, feasible: Line::of(&feasible) };
        Ok(Some(SearchOutcome { alpha_star: clamp(lines.intersection()), lines, iterations, feasible }))
    }

    fn juttner(&mut self, beta: u64, p0: &Probe, short: &Probe) -> Result<SearchOutcome, LaracError> {
        let mut lines = MinorantLines { infeasible: Line::of(p0), feasible: Line::of(short) };
        let mut feasible = short.clone();
        let mut iterations = 0;
        while iterations < MAX_UPDATES {
            let alpha = lines.intersection();
            if !alpha.is_positive() {
                break;
            }
            iterations += 1;
            let Some(p) = self.probe(Some(alpha))? else { break };
            let line = Line::of(&p);
            if line == lines.infeasible || line == lines.feasible || line.at(alpha) >= lines.feasible.at(alpha) {
                break;
            }
            if p.length <= beta {
                lines.feasible = line;
                feasible = p;
            } else {
                lines.infeasible = line;
            }
        }
        Ok(SearchOutcome { alpha_star: clamp(lines.intersection()), lines, iterations, feasible })
    }
}

fn clamp(alpha: Rational) -> Rational {
    if alpha.is_negative() {
        Rational::zero()
    } else {
        alpha
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::DijkstraEngine;
    use crate::graph::GraphBuilder;

    fn two_routes() -> Graph {
        let mut b = GraphBuilder::new(4);
        b.add_arc(0, 1, 1, 5).add_arc(1, 3, 0, 0).add_arc(0, 2, 4, 2).add_arc(2, 3, 0, 0);
        b.build()
    }

    #[test]
    fn already_feasible_at_zero() {
        let g = two_routes();
        let r = solve(&g, 0, 3, 5, &EngineConfig::Dijkstra, SearchRule::Juttner).unwrap();
        assert_eq!(r.status, Status::OptimalAtZero);
        assert_eq!(r.cost(), Some(1));
        assert_eq!(r.alpha_star, Rational::zero());
        assert_eq!(r.ratio_bound, Some(Rational::from_integer(1)));
    }

    #[test]
    fn two_routes_both_rules() {
        let g = two_routes();
        for rule in [SearchRule::Juttner, SearchRule::Dichotomy] {
            let r = solve(&g, 0, 3, 3, &EngineConfig::Dijkstra, rule).unwrap();
            assert_eq!(r.status, Status::FeasibleApprox);
            assert_eq!(r.cost(), Some(4));
            assert_eq!(r.path.as_ref().unwrap().length, 2);
            assert_eq!(r.alpha_star, Rational::from_integer(1));
            assert_eq!(r.lower_bound, Some(Rational::from_integer(3)));
            assert_eq!(r.ratio_bound, Some(Rational::new(4, 3)));
            let lines = r.lines.unwrap();
            assert_eq!((lines.infeasible, lines.feasible), (Line { cost: 1, length: 5 }, Line { cost: 4, length: 2 }));
        }
    }

    #[test]
    fn juttner_converges_in_one_update() {
        let g = two_routes();
        let mut engine = DijkstraEngine::new(&g, 0, 3);
        let out = juttner_update_search(&mut engine, 3).unwrap().unwrap();
        assert_eq!(out.iterations, 1);
        assert_eq!(out.alpha_star, Rational::from_integer(1));
    }

    #[test]
    fn dichotomy_collapses_onto_route_lines() {
        let g = two_routes();
        let mut engine = DijkstraEngine::new(&g, 0, 3);
        let out = dichotomy_search(&mut engine, 3).unwrap().unwrap();
        assert_eq!(out.alpha_star, Rational::from_integer(1));
        assert!(out.iterations as u32 <= dichotomy_iteration_bound(4, 5, 4));
    }

    #[test]
    fn infeasible_reports_witness() {
        let g = two_routes();
        let r = solve(&g, 0, 3, 1, &EngineConfig::Dijkstra, SearchRule::Juttner).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.path.is_none());
        assert_eq!(r.witness.unwrap().length, 2);
    }

    #[test]
    fn unreachable_target_is_infeasible() {
        let mut b = GraphBuilder::new(3);
        b.add_arc(0, 1, 1, 1);
        let r = solve(&b.build(), 0, 2, 4, &EngineConfig::Dijkstra, SearchRule::Dichotomy).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert!(r.witness.is_none());
    }

    #[test]
    fn zero_beta_is_rejected() {
        let g = two_routes();
        assert_eq!(solve(&g, 0, 3, 0, &EngineConfig::Dijkstra, SearchRule::Juttner).unwrap_err(), LaracError::ZeroBeta);
    }

    #[test]
    fn lower_bound_and_ratio() {
        let lines = MinorantLines { infeasible: Line { cost: 1, length: 5 }, feasible: Line { cost: 4, length: 2 } };
        assert_eq!(lower_bound(&lines, 3, Rational::from_integer(1)), Rational::from_integer(3));
        let tight = MinorantLines { infeasible: lines.infeasible, feasible: Line { cost: 4, length: 3 } };
        assert_eq!(lower_bound(&tight, 3, Rational::new(7, 2)), Rational::from_integer(4));
        assert_eq!(apriori_ratio(Rational::from_integer(4), 4), Some(Rational::from_integer(1)));
        assert_eq!(apriori_ratio(Rational::from_integer(3), 4), Some(Rational::new(4, 3)));
        assert_eq!(apriori_ratio(Rational::zero(), 4), None);
    }

    #[test]
    fn iteration_bound_arithmetic() {
        assert_eq!(dichotomy_iteration_bound(10, 10, 100), 31);
    }

    #[test]
    fn probe_log_lines() {
        let g = two_routes();
        let r = solve(&g, 0, 3, 3, &EngineConfig::Dijkstra, SearchRule::Juttner).unwrap();
        let log = r.probe_log();
        let lines: Vec<_> = log.lines().collect();
        assert_eq!(lines[0], "0 1 1 5 Dij");
        assert_eq!(lines[1], "1 0 4 2 Dij");
        assert_eq!(lines[2], "1 1 4 2 Dij");
    }
}
