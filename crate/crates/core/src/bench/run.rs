//! The class × algorithm × trial matrix.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::instances::{estimate, sample_instances_with, BenchInstance, DistanceMetric, SampleError, DEFAULT_THETA};
use crate::engine::EngineConfig;
use crate::exact::{exact_csp_with_budget, ExactError};
use crate::graph::Graph;
use crate::larac::{solve, SearchRule};
use crate::weight::{ratio_to_f64, WeightView};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_EXACT_BUDGET: usize = 2_000_000;

/// An engine, optionally wrapped in the Lagrangian search (`A_` prefix).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgorithmId {
    pub engine: EngineConfig,
    pub lagrangian: bool,
}

impl AlgorithmId {
    pub fn sp(engine: EngineConfig) -> Self {
        AlgorithmId { engine, lagrangian: false }
    }

    pub fn csp(engine: EngineConfig) -> Self {
        AlgorithmId { engine, lagrangian: true }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lagrangian {
            write!(f, "A_")?;
        }
        write!(f, "{}", self.engine)
    }
}

impl FromStr for AlgorithmId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.strip_prefix("A_") {
            Some(rest) => Ok(AlgorithmId::csp(rest.parse()?)),
            None => Ok(AlgorithmId::sp(s.parse()?)),
        }
    }
}

impl Serialize for AlgorithmId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every `kHSp` for `k, p_max ∈ 1..=3`.
pub fn hs_matrix() -> Vec<EngineConfig> {
    (1..=3).flat_map(|k| (1..=3).map(move |p| EngineConfig::layered(k, p))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReferenceKind {
    /// Exact optimum when the oracle finishes within its budget, else `A_Dij`.
    #[default]
    Auto,
    Dij,
}

impl FromStr for ReferenceKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(ReferenceKind::Auto),
            "dij" | "Dij" | "A_Dij" => Ok(ReferenceKind::Dij),
            _ => Err(format!("unknown reference `{s}`; expected auto or dij")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Plain shortest paths under the cost.
    Sp,
    Csp { theta: f64, rule: SearchRule, reference: ReferenceKind, exact_budget: usize },
}

impl Mode {
    pub fn csp() -> Self {
        Mode::Csp {
            theta: DEFAULT_THETA,
            rule: SearchRule::default(),
            reference: ReferenceKind::default(),
            exact_budget: DEFAULT_EXACT_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub graph_id: String,
    pub classes: Vec<u32>,
    pub engines: Vec<EngineConfig>,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub metric: DistanceMetric,
    pub mode: Mode,
}

impl BenchConfig {
    pub fn new(graph_id: impl Into<String>, mode: Mode) -> Self {
        let mut engines = vec![EngineConfig::Dijkstra];
        engines.extend(hs_matrix());
        BenchConfig {
            graph_id: graph_id.into(),
            classes: vec![25, 50, 75],
            engines,
            trials: 10,
            seed: 1,
            workers: 1,
            metric: DistanceMetric::Hops,
            mode,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub schema_version: u32,
    pub graph_id: String,
    pub class: u32,
    pub algorithm: AlgorithmId,
    pub trial: usize,
    pub source: u32,
    pub target: u32,
    pub distance: u64,
    pub cost: Option<u64>,
    pub length: Option<u64>,
    pub beta: Option<u64>,
    pub b_min: Option<u64>,
    pub b_cost: Option<u64>,
    pub theta: Option<f64>,
    pub reference: String,
    pub reference_cost: Option<u64>,
    pub ratio: Option<f64>,
    pub time_s: f64,
    pub iterations: Option<usize>,
    pub alpha_star: Option<f64>,
    pub lower_bound: Option<f64>,
    pub ratio_bound: Option<f64>,
    pub status: String,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error("worker pool: {0}")]
    Pool(String),
    #[error("no classes, engines or trials requested")]
    Empty,
}

/// One record per (class, engine, trial), sorted by that key. Failures of
/// individual solves are reported in `status`.
pub fn run_matrix(g: &Graph, cfg: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    if cfg.classes.is_empty() || cfg.engines.is_empty() || cfg.trials == 0 {
        return Err(BenchError::Empty);
    }
    let theta = match cfg.mode {
        Mode::Sp => DEFAULT_THETA,
        Mode::Csp { theta, .. } => theta,
    };
    let diameter = estimate(g, cfg.metric).map_err(SampleError::from)?;
    let mut units = Vec::new();
    for &class in &cfg.classes {
        let instances = sample_instances_with(g, diameter, cfg.metric, class, cfg.trials, cfg.seed, theta)?;
        units.extend(instances.into_iter().enumerate());
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let mut records: Vec<(usize, BenchRecord)> = pool.install(|| {
        units.par_iter().flat_map_iter(|(trial, inst)| run_unit(g, cfg, *trial, inst)).collect()
    });
    records.sort_by_key(|(engine_idx, r)| (class_rank(cfg, r.class), *engine_idx, r.trial));
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

fn class_rank(cfg: &BenchConfig, class: u32) -> usize {
    cfg.classes.iter().position(|&c| c == class).unwrap_or(usize::MAX)
}

struct Reference {
    label: &'static str,
    cost: Option<u64>,
}

fn run_unit(g: &Graph, cfg: &BenchConfig, trial: usize, inst: &BenchInstance) -> Vec<(usize, BenchRecord)> {
    let (s, t) = (inst.spec.source, inst.spec.target);
    let reference = match cfg.mode {
        Mode::Sp => Reference { label: "Dij", cost: sp_cost(g, s, t, &EngineConfig::Dijkstra).ok().flatten() },
        Mode::Csp { rule, reference, exact_budget, .. } => {
            let exact = match reference {
                ReferenceKind::Auto => Some(exact_csp_with_budget(g, s, t, inst.spec.beta, exact_budget)),
                ReferenceKind::Dij => None,
            };
            match exact {
                Some(Ok(p)) => Reference { label: "exact", cost: p.map(|p| p.cost) },
                Some(Err(ExactError::OracleOverflow(_))) | None => {
                    let r = solve(g, s, t, inst.spec.beta, &EngineConfig::Dijkstra, rule).ok();
                    Reference { label: "A_Dij", cost: r.and_then(|r| r.cost()) }
                }
                Some(Err(ExactError::Graph(_))) => Reference { label: "none", cost: None },
            }
        }
    };

    cfg.engines
        .iter()
        .enumerate()
        .map(|(idx, engine)| {
            let lagrangian = matches!(cfg.mode, Mode::Csp { .. });
            let mut rec = BenchRecord {
                schema_version: SCHEMA_VERSION,
                graph_id: cfg.graph_id.clone(),
                class: inst.class,
                algorithm: AlgorithmId { engine: *engine, lagrangian },
                trial,
                source: s,
                target: t,
                distance: inst.distance,
                cost: None,
                length: None,
                beta: None,
                b_min: None,
                b_cost: None,
                theta: None,
                reference: reference.label.to_string(),
                reference_cost: reference.cost,
                ratio: None,
                time_s: 0.0,
                iterations: None,
                alpha_star: None,
                lower_bound: None,
                ratio_bound: None,
                status: String::new(),
            };
            match cfg.mode {
                Mode::Sp => {
                    let start = Instant::now();
                    let found = sp_probe(g, s, t, engine);
                    rec.time_s = start.elapsed().as_secs_f64();
                    match found {
                        Ok(Some((cost, length))) => {
                            rec.cost = Some(cost);
                            rec.length = Some(length);
                            rec.status = "ok".into();
                        }
                        Ok(None) => rec.status = "no-path".into(),
                        Err(e) => rec.status = format!("error: {e}"),
                    }
                }
                Mode::Csp { rule, .. } => {
                    rec.beta = Some(inst.beta.beta);
                    rec.b_min = Some(inst.beta.b_min);
                    rec.b_cost = Some(inst.beta.b_cost);
                    rec.theta = Some(inst.beta.theta);
                    let start = Instant::now();
                    let result = solve(g, s, t, inst.spec.beta, engine, rule);
                    rec.time_s = start.elapsed().as_secs_f64();
                    match result {
                        Ok(r) => {
                            rec.cost = r.path.as_ref().map(|p| p.cost);
                            rec.length = r.path.as_ref().map(|p| p.length);
                            rec.iterations = Some(r.iterations);
                            rec.alpha_star = Some(ratio_to_f64(&r.alpha_star));
                            rec.lower_bound = r.lower_bound.as_ref().map(ratio_to_f64);
                            rec.ratio_bound = r.ratio_bound.as_ref().map(ratio_to_f64);
                            rec.status = r.status.as_str().into();
                        }
                        Err(e) => rec.status = format!("error: {e}"),
                    }
                }
            }
            rec.ratio = match (rec.cost, reference.cost) {
                (Some(c), Some(r)) if r > 0 => Some(c as f64 / r as f64),
                (Some(0), Some(0)) => Some(1.0),
                _ => None,
            };
            (idx, rec)
        })
        .collect()
}

/// Engine construction plus one probe at `α = 0`.
fn sp_probe(g: &Graph, s: u32, t: u32, engine: &EngineConfig) -> Result<Option<(u64, u64)>, crate::hs::HsError> {
    let mut e = engine.build(g, s, t)?;
    Ok(e.probe(&WeightView::at_int(0)).map(|p| (p.cost, p.length)))
}

fn sp_cost(g: &Graph, s: u32, t: u32, engine: &EngineConfig) -> Result<Option<u64>, crate::hs::HsError> {
    Ok(sp_probe(g, s, t, engine)?.map(|(c, _)| c))
}
