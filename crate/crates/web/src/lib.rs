//! wasm-bindgen bindings for the demo page in `www/`.
//!
//! Every method returns JSON text so the same code runs under native tests.

use csp_hs::bench::choose_beta;
use csp_hs::graph::VertexId;
use csp_hs::hs::{HierStructure, HsError};
use csp_hs::larac::{solve, LaracResult, SearchRule};
use csp_hs::udg::generate_udg;
use csp_hs::weight::ratio_to_f64;
use csp_hs::{EngineConfig, Graph};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    graph: Graph,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, radius: f64, seed: u64) -> Result<Demo, String> {
        if !(2..=50_000).contains(&n) || !(radius > 0.0 && radius <= 1.5) {
            return Err("need 2 <= n <= 50000 and 0 < radius <= 1.5".into());
        }
        Ok(Demo { graph: generate_udg(n, radius, seed) })
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.n()
    }

    /// Points plus each undirected edge once.
    pub fn graph_json(&self) -> String {
        let g = &self.graph;
        let pts = g.coords().unwrap_or_default();
        let edges: Vec<[VertexId; 2]> = g
            .arcs()
            .filter(|&a| g.tail(a) < g.head(a))
            .map(|a| [g.tail(a), g.head(a)])
            .collect();
        json!({ "points": pts, "edges": edges }).to_string()
    }

    /// Vertex closest to a point of the unit square.
    pub fn nearest(&self, x: f64, y: f64) -> u32 {
        let pts = self.graph.coords().unwrap_or_default();
        let d = |p: &(f64, f64)| (p.0 - x).powi(2) + (p.1 - y).powi(2);
        (0..pts.len()).min_by(|&i, &j| d(&pts[i]).total_cmp(&d(&pts[j]))).unwrap_or(0) as u32
    }

    /// Runs the Lagrangian search with Dijkstra and with a k-layer engine.
    pub fn solve(&self, s: u32, t: u32, theta: f64, k: u32, p_max: u32) -> Result<String, String> {
        let g = &self.graph;
        self.check(s, t)?;
        let beta = choose_beta(g, s, t, theta.clamp(0.0, 1.0)).ok_or("target is unreachable")?;
        let run = |cfg: &EngineConfig| solve(g, s, t, beta.beta, cfg, SearchRule::Juttner).map_err(|e| e.to_string());
        let dij = run(&EngineConfig::Dijkstra)?;
        let hs = run(&EngineConfig::layered(k.clamp(1, 8), p_max.clamp(1, 8)))?;
        Ok(json!({
            "beta": beta.beta,
            "b_min": beta.b_min,
            "b_cost": beta.b_cost,
            "dij": self.result_json(&dij),
            "hs": self.result_json(&hs),
        })
        .to_string())
    }

    /// Level of every copy in the k-layer structure between `s` and `t`.
    pub fn hierarchy(&self, s: u32, t: u32, k: u32) -> Result<String, String> {
        self.check(s, t)?;
        let hs = HierStructure::k_layered(&self.graph, s, t, k.clamp(1, 8)).map_err(|e: HsError| e.to_string())?;
        let copies: Vec<[u32; 2]> = (0..hs.copy_count() as u32)
            .map(|c| {
                let (v, level) = hs.copy(c);
                [v, level]
            })
            .collect();
        Ok(json!({
            "levels": hs.last_level() + 1,
            "copies": copies,
            "arcs": hs.arc_count(),
        })
        .to_string())
    }
}

impl Demo {
    fn check(&self, s: u32, t: u32) -> Result<(), String> {
        for v in [s, t] {
            self.graph.check_vertex(v).map_err(|e| e.to_string())?;
        }
        if s == t {
            return Err("source and target coincide".into());
        }
        Ok(())
    }

    fn result_json(&self, r: &LaracResult) -> Value {
        let path = r.path.as_ref().map(|p| p.vertices(&self.graph).collect::<Vec<_>>());
        let probes: Vec<Value> = r
            .probes
            .iter()
            .map(|p| json!({ "alpha": p.alpha.as_ref().map(ratio_to_f64), "cost": p.cost, "length": p.length }))
            .collect();
        json!({
            "engine": r.engine,
            "status": r.status.as_str(),
            "cost": r.path.as_ref().map(|p| p.cost),
            "length": r.path.as_ref().map(|p| p.length),
            "path": path,
            "alpha_star": ratio_to_f64(&r.alpha_star),
            "lower_bound": r.lower_bound.as_ref().map(ratio_to_f64),
            "ratio_bound": r.ratio_bound.as_ref().map(ratio_to_f64),
            "iterations": r.iterations,
            "probes": probes,
        })
    }
}
