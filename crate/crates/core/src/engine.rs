//! Shortest-path engines the Lagrangian search can run on.

use std::fmt;
use std::str::FromStr;

use crate::dijkstra::Dijkstra;
use crate::graph::{ArcId, Graph, Path, VertexId};
use crate::graph::NO_ARC;
use crate::hs::{perspective_arc, hs_shortest_path_with, HierStructure, HsError, HsScratch};
use crate::weight::{Key, WeightView};

/// One min-weight walk returned by an engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub key: Key,
    pub cost: u64,
    pub length: u64,
    pub walk: Vec<ArcId>,
}

impl Probe {
    pub fn to_path(&self, g: &Graph, source: VertexId) -> Path {
        Path::from_walk(g, source, &self.walk).expect("engine walks are connected")
    }
}

pub trait PathEngine {
    fn name(&self) -> String;

    /// Min-weight `s`-`t` walk under `w`, `None` if the engine finds none.
    fn probe(&mut self, w: &WeightView) -> Option<Probe>;

    /// Every returned walk has fewer arcs than this.
    fn arc_bound(&self) -> usize;

    /// Whether probes are exact minima over all `s`-`t` paths.
    fn is_exact(&self) -> bool;

    fn graph(&self) -> &Graph;

    fn source(&self) -> VertexId;
}

/// When perspective arcs are recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerspectiveMode {
    /// From the aggregated weights of every probe.
    #[default]
    PerAlpha,
    /// Once, from the costs alone.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineConfig {
    Dijkstra,
    Layered { k: u32, p_max: u32, perspective: PerspectiveMode },
    Dag,
}

impl EngineConfig {
    pub fn layered(k: u32, p_max: u32) -> Self {
        EngineConfig::Layered { k, p_max, perspective: PerspectiveMode::PerAlpha }
    }

    pub fn build<'g>(&self, g: &'g Graph, s: VertexId, t: VertexId) -> Result<Box<dyn PathEngine + 'g>, HsError> {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
        Ok(match *self {
            EngineConfig::Dijkstra => Box::new(DijkstraEngine::new(g, s, t)),
            EngineConfig::Layered { k, p_max, perspective } => {
                Box::new(HsEngine::new(g, HierStructure::k_layered(g, s, t, k)?, p_max, perspective)?)
            }
            EngineConfig::Dag => Box::new(HsEngine::new(g, HierStructure::dag(g, s, t)?, 1, PerspectiveMode::Fixed)?),
        })
    }
}

/// Short identifiers: `Dij`, `DAG`, `<k>HS<p_max>` (`2HS3`, also `2-HS3`).
impl fmt::Display for EngineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineConfig::Dijkstra => write!(f, "Dij"),
            EngineConfig::Dag => write!(f, "DAG"),
            EngineConfig::Layered { k, p_max, perspective } => {
                write!(f, "{k}HS{p_max}")?;
                if *perspective == PerspectiveMode::Fixed && *p_max > 1 {
                    write!(f, "f")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for EngineConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Dij" | "dij" | "dijkstra" => return Ok(EngineConfig::Dijkstra),
            "DAG" | "dag" => return Ok(EngineConfig::Dag),
            _ => {}
        }
        let bad = || format!("unknown engine `{s}`; expected Dij, DAG or <k>HS<p_max>");
        let (body, perspective) = match s.strip_suffix('f') {
            Some(b) => (b, PerspectiveMode::Fixed),
            None => (s, PerspectiveMode::PerAlpha),
        };
        let (k, p) = body.split_once("HS").ok_or_else(bad)?;
        let k: u32 = k.trim_end_matches('-').parse().map_err(|_| bad())?;
        let p_max: u32 = p.parse().map_err(|_| bad())?;
        if k == 0 || p_max == 0 {
            return Err(bad());
        }
        Ok(EngineConfig::Layered { k, p_max, perspective })
    }
}

pub struct DijkstraEngine<'g> {
    g: &'g Graph,
    s: VertexId,
    t: VertexId,
    search: Dijkstra,
}

impl<'g> DijkstraEngine<'g> {
    pub fn new(g: &'g Graph, s: VertexId, t: VertexId) -> Self {
        DijkstraEngine { g, s, t, search: Dijkstra::new(g.n()) }
    }
}

impl PathEngine for DijkstraEngine<'_> {
    fn name(&self) -> String {
        EngineConfig::Dijkstra.to_string()
    }

    fn probe(&mut self, w: &WeightView) -> Option<Probe> {
        self.search.run(self.g, self.s, Some(self.t), w);
        let path = self.search.path_to(self.g, self.s, self.t)?;
        Some(Probe { key: self.search.key(self.t), cost: path.cost, length: path.length, walk: path.arcs })
    }

    fn arc_bound(&self) -> usize {
        self.g.n()
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn graph(&self) -> &Graph {
        self.g
    }

    fn source(&self) -> VertexId {
        self.s
    }
}

pub struct HsEngine<'g> {
    g: &'g Graph,
    hs: HierStructure,
    p_max: u32,
    perspective: PerspectiveMode,
    scratch: HsScratch,
    /// Perspective arcs picked so far under the current weights.
    picked: Vec<ArcId>,
    picked_at: Vec<u32>,
    epoch: u32,
}

/// `picked` holds no arc for this vertex.
const NONE_PICKED: ArcId = NO_ARC - 1;

impl<'g> HsEngine<'g> {
    pub fn new(g: &'g Graph, hs: HierStructure, p_max: u32, perspective: PerspectiveMode) -> Result<Self, HsError> {
        if p_max >= 2 && g.coords().is_none() {
            return Err(HsError::MissingCoordinates);
        }
        let mut engine = HsEngine {
            g,
            hs,
            p_max,
            perspective,
            scratch: HsScratch::default(),
            picked: Vec::new(),
            picked_at: Vec::new(),
            epoch: 0,
        };
        if p_max >= 2 {
            engine.picked = vec![NO_ARC; g.n()];
            engine.picked_at = vec![0; g.n()];
            engine.rebuild_shortcuts(&WeightView::at_int(0));
        }
        Ok(engine)
    }

    fn rebuild_shortcuts(&mut self, w: &WeightView) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.picked_at.fill(0);
            self.epoch = 1;
        }
        let (g, t, coords) = (self.g, self.hs.target(), self.g.coords().expect("checked in new"));
        let (picked, picked_at, epoch) = (&mut self.picked, &mut self.picked_at, self.epoch);
        self.hs.set_shortcuts_by(g, self.p_max, |v| {
            let i = v as usize;
            if picked_at[i] != epoch {
                picked_at[i] = epoch;
                picked[i] = perspective_arc(g, coords, v, t, w).unwrap_or(NONE_PICKED);
            }
            (picked[i] != NONE_PICKED).then_some(picked[i])
        });
    }

    pub fn structure(&self) -> &HierStructure {
        &self.hs
    }
}

impl PathEngine for HsEngine<'_> {
    fn name(&self) -> String {
        match self.hs.layout() {
            crate::hs::Layout::Dag => EngineConfig::Dag.to_string(),
            crate::hs::Layout::Layered { k } => {
                EngineConfig::Layered { k, p_max: self.p_max, perspective: self.perspective }.to_string()
            }
        }
    }

    fn probe(&mut self, w: &WeightView) -> Option<Probe> {
        if self.p_max >= 2 && self.perspective == PerspectiveMode::PerAlpha {
            self.rebuild_shortcuts(w);
        }
        let found = hs_shortest_path_with(self.g, &self.hs, w, &mut self.scratch)?;
        Some(Probe { key: found.key, cost: found.cost, length: found.length, walk: found.walk })
    }

    fn arc_bound(&self) -> usize {
        self.g.n().max(self.hs.max_walk_arcs() + 1)
    }

    fn is_exact(&self) -> bool {
        self.hs.layout() == crate::hs::Layout::Dag
    }

    fn graph(&self) -> &Graph {
        self.g
    }

    fn source(&self) -> VertexId {
        self.hs.source()
    }
}
