//! Random unit-disk graphs and their plain-text exchange format.
//!
//! Points are uniform in the unit square; two points are joined by a pair of
//! opposite arcs iff their distance is below the radius. The arc cost is the
//! distance, the arc length is the distance times a per-edge noise factor
//! drawn uniformly from `[1, 3]`. Both are multiplied by [`WEIGHT_SCALE`] and
//! truncated to integers.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};

use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError, VertexId};
use crate::rng::{self, InstanceRng};

pub const WEIGHT_SCALE: f64 = 1e4;
pub const FORMAT_TAG: &str = "udg";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UdgParams {
    pub n: usize,
    pub radius: f64,
    pub seed: u64,
}

/// Generates a unit-disk graph; the same parameters give the same graph.
pub fn generate_udg(n: usize, radius: f64, seed: u64) -> Graph {
    assert!(n >= 2, "need at least two points");
    assert!(radius > 0.0 && radius <= std::f64::consts::SQRT_2, "radius must lie in (0, sqrt 2]");
    let mut rng = rng::seeded(seed);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.random::<f64>(), rng.random::<f64>())).collect();
    udg_from_points(points, radius, &mut rng)
}

/// Connects the given points; noise factors are drawn from `rng` in
/// increasing `(i, j)` order over the pairs `i < j` that are joined.
pub fn udg_from_points(points: Vec<(f64, f64)>, radius: f64, rng: &mut InstanceRng) -> Graph {
    let n = points.len();
    let cells = ((1.0 / radius).floor() as usize).clamp(1, 4096);
    let cell_of = |p: (f64, f64)| {
        let cx = ((p.0 * cells as f64) as usize).min(cells - 1);
        let cy = ((p.1 * cells as f64) as usize).min(cells - 1);
        (cx, cy)
    };
    let mut grid: Vec<Vec<VertexId>> = vec![Vec::new(); cells * cells];
    for (i, &p) in points.iter().enumerate() {
        let (cx, cy) = cell_of(p);
        grid[cy * cells + cx].push(i as VertexId);
    }

    let r2 = radius * radius;
    let mut b = GraphBuilder::new(n);
    let mut near = Vec::new();
    for i in 0..n {
        let p = points[i];
        let (cx, cy) = cell_of(p);
        near.clear();
        for ny in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
            for nx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                for &j in &grid[ny * cells + nx] {
                    if (j as usize) > i {
                        let q = points[j as usize];
                        let (dx, dy) = (p.0 - q.0, p.1 - q.1);
                        if dx * dx + dy * dy < r2 {
                            near.push(j);
                        }
                    }
                }
            }
        }
        near.sort_unstable();
        for &j in &near {
            let q = points[j as usize];
            let d = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
            let noise: f64 = rng.random_range(1.0..=3.0);
            let cost = (d * WEIGHT_SCALE) as u64;
            let length = (d * noise * WEIGHT_SCALE) as u64;
            b.add_edge(i as VertexId, j, cost, length);
        }
    }
    b.build().with_coords(points).expect("one point per vertex")
}

#[derive(Debug, Error)]
pub enum UdgFormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Serialises a graph with coordinates:
/// `udg <n> <m> <r> <seed>`, then `v <id> <x> <y>` and `a <tail> <head> <cost> <length>`.
pub fn write_udg(g: &Graph, params: &UdgParams) -> String {
    let coords = g.coords().expect("unit-disk graphs carry coordinates");
    let mut out = String::with_capacity(48 * (g.n() + g.m()));
    writeln!(out, "{FORMAT_TAG} {} {} {} {}", g.n(), g.m(), params.radius, params.seed).unwrap();
    for (v, (x, y)) in coords.iter().enumerate() {
        writeln!(out, "v {v} {x} {y}").unwrap();
    }
    for arc in g.arcs() {
        writeln!(out, "a {} {} {} {}", g.tail(arc), g.head(arc), g.cost(arc), g.length(arc)).unwrap();
    }
    out
}

pub fn read_udg<R: Read>(reader: R) -> Result<(Graph, UdgParams), UdgFormatError> {
    let perr = |line: usize, message: String| UdgFormatError::Parse { line, message };
    fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, UdgFormatError> {
        let tok = tok.ok_or_else(|| UdgFormatError::Parse { line, message: format!("missing {what}") })?;
        tok.parse().map_err(|_| UdgFormatError::Parse { line, message: format!("invalid {what} `{tok}`") })
    }

    let mut header: Option<(UdgParams, usize)> = None;
    let mut builder: Option<GraphBuilder> = None;
    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut arcs = 0usize;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None => {}
            Some(FORMAT_TAG) => {
                let n: usize = num(toks.next(), line_no, "vertex count")?;
                let m: usize = num(toks.next(), line_no, "arc count")?;
                let radius: f64 = num(toks.next(), line_no, "radius")?;
                let seed: u64 = num(toks.next(), line_no, "seed")?;
                header = Some((UdgParams { n, radius, seed }, m));
                builder = Some(GraphBuilder::with_capacity(n, m));
                coords = vec![None; n];
            }
            Some("v") => {
                let n = coords.len();
                let id: usize = num(toks.next(), line_no, "vertex id")?;
                let x: f64 = num(toks.next(), line_no, "x")?;
                let y: f64 = num(toks.next(), line_no, "y")?;
                if header.is_none() || id >= n {
                    return Err(perr(line_no, format!("vertex {id} outside header range")));
                }
                coords[id] = Some((x, y));
            }
            Some("a") => {
                let b = builder.as_mut().ok_or_else(|| perr(line_no, "arc before header".into()))?;
                let tail: VertexId = num(toks.next(), line_no, "tail")?;
                let head: VertexId = num(toks.next(), line_no, "head")?;
                let cost: u64 = num(toks.next(), line_no, "cost")?;
                let length: u64 = num(toks.next(), line_no, "length")?;
                if tail as usize >= b.n() || head as usize >= b.n() {
                    return Err(perr(line_no, "arc endpoint out of range".into()));
                }
                b.add_arc(tail, head, cost, length);
                arcs += 1;
            }
            Some(other) => return Err(perr(line_no, format!("unknown line type `{other}`"))),
        }
    }
    let (params, m) = header.ok_or_else(|| UdgFormatError::Structure("missing header".into()))?;
    if arcs != m {
        return Err(UdgFormatError::Structure(format!("header declares {m} arcs, found {arcs}")));
    }
    let coords: Option<Vec<_>> = coords.into_iter().collect();
    let coords = coords.ok_or_else(|| UdgFormatError::Structure("missing vertex coordinates".into()))?;
    let g = builder.unwrap().build().with_coords(coords)?;
    Ok((g, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn close_pair_is_joined() {
        let g = udg_from_points(vec![(0.0, 0.0), (0.05, 0.0)], 0.1, &mut rng::seeded(1));
        assert_eq!(g.m(), 2);
        assert_eq!(g.cost(0), 500);
        assert!(g.length(0) >= 500 && g.length(0) <= 1500);
        assert_eq!((g.cost(0), g.length(0)), (g.cost(1), g.length(1)));
    }

    #[test]
    fn far_pair_is_not_joined() {
        let g = udg_from_points(vec![(0.0, 0.0), (0.2, 0.0)], 0.1, &mut rng::seeded(1));
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn distance_equal_to_radius_is_excluded() {
        let g = udg_from_points(vec![(0.0, 0.0), (0.5, 0.0)], 0.5, &mut rng::seeded(1));
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        assert_eq!(generate_udg(300, 0.1, 9), generate_udg(300, 0.1, 9));
        assert_ne!(generate_udg(300, 0.1, 9), generate_udg(300, 0.1, 10));
    }

    #[test]
    fn text_round_trip() {
        let params = UdgParams { n: 120, radius: 0.2, seed: 3 };
        let g = generate_udg(params.n, params.radius, params.seed);
        let text = write_udg(&g, &params);
        let (back, p2) = read_udg(text.as_bytes()).unwrap();
        assert_eq!(back, g);
        assert_eq!(p2, params);
        assert_eq!(write_udg(&back, &p2), text);
    }

    #[test]
    fn malformed_udg_text() {
        assert!(read_udg("udg 2 1 0.1 0\nv 0 0 0\nv 1 0 0\na 0 5 1 1\n".as_bytes()).is_err());
        assert!(read_udg("udg 2 2 0.1 0\nv 0 0 0\nv 1 0 0\na 0 1 1 1\n".as_bytes()).is_err());
        assert!(read_udg("udg 2 0 0.1 0\nv 0 0 0\n".as_bytes()).is_err());
    }
}
