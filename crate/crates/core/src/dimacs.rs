//! Reader and writer for 9th DIMACS challenge `.gr` shortest-path files.
//!
//! ```text
//! c comment
//! p sp <n> <m>
//! a <tail> <head> <weight>
//! ```
//!
//! Vertex ids are 1-based in the files and 0-based in [`Graph`]. A road
//! graph is assembled from two files over the same arc list: one supplies
//! the costs and the other the lengths. Weights are divided by a scale
//! divisor (100 by default) and truncated.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read};
use std::path::Path as FsPath;

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder, GraphError, VertexId};

pub const DEFAULT_DIVISOR: u64 = 100;

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cost and length files disagree: {0}")]
    Mismatch(String),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_err(line: usize, message: impl Into<String>) -> DimacsError {
    DimacsError::Parse { line, message: message.into() }
}

/// Raw contents of one `.gr` file, ids already 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrFile {
    pub n: usize,
    pub arcs: Vec<(VertexId, VertexId, u64)>,
    /// Source line of each arc, for error reporting.
    pub lines: Vec<usize>,
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, DimacsError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_gr<R: Read>(reader: R) -> Result<GrFile, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut lines = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate problem line"));
                }
                let kind: String = field(toks.next(), line_no, "problem kind")?;
                if kind != "sp" {
                    return Err(parse_err(line_no, format!("expected `sp` problem, found `{kind}`")));
                }
                let n = field(toks.next(), line_no, "vertex count")?;
                let m = field(toks.next(), line_no, "arc count")?;
                arcs.reserve(m);
                header = Some((n, m));
            }
            Some("a") => {
                let (n, _) = header.ok_or_else(|| parse_err(line_no, "arc before problem line"))?;
                let tail: usize = field(toks.next(), line_no, "tail")?;
                let head: usize = field(toks.next(), line_no, "head")?;
                let w: u64 = field(toks.next(), line_no, "weight")?;
                for v in [tail, head] {
                    if v == 0 || v > n {
                        return Err(parse_err(line_no, format!("vertex {v} outside 1..={n}")));
                    }
                }
                arcs.push(((tail - 1) as VertexId, (head - 1) as VertexId, w));
                lines.push(line_no);
            }
            Some(other) => return Err(parse_err(line_no, format!("unknown line type `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line_no, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| DimacsError::Structure("missing problem line".into()))?;
    if arcs.len() != m {
        return Err(DimacsError::Structure(format!("header declares {m} arcs, found {}", arcs.len())));
    }
    Ok(GrFile { n, arcs, lines })
}

/// Combines a cost file and a length file into one graph. Self-loops are
/// dropped; parallel arcs are kept.
pub fn combine(cost: &GrFile, length: &GrFile, divisor: u64) -> Result<Graph, DimacsError> {
    assert!(divisor > 0);
    if cost.n != length.n {
        return Err(DimacsError::Mismatch(format!("vertex counts {} and {}", cost.n, length.n)));
    }
    if cost.arcs.len() != length.arcs.len() {
        return Err(DimacsError::Mismatch(format!("arc counts {} and {}", cost.arcs.len(), length.arcs.len())));
    }
    let mut b = GraphBuilder::with_capacity(cost.n, cost.arcs.len());
    for (i, (c, l)) in cost.arcs.iter().zip(&length.arcs).enumerate() {
        if (c.0, c.1) != (l.0, l.1) {
            return Err(DimacsError::Mismatch(format!(
                "arc {} is ({}, {}) on line {} but ({}, {}) on line {}",
                i + 1,
                c.0 + 1,
                c.1 + 1,
                cost.lines[i],
                l.0 + 1,
                l.1 + 1,
                length.lines[i]
            )));
        }
        if c.0 != c.1 {
            b.add_arc(c.0, c.1, c.2 / divisor, l.2 / divisor);
        }
    }
    Ok(b.build())
}

pub fn load_dimacs<C: Read, L: Read>(cost: C, length: L) -> Result<Graph, DimacsError> {
    load_dimacs_scaled(cost, length, DEFAULT_DIVISOR)
}

pub fn load_dimacs_scaled<C: Read, L: Read>(cost: C, length: L, divisor: u64) -> Result<Graph, DimacsError> {
    combine(&parse_gr(cost)?, &parse_gr(length)?, divisor)
}

pub fn load_dimacs_files(cost: &FsPath, length: &FsPath) -> Result<Graph, DimacsError> {
    load_dimacs(std::fs::File::open(cost)?, std::fs::File::open(length)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Cost,
    Length,
}

/// Writes one weight of `g` as `.gr` text, multiplying by `divisor` so that
/// loading with the same divisor restores the graph.
pub fn write_gr(g: &Graph, weight: Weight, divisor: u64) -> String {
    let mut out = String::with_capacity(32 * g.m() + 64);
    let what = match weight {
        Weight::Cost => "cost",
        Weight::Length => "length",
    };
    writeln!(out, "c {what} scaled by {divisor}").unwrap();
    writeln!(out, "p sp {} {}", g.n(), g.m()).unwrap();
    for arc in g.arcs() {
        let w = match weight {
            Weight::Cost => g.cost(arc),
            Weight::Length => g.length(arc),
        };
        writeln!(out, "a {} {} {}", g.tail(arc) + 1, g.head(arc) + 1, w * divisor).unwrap();
    }
    out
}

/// Attaches coordinates from a `.co` file (`v <id> <x> <y>` lines).
pub fn attach_coordinates<R: Read>(g: Graph, reader: R) -> Result<Graph, DimacsError> {
    let mut coords = vec![None; g.n()];
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let id: usize = field(toks.next(), line_no, "vertex id")?;
                let x: f64 = field(toks.next(), line_no, "x")?;
                let y: f64 = field(toks.next(), line_no, "y")?;
                if id == 0 || id > g.n() {
                    return Err(parse_err(line_no, format!("vertex {id} outside 1..={}", g.n())));
                }
                coords[id - 1] = Some((x, y));
            }
            None | Some("c") | Some("p") => {}
            Some(other) => return Err(parse_err(line_no, format!("unknown line type `{other}`"))),
        }
    }
    let coords: Option<Vec<_>> = coords.into_iter().collect();
    let coords = coords.ok_or_else(|| DimacsError::Structure("coordinate file misses vertices".into()))?;
    Ok(g.with_coords(coords)?)
}
