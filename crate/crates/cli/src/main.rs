use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use csp_hs::bench::{
    choose_beta, run_matrix, summarize, write_csv, write_summary_json, BenchConfig, DistanceMetric, Mode,
    ReferenceKind,
};
use csp_hs::contract::contract_degree2;
use csp_hs::dimacs::{self, write_gr, Weight};
use csp_hs::engine::PerspectiveMode;
use csp_hs::exact::exact_csp_with_budget;
use csp_hs::larac::{solve, SearchRule};
use csp_hs::udg::{generate_udg, read_udg, write_udg, UdgParams};
use csp_hs::weight::ratio_to_f64;
use csp_hs::{EngineConfig, Graph};
use serde_json::json;

#[derive(Parser)]
#[command(name = "csp-hs", version, about = "Constrained shortest paths over Dijkstra and hierarchical engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random unit-disk graph
    GenUdg {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a DIMACS cost/length pair and print its statistics
    LoadDimacs {
        #[command(flatten)]
        dimacs: DimacsArgs,
        /// Also report the graph after degree-2 contraction
        #[arg(long)]
        contract: bool,
        /// Write the loaded graph back as <PREFIX>.cost.gr and <PREFIX>.length.gr
        #[arg(long, value_name = "PREFIX")]
        write_gr: Option<PathBuf>,
    },
    /// Shortest-path benchmark under the cost weights
    BenchSp(BenchArgs),
    /// Constrained shortest-path benchmark
    BenchCsp(BenchArgs),
    /// Solve one instance exactly and with the Lagrangian search
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        source: u32,
        #[arg(long)]
        target: u32,
        /// Length bound; derived from --beta-theta when omitted
        #[arg(long)]
        beta: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        beta_theta: f64,
        /// Engines for the Lagrangian search, comma separated
        #[arg(long, value_delimiter = ',', default_value = "Dij")]
        engine: Vec<EngineConfig>,
        #[arg(long, value_enum, default_value_t = Rule::Juttner)]
        rule: Rule,
        #[arg(long, default_value_t = csp_hs::exact::DEFAULT_LABEL_BUDGET)]
        label_budget: usize,
        /// Print every probe of the search to stderr
        #[arg(long)]
        probe_log: bool,
    },
}

#[derive(Args, Clone)]
struct DimacsArgs {
    /// DIMACS .gr file holding arc costs
    #[arg(long, value_name = "FILE")]
    cost: PathBuf,
    /// DIMACS .gr file holding arc lengths
    #[arg(long, value_name = "FILE")]
    length: PathBuf,
    /// DIMACS .co coordinate file
    #[arg(long, value_name = "FILE")]
    coords: Option<PathBuf>,
    #[arg(long, default_value_t = dimacs::DEFAULT_DIVISOR)]
    divisor: u64,
    /// Exchange the roles of the two files
    #[arg(long)]
    swap_weights: bool,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Graph in the unit-disk text format
    #[arg(long, value_name = "FILE", conflicts_with_all = ["cost", "udg_n"])]
    udg: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "length")]
    cost: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "cost")]
    length: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    coords: Option<PathBuf>,
    #[arg(long, default_value_t = dimacs::DEFAULT_DIVISOR)]
    divisor: u64,
    #[arg(long)]
    swap_weights: bool,
    /// Generate a unit-disk graph with this many vertices
    #[arg(long, value_name = "N", conflicts_with = "cost")]
    udg_n: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    udg_radius: f64,
    #[arg(long, default_value_t = 1)]
    udg_seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Layer counts for the hierarchical engines
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    k: Vec<u32>,
    /// Shortcut chain lengths for the hierarchical engines
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pmax: Vec<u32>,
    /// Explicit engine list (Dij, DAG, <k>HS<p>, <k>HS<p>f); overrides --k and --pmax
    #[arg(long, value_delimiter = ',')]
    engine: Vec<EngineConfig>,
    #[arg(long, value_enum, default_value_t = Perspective::PerAlpha)]
    perspective: Perspective,
    #[arg(long, default_value_t = 0.5)]
    beta_theta: f64,
    /// Distance classes in percent of the diameter
    #[arg(long, value_delimiter = ',', default_value = "25,50,75")]
    classes: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = Rule::Juttner)]
    rule: Rule,
    #[arg(long, value_enum, default_value_t = Reference::Auto)]
    reference: Reference,
    #[arg(long, default_value_t = csp_hs::bench::run::DEFAULT_EXACT_BUDGET)]
    exact_budget: usize,
    #[arg(long, value_enum, default_value_t = Metric::Hops)]
    metric: Metric,
    /// CSV output (stdout if omitted); the summary goes next to it
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary path; defaults to <out>.summary.json, or stderr
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    graph_id: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Juttner,
    Dichotomy,
}

impl From<Rule> for SearchRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Juttner => SearchRule::Juttner,
            Rule::Dichotomy => SearchRule::Dichotomy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Reference {
    Auto,
    Dij,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Hops,
    Length,
}

#[derive(Clone, Copy, ValueEnum)]
enum Perspective {
    PerAlpha,
    Fixed,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenUdg { n, radius, seed, out } => {
            if n < 2 || !(radius > 0.0 && radius <= std::f64::consts::SQRT_2) {
                bail!("need n >= 2 and 0 < radius <= sqrt(2)");
            }
            let g = generate_udg(n, radius, seed);
            let text = write_udg(&g, &UdgParams { n, radius, seed });
            emit(out.as_deref(), text.as_bytes())?;
            eprintln!("udg: n={} m={}", g.n(), g.m());
        }
        Command::LoadDimacs { dimacs, contract, write_gr: prefix } => {
            let g = load_dimacs(&dimacs)?;
            let mut stats = graph_stats(&g);
            if contract {
                let c = contract_degree2(&g, &[]);
                stats["contracted"] = json!({ "n": c.graph.n(), "m": c.graph.m() });
            }
            if let Some(prefix) = prefix {
                let base = prefix.to_string_lossy();
                std::fs::write(format!("{base}.cost.gr"), write_gr(&g, Weight::Cost, dimacs.divisor))?;
                std::fs::write(format!("{base}.length.gr"), write_gr(&g, Weight::Length, dimacs.divisor))?;
            }
            println!("{}", serde_json::to_string_pretty(&stats)?);
        }
        Command::BenchSp(args) => bench(args, false)?,
        Command::BenchCsp(args) => bench(args, true)?,
        Command::Exact { graph, source, target, beta, beta_theta, engine, rule, label_budget, probe_log } => {
            let g = load_graph(&graph)?;
            let beta = match beta {
                Some(b) => b,
                None => choose_beta(&g, source, target, beta_theta).context("target unreachable from source")?.beta,
            };
            let exact = exact_csp_with_budget(&g, source, target, beta, label_budget)?;
            let mut runs = Vec::new();
            for e in &engine {
                let r = solve(&g, source, target, beta, e, rule.into())?;
                if probe_log {
                    eprint!("{}", r.probe_log());
                }
                runs.push(json!({
                    "engine": r.engine,
                    "status": r.status.as_str(),
                    "cost": r.path.as_ref().map(|p| p.cost),
                    "length": r.path.as_ref().map(|p| p.length),
                    "alpha_star": r.alpha_star.to_string(),
                    "lower_bound": r.lower_bound.map(|e| e.to_string()),
                    "ratio_bound": r.ratio_bound.map(|e| e.to_string()),
                    "ratio_bound_f64": r.ratio_bound.as_ref().map(ratio_to_f64),
                    "iterations": r.iterations,
                    "heuristic": r.heuristic,
                }));
            }
            let out = json!({
                "source": source,
                "target": target,
                "beta": beta,
                "exact": exact.map(|p| json!({ "cost": p.cost, "length": p.length, "arcs": p.arcs })),
                "larac": runs,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
    }
    Ok(())
}

fn bench(args: BenchArgs, csp: bool) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let perspective = match args.perspective {
        Perspective::PerAlpha => PerspectiveMode::PerAlpha,
        Perspective::Fixed => PerspectiveMode::Fixed,
    };
    let engines: Vec<EngineConfig> = if args.engine.is_empty() {
        let mut v = vec![EngineConfig::Dijkstra];
        for &k in &args.k {
            for &p_max in &args.pmax {
                v.push(EngineConfig::Layered { k, p_max, perspective });
            }
        }
        v
    } else {
        args.engine
            .iter()
            .map(|e| match *e {
                EngineConfig::Layered { k, p_max, .. } if perspective == PerspectiveMode::Fixed => {
                    EngineConfig::Layered { k, p_max, perspective }
                }
                other => other,
            })
            .collect()
    };
    let mode = if csp {
        Mode::Csp {
            theta: args.beta_theta,
            rule: args.rule.into(),
            reference: match args.reference {
                Reference::Auto => ReferenceKind::Auto,
                Reference::Dij => ReferenceKind::Dij,
            },
            exact_budget: args.exact_budget,
        }
    } else {
        Mode::Sp
    };
    let mut cfg = BenchConfig::new(args.graph_id.clone().unwrap_or_else(|| graph_id(&args.graph)), mode);
    cfg.classes = args.classes;
    cfg.engines = engines;
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.workers = args.workers;
    cfg.metric = match args.metric {
        Metric::Hops => DistanceMetric::Hops,
        Metric::Length => DistanceMetric::Length,
    };
    let records = run_matrix(&g, &cfg)?;
    let summary = summarize(&records);

    let mut csv = Vec::new();
    write_csv(&records, &mut csv)?;
    emit(args.out.as_deref(), &csv)?;
    let summary_path = args.summary.or_else(|| args.out.as_ref().map(|o| o.with_extension("summary.json")));
    let mut json = Vec::new();
    write_summary_json(&summary, &mut json)?;
    json.push(b'\n');
    match summary_path {
        Some(p) => std::fs::write(&p, json).with_context(|| format!("writing {}", p.display()))?,
        None => io::stderr().write_all(&json)?,
    }
    Ok(())
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
            w.write_all(bytes)?;
            w.flush()?;
        }
        None => io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn load_dimacs(a: &DimacsArgs) -> Result<Graph> {
    let (cost, length) = if a.swap_weights { (&a.length, &a.cost) } else { (&a.cost, &a.length) };
    let g = dimacs::load_dimacs_scaled(
        File::open(cost).with_context(|| format!("opening {}", cost.display()))?,
        File::open(length).with_context(|| format!("opening {}", length.display()))?,
        a.divisor,
    )?;
    Ok(match &a.coords {
        Some(c) => dimacs::attach_coordinates(g, File::open(c)?)?,
        None => g,
    })
}

fn load_graph(a: &GraphArgs) -> Result<Graph> {
    if let Some(path) = &a.udg {
        let (g, _) = read_udg(File::open(path).with_context(|| format!("opening {}", path.display()))?)?;
        return Ok(g);
    }
    if let (Some(cost), Some(length)) = (&a.cost, &a.length) {
        return load_dimacs(&DimacsArgs {
            cost: cost.clone(),
            length: length.clone(),
            coords: a.coords.clone(),
            divisor: a.divisor,
            swap_weights: a.swap_weights,
        });
    }
    if let Some(n) = a.udg_n {
        return Ok(generate_udg(n, a.udg_radius, a.udg_seed));
    }
    bail!("no graph given: use --udg FILE, --cost/--length FILES or --udg-n N")
}

fn graph_id(a: &GraphArgs) -> String {
    if let Some(p) = &a.udg {
        return p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    if let Some(p) = &a.cost {
        return p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    format!("udg-{}-{}-{}", a.udg_n.unwrap_or(0), a.udg_radius, a.udg_seed)
}

fn graph_stats(g: &Graph) -> serde_json::Value {
    json!({
        "n": g.n(),
        "m": g.m(),
        "max_cost": g.max_cost(),
        "max_length": g.max_length(),
        "hop_diameter_estimate": csp_hs::traverse::estimate_diameter(g).ok(),
        "coordinates": g.coords().is_some(),
    })
}
