//! Command-line interface: decompose, validate, generate, exact-tw.
//!
//! Exit codes: 0 success, 1 format or validation errors, 2 when a fixed
//! width budget is too small.

use clap::{Args, Parser, Subcommand};
use planartd::fmt::{graph_to_emb, graph_to_gr, parse_emb, parse_gr, parse_td, write_td};
use planartd::{decompose, DecomposeConfig, DecomposeError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "planartd", about = "Tree decompositions of embedded planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a tree decomposition of an embedded planar graph.
    Decompose(DecomposeArgs),
    /// Check a tree decomposition against a graph.
    Validate(ValidateArgs),
    /// Generate instances (graph plus embedding).
    #[command(subcommand)]
    Gen(GenCommand),
    /// Exact treewidth of a tiny graph (at most 15 vertices).
    ExactTw(ExactArgs),
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Embedding file; required (no embedder is included).
    #[arg(long)]
    embedding: PathBuf,
    /// Width budget: "auto" searches, an integer fixes it.
    #[arg(long, default_value = "auto")]
    k: String,
    #[arg(long)]
    out: PathBuf,
    /// Write run statistics as JSON to this path.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Worker threads for per-component decompositions.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    td: PathBuf,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Grid graph, optionally triangulated.
    Grid(GridArgs),
    /// Random planar triangulation.
    Tri(TriArgs),
    /// Chain of pyramidal summits over a shared coast.
    Chain(ChainArgs),
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    #[arg(long, default_value_t = false)]
    triangulate: bool,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_embedding: PathBuf,
}

#[derive(Args)]
struct TriArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_embedding: PathBuf,
}

#[derive(Args)]
struct ChainArgs {
    #[arg(long)]
    summits: usize,
    #[arg(long)]
    height: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_graph: PathBuf,
    #[arg(long)]
    out_embedding: PathBuf,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    graph: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Decompose(a) => cmd_decompose(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Gen(a) => cmd_gen(a),
        Command::ExactTw(a) => cmd_exact(a),
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(
    graph: &PathBuf,
    embedding: &PathBuf,
) -> Result<planartd::EmbeddedGraph, String> {
    let gr = parse_gr(&read(graph)?).map_err(|e| e.to_string())?;
    parse_emb(&read(embedding)?, &gr).map_err(|e| e.to_string())
}

fn cmd_decompose(a: DecomposeArgs) -> Result<ExitCode, String> {
    let g = load_graph(&a.graph, &a.embedding)?;
    let k = match a.k.as_str() {
        "auto" => None,
        s => Some(s.parse::<u32>().map_err(|e| format!("--k: {e}"))?),
    };
    let cfg = DecomposeConfig { k, jobs: a.jobs };
    let started = std::time::Instant::now();
    match decompose(&g, &cfg) {
        Ok((td, mut stats)) => {
            stats.width = td.width();
            let report = planartd::verify::validate_td(&g, &td);
            if !report.ok {
                return Err(format!("internal: invalid decomposition: {:?}", report.offending));
            }
            std::fs::write(&a.out, write_td(&td, g.n()))
                .map_err(|e| format!("{}: {e}", a.out.display()))?;
            if let Some(path) = a.stats {
                let mut v = serde_json::to_value(&stats).map_err(|e| e.to_string())?;
                v["total_ms"] =
                    serde_json::json!(started.elapsed().as_secs_f64() * 1e3);
                std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
            }
            println!(
                "width {} (k = {}, {} bags)",
                td.width(),
                stats.k_used,
                td.bags.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(DecomposeError::KTooSmall { k, reason }) => {
            eprintln!("k = {k} too small: {reason}");
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn cmd_validate(a: ValidateArgs) -> Result<ExitCode, String> {
    let gr = parse_gr(&read(&a.graph)?).map_err(|e| e.to_string())?;
    let (td, n) = parse_td(&read(&a.td)?).map_err(|e| e.to_string())?;
    if n != gr.n {
        eprintln!("vertex counts differ: graph {} vs decomposition {}", gr.n, n);
        return Ok(ExitCode::from(1));
    }
    let report = planartd::verify::validate_td_edges(gr.n, &gr.edges, &td);
    if report.ok {
        println!("valid, width {}", report.width);
        Ok(ExitCode::SUCCESS)
    } else {
        for p in &report.offending {
            eprintln!("violation: {p}");
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_gen(c: GenCommand) -> Result<ExitCode, String> {
    let (g, out_graph, out_emb) = match c {
        GenCommand::Grid(a) => (
            planartd::gen::grid(a.rows, a.cols, a.triangulate).map_err(|e| e.to_string())?,
            a.out_graph,
            a.out_embedding,
        ),
        GenCommand::Tri(a) => (
            planartd::gen::triangulation(a.n, a.seed).map_err(|e| e.to_string())?,
            a.out_graph,
            a.out_embedding,
        ),
        GenCommand::Chain(a) => (
            planartd::gen::mountain_chain(a.summits, a.height, a.seed)
                .map_err(|e| e.to_string())?,
            a.out_graph,
            a.out_embedding,
        ),
    };
    std::fs::write(&out_graph, graph_to_gr(&g))
        .map_err(|e| format!("{}: {e}", out_graph.display()))?;
    std::fs::write(&out_emb, graph_to_emb(&g))
        .map_err(|e| format!("{}: {e}", out_emb.display()))?;
    println!("n = {}, m = {}", g.n(), g.m());
    Ok(ExitCode::SUCCESS)
}

fn cmd_exact(a: ExactArgs) -> Result<ExitCode, String> {
    let gr = parse_gr(&read(&a.graph)?).map_err(|e| e.to_string())?;
    let adj: Vec<u32> = {
        let mut adj = vec![0u32; gr.n];
        if gr.n > 15 {
            return Err(format!("exact treewidth limited to 15 vertices, got {}", gr.n));
        }
        for &(u, v) in &gr.edges {
            adj[u as usize] |= 1 << v;
            adj[v as usize] |= 1 << u;
        }
        adj
    };
    let tw = planartd::verify::exact_treewidth_adj(&adj).map_err(|e| e.to_string())?;
    println!("{tw}");
    Ok(ExitCode::SUCCESS)
}
