use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use homshift::height::{height_csv, range_table_csv};
use homshift::io::{read_graph, read_partial_pattern, read_pattern};
use homshift::pivot::{lift_distance_sum, DEFAULT_STATE_LIMIT};
use homshift::{
    analyze_graph, count_box_patterns, entropy_report, fold_to_stiff, lift, minimal_k, patch_with, periodic_count,
    pivot_chain, random_pattern, reconfig_components, single_site_fillable, Cover, CoverVertex, Error, Graph,
    PartialPattern, PatchOptions, Pattern, Region,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "homshift", version, about = "Folding, lifts, heights, patching, pivots and entropy for hom-shifts")]
struct Cli {
    /// Emit JSON instead of a human-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the sampling commands; every construction ignores it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArg {
    /// Graph file: {"vertices": [...], "edges": [[u, v], ...]}.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct PatternArg {
    /// Pattern file.
    #[arg(long)]
    pattern: PathBuf,
    /// Graph file, when the pattern does not name one or to check it against.
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct PairArg {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report on a graph.
    Analyze(GraphArg),
    /// Fold a graph down to its stiff core.
    Fold(GraphArg),
    /// List universal-cover vertices up to a radius.
    Cover {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Label of the base vertex (defaults to the first vertex).
        #[arg(long)]
        base: Option<String>,
    },
    /// Lift a pattern to the universal cover, anchored at its first site.
    Lift(PatternArg),
    /// Height table from the first site and ranges on balls and spheres around the centre.
    Height {
        #[command(flatten)]
        p: PatternArg,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Keep x on D_n and y outside D_R, with R = (d+1)n + 3|H| + k.
    Patch {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Defaults to the smallest k the range condition allows.
        #[arg(long)]
        k: Option<usize>,
        /// Fail instead of shifting x when the colour classes at the origin differ.
        #[arg(long)]
        no_shift: bool,
        /// Write the patched pattern to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain of single-site changes between two patterns that agree on two boundary layers.
    PivotChain(PairArg),
    /// Components of the move graph on the completions of a boundary condition.
    PivotComponents {
        #[command(flatten)]
        p: PatternArg,
        /// Boundary layers to fix when the pattern file has no free cells.
        #[arg(long, default_value_t = 1)]
        layers: usize,
        #[arg(long, default_value_t = 1)]
        moves_radius: usize,
    },
    /// Exact box counts and entropy estimates.
    Entropy {
        #[command(flatten)]
        g: GraphArg,
        /// Count one box, for example 3x3 or 2x2x4.
        #[arg(long = "box")]
        extents: Option<String>,
        /// Largest square side and strip width in the report.
        #[arg(long, default_value_t = 6)]
        radius: usize,
    },
    /// Whether every assignment to the 2d neighbours of a site extends to the site.
    Fillable {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Number of patterns on the torus with two sites per axis.
    PeriodicCount {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Random valid pattern on a box (a test utility, not a construction).
    SamplePattern {
        #[command(flatten)]
        g: GraphArg,
        #[arg(long = "box")]
        extents: String,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        /// Centre the box on the origin instead of starting it there.
        #[arg(long)]
        centered: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Out = Result<String, Failure>;

fn graph(path: &Path) -> Result<Arc<Graph>, Failure> {
    Ok(Arc::new(read_graph(path)?))
}

fn pattern(path: &Path, g: Option<&PathBuf>) -> Result<Pattern, Failure> {
    let g = g.map(|p| graph(p)).transpose()?;
    Ok(read_pattern(path, g.as_ref())?)
}

fn parse_extents(s: &str) -> Result<Vec<usize>, Failure> {
    s.split('x')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&e| e > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Failure::Lib(Error::InvalidInput(format!("--box: expected sizes like 3x4, got {s:?}"))))
}

fn to_json<T: Serialize>(v: &T) -> Out {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Io(e.to_string()))
}

fn run(cli: Cli) -> Out {
    let json = cli.json;
    match cli.command {
        Command::Analyze(a) => {
            let g = graph(&a.graph)?;
            let r = analyze_graph(&g)?;
            let seq = fold_to_stiff(&g);
            if json {
                return to_json(&json!({"report": r, "stiff_class": seq.classification, "fold_radius": seq.fold_radius}));
            }
            let mut s = String::new();
            let _ = writeln!(s, "vertices: {}, edges: {}", g.len(), g.edges().len());
            let _ = writeln!(s, "connected: {}", r.connected);
            let _ = writeln!(s, "bipartite: {}", r.bipartite);
            let _ = writeln!(s, "four_cycle_free: {}", r.four_cycle_free);
            if let Some(c) = &r.four_cycle {
                let _ = writeln!(s, "four-cycle: {}", c.join(" - "));
            }
            let _ = writeln!(s, "tree: {}", r.is_tree);
            match r.diameter {
                Some(d) => {
                    let _ = writeln!(s, "diameter: {d}");
                }
                None => s.push_str("diameter: infinite\n"),
            }
            let _ = write!(s, "stiff core: {:?} after {} fold steps", seq.classification, seq.steps.len());
            Ok(s)
        }
        Command::Fold(a) => {
            let seq = fold_to_stiff(&*graph(&a.graph)?);
            if json {
                to_json(&seq)
            } else {
                Ok(seq.trace())
            }
        }
        Command::Cover { g, radius, base } => {
            let g = graph(&g.graph)?;
            let base = match base {
                Some(l) => g.require(&l)?,
                None => 0,
            };
            let ball = Cover::new(g.clone(), base)?.ball(radius);
            let walks: Vec<Vec<String>> = ball.iter().map(|v| v.labels(&g)).collect();
            if json {
                return to_json(&json!({"base": g.label(base), "radius": radius, "vertices": walks}));
            }
            let mut s = format!("{} cover vertices within distance {radius} of {}\n", ball.len(), g.label(base));
            for w in walks {
                let _ = writeln!(s, "{}", w.join(" "));
            }
            Ok(s.trim_end().to_string())
        }
        Command::Lift(p) => {
            let x = pattern(&p.pattern, p.graph.as_ref())?;
            let site = x.region().site(0).clone();
            let l = lift(&x, &site, CoverVertex::root(x.get(0)))?;
            let g = x.graph();
            let rows: Vec<_> = x
                .region()
                .sites()
                .iter()
                .zip(l.cells())
                .map(|(s, c)| json!({"site": s, "walk": c.labels(g)}))
                .collect();
            if json {
                return to_json(&json!({"anchor_site": site, "cells": rows}));
            }
            let mut s = String::new();
            for (site, c) in x.region().sites().iter().zip(l.cells()) {
                let _ = writeln!(s, "{site:?}\t{}", c.labels(g).join(" "));
            }
            Ok(s.trim_end().to_string())
        }
        Command::Height { p, radius } => {
            let x = pattern(&p.pattern, p.graph.as_ref())?;
            let d = x.region().dim();
            let centre = vec![0i64; d];
            let anchor = if x.region().contains(&centre) { centre } else { x.region().site(0).clone() };
            let l = lift(&x, &anchor, CoverVertex::root(x.at(&anchor).unwrap()))?;
            let table = range_table_csv(&l, radius);
            let heights = if d == 2 { Some(height_csv(&l, x.region().site(0))?) } else { None };
            if json {
                return to_json(&json!({"anchor": anchor, "range_table": table, "heights": heights}));
            }
            Ok(match heights {
                Some(h) => format!("{h}\n{table}").trim_end().to_string(),
                None => table.trim_end().to_string(),
            })
        }
        Command::Patch { pair, n, k, no_shift, out } => {
            let x = pattern(&pair.x, pair.graph.as_ref())?;
            let y = read_pattern(&pair.y, Some(x.graph()))?;
            let k = match k {
                Some(k) => k,
                None => minimal_k(&y, n)?,
            };
            let res = patch_with(&x, &y, n, k, PatchOptions { allow_shift: !no_shift })?;
            if let Some(path) = out {
                let text = serde_json::to_string(&res.z).map_err(|e| Failure::Io(e.to_string()))?;
                std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            if json {
                return to_json(&res);
            }
            Ok(format!(
                "patched with n = {n}, k = {k}, R = {}{}\nsphere range of y: {}\nannulus walk: {}",
                res.outer_radius,
                if res.shifted { " (x shifted by e1)" } else { "" },
                res.sphere_range,
                res.ring_walk.join(" ")
            ))
        }
        Command::PivotChain(pair) => {
            let x = pattern(&pair.x, pair.graph.as_ref())?;
            let y = read_pattern(&pair.y, Some(x.graph()))?;
            let chain = pivot_chain(&x, &y)?;
            chain.verify()?;
            let sum = lift_distance_sum(&x, &y)?;
            if json {
                return to_json(&json!({"length": chain.len(), "lift_distance_sum": sum, "chain": chain}));
            }
            let mut s = format!("{} pivots (lift distance sum {sum})\n", chain.len());
            for dlt in &chain.deltas {
                let _ = writeln!(s, "{:?}: {} -> {}", dlt.site, dlt.old, dlt.new);
            }
            Ok(s.trim_end().to_string())
        }
        Command::PivotComponents { p, layers, moves_radius } => {
            let g = p.graph.as_ref().map(|q| graph(q)).transpose()?;
            let partial = read_partial_pattern(&p.pattern, g.as_ref())?;
            let boundary: PartialPattern = if partial.free_sites().is_empty() {
                partial.complete(&[])?.outer_layers(layers)
            } else {
                partial
            };
            let rep = reconfig_components(&boundary, moves_radius, DEFAULT_STATE_LIMIT)?.report();
            if json {
                return to_json(&rep);
            }
            Ok(format!(
                "{} completions, {} components at moves radius {moves_radius}\nsizes: {:?}",
                rep.total, rep.component_count, rep.component_sizes
            ))
        }
        Command::Entropy { g, extents, radius } => {
            let g = graph(&g.graph)?;
            if let Some(b) = extents {
                let e = parse_extents(&b)?;
                let count = count_box_patterns(&g, &e)?;
                return if json {
                    to_json(&json!({"extents": e, "count": count.to_string()}))
                } else {
                    Ok(format!("count: {count}"))
                };
            }
            let rep = entropy_report(&g, radius);
            if json {
                to_json(&rep)
            } else {
                Ok(rep.table().trim_end().to_string())
            }
        }
        Command::Fillable { g, d } => {
            let g = graph(&g.graph)?;
            let f = single_site_fillable(&g, d);
            if json {
                return to_json(&f);
            }
            Ok(match &f.witness {
                Some(w) if !f.fillable => format!("fillable: false\nwitness: {}", w.join(" ")),
                _ => format!("fillable: {}", f.fillable),
            })
        }
        Command::PeriodicCount { g, d } => {
            let c = periodic_count(&*graph(&g.graph)?, d)?;
            if json {
                to_json(&json!({"d": d, "count": c.to_string()}))
            } else {
                Ok(format!("count: {c}"))
            }
        }
        Command::SamplePattern { g, extents, restarts, centered } => {
            let g = graph(&g.graph)?;
            let e = parse_extents(&extents)?;
            let origin: Vec<i64> = e.iter().map(|&x| if centered { -((x / 2) as i64) } else { 0 }).collect();
            let region = Arc::new(Region::boxed(origin, e)?);
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let p = random_pattern(&g, &region, &mut rng, restarts)?;
            serde_json::to_string(&p).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
