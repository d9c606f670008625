//! rgraph: build rotation graphs of small graphs, verify their structure
//! (partitions, quotients, colorings, distances) against the built-in
//! corpus, and compute chromatic numbers, distances, and diameters.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rotation_graphs::coloring::{
    chromatic_number_exact, complete_bipartite_coloring, sign_coloring, threshold_coloring,
    ChromaticOutcome, Coloring,
};
use rotation_graphs::graph::{make_family, FamilySpec, Graph, ThresholdStep};
use rotation_graphs::io as rgio;
use rotation_graphs::metrics::{
    bfs_from, diameter, distance, orbit_reduce, twin_class_generators, OrbitSet,
};
use rotation_graphs::report::Report;
use rotation_graphs::rotation::{BuildOptions, RotationGraph};
use rotation_graphs::verify;

#[derive(Parser)]
#[command(name = "rgraph", version, about = "rotation graphs of small graphs")]
struct Cli {
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true, env = "RGRAPH_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GraphSource {
    /// Named family, e.g. complete:4, path:6, star:3, kpq:2,3, spk:2,3,
    /// threshold:iuu
    #[arg(long, conflicts_with = "graph")]
    family: Option<String>,
    /// Graph file (.json with {"n","edges","labels"?}, otherwise an edge
    /// list with one "u v" per line)
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl GraphSource {
    fn load(&self) -> Result<(String, Graph)> {
        match (&self.family, &self.graph) {
            (Some(spec), None) => {
                let g = make_family(&FamilySpec::parse(spec)?)?;
                Ok((spec.clone(), g))
            }
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let g = if path.extension().is_some_and(|e| e == "json") {
                    rgio::graph_from_json(&text)?
                } else {
                    rgio::graph_from_edge_list(&text)?
                };
                Ok((path.display().to_string(), g))
            }
            _ => bail!("exactly one of --family or --graph is required"),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct Caps {
    /// Abort construction beyond this many search trees
    #[arg(long, default_value_t = 5_000_000, env = "RGRAPH_MAX_TREES")]
    max_trees: usize,
    /// Skip rotated-pair edge labels (halves adjacency memory)
    #[arg(long)]
    no_edge_labels: bool,
}

impl Caps {
    fn options(&self) -> BuildOptions {
        BuildOptions { max_trees: self.max_trees, edge_labels: !self.no_edge_labels }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OrbitsMode {
    Auto,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Build a rotation graph and export it
    Build {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        caps: Caps,
        /// Write DOT to this path
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write JSON (trees + labeled edges) to this path
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write a flat binary edge list to this path
        #[arg(long)]
        bin: Option<PathBuf>,
        /// Write build stats as JSON here ("-" for stdout)
        #[arg(long)]
        stats: Option<String>,
    },
    /// Run a verification suite over the built-in corpus
    Verify {
        /// partitions | quotients | colorings | distances | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Include the q = 7, 8 diameter reproductions
        #[arg(long)]
        deep: bool,
        /// Seed for the sampled property checks
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Write the JSON report here ("-" for stdout)
        #[arg(long)]
        json: Option<String>,
    },
    /// Chromatic number of a rotation graph
    Chromatic {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        caps: Caps,
        /// Close the answer exactly with the DSATUR + backtracking solver
        /// (the default)
        #[arg(long)]
        exact: bool,
        /// Use the constructive coloring for the family instead: the sign
        /// 2-coloring for complete:n, the lift compositions for threshold
        /// words, stars, split graphs, and complete bipartite graphs
        #[arg(long, conflicts_with = "exact")]
        lifted: bool,
        /// Search-node budget for the exact solver
        #[arg(long, default_value_t = 1 << 28)]
        budget: u64,
        /// Write the coloring as JSON (ordinal -> color) here
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write a DOT rendering with fill colors here
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Diameter of a rotation graph
    Diameter {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        caps: Caps,
        /// Orbit reduction from twin-class automorphisms
        #[arg(long, value_enum, default_value_t = OrbitsMode::Auto)]
        orbits: OrbitsMode,
        /// Allow instances expected to exceed ~100k trees
        #[arg(long)]
        deep: bool,
        /// Resume/record per-source eccentricities in this JSON file
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Write the result as JSON here ("-" for stdout)
        #[arg(long)]
        json: Option<String>,
    },
    /// Rotation distance between two search trees
    Distance {
        #[command(flatten)]
        source: GraphSource,
        #[command(flatten)]
        caps: Caps,
        /// JSON tree file {"root": r, "parent": [..]}
        #[arg(long)]
        from: PathBuf,
        /// JSON tree file {"root": r, "parent": [..]}
        #[arg(long)]
        to: PathBuf,
        /// Write the result as JSON here ("-" for stdout)
        #[arg(long)]
        json: Option<String>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            log::warn!("worker pool: {e}");
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Build { source, caps, dot, json, bin, stats } => {
            let (name, g) = source.load()?;
            let t0 = Instant::now();
            let rg = RotationGraph::build_with(&g, caps.options())?;
            let elapsed = t0.elapsed();
            if let Some(path) = dot {
                fs::write(&path, rgio::rotation_graph_to_dot(&rg, None))?;
            }
            if let Some(path) = json {
                fs::write(&path, rgio::rotation_graph_to_json(&rg))?;
            }
            if let Some(path) = bin {
                let mut f = fs::File::create(&path)?;
                rgio::rotation_graph_to_binary(&rg, &mut f)?;
            }
            let doc = serde_json::json!({
                "schema": 1,
                "instance": name,
                "vertices": rg.len(),
                "edges": rg.edge_count(),
                "build_seconds": elapsed.as_secs_f64(),
            });
            emit(stats.as_deref().or(Some("-")), &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, deep, seed, json } => {
            let t0 = Instant::now();
            let checks = verify::run_suite(&suite, deep, seed).ok_or_else(|| {
                anyhow!("unknown suite {suite:?}; use partitions|quotients|colorings|distances|all")
            })?;
            let report = Report::new(suite, checks);
            for c in &report.checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                println!("[{status}] {} — {}", c.check, c.instance);
                if !c.passed {
                    for w in &c.witnesses {
                        println!("       {w}");
                    }
                }
            }
            println!(
                "{} checks, {} failed, {:.1}s",
                report.checks.len(),
                report.failures().count(),
                t0.elapsed().as_secs_f64()
            );
            if let Some(path) = json {
                emit(Some(&path), &serde_json::to_value(&report)?)?;
            }
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Chromatic { source, caps, exact, lifted, budget, json, dot } => {
            let _ = exact; // exact solving is the default path
            let (name, g) = source.load()?;
            let (chi, coloring, rg) = if lifted {
                let spec = source
                    .family
                    .as_deref()
                    .ok_or_else(|| anyhow!("--lifted needs a --family construction"))?;
                let (rg, coloring) = lifted_coloring_for(spec)?;
                (coloring.k, coloring, rg)
            } else {
                let rg = RotationGraph::build_with(&g, caps.options())?;
                match chromatic_number_exact(&rg, None, budget)? {
                    ChromaticOutcome::Exact { chi, coloring, nodes } => {
                        log::info!("exact solver used {nodes} nodes");
                        (chi, coloring, rg)
                    }
                    ChromaticOutcome::Bounds { lb, ub, nodes } => {
                        println!("inexact: {lb} <= chi <= {ub} (budget, {nodes} nodes)");
                        return Ok(ExitCode::from(2));
                    }
                }
            };
            coloring
                .check_proper(&rg)
                .map_err(|(a, b)| anyhow!("coloring improper on edge {a}-{b}"))?;
            println!("chi(R({name})) = {chi}");
            if let Some(path) = json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "instance": name,
                    "chi": chi,
                    "colors": coloring.assign,
                });
                fs::write(&path, serde_json::to_string_pretty(&doc)?)?;
            }
            if let Some(path) = dot {
                fs::write(&path, rgio::rotation_graph_to_dot(&rg, Some(&coloring.assign)))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Diameter { source, caps, orbits, deep, checkpoint, json } => {
            let (name, g) = source.load()?;
            if !deep && looks_deep(&source) {
                bail!(
                    "{name} builds a very large rotation graph; pass --deep to proceed \
                     (optionally with --checkpoint for resumable progress)"
                );
            }
            let t0 = Instant::now();
            let rg = RotationGraph::build_with(&g, caps.options())?;
            log::info!("built {} trees in {:.1}s", rg.len(), t0.elapsed().as_secs_f64());
            let orbit_set = match orbits {
                OrbitsMode::Auto => {
                    let gens = twin_class_generators(rg.graph());
                    if gens.is_empty() {
                        None
                    } else {
                        let o = orbit_reduce(&rg, &gens)?;
                        log::info!("{} orbits over {} trees", o.orbit_count(), rg.len());
                        Some(o)
                    }
                }
                OrbitsMode::None => None,
            };
            let (value, witness, sources_run) = match checkpoint {
                Some(path) => diameter_checkpointed(&rg, orbit_set.as_ref(), &path, &name)?,
                None => {
                    let d = diameter(&rg, orbit_set.as_ref())?;
                    (d.value, Some(d.witness), d.sources_run)
                }
            };
            let doc = serde_json::json!({
                "schema": 1,
                "instance": name,
                "value": value,
                "witness_pair": witness.map(|(a, b)| vec![a, b]),
                "sources_run": sources_run,
                "runtime_seconds": t0.elapsed().as_secs_f64(),
            });
            emit(json.as_deref().or(Some("-")), &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Distance { source, caps, from, to, json } => {
            let (name, g) = source.load()?;
            let rg = RotationGraph::build_with(&g, caps.options())?;
            let load_tree = |path: &Path| -> Result<usize> {
                let t = rgio::tree_from_json(&fs::read_to_string(path)?)?;
                rg.ordinal_of(&t)
                    .ok_or_else(|| anyhow!("{} is not a search tree on {name}", path.display()))
            };
            let s = load_tree(&from)?;
            let t = load_tree(&to)?;
            let t0 = Instant::now();
            let d = distance(&rg, s, t);
            let doc = serde_json::json!({
                "schema": 1,
                "instance": name,
                "value": d,
                "from_ordinal": s,
                "to_ordinal": t,
                "runtime_seconds": t0.elapsed().as_secs_f64(),
            });
            emit(json.as_deref().or(Some("-")), &doc)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Constructive colorings for the families that have one.
fn lifted_coloring_for(spec: &str) -> Result<(RotationGraph, Coloring)> {
    let family = FamilySpec::parse(spec)?;
    let star_word = |leaves: usize| -> Vec<ThresholdStep> {
        let mut w = vec![ThresholdStep::Isolated; leaves - 1];
        w.push(ThresholdStep::Universal);
        w
    };
    match family {
        FamilySpec::Complete(_) => {
            let g = make_family(&family)?;
            let rg = RotationGraph::build(&g)?;
            let c = sign_coloring(&rg)?;
            Ok((rg, c))
        }
        FamilySpec::Threshold(steps) => {
            let out = threshold_coloring(&steps)?;
            Ok((out.rotation, out.coloring))
        }
        FamilySpec::Star(q) => {
            let out = threshold_coloring(&star_word(q))?;
            Ok((out.rotation, out.coloring))
        }
        FamilySpec::CompleteSplit(p, q) => {
            let mut word = vec![ThresholdStep::Isolated; q - 1];
            word.extend(vec![ThresholdStep::Universal; p]);
            let out = threshold_coloring(&word)?;
            Ok((out.rotation, out.coloring))
        }
        FamilySpec::CompleteBipartite(p, q) => {
            if p.min(q) == 1 {
                let out = threshold_coloring(&star_word(p.max(q)))?;
                Ok((out.rotation, out.coloring))
            } else {
                let out = complete_bipartite_coloring(p, q)?;
                Ok((out.rotation, out.coloring))
            }
        }
        FamilySpec::Path(_) => bail!("no constructive coloring for paths; use --exact"),
    }
}

fn looks_deep(source: &GraphSource) -> bool {
    let Some(spec) = &source.family else { return false };
    match FamilySpec::parse(spec) {
        Ok(FamilySpec::CompleteSplit(p, q)) | Ok(FamilySpec::CompleteBipartite(p, q)) => p + q >= 9,
        Ok(FamilySpec::Complete(n)) => n >= 9,
        _ => false,
    }
}

/// Per-source eccentricities with a resumable JSON checkpoint.
fn diameter_checkpointed(
    rg: &RotationGraph,
    orbits: Option<&OrbitSet>,
    path: &Path,
    name: &str,
) -> Result<(usize, Option<(usize, usize)>, usize)> {
    let signature = format!("{name}:{}:{}", rg.len(), rg.edge_count());
    let sources: Vec<u32> = match orbits {
        Some(o) => o.representatives.clone(),
        None => (0..rg.len() as u32).collect(),
    };
    let mut done: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    if path.exists() {
        let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        if doc["signature"].as_str() == Some(signature.as_str()) {
            if let Some(map) = doc["ecc"].as_object() {
                for (k, v) in map {
                    if let (Ok(ord), Some(e)) = (k.parse::<u32>(), v.as_u64()) {
                        done.insert(ord, e as usize);
                    }
                }
            }
            log::info!("resuming: {} of {} sources done", done.len(), sources.len());
        } else {
            log::warn!("checkpoint signature mismatch; starting fresh");
            done.clear();
        }
    }
    for &s in &sources {
        if done.contains_key(&s) {
            continue;
        }
        let p = bfs_from(rg, s as usize);
        done.insert(s, p.eccentricity);
        let doc = serde_json::json!({ "signature": signature, "ecc": done });
        fs::write(path, serde_json::to_string(&doc)?)?;
        log::info!("source {s}: eccentricity {}", p.eccentricity);
    }
    let value = *done.values().max().unwrap_or(&0);
    Ok((value, None, sources.len()))
}

/// Write JSON to a path, or pretty-print to stdout for "-".
fn emit(path: Option<&str>, doc: &serde_json::Value) -> Result<()> {
    match path {
        Some("-") | None => {
            println!("{}", serde_json::to_string_pretty(doc)?);
            Ok(())
        }
        Some(p) => {
            fs::write(p, serde_json::to_string_pretty(doc)?)?;
            Ok(())
        }
    }
}
