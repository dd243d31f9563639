//! Command-line interface.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundSet;
use crate::config::{Branching, ReductionConfig};
use crate::error::{Error, Result};
use crate::generators::{generate_blg, generate_geometric, BlgParams, GeoParams};
use crate::graph::{complement, parse_graph, write_dimacs, write_edge_list, Format, Graph};
use crate::profiler::{compute_profile, recommend_config, CSV_HEADER};
use crate::reductions::ReductionKind;
use crate::solver::{solve_with, SolveOptions, SolveStatus};
use crate::stats::{competitive_set, efficiency_table, globally_competitive, goldilocks, StatsReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;
pub const EXIT_INVALID_SOLUTION: i32 = 5;

const EXIT_HELP: &str = "Exit status:
  0  success
  1  I/O error
  2  malformed input or invalid configuration
  3  infeasible generator parameters
  4  timeout before optimality was proven
  5  invalid solution (verify)";

#[derive(Debug, Parser)]
#[command(name = "vc-reduce", version, about = "Exact minimum vertex cover by branch and reduce", after_help = EXIT_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and print the statistics report.
    Solve(SolveArgs),
    /// Print degree measures and the recommended configuration.
    Profile(ProfileArgs),
    /// Generate a random instance.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Check a solution bit string against a graph.
    Verify(VerifyArgs),
    /// Write the complement graph.
    Complement(ComplementArgs),
    /// Competitiveness analysis of runtimes, optionally running the batch first.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct SolverFlags {
    /// 0: random, 1: mindeg, 2: maxdeg
    #[arg(short = 'b', long, default_value_t = 2)]
    pub branching: u8,
    /// 0 none, 1 branching and decomposition, 2 adds reduction summaries, 3 per-rule detail
    #[arg(short = 'd', long, default_value_t = 0)]
    pub debug: u8,
    /// Timeout in seconds
    #[arg(short = 't', long, default_value_t = 3600)]
    pub timeout: u64,
    /// 0 none, 1 short, 2 JSON lines with solution vectors
    #[arg(long, default_value_t = 0)]
    pub trace: u8,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub quiet: Option<bool>,
    /// Only process the root node, no branching
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub root: Option<bool>,
    #[arg(long = "show_solution", value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub show_solution: Option<bool>,
    #[arg(long = "clique_lb", value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub clique_lb: Option<bool>,
    #[arg(long = "lp_lb", value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub lp_lb: Option<bool>,
    #[arg(long = "cycle_lb", value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub cycle_lb: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub deg1: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub dom: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub fold2: Option<bool>,
    #[arg(long = "LP", value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub lp: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub unconfined: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub twin: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub funnel: Option<bool>,
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub desk: Option<bool>,
    /// Accepted for compatibility; the packing rule is not available
    #[arg(long, value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub packing: Option<bool>,
    /// All reductions except packing, with clique, LP and cycle bounds
    #[arg(long = "all_red", value_name = "BOOL", num_args = 0..=1, require_equals = true, default_missing_value = "true")]
    pub all_red: Option<bool>,
    /// Named preset used as the baseline before the individual flags
    #[arg(long)]
    pub config: Option<String>,
    #[arg(long, env = "VC_REDUCE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::config::DEFAULT_SHRINK)]
    pub shrink: f64,
    #[arg(long, default_value_t = crate::config::DEFAULT_BRUTE_FORCE_THRESHOLD)]
    pub brute_force_threshold: usize,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub flags: SolverFlags,
    /// auto, dimacs or edgelist
    #[arg(long, default_value = "auto")]
    pub format: Format,
    /// Graph file, `-` for stdin
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long, default_value = "auto")]
    pub format: Format,
    /// Also estimate an odd cycle transversal
    #[arg(long)]
    pub oct: bool,
    #[arg(long, env = "VC_REDUCE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// One CSV row instead of the key/value listing
    #[arg(long)]
    pub csv: bool,
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCmd {
    /// Bucket-list generator with degree bias
    Blg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        avg: f64,
        #[arg(long, default_value_t = 1.0)]
        deg_var: f64,
        #[arg(long)]
        min_deg: Option<usize>,
        #[arg(long)]
        max_deg: Option<usize>,
        #[arg(long, env = "VC_REDUCE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random geometric graph in the unit square
    Geo {
        #[arg(long)]
        n: usize,
        /// Desired edge count
        #[arg(long)]
        m: usize,
        #[arg(long)]
        wraparound: bool,
        #[arg(long, env = "VC_REDUCE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "auto")]
    pub format: Format,
    pub graph: PathBuf,
    /// File holding the bit string (a `solution` line or a bare string)
    pub solution: PathBuf,
}

#[derive(Debug, Args)]
pub struct ComplementArgs {
    #[arg(long, default_value = "auto")]
    pub format: Format,
    /// Write DIMACS instead of an edge list
    #[arg(long)]
    pub dimacs: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV with instance, config and runtime columns (optional timeout column)
    pub runtimes: Option<PathBuf>,
    /// Solve these instances under every config first
    #[arg(long, num_args = 1.., value_name = "GRAPH")]
    pub run: Vec<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "None,DF2,r0_l1")]
    pub configs: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(short = 't', long, default_value_t = 900)]
    pub timeout: u64,
    /// Where the landscape CSV of a batch run goes
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    /// Collection tested for global competitiveness
    #[arg(long, value_delimiter = ',', default_value = "None,DF2,r0_l1")]
    pub collection: Vec<String>,
    /// Statistics reports to summarize per reduction
    #[arg(long, num_args = 1..)]
    pub reports: Vec<PathBuf>,
}

impl SolverFlags {
    /// Preset baseline, then each given flag switches its feature.
    pub fn to_config(&self) -> Result<(ReductionConfig, Vec<String>)> {
        let mut warnings = Vec::new();
        let mut cfg = match &self.config {
            Some(name) => {
                let (c, w) = ReductionConfig::preset(name)?;
                warnings.extend(w);
                c
            }
            None => ReductionConfig::with(&[], BoundSet::default()),
        };
        if self.all_red == Some(true) {
            let all = ReductionConfig::all_reductions();
            for k in ReductionKind::ALL {
                cfg.set(k, true);
            }
            cfg.bounds = all.bounds;
        }
        let toggles = [
            (self.deg1, ReductionKind::Deg1),
            (self.dom, ReductionKind::Dominance),
            (self.fold2, ReductionKind::Fold2),
            (self.lp, ReductionKind::Lp),
            (self.unconfined, ReductionKind::Unconfined),
            (self.twin, ReductionKind::Twin),
            (self.funnel, ReductionKind::Funnel),
            (self.desk, ReductionKind::Desk),
        ];
        for (flag, kind) in toggles {
            if let Some(on) = flag {
                cfg.set(kind, on);
            }
        }
        if let Some(on) = self.clique_lb {
            cfg.bounds.clique = on;
        }
        if let Some(on) = self.lp_lb {
            cfg.bounds.lp = on;
        }
        if let Some(on) = self.cycle_lb {
            cfg.bounds.cycle = on;
        }
        if self.packing == Some(true) {
            warnings.push("packing reduction is not available and is ignored".into());
        }
        cfg.branching = Branching::from_code(self.branching)?;
        cfg.timeout = Duration::from_secs(self.timeout);
        cfg.seed = self.seed;
        cfg.shrink = self.shrink;
        cfg.brute_force_threshold = self.brute_force_threshold;
        cfg.validate()?;
        Ok((cfg, warnings))
    }

    pub fn to_options(&self) -> SolveOptions {
        SolveOptions {
            debug: self.debug,
            trace: self.trace,
            quiet: self.quiet.unwrap_or(false),
            root_only: self.root.unwrap_or(false),
            max_branches: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub size: usize,
}

/// Checks a label-indexed bit string; `_` marks labels absent from the graph.
pub fn verify_solution(g: &Graph, bits: &str) -> Result<Verification> {
    let len = g.labels().iter().max().map_or(0, |&m| m as usize + 1);
    let bits = bits.as_bytes();
    if bits.len() != len {
        return Err(Error::Solution(format!("expected {len} characters, got {}", bits.len())));
    }
    let mut present = vec![false; len];
    for &l in g.labels() {
        present[l as usize] = true;
    }
    for (label, &c) in bits.iter().enumerate() {
        match (c, present[label]) {
            (b'0' | b'1', true) | (b'_', false) => {}
            (b'_', true) => return Err(Error::Solution(format!("'_' at present vertex {label}"))),
            (b'0' | b'1', false) => {
                return Err(Error::Solution(format!("'{}' at absent vertex {label}", c as char)))
            }
            (other, _) => {
                return Err(Error::Solution(format!("unexpected character '{}' at {label}", other as char)))
            }
        }
    }
    let cover: Vec<bool> = g.labels().iter().map(|&l| bits[l as usize] == b'1').collect();
    Ok(Verification { valid: g.is_vertex_cover(&cover), size: cover.iter().filter(|&&b| b).count() })
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

pub fn load_graph(path: &Path, format: Format) -> Result<Graph> {
    let parsed = parse_graph(&read_input(path)?, format)?;
    for w in parsed.warnings() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(parsed.graph)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Csv(_) | Error::Unfold(_) => EXIT_IO,
        Error::Parse { .. }
        | Error::EmptyInput
        | Error::VertexOutOfRange { .. }
        | Error::EmptyGraph
        | Error::Config(_)
        | Error::Report(_) => EXIT_PARSE,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Solution(_) => EXIT_INVALID_SOLUTION,
    }
}

/// Runs a parsed command and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Profile(a) => cmd_profile(a),
        Command::Generate(g) => cmd_generate(g),
        Command::Verify(a) => cmd_verify(a),
        Command::Complement(a) => cmd_complement(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

fn cmd_solve(a: SolveArgs) -> Result<i32> {
    let (cfg, warnings) = a.flags.to_config()?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let g = load_graph(&a.input, a.format)?;
    let opts = a.flags.to_options();
    if !opts.quiet {
        eprintln!("instance {}", a.input.display());
        eprintln!("config {}", cfg.preset_name().map_or_else(|| cfg.to_string(), str::to_string));
    }
    let res = solve_with(&g, &cfg, &opts);
    let mut out = res.stats.render();
    if a.flags.show_solution == Some(true) {
        out.push_str(&format!("solution {}\n", res.solution_string(&g)));
    }
    io::stdout().write_all(out.as_bytes())?;
    Ok(match res.status {
        SolveStatus::Optimal => EXIT_OK,
        SolveStatus::Incomplete => {
            eprintln!("status incomplete: value is an upper bound");
            EXIT_OK
        }
        SolveStatus::Timeout => {
            eprintln!("status timeout: value is an upper bound");
            EXIT_TIMEOUT
        }
    })
}

fn cmd_profile(a: ProfileArgs) -> Result<i32> {
    let g = load_graph(&a.input, a.format)?;
    let p = compute_profile(&g, a.oct.then_some(a.seed))?;
    let r = recommend_config(&p);
    if a.csv {
        println!("{CSV_HEADER},recommended");
        println!("{},{}", p.csv_row(), r.config_name);
        return Ok(EXIT_OK);
    }
    println!("{p}");
    println!("recommended {} ({:?})", r.config_name, r.triggered);
    if let Some(h) = r.lp_hint {
        println!("lp_hint {h}");
    }
    println!("hardness_flag {}", r.hardness_flag);
    Ok(EXIT_OK)
}

fn cmd_generate(g: GenerateCmd) -> Result<i32> {
    let (gen, output) = match g {
        GenerateCmd::Blg { n, avg, deg_var, min_deg, max_deg, seed, output } => {
            (generate_blg(&BlgParams { n, avg_degree: avg, deg_var, min_deg, max_deg, seed })?, output)
        }
        GenerateCmd::Geo { n, m, wraparound, seed, output } => {
            (generate_geometric(&GeoParams { n, m, wraparound, seed })?, output)
        }
    };
    eprintln!("{}: n={} m={}", gen.name, gen.graph.n(), gen.graph.m());
    write_output(output.as_deref(), &gen.to_edge_list())?;
    Ok(EXIT_OK)
}

/// The bit string is the last `solution` line, else the last non-empty line.
fn extract_bits(text: &str) -> &str {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    lines
        .iter()
        .rev()
        .find_map(|l| l.strip_prefix("solution").map(str::trim))
        .or_else(|| lines.last().copied())
        .unwrap_or("")
}

fn cmd_verify(a: VerifyArgs) -> Result<i32> {
    let g = load_graph(&a.graph, a.format)?;
    let text = read_input(&a.solution)?;
    let v = verify_solution(&g, extract_bits(&text))?;
    if v.valid {
        println!("valid size {}", v.size);
        Ok(EXIT_OK)
    } else {
        println!("invalid: some edge is uncovered (size {})", v.size);
        Ok(EXIT_INVALID_SOLUTION)
    }
}

fn cmd_complement(a: ComplementArgs) -> Result<i32> {
    let g = complement(&load_graph(&a.input, a.format)?);
    let text = if a.dimacs { write_dimacs(&g) } else { write_edge_list(&g) };
    write_output(a.output.as_deref(), &text)?;
    Ok(EXIT_OK)
}

/// One row of the runtime landscape.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LandscapeRow {
    pub instance: String,
    #[serde(default)]
    pub spread: Option<f64>,
    #[serde(default)]
    pub nad: Option<f64>,
    pub config: String,
    pub runtime: f64,
    #[serde(default)]
    pub value: Option<usize>,
    #[serde(default)]
    pub branches: Option<u64>,
    #[serde(default)]
    pub timeout: bool,
}

impl LandscapeRow {
    /// Runtime with timeouts counted as infinite.
    pub fn effective_runtime(&self) -> f64 {
        if self.timeout {
            f64::INFINITY
        } else {
            self.runtime
        }
    }
}

pub fn run_batch(instances: &[PathBuf], configs: &[String], timeout: Duration, workers: usize) -> Result<Vec<LandscapeRow>> {
    let mut presets = Vec::new();
    for c in configs {
        let (mut cfg, warn) = ReductionConfig::preset(c)?;
        if let Some(w) = warn {
            eprintln!("warning: {w}");
        }
        cfg.timeout = timeout;
        presets.push((c.clone(), cfg));
    }
    let graphs: Vec<(String, Graph)> = instances
        .iter()
        .map(|p| Ok((p.display().to_string(), load_graph(p, Format::Auto)?)))
        .collect::<Result<_>>()?;
    let profiles: Vec<_> = graphs.iter().map(|(_, g)| compute_profile(g, None)).collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..graphs.len()).flat_map(|i| (0..presets.len()).map(move |j| (i, j))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|&(i, j)| {
                let (name, g) = &graphs[i];
                let (cname, cfg) = &presets[j];
                let res = solve_with(g, cfg, &SolveOptions::default());
                LandscapeRow {
                    instance: name.clone(),
                    spread: Some(profiles[i].spread),
                    nad: Some(profiles[i].nad),
                    config: cname.clone(),
                    runtime: res.runtime.as_secs_f64(),
                    value: Some(res.value),
                    branches: Some(res.stats.num_branches),
                    timeout: res.status == SolveStatus::Timeout,
                }
            })
            .collect()
    });
    Ok(rows)
}

pub fn write_landscape<W: Write>(w: W, rows: &[LandscapeRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_landscape<R: Read>(r: R) -> Result<Vec<LandscapeRow>> {
    let mut rd = csv::Reader::from_reader(r);
    rd.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Per-instance competitive sets and goldilocks flags.
pub fn analyze_rows(rows: &[LandscapeRow]) -> BTreeMap<String, (BTreeSet<String>, bool)> {
    let mut table: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for r in rows {
        table.entry(r.instance.clone()).or_default().insert(r.config.clone(), r.effective_runtime());
    }
    table
        .into_iter()
        .map(|(inst, times)| {
            let vals: Vec<f64> = times.values().copied().collect();
            (inst, (competitive_set(&times), goldilocks(&vals)))
        })
        .collect()
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<i32> {
    if !a.reports.is_empty() {
        let reports: Vec<StatsReport> =
            a.reports.iter().map(|p| StatsReport::parse(&read_input(p)?)).collect::<Result<_>>()?;
        println!("reduction,usec_per_vertex_median,usec_per_vertex_geomean,percent_median,percent_geomean");
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.3}"));
        for row in efficiency_table(&reports) {
            println!(
                "{},{},{},{:.2},{:.2}",
                row.kind,
                opt(row.usec_per_vertex_median),
                opt(row.usec_per_vertex_geomean),
                row.percent_median,
                row.percent_geomean
            );
        }
        println!("# geometric means skip zero entries");
        if a.run.is_empty() && a.runtimes.is_none() {
            return Ok(EXIT_OK);
        }
    }
    let rows = if !a.run.is_empty() {
        let rows = run_batch(&a.run, &a.configs, Duration::from_secs(a.timeout), a.workers)?;
        match &a.csv_out {
            Some(p) => write_landscape(fs::File::create(p)?, &rows)?,
            None => write_landscape(io::stderr(), &rows)?,
        }
        rows
    } else if let Some(p) = &a.runtimes {
        read_landscape(read_input(p)?.as_bytes())?
    } else {
        return Err(Error::Config("analyze needs a runtime CSV, --run instances or --reports".into()));
    };
    let analysis = analyze_rows(&rows);
    println!("instance,competitive,goldilocks");
    for (inst, (set, gold)) in &analysis {
        let joined: Vec<&str> = set.iter().map(String::as_str).collect();
        println!("{inst},{},{gold}", joined.join(";"));
    }
    let collection: BTreeSet<String> = a.collection.iter().cloned().collect();
    let global = globally_competitive(analysis.values().map(|(s, _)| s), &collection);
    println!("# globally competitive {{{}}}: {global}", a.collection.join(", "));
    Ok(EXIT_OK)
}
