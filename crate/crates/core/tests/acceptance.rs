//! Acceptance criteria 1 to 10. Prints one pass/fail line per criterion and
//! exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use common::{double_cover, oracle_lp2, oracle_matching, oracle_size, random_graph, rule_firings};
use vc_reduce::bounds::{clique_lower_bound, cycle_lower_bound, lp_lower_bound, solve_lp_relaxation};
use vc_reduce::config::{ReductionConfig, PRESETS};
use vc_reduce::generators::{generate_blg, generate_geometric, BlgParams, GeoParams};
use vc_reduce::graph::{DegreeStats, Graph};
use vc_reduce::profiler::{compute_profile, nad, nad_from, recommend, spread_of};
use vc_reduce::reductions::ReductionKind;
use vc_reduce::solver::{solve_with, SolveOptions, SolveStatus};
use vc_reduce::state::SolverState;
use vc_reduce::stats::{competitive_set, competitive_set_with_min, globally_competitive, StatsReport};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

static SUITE1_INCONSISTENT: OnceLock<usize> = OnceLock::new();

const EXCEPTIONS: [&str; 12] = [
    "ba_512_008_3",
    "ba_512_008_5",
    "ba_999_008_5",
    "blg-200_020_16_05d020",
    "blg-200_040_16_05d060",
    "blg-200_120_20_07d199",
    "blg-200_160_01_03d199",
    "blg-250_050_16_05d100",
    "blg-250_200_16_05d225",
    "DSJR500.1",
    "DSJR500.5",
    "gka_16",
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1008 graphs: n cycles through 4..=14, p through 0.1..=0.9.
fn suite1_graphs() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..1008)
        .map(|i| {
            let n = 4 + i % 11;
            let p = 0.1 * (1 + (i / 11) % 9) as f64;
            random_graph(n, p, &mut rng)
        })
        .collect()
}

fn criterion1() -> Check {
    let start = Instant::now();
    let graphs = suite1_graphs();
    let mut configs: Vec<(String, ReductionConfig)> = Vec::new();
    for p in PRESETS {
        let (c, _) = ReductionConfig::preset(p).unwrap();
        let mut deep = c.clone();
        deep.brute_force_threshold = 0;
        deep.shrink = 0.0;
        configs.push((p.to_string(), c));
        configs.push((format!("{p}/no-brute-force"), deep));
    }
    let mut mismatches = Vec::new();
    let mut inconsistent = 0;
    let mut solves = 0;
    for (gi, g) in graphs.iter().enumerate() {
        let opt = oracle_size(g);
        for (name, cfg) in &configs {
            let r = solve_with(g, cfg, &SolveOptions::default());
            solves += 1;
            let size = r.cover.iter().filter(|&&b| b).count();
            if r.value != opt || size != opt || !g.is_vertex_cover(&r.cover) || r.status != SolveStatus::Optimal {
                mismatches.push(format!("graph {gi} config {name}: value {} cover {size} optimum {opt}", r.value));
            }
            if r.stats.check_consistency().is_err() {
                inconsistent += 1;
            }
        }
    }
    SUITE1_INCONSISTENT.set(inconsistent).ok();
    let secs = start.elapsed().as_secs_f64();
    ensure(mismatches.is_empty(), || format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]))?;
    ensure(secs < 120.0, || format!("suite took {secs:.1} s"))?;
    Ok(format!("{} graphs x {} configs = {solves} solves, 0 mismatches, {secs:.1} s", graphs.len(), configs.len()))
}

fn criterion2() -> Check {
    let mut parts = Vec::new();
    for kind in ReductionKind::ALL {
        let f = rule_firings(kind, 200, 0xacce55 + kind as u64);
        ensure(f.violations.is_empty(), || f.violations[0].clone())?;
        ensure(f.fired >= 200, || format!("{} fired {} times", kind.name(), f.fired))?;
        parts.push(format!("{} {}/{}", kind.name(), f.fired, f.attempts));
    }
    Ok(format!("firings/attempts: {}, 0 violations", parts.join(", ")))
}

fn criterion3() -> Check {
    let mut checked = 0;
    let mut lp_exact = 0;
    for (gi, g) in suite1_graphs().iter().enumerate() {
        let opt = oracle_size(g);
        let state = SolverState::new(g);
        let clique = clique_lower_bound(&state);
        let lp = solve_lp_relaxation(&state);
        let lpb = lp_lower_bound(&lp);
        let cycle = cycle_lower_bound(&state, &lp);
        ensure(clique <= opt, || format!("graph {gi}: clique bound {clique} > {opt}"))?;
        ensure(lpb <= opt, || format!("graph {gi}: lp bound {lpb} > {opt}"))?;
        ensure(cycle <= opt, || format!("graph {gi}: cycle bound {cycle} > {opt}"))?;
        ensure(cycle >= lpb, || format!("graph {gi}: cycle bound {cycle} < lp bound {lpb}"))?;
        let matching = oracle_matching(&double_cover(g), g.n());
        ensure(lp.value2 == matching, || format!("graph {gi}: 2*LP {} != matching {matching}", lp.value2))?;
        if g.n() <= 10 {
            let lp2 = oracle_lp2(g);
            ensure(lp.value2 == lp2, || format!("graph {gi}: 2*LP {} != enumerated {lp2}", lp.value2))?;
            lp_exact += 1;
        }
        checked += 1;
    }
    Ok(format!("{checked} graphs, clique/lp/cycle <= optimum, cycle >= lp; 2*LP = matching everywhere, = enumeration on {lp_exact}"))
}

fn criterion4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let mut fixed_total = 0;
    for i in 0..2000 {
        let n = rng.gen_range(2..=12);
        let g = random_graph(n, rng.gen_range(0.05..0.8), &mut rng);
        let lp = solve_lp_relaxation(&SolverState::new(&g));
        let ones = lp.ones();
        let halves: Vec<usize> = lp.iter().filter(|&(_, x)| x == 1).map(|(v, _)| v).collect();
        let rest = oracle_size(&g.induced(&halves));
        let opt = oracle_size(&g);
        ensure(ones + rest == opt, || format!("graph {i}: {ones} forced + {rest} != {opt}"))?;
        fixed_total += n - halves.len();
    }
    Ok(format!("2000 graphs with n <= 12, {fixed_total} integral vertices fixed, 0 violations"))
}

#[derive(Debug, Deserialize)]
struct Row {
    #[allow(dead_code)]
    source: String,
    instance: String,
    spread: f64,
    nad: f64,
    #[serde(rename = "None")]
    none: String,
    #[serde(rename = "DF2")]
    df2: String,
    r0_l1: String,
    #[serde(rename = "r0_l1+U")]
    r0_l1_u: String,
    r2_l4: String,
    min: f64,
    bold: String,
}

impl Row {
    fn runtimes(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for (name, v) in [("None", &self.none), ("DF2", &self.df2), ("r0_l1", &self.r0_l1), ("r0_l1+U", &self.r0_l1_u), ("r2_l4", &self.r2_l4)] {
            match v.as_str() {
                "" => {}
                "t/o" => {
                    m.insert(name.to_string(), f64::INFINITY);
                }
                t => {
                    m.insert(name.to_string(), t.parse().expect("runtime"));
                }
            }
        }
        m
    }

    fn bold_set(&self) -> BTreeSet<String> {
        self.bold.split(';').filter(|s| !s.is_empty()).map(str::to_string).collect()
    }

    fn is_exception(&self) -> bool {
        EXCEPTIONS.contains(&self.instance.as_str())
    }
}

fn corpus() -> Vec<Row> {
    let mut rd = csv::Reader::from_path(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/landscape_rows.csv")).unwrap();
    rd.deserialize().map(|r| r.unwrap()).collect()
}

/// Degrees with the given sum whose 5th and 95th nearest-rank percentiles are
/// `bottom` and `top`. Ranks strictly outside the percentile positions absorb
/// the slack, bounded by 1 and `n - 1`.
fn degree_multiset(n: usize, sum: usize, bottom: usize, top: usize) -> Option<Vec<usize>> {
    let kb = (5 * n).div_ceil(100);
    let kt = (95 * n).div_ceil(100);
    let mut d = vec![bottom; n];
    for x in d.iter_mut().skip(kt - 1) {
        *x = top;
    }
    let mut total: usize = d.iter().sum();
    for x in d.iter_mut().take(kb - 1) {
        let cut = (*x - 1).min(total.saturating_sub(sum));
        *x -= cut;
        total -= cut;
    }
    for (i, x) in d.iter_mut().enumerate() {
        let cap = if i + 1 < kt { top } else if i + 1 > kt { n - 1 } else { continue };
        if i < kb {
            continue;
        }
        let add = cap.saturating_sub(*x).min(sum.saturating_sub(total));
        *x += add;
        total += add;
    }
    (total == sum).then_some(d)
}

fn name_field(name: &str, idx: usize) -> Option<usize> {
    name.split(['-', '_', 'd']).filter(|s| !s.is_empty()).filter_map(|s| s.parse().ok()).nth(idx)
}

fn criterion5() -> Check {
    ensure(nad(&Graph::complete(200)) == 199.0, || "nad(K200) != 199".into())?;
    let exceptions_stats: BTreeMap<&str, (usize, usize, usize, usize)> = [
        ("ba_512_008_3", (512, 2032, 4, 22)),
        ("ba_512_008_5", (512, 2032, 4, 21)),
        ("ba_999_008_5", (999, 3980, 4, 21)),
        ("blg-200_020_16_05d020", (200, 2000, 20, 20)),
        ("blg-200_040_16_05d060", (200, 4000, 5, 60)),
        ("blg-200_120_20_07d199", (200, 12000, 73, 199)),
        ("blg-200_160_01_03d199", (200, 16000, 125, 199)),
        ("blg-250_050_16_05d100", (250, 6250, 5, 100)),
        ("blg-250_200_16_05d225", (250, 25000, 5, 225)),
        ("DSJR500.1", (500, 3555, 7, 21)),
        ("DSJR500.5", (500, 58862, 142, 363)),
        ("gka_16", (180, 8016, 88, 90)),
    ]
    .into_iter()
    .collect();
    let mut checked = 0;
    let mut inconsistent = Vec::new();
    let mut seen = BTreeSet::new();
    for row in corpus() {
        if !seen.insert(row.instance.clone()) {
            continue;
        }
        // Rows with printed degree statistics take their edge count and bottom
        // value from there; blg rows derive both from the instance name.
        let (n, m, prefer_b) = if let Some(&(n, m, b, t)) = exceptions_stats.get(row.instance.as_str()) {
            if (t as f64 / b as f64 - row.spread).abs() > 0.1 + 1e-9 {
                inconsistent.push(format!("{} ({t}/{b} vs {})", row.instance, row.spread));
            }
            (n, m, b)
        } else if row.instance.starts_with("blg-") {
            let n = name_field(&row.instance, 0).unwrap();
            let avg = name_field(&row.instance, 1).unwrap();
            let min = name_field(&row.instance, 3).unwrap().max(1);
            // Names carry the average degree rounded to an integer; take the
            // edge count nearest the named one whose nad matches the table.
            let m0 = n * avg / 2;
            let m = (m0.saturating_sub(n / 2)..=m0 + n / 2)
                .filter(|&m| (nad_from(n, m) - row.nad).abs() <= 0.05 + 1e-9)
                .min_by_key(|&m| m.abs_diff(m0))
                .ok_or_else(|| format!("{}: no edge count near {m0} gives nad {}", row.instance, row.nad))?;
            (n, m, min)
        } else {
            continue;
        };
        // Choose the bottom value closest to the preferred one whose top realizes the spread.
        let mut best: Option<(f64, usize, usize, usize)> = None;
        for b in 1..n {
            let centre = (row.spread * b as f64).round() as usize;
            for t in centre.max(b)..=centre + 1 {
                if t >= n || degree_multiset(n, 2 * m, b, t).is_none() {
                    continue;
                }
                let key = ((t as f64 / b as f64 - row.spread).abs(), b.abs_diff(prefer_b), b, t);
                if best.is_none_or(|bk| (key.0 > 0.05, key.1, key.0) < (bk.0 > 0.05, bk.1, bk.0)) {
                    best = Some(key);
                }
            }
        }
        let (_, _, bottom, top) = best.ok_or_else(|| format!("{}: no multiset", row.instance))?;
        let degs = degree_multiset(n, 2 * m, bottom, top).ok_or_else(|| format!("{}: infeasible multiset", row.instance))?;
        let stats = DegreeStats::from_degrees(&degs).unwrap();
        let spread = spread_of(&stats);
        let nad_v = nad_from(n, degs.iter().sum::<usize>() / 2);
        ensure((nad_v - row.nad).abs() <= 0.05 + 1e-9, || format!("{}: nad {nad_v:.3} vs {}", row.instance, row.nad))?;
        ensure((spread - row.spread).abs() <= 0.1 + 1e-9, || format!("{}: spread {spread:.3} vs {}", row.instance, row.spread))?;
        checked += 1;
    }
    let note = if inconsistent.is_empty() {
        String::new()
    } else {
        format!("; printed bottom/top disagree with printed spread for {}", inconsistent.join(", "))
    };
    Ok(format!("nad(K200) = 199; {checked} rows reproduced (nad to the printed digit, spread within 0.1){note}"))
}

fn criterion6() -> Check {
    let rows = corpus();
    let mut passed = 0;
    let mut failing_exceptions = Vec::new();
    for row in &rows {
        let rec = recommend(row.spread, row.nad, row.nad, None);
        let ok = row.bold_set().contains(rec.config_name);
        if row.is_exception() {
            if !ok {
                failing_exceptions.push(row.instance.clone());
            }
            continue;
        }
        ensure(ok, || format!("{}: recommended {} not in {{{}}}", row.instance, rec.config_name, row.bold))?;
        passed += 1;
    }
    failing_exceptions.sort();
    failing_exceptions.dedup();
    Ok(format!(
        "{passed} rows pass; {} listed exceptions exempt ({} of them also miss here)",
        EXCEPTIONS.len(),
        failing_exceptions.len()
    ))
}

fn criterion7() -> Check {
    let rows = corpus();
    for row in &rows {
        let computed = competitive_set_with_min(&row.runtimes(), row.min);
        ensure(computed == row.bold_set(), || format!("{}: computed {computed:?} vs bold {}", row.instance, row.bold))?;
    }
    let target = rows.iter().find(|r| r.instance == "blg-200_040_16_05d140").unwrap();
    let set = competitive_set_with_min(&target.runtimes(), 0.37);
    let expect: BTreeSet<String> = ["DF2", "r0_l1"].iter().map(|s| s.to_string()).collect();
    ensure(set == expect, || format!("blg-200_040_16_05d140 competitive {set:?}"))?;
    let sets: Vec<BTreeSet<String>> = rows.iter().filter(|r| !r.is_exception()).map(Row::bold_set).collect();
    let collection: BTreeSet<String> = ["None", "DF2", "r0_l1"].iter().map(|s| s.to_string()).collect();
    ensure(globally_competitive(&sets, &collection), || "collection not globally competitive".into())?;
    let shown_only = competitive_set(&target.runtimes());
    Ok(format!(
        "{} rows match their marked sets; blg-200_040_16_05d140 -> {{DF2, r0_l1}} (against shown columns only {shown_only:?}); {{None, DF2, r0_l1}} globally competitive over {} rows",
        rows.len(),
        sets.len()
    ))
}

fn criterion8() -> Check {
    let blg_sets = [
        (200, 5.0, 0.0, None, None),
        (200, 40.0, 16.0, Some(5), Some(140)),
        (250, 50.0, 16.0, Some(5), Some(100)),
        (200, 10.0, 1.0, Some(5), Some(20)),
        (150, 7.0, 0.5, None, None),
    ];
    let mut generated = 0;
    for (n, avg, dv, min, max) in blg_sets {
        for seed in 0..20 {
            let p = BlgParams { n, avg_degree: avg, deg_var: dv, min_deg: min, max_deg: max, seed };
            let a = generate_blg(&p).map_err(|e| format!("{}: {e}", p.name()))?;
            let g = &a.graph;
            ensure(g.is_connected(), || format!("{} seed {seed} disconnected", p.name()))?;
            ensure(g.m() == p.target_edges(), || format!("{} seed {seed}: {} edges", p.name(), g.m()))?;
            let d = g.degrees();
            let (lo, hi) = (*d.iter().min().unwrap(), *d.iter().max().unwrap());
            ensure(lo >= min.unwrap_or(0) && hi <= max.unwrap_or(n - 1), || format!("{} seed {seed}: degrees {lo}..{hi}", p.name()))?;
            if dv == 0.0 {
                ensure(hi - lo <= 2, || format!("{} seed {seed}: degree range {lo}..{hi}", p.name()))?;
            }
            ensure(a.to_edge_list() == generate_blg(&p).unwrap().to_edge_list(), || "blg not deterministic".into())?;
            generated += 1;
        }
    }
    let mut geo_counts = Vec::new();
    for seed in 0..20 {
        let plain = GeoParams { n: 512, m: 4096, wraparound: false, seed };
        let wrap = GeoParams { wraparound: true, ..plain.clone() };
        let a = generate_geometric(&plain).unwrap();
        let b = generate_geometric(&wrap).unwrap();
        ensure(a.graph.is_connected() && b.graph.is_connected(), || format!("geo seed {seed} disconnected"))?;
        ensure((3000..=4500).contains(&a.graph.m()), || format!("geo seed {seed}: {} edges", a.graph.m()))?;
        ensure(b.graph.m() >= a.graph.m(), || format!("geo seed {seed}: wraparound has fewer edges"))?;
        ensure(a.to_edge_list() == generate_geometric(&plain).unwrap().to_edge_list(), || "geo not deterministic".into())?;
        geo_counts.push(a.graph.m());
        generated += 2;
    }
    let (lo, hi) = (geo_counts.iter().min().unwrap(), geo_counts.iter().max().unwrap());
    Ok(format!("{generated} graphs connected, exact blg edge counts and degree bounds, deterministic; geo n=512 m=4096 gives {lo}..{hi} edges"))
}

fn criterion9() -> Check {
    let golden = include_str!("fixtures/table8.txt");
    let report = StatsReport::parse(golden).map_err(|e| e.to_string())?;
    let rendered = report.render();
    ensure(rendered == golden, || {
        let line = rendered.lines().zip(golden.lines()).position(|(a, b)| a != b).unwrap_or(0);
        format!("render differs from golden at line {}", line + 1)
    })?;
    report.check_consistency()?;
    let inconsistent = SUITE1_INCONSISTENT.get().copied().ok_or("criterion 1 did not record consistency")?;
    ensure(inconsistent == 0, || format!("{inconsistent} suite-1 reports violate counter consistency"))?;
    Ok(format!("golden layout reproduced byte for byte ({} lines); counters consistent after every suite-1 solve", golden.lines().count()))
}

fn criterion10() -> Check {
    let p = BlgParams { n: 200, avg_degree: 40.0, deg_var: 16.0, min_deg: Some(5), max_deg: Some(140), seed: 1 };
    let g = generate_blg(&p).map_err(|e| e.to_string())?.graph;
    let prof = compute_profile(&g, None).map_err(|e| e.to_string())?;
    let (mut df2, _) = ReductionConfig::preset("DF2").unwrap();
    df2.timeout = Duration::from_secs(600);
    let a = solve_with(&g, &df2, &SolveOptions::default());
    ensure(a.status == SolveStatus::Optimal, || "DF2 did not finish".into())?;
    let (mut none, _) = ReductionConfig::preset("None").unwrap();
    none.timeout = Duration::from_secs(600);
    let cap = a.stats.num_branches + 1;
    let b = solve_with(&g, &none, &SolveOptions { max_branches: Some(cap), ..Default::default() });
    ensure(b.stats.num_branches > a.stats.num_branches, || {
        format!("None used {} branches, DF2 {}", b.stats.num_branches, a.stats.num_branches)
    })?;
    let none_note = match b.status {
        SolveStatus::Optimal => format!("None finished with {} branches", b.stats.num_branches),
        _ => format!("None passed the cap of {cap} branches"),
    };
    Ok(format!(
        "generated {} (spread {:.1}, nad {:.1}): DF2 {} branches, value {}; {none_note}. Absolute runtimes, the large-corpus and 24-hour results, and corpus-level medians are out of scope",
        p.name(),
        prof.spread,
        prof.nad,
        a.stats.num_branches,
        a.value
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("oracle exactness", criterion1),
        ("per-rule soundness", criterion2),
        ("bounds validity", criterion3),
        ("LP persistency", criterion4),
        ("measures", criterion5),
        ("recommender fidelity", criterion6),
        ("competitiveness math", criterion7),
        ("generators", criterion8),
        ("stats format", criterion9),
        ("directional smoke check", criterion10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS [{name}] ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{name}] ({secs:.1} s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
