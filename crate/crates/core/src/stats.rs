//! Solver statistics: the per-run report, its text format, and the
//! cross-run analyses (efficiency table, competitiveness, goldilocks).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reductions::{ReductionKind, RuleCounters};

/// Counters and timers of one solve.
///
/// Rendered times have three decimals, so parsing recovers reduction and
/// bound times in whole microseconds and the runtime in whole milliseconds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsReport {
    pub num_vertices: u64,
    pub num_edges: u64,
    pub value: u64,
    pub runtime: Duration,
    pub num_branches: u64,
    pub reductions: [RuleCounters; ReductionKind::COUNT],
    /// Always zero; kept so the report layout stays complete.
    pub packing: RuleCounters,
    pub trivial_lb_count: u64,
    pub clique_lb_count: u64,
    pub lp_lb_count: u64,
    pub cycle_lb_count: u64,
    pub clique_lb_time: Duration,
    pub cycle_lb_time: Duration,
    /// Time spent on the LP bound; not part of the text report.
    pub lp_lb_time: Duration,
    pub num_leftcuts: u64,
    pub root_lb: u64,
}

const KEY_WIDTH: usize = 20;

fn line_int(out: &mut String, key: &str, v: u64) {
    writeln!(out, "{key:<KEY_WIDTH$}\t{v:>16}").unwrap();
}

fn line_float(out: &mut String, key: &str, v: f64) {
    writeln!(out, "{key:<KEY_WIDTH$}\t{v:>10.3}").unwrap();
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

impl StatsReport {
    pub fn rule(&self, kind: ReductionKind) -> &RuleCounters {
        &self.reductions[kind as usize]
    }

    fn rows(&self) -> impl Iterator<Item = (&'static str, &RuleCounters)> {
        ReductionKind::ALL
            .into_iter()
            .map(|k| (k.name(), &self.reductions[k as usize]))
            .chain(std::iter::once(("packing", &self.packing)))
    }

    /// Sums counters from a sub-solve into this report. Instance-level fields
    /// (vertices, edges, value, runtime, root bound) are left alone.
    pub fn absorb_search(&mut self, other: &StatsReport) {
        self.num_branches += other.num_branches;
        for (a, b) in self.reductions.iter_mut().zip(&other.reductions) {
            add_rule(a, b);
        }
        self.trivial_lb_count += other.trivial_lb_count;
        self.clique_lb_count += other.clique_lb_count;
        self.lp_lb_count += other.lp_lb_count;
        self.cycle_lb_count += other.cycle_lb_count;
        self.clique_lb_time += other.clique_lb_time;
        self.cycle_lb_time += other.cycle_lb_time;
        self.lp_lb_time += other.lp_lb_time;
        self.num_leftcuts += other.num_leftcuts;
    }

    /// Field-wise sum, for aggregating many runs.
    pub fn merge(&mut self, other: &StatsReport) {
        self.absorb_search(other);
        add_rule(&mut self.packing, &other.packing);
        self.num_vertices += other.num_vertices;
        self.num_edges += other.num_edges;
        self.value += other.value;
        self.runtime += other.runtime;
        self.root_lb += other.root_lb;
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        line_int(&mut out, "num_vertices", self.num_vertices);
        line_int(&mut out, "num_edges", self.num_edges);
        line_int(&mut out, "value", self.value);
        line_float(&mut out, "runtime", self.runtime.as_secs_f64());
        line_int(&mut out, "num_branches", self.num_branches);
        out.push_str("Reduction Times (ms):\n");
        for (name, r) in self.rows() {
            line_float(&mut out, &format!("{name}Time"), ms(r.time));
        }
        out.push_str("Vertices Reduced:\n");
        for (name, r) in self.rows() {
            line_int(&mut out, &format!("{name}Count"), r.vertices);
        }
        out.push_str("Effective Reduction Calls:\n");
        for (name, r) in self.rows() {
            line_int(&mut out, &format!("{name}Calls"), r.effective_calls);
        }
        out.push_str("Total Reduction Calls:\n");
        for (name, r) in self.rows() {
            line_int(&mut out, &format!("{name}AllCalls"), r.all_calls);
        }
        out.push_str("Effective Lower Bounds:\n");
        line_int(&mut out, "trivialLBCount", self.trivial_lb_count);
        line_int(&mut out, "cliqueLBCount", self.clique_lb_count);
        line_int(&mut out, "lpLBCount", self.lp_lb_count);
        line_int(&mut out, "cycleLBCount", self.cycle_lb_count);
        out.push_str("Lower Bound Times (ms):\n");
        line_float(&mut out, "cliqueLBTime", ms(self.clique_lb_time));
        line_float(&mut out, "cycleLBTime", ms(self.cycle_lb_time));
        line_int(&mut out, "num_leftcuts", self.num_leftcuts);
        line_int(&mut out, "root_lb", self.root_lb);
        out
    }

    /// Parses the output of [`StatsReport::render`].
    pub fn parse(text: &str) -> Result<StatsReport> {
        let mut values: BTreeMap<&str, &str> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.ends_with(':') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(v), None) => {
                    if values.insert(k, v).is_some() {
                        return Err(Error::Report(format!("line {}: duplicate key '{k}'", i + 1)));
                    }
                }
                _ => return Err(Error::Report(format!("line {}: expected 'key value'", i + 1))),
            }
        }
        let mut take = |key: &str| -> Result<&str> {
            values.remove(key).ok_or_else(|| Error::Report(format!("missing key '{key}'")))
        };
        let int = |s: &str, key: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Report(format!("'{key}' is not an integer: '{s}'")))
        };
        let thousandths = |s: &str, key: &str| -> Result<u64> {
            let v: f64 = s.parse().map_err(|_| Error::Report(format!("'{key}' is not a number: '{s}'")))?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Report(format!("'{key}' must be a nonnegative number")));
            }
            Ok((v * 1000.0).round() as u64)
        };
        let mut r = StatsReport::default();
        macro_rules! int_field {
            ($key:expr) => {{
                let k = $key;
                int(take(&k)?, &k)?
            }};
        }
        macro_rules! us_field {
            ($key:expr) => {{
                let k = $key;
                Duration::from_micros(thousandths(take(&k)?, &k)?)
            }};
        }
        r.num_vertices = int_field!("num_vertices");
        r.num_edges = int_field!("num_edges");
        r.value = int_field!("value");
        r.runtime = Duration::from_millis(thousandths(take("runtime")?, "runtime")?);
        r.num_branches = int_field!("num_branches");
        let names: Vec<&str> = ReductionKind::ALL.iter().map(|k| k.name()).chain(["packing"]).collect();
        for (i, name) in names.iter().enumerate() {
            let rc = RuleCounters {
                time: us_field!(format!("{name}Time")),
                vertices: int_field!(format!("{name}Count")),
                effective_calls: int_field!(format!("{name}Calls")),
                all_calls: int_field!(format!("{name}AllCalls")),
            };
            if i < ReductionKind::COUNT {
                r.reductions[i] = rc;
            } else {
                r.packing = rc;
            }
        }
        r.trivial_lb_count = int_field!("trivialLBCount");
        r.clique_lb_count = int_field!("cliqueLBCount");
        r.lp_lb_count = int_field!("lpLBCount");
        r.cycle_lb_count = int_field!("cycleLBCount");
        r.clique_lb_time = us_field!("cliqueLBTime");
        r.cycle_lb_time = us_field!("cycleLBTime");
        r.num_leftcuts = int_field!("num_leftcuts");
        r.root_lb = int_field!("root_lb");
        if let Some(k) = values.keys().next() {
            return Err(Error::Report(format!("unknown key '{k}'")));
        }
        Ok(r)
    }

    /// Consistency rules every report must satisfy.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        for (name, r) in self.rows() {
            if r.effective_calls > r.all_calls {
                return Err(format!("{name}: more effective calls than calls"));
            }
            if (r.vertices > 0) != (r.effective_calls > 0) {
                return Err(format!("{name}: reduced vertices without an effective call"));
            }
            if r.vertices < r.effective_calls {
                return Err(format!("{name}: an effective call reduced nothing"));
            }
        }
        if self.packing != RuleCounters::default() {
            return Err("packing counters must stay zero".into());
        }
        Ok(())
    }
}

fn add_rule(a: &mut RuleCounters, b: &RuleCounters) {
    a.time += b.time;
    a.vertices += b.vertices;
    a.effective_calls += b.effective_calls;
    a.all_calls += b.all_calls;
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 { values[n / 2] } else { (values[n / 2 - 1] + values[n / 2]) / 2.0 })
}

/// Geometric mean of the positive entries; zeros are skipped.
fn geomean(values: &[f64]) -> Option<f64> {
    let pos: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    if pos.is_empty() {
        return None;
    }
    Some((pos.iter().map(|v| v.ln()).sum::<f64>() / pos.len() as f64).exp())
}

/// Efficiency and effectiveness of one rule across runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffRow {
    pub kind: &'static str,
    /// Microseconds per reduced vertex; `None` when the rule never reduced.
    pub usec_per_vertex_median: Option<f64>,
    pub usec_per_vertex_geomean: Option<f64>,
    /// Share of all reduced vertices, in percent.
    pub percent_median: f64,
    pub percent_geomean: f64,
}

/// One row per reduction rule, most effective first.
pub fn efficiency_table(reports: &[StatsReport]) -> Vec<EffRow> {
    let mut rows: Vec<EffRow> = ReductionKind::ALL
        .into_iter()
        .map(|kind| {
            let mut ratios = Vec::new();
            let mut percents = Vec::new();
            for r in reports {
                let c = r.rule(kind);
                let total: u64 = r.reductions.iter().map(|x| x.vertices).sum();
                if c.vertices > 0 {
                    ratios.push(1000.0 * ms(c.time) / c.vertices as f64);
                }
                percents.push(if total == 0 { 0.0 } else { 100.0 * c.vertices as f64 / total as f64 });
            }
            EffRow {
                kind: kind.name(),
                usec_per_vertex_median: median(&mut ratios.clone()),
                usec_per_vertex_geomean: geomean(&ratios),
                percent_median: median(&mut percents.clone()).unwrap_or(0.0),
                percent_geomean: geomean(&percents).unwrap_or(0.0),
            }
        })
        .collect();
    rows.sort_by(|a, b| b.percent_geomean.total_cmp(&a.percent_geomean));
    rows
}

/// Configs whose runtime is at most twice `reference_min`.
pub fn competitive_set_with_min(runtimes: &BTreeMap<String, f64>, reference_min: f64) -> BTreeSet<String> {
    if !reference_min.is_finite() {
        return BTreeSet::new();
    }
    runtimes.iter().filter(|&(_, &t)| t <= 2.0 * reference_min).map(|(c, _)| c.clone()).collect()
}

/// Configs within a factor of two of the fastest. Timeouts are `+∞`.
pub fn competitive_set(runtimes: &BTreeMap<String, f64>) -> BTreeSet<String> {
    let min = runtimes.values().copied().fold(f64::INFINITY, f64::min);
    competitive_set_with_min(runtimes, min)
}

/// True when every instance has a member of `collection` in its
/// competitive set.
pub fn globally_competitive<'a>(
    sets: impl IntoIterator<Item = &'a BTreeSet<String>>,
    collection: &BTreeSet<String>,
) -> bool {
    sets.into_iter().all(|s| s.iter().any(|c| collection.contains(c)))
}

/// [`globally_competitive`] over a table of instance runtimes.
pub fn globally_competitive_table(
    table: &BTreeMap<String, BTreeMap<String, f64>>,
    collection: &BTreeSet<String>,
) -> bool {
    let sets: Vec<BTreeSet<String>> = table.values().map(competitive_set).collect();
    globally_competitive(&sets, collection)
}

/// Some config needed more than 2 s and some config finished under 600 s.
pub fn goldilocks(runtimes: &[f64]) -> bool {
    let max = runtimes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = runtimes.iter().copied().fold(f64::INFINITY, f64::min);
    max > 2.0 && min < 600.0
}
