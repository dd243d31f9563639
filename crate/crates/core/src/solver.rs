//! Branch-and-reduce driver.
//!
//! One [`SolverState`] is shared by the whole search; children are explored
//! inside saved frames and rolled back afterwards. Disconnected remainders and
//! remainders below the shrink fraction are handed to fresh solvers on
//! compacted copies, small components to an exhaustive bitmask search.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{clique_lower_bound, cycle_lower_bound, lp_lower_bound, solve_lp_relaxation, LowerBoundKind};
use crate::config::{Branching, ReductionConfig};
use crate::graph::Graph;
use crate::reductions::{unfold_solution, ReduceStatus, Reducer};
use crate::state::SolverState;
use crate::stats::StatsReport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// 0 silent, 1 branching and decomposition, 2 adds per-node reduction
    /// summaries, 3 adds per-rule detail.
    pub debug: u8,
    /// 0 none, 1 one line per improved cover, 2 JSON lines with solutions.
    pub trace: u8,
    /// Suppress progress messages.
    pub quiet: bool,
    /// Process the root node only.
    pub root_only: bool,
    /// Stop after this many branchings.
    pub max_branches: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { debug: 0, trace: 0, quiet: true, root_only: false, max_branches: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    /// The time limit hit before optimality was proven.
    Timeout,
    /// Stopped early by the root-only or branch-cap options.
    Incomplete,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub value: usize,
    /// Cover flags indexed by internal vertex id.
    pub cover: Vec<bool>,
    pub status: SolveStatus,
    pub stats: StatsReport,
    pub runtime: Duration,
    /// Every incumbent value in the order found.
    pub incumbent_trace: Vec<usize>,
}

impl SolveResult {
    /// Bit string indexed by external label, `_` for labels not in the graph.
    pub fn solution_string(&self, g: &Graph) -> String {
        solution_string(g, &self.cover)
    }
}

pub fn solution_string(g: &Graph, cover: &[bool]) -> String {
    let len = g.labels().iter().max().map_or(0, |&m| m as usize + 1);
    let mut out = vec![b'_'; len];
    for (v, &label) in g.labels().iter().enumerate() {
        out[label as usize] = if cover[v] { b'1' } else { b'0' };
    }
    String::from_utf8(out).expect("ascii")
}

/// Greedy cover: repeatedly takes a maximum-degree vertex (smallest id on
/// ties) until no edge is left.
pub fn initial_upper_bound(g: &Graph) -> (usize, Vec<bool>) {
    let mut deg = g.degrees();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = (0..g.n()).map(|v| (deg[v], Reverse(v))).collect();
    let mut cover = vec![false; g.n()];
    let mut size = 0;
    while let Some((d, Reverse(v))) = heap.pop() {
        if cover[v] || d != deg[v] {
            continue;
        }
        if d == 0 {
            break;
        }
        cover[v] = true;
        size += 1;
        for &u in g.neighbors(v) {
            if !cover[u] {
                deg[u] -= 1;
                heap.push((deg[u], Reverse(u)));
            }
        }
    }
    (size, cover)
}

/// Picks the branching vertex among the undecided ones.
pub fn select_branching_vertex<R: Rng>(state: &SolverState, rule: Branching, rng: &mut R) -> usize {
    let it = state.undecided_vertices();
    match rule {
        Branching::MaxDeg => it.max_by_key(|&v| (state.degree(v), Reverse(v))),
        Branching::MinDeg => it.min_by_key(|&v| (state.degree(v), v)),
        Branching::Random => {
            let all: Vec<usize> = it.collect();
            (!all.is_empty()).then(|| all[rng.gen_range(0..all.len())])
        }
    }
    .expect("no undecided vertex to branch on")
}

/// Exhaustive search over at most 64 vertices given as neighbor bitmasks.
/// Returns the smallest cover strictly below `bound`, if any.
fn mvc_bitmask(adj: &[u64], bound: usize) -> Option<(usize, u64)> {
    fn rec(adj: &[u64], alive: u64, size: usize, cover: u64, best: &mut (usize, u64)) {
        if size >= best.0 {
            return;
        }
        let mut pick = None;
        let mut max_d = 0;
        let mut edges2 = 0;
        let mut bits = alive;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let d = (adj[v] & alive).count_ones();
            edges2 += d;
            if d > max_d {
                max_d = d;
                pick = Some(v);
            }
        }
        let Some(v) = pick else {
            *best = (size, cover);
            return;
        };
        if max_d == 1 {
            // a perfect matching on the remaining edges: one endpoint each
            let mut c = cover;
            let mut bits = alive;
            while bits != 0 {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let nb = adj[u] & alive;
                if nb != 0 && c & nb == 0 {
                    c |= 1 << u;
                }
            }
            let s = size + edges2 as usize / 2;
            if s < best.0 {
                *best = (s, c);
            }
            return;
        }
        let bit = 1u64 << v;
        rec(adj, alive & !bit, size + 1, cover | bit, best);
        let nb = adj[v] & alive;
        rec(adj, alive & !(bit | nb), size + nb.count_ones() as usize, cover | nb, best);
    }
    assert!(adj.len() <= 64, "bitmask search handles at most 64 vertices");
    let alive = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    let mut best = (bound, 0);
    rec(adj, alive, 0, 0, &mut best);
    (best.0 < bound).then_some(best)
}

fn masks_of(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u)).collect()
}

/// Exact minimum cover of a graph with at most 64 vertices.
pub fn brute_force_mvc(g: &Graph) -> (usize, Vec<bool>) {
    let (size, mask) = mvc_bitmask(&masks_of(g), g.n() + 1).expect("every vertex set is a cover");
    (size, (0..g.n()).map(|v| mask >> v & 1 == 1).collect())
}

struct Search<'a> {
    config: &'a ReductionConfig,
    opts: SolveOptions,
    state: SolverState,
    reducer: Reducer,
    stats: StatsReport,
    best: usize,
    best_cover: Option<Vec<bool>>,
    incumbent_trace: Vec<usize>,
    start: Instant,
    deadline: Instant,
    timed_out: bool,
    stopped_early: bool,
    rng: ChaCha8Rng,
    depth: usize,
    root_lb: Option<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &Graph, config: &'a ReductionConfig, opts: SolveOptions, start: Instant, deadline: Instant) -> Self {
        Search {
            config,
            opts,
            state: SolverState::new(g),
            reducer: Reducer::new(),
            stats: StatsReport { num_vertices: g.n() as u64, num_edges: g.m() as u64, ..Default::default() },
            best: usize::MAX,
            best_cover: None,
            incumbent_trace: Vec::new(),
            start,
            deadline,
            timed_out: false,
            stopped_early: false,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            depth: 0,
            root_lb: None,
        }
    }

    fn stopped(&self) -> bool {
        self.timed_out || self.stopped_early
    }

    fn debug(&self, level: u8, msg: impl FnOnce() -> String) {
        if self.opts.debug >= level {
            eprintln!("[d{level}] {:indent$}{}", "", msg(), indent = self.depth.min(40));
        }
    }

    /// Searches for a cover smaller than `bound` (or any cover when `None`,
    /// starting from the greedy one).
    fn run(&mut self, g: &Graph, bound: Option<usize>) {
        let (ub, cover) = initial_upper_bound(g);
        match bound {
            Some(b) if b <= ub => self.best = b,
            _ => {
                self.best = ub;
                self.best_cover = Some(cover);
                self.incumbent_trace.push(ub);
                self.announce();
            }
        }
        self.search(false);
        for (acc, c) in self.stats.reductions.iter_mut().zip(self.reducer.counters.iter()) {
            acc.time += c.time;
            acc.vertices += c.vertices;
            acc.effective_calls += c.effective_calls;
            acc.all_calls += c.all_calls;
        }
    }

    fn announce(&self) {
        if !self.opts.quiet {
            eprintln!("c improved cover {} after {:.3} s", self.best, self.start.elapsed().as_secs_f64());
        }
        match self.opts.trace {
            0 => {}
            1 => eprintln!("trace incumbent {} branches {}", self.best, self.stats.num_branches),
            _ => {
                let bits: String = self
                    .best_cover
                    .as_ref()
                    .map(|c| c.iter().map(|&b| if b { '1' } else { '0' }).collect())
                    .unwrap_or_default();
                let line = json!({
                    "event": "incumbent",
                    "value": self.best,
                    "branches": self.stats.num_branches,
                    "elapsed_ms": self.start.elapsed().as_secs_f64() * 1000.0,
                    "solution": bits,
                });
                eprintln!("{line}");
            }
        }
    }

    fn record_incumbent(&mut self) {
        debug_assert_eq!(self.state.undecided(), 0);
        if self.state.cover_count() >= self.best {
            return;
        }
        let mut cover = self.state.cover_flags();
        unfold_solution(self.state.ledger(), &mut cover).expect("ledger references live vertices");
        cover.truncate(self.state.base_n());
        debug_assert_eq!(cover.iter().filter(|&&b| b).count(), self.state.cover_count());
        self.best = self.state.cover_count();
        self.best_cover = Some(cover);
        self.incumbent_trace.push(self.best);
        self.announce();
    }

    fn search(&mut self, is_left: bool) {
        if self.stopped() {
            return;
        }
        if self.state.cover_count() >= self.best {
            self.stats.trivial_lb_count += 1;
            if is_left {
                self.stats.num_leftcuts += 1;
            }
            return;
        }
        if self.process_node() {
            if self.depth == 0 {
                self.root_lb = Some(self.best);
            }
            return;
        }
        let (lb, kind) = self.lower_bound();
        let total = self.state.cover_count() + lb;
        if self.depth == 0 {
            self.root_lb = Some(total);
        }
        if total >= self.best {
            match kind {
                LowerBoundKind::Trivial => self.stats.trivial_lb_count += 1,
                LowerBoundKind::Clique => self.stats.clique_lb_count += 1,
                LowerBoundKind::Lp => self.stats.lp_lb_count += 1,
                LowerBoundKind::Cycle => self.stats.cycle_lb_count += 1,
            }
            if is_left {
                self.stats.num_leftcuts += 1;
            }
            return;
        }
        if self.opts.root_only {
            self.stopped_early = true;
            return;
        }
        self.branch();
    }

    /// Returns true when the node needs no branching.
    fn process_node(&mut self) -> bool {
        let before = self.state.undecided();
        let status = self.reducer.reduce(&mut self.state, self.config);
        self.debug(2, || format!("reduce: {before} -> {} undecided, {status:?}", self.state.undecided()));
        if self.opts.debug >= 3 {
            for k in self.config.enabled() {
                let c = self.reducer.counters[k as usize];
                self.debug(3, || format!("{}: {} vertices in {} effective calls", k.name(), c.vertices, c.effective_calls));
            }
        }
        if status == ReduceStatus::ReductionCut {
            self.record_incumbent();
            return true;
        }
        let isolated: Vec<usize> = self.state.undecided_vertices().filter(|&v| self.state.degree(v) == 0).collect();
        for v in isolated {
            self.state.discard(v);
        }
        if self.state.undecided() == 0 {
            self.record_incumbent();
            return true;
        }
        let comps = self.state.components();
        if status == ReduceStatus::Shrink
            || comps.len() > 1
            || self.state.undecided() <= self.config.brute_force_threshold
        {
            self.debug(1, || format!("solving {} component(s) separately", comps.len()));
            self.solve_components(comps);
            return true;
        }
        false
    }

    /// Solves each component exactly within the budget left by the
    /// incumbent; records an incumbent when the sum beats it.
    fn solve_components(&mut self, mut comps: Vec<Vec<usize>>) {
        if self.state.cover_count() >= self.best {
            self.stats.trivial_lb_count += 1;
            return;
        }
        comps.sort_by_key(|c| (c.len(), c[0]));
        let mut remaining = self.best - self.state.cover_count();
        let mut picks: Vec<usize> = Vec::new();
        for (i, comp) in comps.iter().enumerate() {
            // each later component holds an edge and needs a vertex
            let later = comps.len() - i - 1;
            if remaining <= later || self.stopped() {
                return;
            }
            let bound = remaining - later;
            let found = if comp.len() <= self.config.brute_force_threshold.min(64) {
                let g = self.state.compact(comp);
                mvc_bitmask(&masks_of(&g), bound)
                    .map(|(size, mask)| (size, (0..comp.len()).filter(|&j| mask >> j & 1 == 1).map(|j| comp[j]).collect()))
            } else {
                self.sub_solve(comp, bound)
            };
            match found {
                Some((size, take)) => {
                    remaining -= size;
                    picks.extend(take);
                }
                None => return,
            }
        }
        let token = self.state.save();
        for &v in &picks {
            self.state.take(v);
        }
        let rest: Vec<usize> = self.state.undecided_vertices().collect();
        for v in rest {
            self.state.discard(v);
        }
        self.record_incumbent();
        self.state.restore(token);
    }

    fn sub_solve(&mut self, comp: &[usize], bound: usize) -> Option<(usize, Vec<usize>)> {
        let g = self.state.compact(comp);
        let opts = SolveOptions {
            debug: self.opts.debug.saturating_sub(1),
            trace: 0,
            quiet: true,
            root_only: false,
            max_branches: self.opts.max_branches.map(|m| m.saturating_sub(self.stats.num_branches)),
        };
        let mut sub = Search::new(&g, self.config, opts, self.start, self.deadline);
        sub.rng = ChaCha8Rng::seed_from_u64(self.rng.gen());
        sub.run(&g, Some(bound));
        self.stats.absorb_search(&sub.stats);
        self.timed_out |= sub.timed_out;
        self.stopped_early |= sub.stopped_early;
        let cover = sub.best_cover?;
        (sub.best < bound).then(|| (sub.best, (0..comp.len()).filter(|&j| cover[j]).map(|j| comp[j]).collect()))
    }

    fn lower_bound(&mut self) -> (usize, LowerBoundKind) {
        let bounds = self.config.bounds;
        let mut best = (0, LowerBoundKind::Trivial);
        let mut offer = |v: usize, k: LowerBoundKind| {
            if (v, k) > best {
                best = (v, k);
            }
        };
        if bounds.clique {
            let t = Instant::now();
            offer(clique_lower_bound(&self.state), LowerBoundKind::Clique);
            self.stats.clique_lb_time += t.elapsed();
        }
        if bounds.lp || bounds.cycle {
            if self.reducer.current_lp(&self.state).is_none() {
                let t = Instant::now();
                let lp = solve_lp_relaxation(&self.state);
                self.stats.lp_lb_time += t.elapsed();
                self.reducer.remember_lp(lp);
            }
            let lp = self.reducer.current_lp(&self.state).expect("just computed");
            if bounds.lp {
                offer(lp_lower_bound(lp), LowerBoundKind::Lp);
            }
            if bounds.cycle {
                let t = Instant::now();
                offer(cycle_lower_bound(&self.state, lp), LowerBoundKind::Cycle);
                self.stats.cycle_lb_time += t.elapsed();
            }
        }
        best
    }

    fn branch(&mut self) {
        if let Some(cap) = self.opts.max_branches {
            if self.stats.num_branches >= cap {
                self.stopped_early = true;
                return;
            }
        }
        if Instant::now() >= self.deadline {
            self.timed_out = true;
            return;
        }
        self.stats.num_branches += 1;
        let x = select_branching_vertex(&self.state, self.config.branching, &mut self.rng);
        self.debug(1, || format!("branch on {x} (degree {})", self.state.degree(x)));
        self.depth += 1;
        let token = self.state.save();
        self.state.take(x);
        self.search(true);
        self.state.restore(token);
        if !self.stopped() {
            let token = self.state.save();
            let nb = self.state.neighbor_vec(x);
            self.state.discard(x);
            for u in nb {
                self.state.take(u);
            }
            self.search(false);
            self.state.restore(token);
        }
        self.depth -= 1;
    }
}

const SOLVER_STACK: usize = 256 << 20;

/// Solves with default options.
pub fn solve(g: &Graph, config: &ReductionConfig) -> SolveResult {
    solve_with(g, config, &SolveOptions::default())
}

/// Runs the search on a thread with a large stack; recursion depth grows
/// with the number of nested branchings.
pub fn solve_with(g: &Graph, config: &ReductionConfig, opts: &SolveOptions) -> SolveResult {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .name("vc-solver".into())
            .stack_size(SOLVER_STACK)
            .spawn_scoped(s, || solve_here(g, config, opts))
            .expect("spawn solver thread")
            .join()
            .expect("solver thread panicked")
    })
}

fn solve_here(g: &Graph, config: &ReductionConfig, opts: &SolveOptions) -> SolveResult {
    let start = Instant::now();
    let deadline = start.checked_add(config.timeout).unwrap_or(start + Duration::from_secs(u32::MAX as u64));
    let mut search = Search::new(g, config, opts.clone(), start, deadline);
    search.run(g, None);
    let runtime = start.elapsed();
    let status = if search.timed_out {
        SolveStatus::Timeout
    } else if search.stopped_early {
        SolveStatus::Incomplete
    } else {
        SolveStatus::Optimal
    };
    let mut stats = search.stats;
    stats.value = search.best as u64;
    stats.runtime = runtime;
    stats.root_lb = search.root_lb.unwrap_or(search.best) as u64;
    SolveResult {
        value: search.best,
        cover: search.best_cover.expect("top-level search always holds a cover"),
        status,
        stats,
        runtime,
        incumbent_trace: search.incumbent_trace,
    }
}
