//! Reduction rules and the fixed-order reduce loop.

mod deg1;
mod desk;
mod dominance;
mod fold2;
mod funnel;
mod lp;
mod twin;
mod unconfined;
pub mod unfold;

use std::time::{Duration, Instant};

pub use dominance::dominates;
pub use funnel::funnel_partner;
pub use unconfined::is_unconfined;
pub use unfold::{unfold_solution, UnfoldRecord};

use crate::bounds::{solve_lp_relaxation, LpSolution};
use crate::config::ReductionConfig;
use crate::state::{Marks, SolverState};

/// Discriminants follow the column order of the statistics report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReductionKind {
    Deg1,
    Dominance,
    Fold2,
    Lp,
    Twin,
    Desk,
    Unconfined,
    Funnel,
}

impl ReductionKind {
    pub const COUNT: usize = 8;

    pub const ALL: [ReductionKind; 8] = [
        ReductionKind::Deg1,
        ReductionKind::Dominance,
        ReductionKind::Fold2,
        ReductionKind::Lp,
        ReductionKind::Twin,
        ReductionKind::Desk,
        ReductionKind::Unconfined,
        ReductionKind::Funnel,
    ];

    /// Order in which `reduce` tries the rules after degree-one.
    pub const APPLY_ORDER: [ReductionKind; 7] = [
        ReductionKind::Dominance,
        ReductionKind::Unconfined,
        ReductionKind::Lp,
        ReductionKind::Fold2,
        ReductionKind::Twin,
        ReductionKind::Funnel,
        ReductionKind::Desk,
    ];

    /// Key prefix used in the statistics report.
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Deg1 => "deg1",
            ReductionKind::Dominance => "dom",
            ReductionKind::Fold2 => "fold2",
            ReductionKind::Lp => "lp",
            ReductionKind::Twin => "twin",
            ReductionKind::Desk => "desk",
            ReductionKind::Unconfined => "unconfined",
            ReductionKind::Funnel => "funnel",
        }
    }

    pub fn from_name(s: &str) -> Option<ReductionKind> {
        ReductionKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReductionOutcome {
    pub reduced_any: bool,
    pub vertices_reduced: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceStatus {
    Alive,
    /// Nothing undecided is left.
    ReductionCut,
    /// Few enough vertices remain that the caller should solve the
    /// components from scratch.
    Shrink,
}

/// Counters for one rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleCounters {
    pub time: Duration,
    pub vertices: u64,
    pub effective_calls: u64,
    pub all_calls: u64,
}

#[derive(Clone, Debug, Default)]
struct Scratch {
    a: Marks,
    b: Marks,
}

/// Runs rules against a state while keeping per-rule counters and the most
/// recent LP solution.
#[derive(Clone, Debug, Default)]
pub struct Reducer {
    pub counters: [RuleCounters; ReductionKind::COUNT],
    lp: Option<LpSolution>,
    scratch: Scratch,
}

impl Reducer {
    pub fn new() -> Reducer {
        Reducer::default()
    }

    /// The cached LP solution if it still matches `state`.
    pub fn current_lp(&self, state: &SolverState) -> Option<&LpSolution> {
        self.lp.as_ref().filter(|lp| lp.is_current(state))
    }

    /// Stores an LP solution computed elsewhere for later reuse.
    pub fn remember_lp(&mut self, lp: LpSolution) {
        self.lp = Some(lp);
    }

    /// Applies one rule exhaustively in a single scan and records counters.
    pub fn apply(&mut self, kind: ReductionKind, state: &mut SolverState) -> ReductionOutcome {
        let start = Instant::now();
        let before = state.undecided();
        let Scratch { a, b } = &mut self.scratch;
        match kind {
            ReductionKind::Deg1 => deg1::run(state),
            ReductionKind::Dominance => dominance::run(state, a),
            ReductionKind::Fold2 => fold2::run(state, a),
            ReductionKind::Twin => twin::run(state, a),
            ReductionKind::Unconfined => unconfined::run(state, a, b),
            ReductionKind::Funnel => funnel::run(state, a),
            ReductionKind::Desk => desk::run(state, a),
            ReductionKind::Lp => {
                if state.undecided() > 0 {
                    let lp = match self.lp.take() {
                        Some(lp) if lp.is_current(state) => lp,
                        _ => solve_lp_relaxation(state),
                    };
                    lp::run(state, &lp);
                    self.lp = Some(lp);
                }
            }
        }
        let vertices_reduced = before - state.undecided();
        let elapsed = start.elapsed();
        let c = &mut self.counters[kind as usize];
        c.all_calls += 1;
        c.time += elapsed;
        if vertices_reduced > 0 {
            c.effective_calls += 1;
            c.vertices += vertices_reduced as u64;
        }
        ReductionOutcome { reduced_any: vertices_reduced > 0, vertices_reduced, elapsed }
    }

    /// Applies the enabled rules in fixed order, restarting from degree-one
    /// after every success, until none applies.
    pub fn reduce(&mut self, state: &mut SolverState, config: &ReductionConfig) -> ReduceStatus {
        let n = state.base_n();
        'outer: while state.undecided() > 0 {
            if config.has(ReductionKind::Deg1) && self.apply(ReductionKind::Deg1, state).reduced_any {
                continue;
            }
            let u = state.undecided();
            if config.shrink > 0.0 && u < n && (u as f64) <= config.shrink * n as f64 {
                return ReduceStatus::Shrink;
            }
            for kind in ReductionKind::APPLY_ORDER {
                if config.has(kind) && self.apply(kind, state).reduced_any {
                    continue 'outer;
                }
            }
            break;
        }
        if state.undecided() == 0 {
            ReduceStatus::ReductionCut
        } else {
            ReduceStatus::Alive
        }
    }
}

fn apply_once(kind: ReductionKind, state: &mut SolverState) -> ReductionOutcome {
    Reducer::new().apply(kind, state)
}

pub fn apply_deg1(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Deg1, state)
}

pub fn apply_dominance(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Dominance, state)
}

pub fn apply_fold2(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Fold2, state)
}

pub fn apply_twin(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Twin, state)
}

pub fn apply_unconfined(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Unconfined, state)
}

pub fn apply_funnel(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Funnel, state)
}

pub fn apply_desk(state: &mut SolverState) -> ReductionOutcome {
    apply_once(ReductionKind::Desk, state)
}

/// Fixes the integral part of a precomputed LP solution.
pub fn apply_lp(state: &mut SolverState, lp: LpSolution) -> ReductionOutcome {
    let mut r = Reducer::new();
    r.remember_lp(lp);
    r.apply(ReductionKind::Lp, state)
}
