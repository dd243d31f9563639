use crate::state::{Marks, SolverState};

/// Runs the confinement search from `v`. True means some minimum cover
/// contains `v`.
pub fn is_unconfined(state: &SolverState, v: usize, in_s: &mut Marks, in_ns: &mut Marks) -> bool {
    let n = state.total_n();
    in_s.clear(n);
    in_ns.clear(n);
    in_s.set(v);
    in_ns.set(v);
    let mut frontier: Vec<usize> = Vec::new();
    for u in state.neighbors(v) {
        in_ns.set(u);
        frontier.push(u);
    }
    loop {
        let mut best: Option<(usize, usize, Option<usize>)> = None;
        for &u in &frontier {
            let mut hits = 0;
            let mut outside = 0;
            let mut last = None;
            for x in state.neighbors(u) {
                if in_s.get(x) {
                    hits += 1;
                } else if !in_ns.get(x) {
                    outside += 1;
                    last = Some(x);
                }
            }
            if hits == 1 && best.is_none_or(|(o, _, _)| outside < o) {
                best = Some((outside, u, last));
                if outside == 0 {
                    break;
                }
            }
        }
        match best {
            None => return false,
            Some((0, _, _)) => return true,
            Some((1, _, Some(w))) => {
                in_s.set(w);
                in_ns.set(w);
                for x in state.neighbors(w) {
                    if !in_ns.get(x) {
                        in_ns.set(x);
                        frontier.push(x);
                    }
                }
            }
            Some(_) => return false,
        }
    }
}

pub(crate) fn run(state: &mut SolverState, in_s: &mut Marks, in_ns: &mut Marks) {
    for v in 0..state.total_n() {
        if state.is_undecided(v) && state.degree(v) > 0 && is_unconfined(state, v, in_s, in_ns) {
            state.take(v);
        }
    }
}
