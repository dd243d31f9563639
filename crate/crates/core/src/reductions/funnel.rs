use super::unfold::UnfoldRecord;
use crate::state::{Marks, SolverState};

/// Neighbor `w` of `v` such that `N(v) - w` is a clique, smallest id first.
pub fn funnel_partner(state: &SolverState, v: usize, marks: &mut Marks) -> Option<usize> {
    let mut nv = state.neighbor_vec(v);
    if nv.is_empty() {
        return None;
    }
    nv.sort_unstable();
    let d = nv.len();
    marks.clear(state.total_n());
    for &u in &nv {
        marks.set(u);
    }
    let mut nonadj = Vec::with_capacity(d);
    let mut total = 0;
    for &u in &nv {
        let inside = state.neighbors(u).filter(|&x| marks.get(x)).count();
        let miss = d - 1 - inside;
        nonadj.push(miss);
        total += miss;
        if total > 2 * (d - 1) {
            return None;
        }
    }
    let total = total / 2;
    if total == 0 {
        return Some(nv[0]);
    }
    nv.iter().zip(&nonadj).find(|&(_, &k)| k == total).map(|(&w, _)| w)
}

pub(crate) fn run(state: &mut SolverState, marks: &mut Marks) {
    for v in 0..state.total_n() {
        if !state.is_undecided(v) {
            continue;
        }
        let Some(w) = funnel_partner(state, v, marks) else {
            continue;
        };
        marks.clear(state.total_n());
        for x in state.neighbors(w) {
            marks.set(x);
        }
        let mut common = Vec::new();
        let mut nv_minus = Vec::new();
        for x in state.neighbors(v) {
            if x == w {
                continue;
            }
            if marks.get(x) {
                common.push(x);
            } else {
                nv_minus.push(x);
            }
        }
        marks.clear(state.total_n());
        for x in state.neighbors(v) {
            marks.set(x);
        }
        let nw_minus: Vec<usize> = state.neighbors(w).filter(|&x| x != v && !marks.get(x)).collect();
        for &c in &common {
            state.take(c);
        }
        state.discard(v);
        state.discard(w);
        state.add_offset(1);
        for &a in &nv_minus {
            for &b in &nw_minus {
                if !state.is_adjacent(a, b) {
                    state.add_edge(a, b);
                }
            }
        }
        state.push_record(UnfoldRecord::Funnel { v, w, common, nv_minus, nw_minus });
    }
}
