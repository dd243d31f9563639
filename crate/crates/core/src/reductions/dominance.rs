use crate::state::{Marks, SolverState};

/// True when `w` and `v` are adjacent undecided vertices with `N[v] ⊆ N[w]`.
pub fn dominates(state: &SolverState, w: usize, v: usize, marks: &mut Marks) -> bool {
    if !state.is_adjacent(v, w) || state.degree(w) < state.degree(v) {
        return false;
    }
    marks.clear(state.total_n());
    marks.set(w);
    for x in state.neighbors(w) {
        marks.set(x);
    }
    state.neighbors(v).all(|x| marks.get(x))
}

/// Takes every dominating vertex; repeats until a full pass finds none.
pub(crate) fn run(state: &mut SolverState, marks: &mut Marks) {
    loop {
        let mut found = false;
        for v in 0..state.total_n() {
            if !state.is_undecided(v) {
                continue;
            }
            for w in state.neighbor_vec(v) {
                if !state.is_undecided(v) {
                    break;
                }
                if state.is_undecided(w) && dominates(state, w, v, marks) {
                    state.take(w);
                    found = true;
                }
            }
        }
        if !found {
            break;
        }
    }
}
