use super::unfold::UnfoldRecord;
use crate::state::{Marks, SolverState};

fn sorted_neighbors(state: &SolverState, v: usize) -> Vec<usize> {
    let mut n = state.neighbor_vec(v);
    n.sort_unstable();
    n
}

/// Non-adjacent degree-3 vertices with equal neighborhoods.
pub(crate) fn run(state: &mut SolverState, marks: &mut Marks) {
    let mut v = 0;
    while v < state.total_n() {
        if state.is_undecided(v) && state.degree(v) == 3 {
            let nb = sorted_neighbors(state, v);
            let twin = state
                .neighbors(nb[0])
                .filter(|&x| x != v && state.degree(x) == 3 && sorted_neighbors(state, x) == nb)
                .min();
            if let Some(w) = twin {
                apply(state, v, w, [nb[0], nb[1], nb[2]], marks);
            }
        }
        v += 1;
    }
}

fn apply(state: &mut SolverState, v: usize, w: usize, nb: [usize; 3], marks: &mut Marks) {
    let [a, b, c] = nb;
    if state.is_adjacent(a, b) || state.is_adjacent(a, c) || state.is_adjacent(b, c) {
        for x in nb {
            state.take(x);
        }
        state.discard(v);
        state.discard(w);
        return;
    }
    marks.clear(state.total_n());
    marks.set(v);
    marks.set(w);
    let mut nz = Vec::new();
    for x in nb {
        for y in state.neighbors(x) {
            if !marks.get(y) {
                marks.set(y);
                nz.push(y);
            }
        }
    }
    for x in [v, w, a, b, c] {
        state.discard(x);
    }
    let z = state.add_vertex(&nz);
    state.add_offset(2);
    state.push_record(UnfoldRecord::Twin { v, w, neighbors: nb, z });
}
