use super::unfold::UnfoldRecord;
use crate::state::{Marks, SolverState};

/// Degree-2 vertices: adjacent neighbors are both taken, otherwise the three
/// vertices are merged into one.
pub(crate) fn run(state: &mut SolverState, marks: &mut Marks) {
    let mut v = 0;
    while v < state.total_n() {
        if state.is_undecided(v) && state.degree(v) == 2 {
            let mut it = state.neighbors(v);
            let (u, w) = (it.next().unwrap(), it.next().unwrap());
            drop(it);
            if state.is_adjacent(u, w) {
                state.take(u);
                state.take(w);
                state.discard(v);
            } else {
                marks.clear(state.total_n());
                marks.set(v);
                let mut nz = Vec::new();
                for x in state.neighbors(u).chain(state.neighbors(w)) {
                    if !marks.get(x) {
                        marks.set(x);
                        nz.push(x);
                    }
                }
                state.discard(u);
                state.discard(v);
                state.discard(w);
                let z = state.add_vertex(&nz);
                state.add_offset(1);
                state.push_record(UnfoldRecord::Fold2 { v, u, w, z });
            }
        }
        v += 1;
    }
}
