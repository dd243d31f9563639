use super::unfold::UnfoldRecord;
use crate::state::{Marks, SolverState};

const MAX_SIDE: usize = 2;

fn deg_ok(state: &SolverState, v: usize) -> bool {
    state.is_undecided(v) && (3..=4).contains(&state.degree(v))
}

/// `(N(a) ∪ N(b)) \ {x, y}`, or `None` once it exceeds the side cap.
fn side(state: &SolverState, a: usize, b: usize, x: usize, y: usize, marks: &mut Marks) -> Option<Vec<usize>> {
    marks.clear(state.total_n());
    let mut out = Vec::new();
    for z in state.neighbors(a).chain(state.neighbors(b)) {
        if z != x && z != y && !marks.get(z) {
            marks.set(z);
            out.push(z);
            if out.len() > MAX_SIDE {
                return None;
            }
        }
    }
    Some(out)
}

/// Chordless 4-cycles `v1 v2 v3 v4` of degree-3/4 vertices whose opposite
/// pairs have disjoint outer neighborhoods of at most two vertices each.
fn find(state: &SolverState, v1: usize, marks: &mut Marks) -> Option<([usize; 4], Vec<usize>, Vec<usize>)> {
    let mut nb = state.neighbor_vec(v1);
    nb.sort_unstable();
    for (i, &v2) in nb.iter().enumerate() {
        for &v4 in &nb[i + 1..] {
            if !deg_ok(state, v2) || !deg_ok(state, v4) || state.is_adjacent(v2, v4) {
                continue;
            }
            let mut cands: Vec<usize> = state.neighbors(v2).collect();
            cands.sort_unstable();
            for v3 in cands {
                if v3 == v1 || !deg_ok(state, v3) || !state.is_adjacent(v3, v4) || state.is_adjacent(v1, v3) {
                    continue;
                }
                let Some(a) = side(state, v1, v3, v2, v4, marks) else { continue };
                let Some(b) = side(state, v2, v4, v1, v3, marks) else { continue };
                if a.iter().any(|x| b.contains(x)) {
                    continue;
                }
                return Some(([v1, v2, v3, v4], a, b));
            }
        }
    }
    None
}

pub(crate) fn run(state: &mut SolverState, marks: &mut Marks) {
    for v1 in 0..state.total_n() {
        if !deg_ok(state, v1) {
            continue;
        }
        let Some(([v1, v2, v3, v4], n13, n24)) = find(state, v1, marks) else { continue };
        for v in [v1, v2, v3, v4] {
            state.discard(v);
        }
        for &a in &n13 {
            for &b in &n24 {
                if !state.is_adjacent(a, b) {
                    state.add_edge(a, b);
                }
            }
        }
        state.add_offset(2);
        state.push_record(UnfoldRecord::Desk { v1, v2, v3, v4, n13, n24 });
    }
}
