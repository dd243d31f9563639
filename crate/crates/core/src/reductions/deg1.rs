use crate::state::SolverState;

/// Degree-1 vertices go out and their neighbor in, cascading. Isolated
/// vertices go out.
pub(crate) fn run(state: &mut SolverState) {
    let mut work: Vec<usize> = state.undecided_vertices().filter(|&v| state.degree(v) <= 1).collect();
    let mut i = 0;
    while i < work.len() {
        let v = work[i];
        i += 1;
        if !state.is_undecided(v) {
            continue;
        }
        match state.degree(v) {
            0 => state.discard(v),
            1 => {
                let u = state.neighbors(v).next().expect("degree 1");
                state.discard(v);
                state.take(u);
                work.extend(state.neighbors(u).filter(|&w| state.degree(w) <= 1));
            }
            _ => {}
        }
    }
}
