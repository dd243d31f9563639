use crate::bounds::LpSolution;
use crate::state::SolverState;

/// Fixes the integral part of `lp`.
///
/// # Panics
/// If `lp` was computed for a different state.
pub(crate) fn run(state: &mut SolverState, lp: &LpSolution) {
    assert!(lp.is_current(state), "stale LP solution");
    for (v, x) in lp.iter() {
        if x == 2 {
            state.take(v);
        }
    }
    for (v, x) in lp.iter() {
        if x == 0 {
            state.discard(v);
        }
    }
}
