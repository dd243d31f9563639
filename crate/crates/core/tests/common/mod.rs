//! Test-side oracles, written independently of the solver.
#![allow(dead_code)]

use rand::Rng;
use vc_reduce::graph::Graph;
use vc_reduce::state::SolverState;

/// Minimum vertex cover size and one optimal cover, by enumerating subsets
/// in order of increasing size.
pub fn oracle_mvc(g: &Graph) -> (usize, Vec<bool>) {
    let n = g.n();
    assert!(n <= 20, "oracle is exponential");
    let edges: Vec<u32> = g.edges().map(|(u, v)| (1u32 << u) | (1u32 << v)).collect();
    let mut best = (n + 1, 0u32);
    for mask in 0u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size < best.0 && edges.iter().all(|&e| mask & e != 0) {
            best = (size, mask);
        }
    }
    (best.0, (0..n).map(|v| best.1 >> v & 1 == 1).collect())
}

pub fn oracle_size(g: &Graph) -> usize {
    oracle_mvc(g).0
}

/// Twice the optimum of the vertex cover LP, by enumerating all
/// half-integral assignments. Half-integral optima always exist.
pub fn oracle_lp2(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 11, "oracle is exponential");
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut x = vec![0u8; n];
    let mut best = 2 * n;
    loop {
        if edges.iter().all(|&(u, v)| x[u] + x[v] >= 2) {
            best = best.min(x.iter().map(|&v| v as usize).sum());
        }
        let mut i = 0;
        while i < n && x[i] == 2 {
            x[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
        x[i] += 1;
    }
}

/// Maximum matching size of a bipartite graph by simple augmenting paths.
pub fn oracle_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[u] {
            if !seen[r] {
                seen[r] = true;
                if owner[r].is_none() || augment(owner[r].unwrap(), adj, seen, owner) {
                    owner[r] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; n_right];
    (0..adj.len()).filter(|&u| augment(u, adj, &mut vec![false; n_right], &mut owner)).count()
}

/// Double cover adjacency: left copy of `v` joined to right copies of its neighbors.
pub fn double_cover(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Random graph with planted structure added on top.
pub fn with_extra_edges(n: usize, base: &Graph, extra: &[(usize, usize)]) -> Graph {
    let mut edges: Vec<(usize, usize)> = base.edges().collect();
    edges.extend_from_slice(extra);
    Graph::from_edges(n, &edges)
}

/// Reduced instance left in `state`, with the map back to state ids.
pub fn remainder(state: &SolverState) -> (Graph, Vec<usize>) {
    let rem: Vec<usize> = state.undecided_vertices().collect();
    (state.compact(&rem), rem)
}

/// Checks that `state` (reduced from `g`) preserves the optimum under its
/// offset, and that unfolding an optimal cover of the remainder gives an
/// optimal cover of `g`. Returns a description of the first violation.
pub fn check_reduced(g: &Graph, state: &SolverState) -> Result<(), String> {
    let opt = oracle_size(g);
    let (h, rem) = remainder(state);
    let (h_opt, h_cover) = oracle_mvc(&h);
    if state.cover_count() + h_opt != opt {
        return Err(format!("offset {} + remainder {h_opt} != optimum {opt}", state.cover_count()));
    }
    let mut flags = state.cover_flags();
    for (i, &v) in rem.iter().enumerate() {
        flags[v] = h_cover[i];
    }
    vc_reduce::reductions::unfold_solution(state.ledger(), &mut flags).map_err(|e| e.to_string())?;
    flags.truncate(g.n());
    if !g.is_vertex_cover(&flags) {
        return Err("unfolded cover misses an edge".into());
    }
    let size = flags.iter().filter(|&&b| b).count();
    if size != opt {
        return Err(format!("unfolded cover has size {size}, optimum {opt}"));
    }
    Ok(())
}

use rand::seq::SliceRandom;
use vc_reduce::bounds::solve_lp_relaxation;
use vc_reduce::reductions::{self as red, ReductionKind};

/// Instance family likely to let `kind` fire.
pub fn rule_instance<R: Rng>(kind: ReductionKind, rng: &mut R) -> Graph {
    let n = rng.gen_range(6..=11);
    match kind {
        ReductionKind::Deg1 | ReductionKind::Fold2 => random_graph(n, rng.gen_range(0.12..0.3), rng),
        ReductionKind::Twin => {
            let base = random_graph(n, rng.gen_range(0.2..0.5), rng);
            let mut ids: Vec<usize> = (0..n).collect();
            ids.shuffle(rng);
            let (v, w, nb) = (ids[0], ids[1], [ids[2], ids[3], ids[4]]);
            let mut edges: Vec<(usize, usize)> =
                base.edges().filter(|&(a, b)| ![v, w].contains(&a) && ![v, w].contains(&b)).collect();
            for x in nb {
                edges.push((v, x));
                edges.push((w, x));
            }
            Graph::from_edges(n, &edges)
        }
        ReductionKind::Desk => {
            let n = rng.gen_range(8..=12);
            let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
            for c in 0..4 {
                for _ in 0..rng.gen_range(1..=2) {
                    edges.push((c, rng.gen_range(4..n)));
                }
            }
            let p = rng.gen_range(0.1..0.4);
            for u in 4..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let edges: Vec<_> = edges.into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
            Graph::from_edges(n, &edges)
        }
        _ => random_graph(n, rng.gen_range(0.2..0.6), rng),
    }
}

pub fn apply_rule(kind: ReductionKind, state: &mut SolverState) -> bool {
    let out = match kind {
        ReductionKind::Deg1 => red::apply_deg1(state),
        ReductionKind::Dominance => red::apply_dominance(state),
        ReductionKind::Fold2 => red::apply_fold2(state),
        ReductionKind::Lp => {
            let lp = solve_lp_relaxation(state);
            red::apply_lp(state, lp)
        }
        ReductionKind::Twin => red::apply_twin(state),
        ReductionKind::Desk => red::apply_desk(state),
        ReductionKind::Unconfined => red::apply_unconfined(state),
        ReductionKind::Funnel => red::apply_funnel(state),
    };
    out.reduced_any
}

pub struct Firings {
    pub fired: usize,
    pub attempts: usize,
    pub violations: Vec<String>,
}

/// Applies `kind` to instances from [`rule_instance`] until it has fired
/// `target` times, checking every firing with [`check_reduced`].
pub fn rule_firings(kind: ReductionKind, target: usize, seed: u64) -> Firings {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut f = Firings { fired: 0, attempts: 0, violations: Vec::new() };
    while f.fired < target && f.attempts < 200 * target {
        f.attempts += 1;
        let g = rule_instance(kind, &mut rng);
        let mut state = SolverState::new(&g);
        if !apply_rule(kind, &mut state) {
            continue;
        }
        f.fired += 1;
        if let Err(e) = check_reduced(&g, &state) {
            f.violations.push(format!("{}: {e} on {:?}", kind.name(), g.edges().collect::<Vec<_>>()));
        }
    }
    f
}
