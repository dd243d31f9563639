//! Lower bounds on the cover size of the undecided subgraph, and the
//! half-integral LP relaxation shared with the LP reduction.
//!
//! All bounds here are relative: they bound the number of *additional*
//! cover vertices needed, on top of `state.cover_count()`.

use crate::matching::{hopcroft_karp, NONE};
use crate::state::SolverState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LowerBoundKind {
    Trivial,
    Clique,
    Lp,
    Cycle,
}

impl LowerBoundKind {
    pub const ALL: [LowerBoundKind; 4] =
        [LowerBoundKind::Trivial, LowerBoundKind::Clique, LowerBoundKind::Lp, LowerBoundKind::Cycle];

    pub fn name(self) -> &'static str {
        match self {
            LowerBoundKind::Trivial => "trivial",
            LowerBoundKind::Clique => "clique",
            LowerBoundKind::Lp => "lp",
            LowerBoundKind::Cycle => "cycle",
        }
    }
}

/// Optimal half-integral solution of the LP relaxation over the undecided
/// subgraph, with the fewest possible half values.
///
/// Values are stored doubled: `x2[i] ∈ {0, 1, 2}` for `vertices[i]`.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub vertices: Vec<usize>,
    pub x2: Vec<u8>,
    /// Twice the LP optimum; equals the maximum matching size of the
    /// bipartite double cover.
    pub value2: usize,
    /// Double-cover matching, left local index to right local index.
    pub matching: Vec<usize>,
    epoch: u64,
}

impl LpSolution {
    pub fn value(&self) -> f64 {
        self.value2 as f64 / 2.0
    }

    /// Whether the solution still describes `state`.
    pub fn is_current(&self, state: &SolverState) -> bool {
        self.epoch == state.epoch()
    }

    pub fn halves(&self) -> usize {
        self.x2.iter().filter(|&&x| x == 1).count()
    }

    pub fn ones(&self) -> usize {
        self.x2.iter().filter(|&&x| x == 2).count()
    }

    /// `(vertex, doubled value)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.vertices.iter().copied().zip(self.x2.iter().copied())
    }
}

fn local_adjacency(state: &SolverState, vertices: &[usize]) -> Vec<Vec<usize>> {
    let mut local = vec![usize::MAX; state.total_n()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    vertices
        .iter()
        .map(|&v| {
            let mut row: Vec<usize> = state.neighbors(v).map(|u| local[u]).collect();
            row.sort_unstable();
            row
        })
        .collect()
}

/// Strongly connected components; ids follow Tarjan's emission order, so a
/// component's id is smaller than that of any component reaching it.
fn tarjan(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                    if w == v {
                        break;
                    }
                }
                ncomp += 1;
            }
        }
    }
    comp
}

/// Solves the LP relaxation over the undecided vertices of `state`.
///
/// A maximum matching of the bipartite double cover gives the optimum. The
/// matching is symmetrized into a half-integral flow whose residual graph is
/// skew-symmetric; reading the strongly connected components like a 2-SAT
/// instance yields an optimal solution where `x_v = 1/2` exactly for the
/// vertices forced to one half in every optimum.
pub fn solve_lp_relaxation(state: &SolverState) -> LpSolution {
    let vertices: Vec<usize> = state.undecided_vertices().collect();
    let k = vertices.len();
    let adj = local_adjacency(state, &vertices);
    let m = hopcroft_karp(&adj, k, None);
    let (ml, mr) = (&m.left, &m.right);

    let (s, t) = (2 * k, 2 * k + 1);
    let mut succ = vec![Vec::new(); 2 * k + 2];
    for i in 0..k {
        let (l, r) = (i, k + i);
        let both = ml[i] != NONE && mr[i] != NONE;
        let any = ml[i] != NONE || mr[i] != NONE;
        if !both {
            succ[s].push(l);
            succ[r].push(t);
        }
        if any {
            succ[l].push(s);
            succ[t].push(r);
        }
        for &j in &adj[i] {
            succ[l].push(k + j);
            if ml[i] == j || ml[j] == i {
                succ[k + j].push(l);
            }
        }
    }
    succ[t].push(s);
    let comp = tarjan(&succ);

    let x2: Vec<u8> = (0..k)
        .map(|i| {
            let (cl, cr) = (comp[i], comp[k + i]);
            if cl == cr {
                1
            } else if cl < cr {
                0
            } else {
                2
            }
        })
        .collect();
    let value2 = x2.iter().map(|&x| x as usize).sum::<usize>();
    debug_assert_eq!(value2, m.size, "LP value must equal the double-cover matching");
    debug_assert!((0..k).all(|i| adj[i].iter().all(|&j| x2[i] + x2[j] >= 2)));
    LpSolution { vertices, x2, value2, matching: m.left, epoch: state.epoch() }
}

/// Greedy clique cover: vertices in ascending degree order (ties by id) join
/// the largest earlier clique contained in their neighborhood, or open a new
/// one. Returns `Σ (|C| - 1)`.
pub fn clique_lower_bound(state: &SolverState) -> usize {
    let mut order: Vec<usize> = state.undecided_vertices().collect();
    order.sort_by_key(|&v| (state.degree(v), v));
    let mut clique_of = vec![usize::MAX; state.total_n()];
    let mut size: Vec<usize> = Vec::new();
    let mut hits: Vec<usize> = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    for &v in &order {
        touched.clear();
        for u in state.neighbors(v) {
            let c = clique_of[u];
            if c != usize::MAX {
                if hits[c] == 0 {
                    touched.push(c);
                }
                hits[c] += 1;
            }
        }
        let mut best: Option<usize> = None;
        for &c in &touched {
            if hits[c] == size[c] && best.is_none_or(|b| (size[c], std::cmp::Reverse(c)) > (size[b], std::cmp::Reverse(b))) {
                best = Some(c);
            }
        }
        for &c in &touched {
            hits[c] = 0;
        }
        match best {
            Some(c) => {
                clique_of[v] = c;
                size[c] += 1;
            }
            None => {
                clique_of[v] = size.len();
                size.push(1);
                hits.push(0);
            }
        }
    }
    order.len() - size.len()
}

pub fn lp_lower_bound(lp: &LpSolution) -> usize {
    lp.value2.div_ceil(2)
}

/// Covers the half-valued vertices by vertex-disjoint cycles and edges taken
/// from a perfect matching of their bipartite double cover, and charges
/// `⌈len/2⌉` per cycle. Falls back to the LP bound when no perfect matching
/// exists.
pub fn cycle_lower_bound(state: &SolverState, lp: &LpSolution) -> usize {
    assert!(lp.is_current(state), "stale LP solution");
    let half: Vec<usize> = lp.iter().filter(|&(_, x)| x == 1).map(|(v, _)| v).collect();
    let ones = lp.ones();
    if half.is_empty() {
        return ones;
    }
    let mut pos = vec![usize::MAX; lp.vertices.len()];
    let mut h = 0;
    for (i, &x) in lp.x2.iter().enumerate() {
        if x == 1 {
            pos[i] = h;
            h += 1;
        }
    }
    let warm: Vec<usize> = (0..lp.vertices.len())
        .filter(|&i| lp.x2[i] == 1)
        .map(|i| {
            let j = lp.matching[i];
            if j != NONE && pos[j] != usize::MAX {
                pos[j]
            } else {
                NONE
            }
        })
        .collect();
    let adj = local_adjacency(state, &half);
    let m = hopcroft_karp(&adj, half.len(), Some(&warm));
    if m.size < half.len() {
        return lp_lower_bound(lp);
    }
    let mut seen = vec![false; half.len()];
    let mut total = ones;
    for start in 0..half.len() {
        if seen[start] {
            continue;
        }
        let mut len: usize = 0;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            len += 1;
            v = m.left[v];
        }
        total += len.div_ceil(2);
    }
    total.max(lp_lower_bound(lp))
}

/// Which bounds to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct BoundSet {
    pub clique: bool,
    pub lp: bool,
    pub cycle: bool,
}

/// Strongest enabled bound; ties go to the later kind in
/// `Trivial < Clique < Lp < Cycle`.
pub fn best_lower_bound(state: &SolverState, bounds: BoundSet, lp: Option<&LpSolution>) -> (usize, LowerBoundKind) {
    let mut best = (0, LowerBoundKind::Trivial);
    let mut offer = |value: usize, kind: LowerBoundKind| {
        if (value, kind) > best {
            best = (value, kind);
        }
    };
    if bounds.clique {
        offer(clique_lower_bound(state), LowerBoundKind::Clique);
    }
    if bounds.lp || bounds.cycle {
        let fresh;
        let lp = match lp {
            Some(l) if l.is_current(state) => l,
            _ => {
                fresh = solve_lp_relaxation(state);
                &fresh
            }
        };
        if bounds.lp {
            offer(lp_lower_bound(lp), LowerBoundKind::Lp);
        }
        if bounds.cycle {
            offer(cycle_lower_bound(state, lp), LowerBoundKind::Cycle);
        }
    }
    best
}
