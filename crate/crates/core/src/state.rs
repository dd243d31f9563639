//! The single mutable solve context shared by reductions, bounds and the
//! branching driver.
//!
//! Every mutation is pushed onto a change stack so that a frame can be rolled
//! back exactly. Vertices introduced by contractions ("overlay" vertices) get
//! ids `n, n+1, ...` and live in the same adjacency structure as the base
//! vertices. Decided vertices stay in neighbor lists and are filtered by
//! status; `degree[v]` is the number of undecided neighbors of `v`.

use crate::graph::Graph;
use crate::reductions::unfold::UnfoldRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexStatus {
    Undecided,
    InCover,
    OutOfCover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Change {
    Status { v: usize, prev: VertexStatus },
    Vertex,
    Edge { u: usize, v: usize },
    Offset(usize),
    Ledger,
}

/// Proof of a saved frame. Must be handed back to [`SolverState::restore`]
/// in LIFO order; it cannot be cloned.
#[derive(Debug)]
#[must_use = "a saved frame must be restored"]
pub struct FrameToken {
    pos: usize,
    depth: usize,
}

#[derive(Clone, Debug)]
pub struct SolverState {
    base_n: usize,
    adj: Vec<Vec<usize>>,
    status: Vec<VertexStatus>,
    degree: Vec<usize>,
    undecided: usize,
    cover_count: usize,
    stack: Vec<Change>,
    frames: Vec<usize>,
    ledger: Vec<UnfoldRecord>,
    epoch: u64,
}

impl SolverState {
    pub fn new(g: &Graph) -> SolverState {
        let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
        let degree = adj.iter().map(Vec::len).collect();
        SolverState {
            base_n: g.n(),
            status: vec![VertexStatus::Undecided; g.n()],
            degree,
            adj,
            undecided: g.n(),
            cover_count: 0,
            stack: Vec::new(),
            frames: Vec::new(),
            ledger: Vec::new(),
            epoch: 0,
        }
    }

    /// Number of vertices of the input graph.
    pub fn base_n(&self) -> usize {
        self.base_n
    }

    /// Number of vertex slots including overlay vertices.
    pub fn total_n(&self) -> usize {
        self.adj.len()
    }

    pub fn undecided(&self) -> usize {
        self.undecided
    }

    pub fn cover_count(&self) -> usize {
        self.cover_count
    }

    /// Changes on every mutation, including restores.
    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn status(&self, v: usize) -> VertexStatus {
        self.status[v]
    }

    pub fn is_undecided(&self, v: usize) -> bool {
        self.status[v] == VertexStatus::Undecided
    }

    /// Number of undecided neighbors.
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn ledger(&self) -> &[UnfoldRecord] {
        &self.ledger
    }

    pub fn undecided_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.is_undecided(v))
    }

    /// Undecided neighbors of `v`, in adjacency-list order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied().filter(|&u| self.is_undecided(u))
    }

    pub fn neighbor_vec(&self, v: usize) -> Vec<usize> {
        self.neighbors(v).collect()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.is_undecided(a) && self.is_undecided(b) && self.adj[a].contains(&b)
    }

    fn touch(&mut self) {
        self.epoch += 1;
    }

    pub fn set_status(&mut self, v: usize, s: VertexStatus) {
        assert_eq!(self.status[v], VertexStatus::Undecided, "vertex {v} decided twice");
        assert_ne!(s, VertexStatus::Undecided);
        self.stack.push(Change::Status { v, prev: VertexStatus::Undecided });
        self.status[v] = s;
        self.undecided -= 1;
        if s == VertexStatus::InCover {
            self.cover_count += 1;
        }
        for &u in &self.adj[v] {
            self.degree[u] -= 1;
        }
        self.touch();
    }

    pub fn take(&mut self, v: usize) {
        self.set_status(v, VertexStatus::InCover);
    }

    pub fn discard(&mut self, v: usize) {
        self.set_status(v, VertexStatus::OutOfCover);
    }

    /// Adds an overlay vertex adjacent to `nbrs` (all undecided, distinct).
    pub fn add_vertex(&mut self, nbrs: &[usize]) -> usize {
        let z = self.adj.len();
        self.adj.push(Vec::with_capacity(nbrs.len()));
        self.status.push(VertexStatus::Undecided);
        self.degree.push(0);
        self.undecided += 1;
        self.stack.push(Change::Vertex);
        for &u in nbrs {
            self.add_edge(z, u);
        }
        self.touch();
        z
    }

    /// Adds edge uv between two undecided, currently non-adjacent vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && self.is_undecided(u) && self.is_undecided(v));
        debug_assert!(!self.is_adjacent(u, v), "edge {u}-{v} already present");
        self.adj[u].push(v);
        self.adj[v].push(u);
        self.degree[u] += 1;
        self.degree[v] += 1;
        self.stack.push(Change::Edge { u, v });
        self.touch();
    }

    /// Counts `k` cover vertices that are implied by a contraction and will be
    /// materialized during unfolding.
    pub fn add_offset(&mut self, k: usize) {
        self.cover_count += k;
        self.stack.push(Change::Offset(k));
        self.touch();
    }

    pub fn push_record(&mut self, rec: UnfoldRecord) {
        self.ledger.push(rec);
        self.stack.push(Change::Ledger);
        self.touch();
    }

    pub fn save(&mut self) -> FrameToken {
        let token = FrameToken { pos: self.stack.len(), depth: self.frames.len() };
        self.frames.push(token.pos);
        token
    }

    /// Rolls back every change made since `token` was issued.
    ///
    /// # Panics
    /// If `token` is not the most recent unrestored frame.
    pub fn restore(&mut self, token: FrameToken) {
        assert!(
            self.frames.len() == token.depth + 1 && self.frames[token.depth] == token.pos,
            "frame restored out of LIFO order"
        );
        self.frames.pop();
        while self.stack.len() > token.pos {
            match self.stack.pop().unwrap() {
                Change::Status { v, prev } => {
                    if self.status[v] == VertexStatus::InCover {
                        self.cover_count -= 1;
                    }
                    self.status[v] = prev;
                    self.undecided += 1;
                    for &u in &self.adj[v] {
                        self.degree[u] += 1;
                    }
                }
                Change::Vertex => {
                    self.adj.pop();
                    self.status.pop();
                    self.degree.pop();
                    self.undecided -= 1;
                }
                Change::Edge { u, v } => {
                    let a = self.adj[u].pop();
                    let b = self.adj[v].pop();
                    debug_assert_eq!((a, b), (Some(v), Some(u)));
                    self.degree[u] -= 1;
                    self.degree[v] -= 1;
                }
                Change::Offset(k) => self.cover_count -= k,
                Change::Ledger => {
                    self.ledger.pop();
                }
            }
        }
        self.touch();
    }

    /// Everything except the epoch counter.
    pub fn same_state(&self, other: &SolverState) -> bool {
        self.base_n == other.base_n
            && self.adj == other.adj
            && self.status == other.status
            && self.degree == other.degree
            && self.undecided == other.undecided
            && self.cover_count == other.cover_count
            && self.stack == other.stack
            && self.frames == other.frames
            && self.ledger == other.ledger
    }

    /// Connected components of the undecided subgraph, each sorted, ordered
    /// by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.adj.len()];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.adj.len() {
            if seen[s] || !self.is_undecided(s) {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Builds a standalone graph on `vertices` (undecided ids). Vertex `i` of
    /// the result corresponds to `vertices[i]`.
    pub fn compact(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for u in self.neighbors(v) {
                let j = local[u];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), &edges)
    }

    /// InCover flags over all vertex slots.
    pub fn cover_flags(&self) -> Vec<bool> {
        self.status.iter().map(|&s| s == VertexStatus::InCover).collect()
    }
}

/// Reusable set-membership marks with O(1) clearing.
#[derive(Clone, Debug, Default)]
pub struct Marks {
    stamp: Vec<u32>,
    cur: u32,
}

impl Marks {
    pub fn clear(&mut self, n: usize) {
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.cur = self.cur.wrapping_add(1);
        if self.cur == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.cur = 1;
        }
    }

    pub fn set(&mut self, v: usize) {
        self.stamp[v] = self.cur;
    }

    pub fn unset(&mut self, v: usize) {
        self.stamp[v] = 0;
    }

    pub fn get(&self, v: usize) -> bool {
        self.stamp.get(v) == Some(&self.cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_and_restore_counters() {
        let g = Graph::complete(2);
        let mut s = SolverState::new(&g);
        let t = s.save();
        s.take(0);
        assert_eq!((s.undecided(), s.cover_count()), (1, 1));
        assert_eq!(s.degree(1), 0);
        s.discard(1);
        assert_eq!(s.cover_count(), 1);
        s.restore(t);
        assert_eq!((s.undecided(), s.cover_count()), (2, 0));
        assert_eq!(s.degree(1), 1);
    }

    #[test]
    fn nested_frames() {
        let g = Graph::cycle(6);
        let mut s = SolverState::new(&g);
        let snapshot = s.clone();
        let outer = s.save();
        s.take(0);
        let inner = s.save();
        s.take(2);
        s.take(4);
        s.restore(inner);
        assert_eq!(s.undecided(), 5);
        s.restore(outer);
        assert!(s.same_state(&snapshot));
    }

    #[test]
    #[should_panic(expected = "LIFO")]
    fn out_of_order_restore_aborts() {
        let g = Graph::path(3);
        let mut s = SolverState::new(&g);
        let a = s.save();
        let _b = s.save();
        s.restore(a);
    }

    #[test]
    #[should_panic(expected = "decided twice")]
    fn double_decide_aborts() {
        let mut s = SolverState::new(&Graph::path(2));
        s.take(0);
        s.take(0);
    }

    #[test]
    fn overlay_vertex_rolls_back() {
        let g = Graph::path(5);
        let mut s = SolverState::new(&g);
        let snapshot = s.clone();
        let t = s.save();
        s.discard(1);
        s.discard(2);
        s.discard(3);
        let z = s.add_vertex(&[0, 4]);
        assert_eq!(z, 5);
        assert_eq!(s.degree(z), 2);
        assert!(s.is_adjacent(0, z));
        s.add_offset(1);
        assert_eq!(s.cover_count(), 1);
        s.restore(t);
        assert!(s.same_state(&snapshot));
        assert_eq!(s.total_n(), 5);
    }

    #[test]
    fn components_by_smallest_member() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        let s = SolverState::new(&g);
        assert_eq!(s.components(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let mut s = SolverState::new(&Graph::path(4));
        assert_eq!(s.components().len(), 1);
        s.take(1);
        assert_eq!(s.components(), vec![vec![0], vec![2, 3]]);
    }

    #[test]
    fn marks_clear_cheaply() {
        let mut m = Marks::default();
        m.clear(4);
        m.set(2);
        assert!(m.get(2));
        m.clear(4);
        assert!(!m.get(2));
        assert!(!m.get(100));
    }
}
