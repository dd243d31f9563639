//! Immutable simple undirected graphs, text formats and degree statistics.
//!
//! Internal vertex ids are always contiguous (`0..n`). The external label of
//! every vertex is kept alongside so that DIMACS 1-indexing and non-contiguous
//! edge lists survive a round trip into solution strings.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `0..n`. Self-loops are dropped
    /// and parallel edges collapsed.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        Self::with_labels((0..n as u64).collect(), edges)
    }

    pub fn with_labels(labels: Vec<u64>, edges: &[(usize, usize)]) -> Graph {
        Self::build(labels, edges.iter().copied()).0
    }

    /// Returns the graph plus the number of dropped self-loops and duplicates.
    fn build(labels: Vec<u64>, edges: impl Iterator<Item = (usize, usize)>) -> (Graph, usize, usize) {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        let mut loops = 0;
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u == v {
                loops += 1;
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut twice = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            twice += before - list.len();
        }
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        (Graph { adj, m, labels }, loops, twice / 2)
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// True when `cover` (indexed by internal id) touches every edge.
    pub fn is_vertex_cover(&self, cover: &[bool]) -> bool {
        self.edges().all(|(u, v)| cover[u] || cover[v])
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n()
    }

    /// Subgraph induced by `vertices` (internal ids, any order). Vertex `i`
    /// of the result is `vertices[i]`; labels are carried over.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &u in &self.adj[v] {
                let j = local[u];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::with_labels(vertices.iter().map(|&v| self.labels[v]).collect(), &edges)
    }
}

/// Edge uv is present iff absent in `g` and `u != v`. Labels are preserved.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2 - g.m().min(n * n.saturating_sub(1) / 2));
    for u in 0..n {
        let mut nbrs = g.neighbors(u).iter().peekable();
        for v in u + 1..n {
            while nbrs.next_if(|&&w| w < v).is_some() {}
            if nbrs.peek() != Some(&&v) {
                edges.push((u, v));
            }
        }
    }
    Graph::with_labels(g.labels.clone(), &edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Auto,
    Dimacs,
    EdgeList,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Format::Auto),
            "dimacs" => Ok(Format::Dimacs),
            "edgelist" | "edges" => Ok(Format::EdgeList),
            other => Err(Error::Config(format!("unknown graph format '{other}'"))),
        }
    }
}

/// A parsed graph plus the cleanup the parser had to do.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub graph: Graph,
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

impl Parsed {
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.self_loops > 0 {
            out.push(format!("dropped {} self-loop(s)", self.self_loops));
        }
        if self.duplicate_edges > 0 {
            out.push(format!("collapsed {} duplicate edge(s)", self.duplicate_edges));
        }
        out
    }
}

fn is_comment(line: &str) -> bool {
    line.starts_with('#') || line.starts_with('%')
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !is_comment(l))
}

/// Leading `p` or `c` line means DIMACS, anything else an edge list.
pub fn detect_format(text: &str) -> Format {
    match data_lines(text).next() {
        Some((_, l)) if l.starts_with('p') || l.starts_with('c') => Format::Dimacs,
        _ => Format::EdgeList,
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Parsed> {
    match format {
        Format::Auto => parse_graph(text, detect_format(text)),
        Format::Dimacs => parse_dimacs(text),
        Format::EdgeList => parse_edge_list(text),
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<u64> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: "missing vertex id".into() })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad integer '{tok}'") })
}

fn parse_dimacs(text: &str) -> Result<Parsed> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (line, l) in data_lines(text) {
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(Error::Parse { line, msg: "second problem line".into() });
                }
                let kind = toks.next();
                if !matches!(kind, Some("edge" | "edges" | "col" | "td")) {
                    return Err(Error::Parse { line, msg: "malformed header, expected 'p edge n m'".into() });
                }
                let nv = parse_id(toks.next(), line)?;
                parse_id(toks.next(), line)?;
                n = Some(nv as usize);
            }
            Some("e") => {
                let nv = n.ok_or_else(|| Error::Parse { line, msg: "edge before problem line".into() })?;
                let u = parse_id(toks.next(), line)?;
                let v = parse_id(toks.next(), line)?;
                for id in [u, v] {
                    if id == 0 || id > nv as u64 {
                        return Err(Error::VertexOutOfRange { line, id, n: nv });
                    }
                }
                edges.push((u as usize - 1, v as usize - 1));
            }
            Some(other) => {
                return Err(Error::Parse { line, msg: format!("unexpected line type '{other}'") });
            }
            None => {}
        }
    }
    let n = n.ok_or(Error::EmptyInput)?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let (graph, self_loops, duplicate_edges) = Graph::build((1..=n as u64).collect(), edges.into_iter());
    Ok(Parsed { graph, self_loops, duplicate_edges })
}

/// The first data line is taken as an `n m` header only when it is followed by
/// exactly `m` pairs whose ids are all below `n`; otherwise it is an edge.
fn parse_edge_list(text: &str) -> Result<Parsed> {
    let mut pairs = Vec::new();
    for (line, l) in data_lines(text) {
        let mut toks = l.split_whitespace();
        let u = parse_id(toks.next(), line)?;
        let v = parse_id(toks.next(), line)?;
        if toks.next().is_some() {
            return Err(Error::Parse { line, msg: "expected exactly two ids".into() });
        }
        pairs.push((line, u, v));
    }
    let Some(&(_, h0, h1)) = pairs.first() else {
        return Err(Error::EmptyInput);
    };
    let rest = &pairs[1..];
    let header = rest.len() as u64 == h1 && rest.iter().all(|&(_, u, v)| u < h0 && v < h0);
    let (graph, self_loops, duplicate_edges) = if header {
        let n = h0 as usize;
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        Graph::build((0..n as u64).collect(), rest.iter().map(|&(_, u, v)| (u as usize, v as usize)))
    } else {
        let ids: BTreeSet<u64> = pairs.iter().flat_map(|&(_, u, v)| [u, v]).collect();
        let labels: Vec<u64> = ids.into_iter().collect();
        let index = |x: u64| labels.binary_search(&x).expect("label collected above");
        let edges: Vec<_> = pairs.iter().map(|&(_, u, v)| (index(u), index(v))).collect();
        Graph::build(labels.clone(), edges.into_iter())
    };
    Ok(Parsed { graph, self_loops, duplicate_edges })
}

/// Edge list with an `n m` header, internal 0-based ids.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Degree summary used by the instance profiler.
///
/// Percentiles use the nearest-rank rule: the `ceil(q * n)`-th smallest value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    /// 5th percentile degree.
    pub bottom: usize,
    pub median: usize,
    pub mean: f64,
    /// 95th percentile degree.
    pub top: usize,
    pub max: usize,
    pub stdev: f64,
}

/// Nearest-rank percentile of an ascending slice, `pct` in whole percent.
pub fn nearest_rank(sorted: &[usize], pct: usize) -> usize {
    let n = sorted.len();
    let rank = (pct * n).div_ceil(100).clamp(1, n);
    sorted[rank - 1]
}

impl DegreeStats {
    pub fn from_degrees(degrees: &[usize]) -> Result<DegreeStats> {
        if degrees.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut sorted = degrees.to_vec();
        sorted.sort_unstable();
        let n = sorted.len() as f64;
        let mean = sorted.iter().sum::<usize>() as f64 / n;
        let var = sorted.iter().map(|&d| (d as f64 - mean).powi(2)).sum::<f64>() / n;
        Ok(DegreeStats {
            min: sorted[0],
            bottom: nearest_rank(&sorted, 5),
            median: nearest_rank(&sorted, 50),
            mean,
            top: nearest_rank(&sorted, 95),
            max: *sorted.last().unwrap(),
            stdev: var.sqrt(),
        })
    }

    pub fn of_graph(g: &Graph) -> Result<DegreeStats> {
        DegreeStats::from_degrees(&g.degrees())
    }
}
