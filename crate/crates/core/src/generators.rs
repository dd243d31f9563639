//! Random instance generators: the bucket-list generator (blg) and random
//! geometric graphs.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{write_edge_list, Graph};

/// A generated graph with its conventional name and parameter header.
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub name: String,
    pub params: Vec<(String, String)>,
}

impl Generated {
    /// Edge list prefixed with `#` comment lines naming the instance and its parameters.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# {}", self.name).unwrap();
        for (k, v) in &self.params {
            writeln!(out, "# {k} {v}").unwrap();
        }
        out.push_str(&write_edge_list(&self.graph));
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlgParams {
    pub n: usize,
    pub avg_degree: f64,
    pub deg_var: f64,
    pub min_deg: Option<usize>,
    pub max_deg: Option<usize>,
    pub seed: u64,
}

impl BlgParams {
    pub fn target_edges(&self) -> usize {
        (self.n as f64 * self.avg_degree / 2.0).round() as usize
    }

    pub fn name(&self) -> String {
        format!(
            "blg-{}_{:03}_{:02}_{:02}d{:03}",
            self.n,
            self.avg_degree.round() as u64,
            self.deg_var.round() as u64,
            self.min_deg.unwrap_or(0),
            self.max_deg.unwrap_or(self.n.saturating_sub(1)),
        )
    }

    fn check(&self) -> Result<()> {
        let infeasible = |msg: String| Err(Error::Infeasible(msg));
        let (n, m) = (self.n, self.target_edges());
        if n == 0 {
            return infeasible("n must be positive".into());
        }
        if !(self.deg_var >= 0.0 && self.deg_var.is_finite()) {
            return infeasible(format!("deg_var must be a nonnegative number, got {}", self.deg_var));
        }
        if m + 1 < n {
            return infeasible(format!("{m} edges cannot connect {n} vertices"));
        }
        if m > n * (n - 1) / 2 {
            return infeasible(format!("{m} edges exceed the simple graph maximum for n={n}"));
        }
        let max = self.max_deg.unwrap_or(n - 1);
        let min = self.min_deg.unwrap_or(0);
        if max * n < 2 * m {
            return infeasible(format!("max degree {max} cannot carry {m} edges on {n} vertices"));
        }
        if min * n > 2 * m {
            return infeasible(format!("min degree {min} needs more than {m} edges"));
        }
        if min > max || max > n - 1 {
            return infeasible(format!("degree bounds [{min}, {max}] are inconsistent for n={n}"));
        }
        if n > 2 && max < 2 {
            return infeasible("a connected graph on more than two vertices needs max degree 2".into());
        }
        Ok(())
    }
}

/// Vertices grouped by degree, for vertices still below the degree cap.
struct Buckets {
    by_degree: Vec<Vec<usize>>,
    pos: Vec<usize>,
    degree: Vec<usize>,
    member: Vec<bool>,
    cap: usize,
    len: usize,
}

impl Buckets {
    fn new(n: usize, cap: usize) -> Buckets {
        Buckets {
            by_degree: vec![Vec::new(); cap + 1],
            pos: vec![0; n],
            degree: vec![0; n],
            member: vec![false; n],
            cap,
            len: 0,
        }
    }

    fn insert(&mut self, v: usize) {
        let b = &mut self.by_degree[self.degree[v]];
        self.pos[v] = b.len();
        b.push(v);
        self.member[v] = true;
        self.len += 1;
    }

    fn remove(&mut self, v: usize) {
        let b = &mut self.by_degree[self.degree[v]];
        let i = self.pos[v];
        b.swap_remove(i);
        if let Some(&moved) = b.get(i) {
            self.pos[moved] = i;
        }
        self.member[v] = false;
        self.len -= 1;
    }

    fn bump(&mut self, v: usize) {
        if self.member[v] {
            self.remove(v);
            self.degree[v] += 1;
            if self.degree[v] < self.cap {
                self.insert(v);
            }
        } else {
            self.degree[v] += 1;
        }
    }

    fn count_below(&self, d: usize) -> usize {
        self.by_degree.iter().take(d.min(self.cap)).map(Vec::len).sum()
    }

    /// Member at rank `i` of the ascending degree order, uniform within its bucket.
    fn at_rank<R: Rng>(&self, mut i: usize, rng: &mut R) -> usize {
        for b in &self.by_degree {
            if i < b.len() {
                return b[rng.gen_range(0..b.len())];
            }
            i -= b.len();
        }
        unreachable!("rank beyond bucket population")
    }

    fn ascending(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_degree.iter().flatten().copied()
    }
}

/// Rank `floor(count * r^(1/dv))`, or 0 when `dv` is 0.
fn biased_rank<R: Rng>(count: usize, deg_var: f64, rng: &mut R) -> usize {
    if deg_var == 0.0 {
        return 0;
    }
    let r: f64 = rng.gen();
    ((count as f64 * r.powf(1.0 / deg_var)) as usize).min(count - 1)
}

const PARTNER_RETRIES: usize = 64;

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

pub fn generate_blg(p: &BlgParams) -> Result<Generated> {
    p.check()?;
    let n = p.n;
    let m = p.target_edges();
    let cap = p.max_deg.unwrap_or(n - 1);
    let min = p.min_deg.unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut buckets = Buckets::new(n, cap);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(m);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    buckets.insert(order[0]);
    for &v in &order[1..] {
        let u = buckets.at_rank(biased_rank(buckets.len, p.deg_var, &mut rng), &mut rng);
        buckets.insert(v);
        buckets.bump(u);
        buckets.bump(v);
        edges.push((u, v));
        present.insert(key(u, v));
    }

    while edges.len() < m {
        let below = buckets.count_below(min);
        let pool = if below > 0 { below } else { buckets.len };
        let u = buckets.at_rank(biased_rank(pool, p.deg_var, &mut rng), &mut rng);
        let partner_pool = if below >= 2 { below } else { buckets.len };
        let mut v = None;
        for _ in 0..PARTNER_RETRIES {
            let c = buckets.at_rank(biased_rank(partner_pool, p.deg_var, &mut rng), &mut rng);
            if c != u && !present.contains(&key(u, c)) {
                v = Some(c);
                break;
            }
        }
        let (u, v) = match v {
            Some(v) => (u, v),
            None => fallback_pair(&buckets, &present, u).ok_or_else(|| {
                Error::Infeasible(format!("no admissible pair left after {} of {m} edges", edges.len()))
            })?,
        };
        buckets.bump(u);
        buckets.bump(v);
        edges.push((u, v));
        present.insert(key(u, v));
    }

    if let Some(v) = (0..n).find(|&v| buckets.degree[v] < min) {
        return Err(Error::Infeasible(format!(
            "vertex {v} ended with degree {} below the minimum {min}",
            buckets.degree[v]
        )));
    }
    let graph = Graph::from_edges(n, &edges);
    let mut params = vec![
        ("n".to_string(), n.to_string()),
        ("avg_degree".to_string(), p.avg_degree.to_string()),
        ("deg_var".to_string(), p.deg_var.to_string()),
    ];
    if let Some(d) = p.min_deg {
        params.push(("min_deg".into(), d.to_string()));
    }
    if let Some(d) = p.max_deg {
        params.push(("max_deg".into(), d.to_string()));
    }
    params.push(("seed".into(), p.seed.to_string()));
    Ok(Generated { graph, name: p.name(), params })
}

/// Lowest-degree admissible partner for `u`, else any admissible pair.
fn fallback_pair(b: &Buckets, present: &HashSet<(usize, usize)>, u: usize) -> Option<(usize, usize)> {
    let partner = |x: usize| b.ascending().find(|&y| y != x && !present.contains(&key(x, y)));
    if let Some(v) = partner(u) {
        return Some((u, v));
    }
    b.ascending().find_map(|x| partner(x).map(|y| (x, y)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeoParams {
    pub n: usize,
    pub m: usize,
    pub wraparound: bool,
    pub seed: u64,
}

impl GeoParams {
    pub fn name(&self) -> String {
        let prefix = if self.wraparound { "geow" } else { "geo" };
        format!("{prefix}-{}_{}", self.n, self.m)
    }

    /// Connection radius giving about `m` expected edges.
    pub fn radius(&self) -> f64 {
        let n = self.n as f64;
        (2.0 * self.m as f64 / (PI * n * (n - 1.0))).sqrt()
    }
}

fn axis_gap(a: f64, b: f64, wrap: bool) -> f64 {
    let d = (a - b).abs();
    if wrap {
        d.min(1.0 - d)
    } else {
        d
    }
}

fn distance(p: (f64, f64), q: (f64, f64), wrap: bool) -> f64 {
    axis_gap(p.0, q.0, wrap).hypot(axis_gap(p.1, q.1, wrap))
}

pub fn generate_geometric(p: &GeoParams) -> Result<Generated> {
    let n = p.n;
    if n == 0 {
        return Err(Error::Infeasible("n must be positive".into()));
    }
    if p.m > n * (n - 1) / 2 {
        return Err(Error::Infeasible(format!("{} edges exceed the simple graph maximum for n={n}", p.m)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let d = if n > 1 { p.radius() } else { 0.0 };
    let mut edges = Vec::new();
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(comp: &mut [usize], mut x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        x
    }
    for u in 0..n {
        for v in u + 1..n {
            if distance(points[u], points[v], p.wraparound) < d {
                edges.push((u, v));
                let (a, b) = (find(&mut comp, u), find(&mut comp, v));
                comp[a] = b;
            }
        }
    }
    let root: Vec<usize> = (0..n).map(|v| find(&mut comp, v)).collect();

    // Prim over points with zero cost inside a component; positive-cost tree
    // edges are the closest links between components.
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![usize::MAX; n];
    best[0] = 0.0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("a vertex remains");
        in_tree[v] = true;
        if parent[v] != usize::MAX && root[parent[v]] != root[v] {
            edges.push((parent[v], v));
        }
        for u in 0..n {
            if in_tree[u] {
                continue;
            }
            let w = if root[u] == root[v] { 0.0 } else { distance(points[u], points[v], p.wraparound) };
            if w < best[u] {
                best[u] = w;
                parent[u] = v;
            }
        }
    }

    let params = vec![
        ("n".to_string(), n.to_string()),
        ("target_edges".to_string(), p.m.to_string()),
        ("wraparound".to_string(), p.wraparound.to_string()),
        ("seed".to_string(), p.seed.to_string()),
    ];
    Ok(Generated { graph: Graph::from_edges(n, &edges), name: p.name(), params })
}
