//! Instance measures and the configuration recommender.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{DegreeStats, Graph};

/// Average degree `2m/n`, rescaled by `200/n` when it exceeds 20.
pub fn nad_from(n: usize, m: usize) -> f64 {
    let avg = 2.0 * m as f64 / n as f64;
    if avg > 20.0 {
        avg * 200.0 / n as f64
    } else {
        avg
    }
}

pub fn nad(g: &Graph) -> f64 {
    nad_from(g.n(), g.m())
}

/// 95th over 5th percentile degree, the latter clamped to at least 1.
pub fn spread_of(stats: &DegreeStats) -> f64 {
    stats.top as f64 / stats.bottom.max(1) as f64
}

pub fn spread(g: &Graph) -> Result<f64> {
    Ok(spread_of(&DegreeStats::of_graph(g)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceProfile {
    pub n: usize,
    pub m: usize,
    #[serde(skip)]
    pub degree_stats: DegreeStats,
    pub avg_degree: f64,
    pub nad: f64,
    pub spread: f64,
    /// Fraction of vertices in a heuristic odd cycle transversal.
    pub oct_estimate: Option<f64>,
}

pub fn compute_profile(g: &Graph, oct_seed: Option<u64>) -> Result<InstanceProfile> {
    let degree_stats = DegreeStats::of_graph(g)?;
    Ok(InstanceProfile {
        n: g.n(),
        m: g.m(),
        avg_degree: 2.0 * g.m() as f64 / g.n() as f64,
        nad: nad(g),
        spread: spread_of(&degree_stats),
        degree_stats,
        oct_estimate: oct_seed.map(|s| estimate_oct(g, s).len() as f64 / g.n() as f64),
    })
}

pub const CSV_HEADER: &str = "n,m,min,bottom,med,mean,top,max,stdev,spread,nad";

impl InstanceProfile {
    pub fn csv_row(&self) -> String {
        let d = &self.degree_stats;
        format!(
            "{},{},{},{},{},{:.3},{},{},{:.3},{:.3},{:.3}",
            self.n, self.m, d.min, d.bottom, d.median, d.mean, d.top, d.max, d.stdev, self.spread, self.nad
        )
    }
}

impl fmt::Display for InstanceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.degree_stats;
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "m {}", self.m)?;
        writeln!(f, "min {}", d.min)?;
        writeln!(f, "bottom {}", d.bottom)?;
        writeln!(f, "med {}", d.median)?;
        writeln!(f, "mean {:.3}", d.mean)?;
        writeln!(f, "top {}", d.top)?;
        writeln!(f, "max {}", d.max)?;
        writeln!(f, "stdev {:.3}", d.stdev)?;
        writeln!(f, "spread {:.3}", self.spread)?;
        write!(f, "nad {:.3}", self.nad)?;
        if let Some(o) = self.oct_estimate {
            write!(f, "\noct_estimate {o:.4}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// Small spread and high density: no reductions.
    H1,
    /// Large spread and density: add dominance.
    H2,
    /// Everything else: degree-one and fold2.
    H3,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recommendation {
    pub config_name: &'static str,
    pub triggered: Hypothesis,
    /// Suggested LP-enabled preset when the OCT estimate is small.
    pub lp_hint: Option<&'static str>,
    /// Average degree 5 to 20 with small spread: expect a hard instance.
    pub hardness_flag: bool,
}

pub const OCT_LP_THRESHOLD: f64 = 0.20;

/// Recommendation from the raw measures.
pub fn recommend(spread: f64, nad: f64, avg_degree: f64, oct: Option<f64>) -> Recommendation {
    let (config_name, triggered) = if spread <= 4.0 && nad > 20.0 {
        ("None", Hypothesis::H1)
    } else if spread >= 16.0 && nad >= 16.0 {
        ("r0_l1", Hypothesis::H2)
    } else {
        ("DF2", Hypothesis::H3)
    };
    Recommendation {
        config_name,
        triggered,
        lp_hint: oct.filter(|&o| o < OCT_LP_THRESHOLD).map(|_| "r1_l4"),
        hardness_flag: (5.0..=20.0).contains(&avg_degree) && spread <= 4.0,
    }
}

pub fn recommend_config(p: &InstanceProfile) -> Recommendation {
    recommend(p.spread, p.nad, p.avg_degree, p.oct_estimate)
}

/// Heuristic odd cycle transversal.
///
/// Vertices are visited breadth-first from starts in a seeded random order;
/// a vertex whose colored neighbors already use both colors joins the
/// transversal, otherwise it takes the color its neighbors lack. One pass
/// then returns transversal vertices whose neighbors use a single color.
pub fn estimate_oct(g: &Graph, seed: u64) -> Vec<usize> {
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut in_s = vec![false; n];
    let mut queued = vec![false; n];
    let mut queue = std::collections::VecDeque::new();

    let seen_colors = |v: usize, color: &[Option<u8>], in_s: &[bool]| -> [bool; 2] {
        let mut seen = [false; 2];
        for &u in g.neighbors(v) {
            if let (Some(c), false) = (color[u], in_s[u]) {
                seen[c as usize] = true;
            }
        }
        seen
    };

    for &start in &order {
        if queued[start] {
            continue;
        }
        queued[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            match seen_colors(v, &color, &in_s) {
                [true, true] => in_s[v] = true,
                [seen0, _] => color[v] = Some(seen0 as u8),
            }
            for &u in g.neighbors(v) {
                if !queued[u] {
                    queued[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    for &v in &order {
        if !in_s[v] {
            continue;
        }
        match seen_colors(v, &color, &in_s) {
            [true, true] => {}
            [seen0, _] => {
                in_s[v] = false;
                color[v] = Some(seen0 as u8);
            }
        }
    }
    (0..n).filter(|&v| in_s[v]).collect()
}

/// True when `g` minus `removed` is bipartite.
pub fn is_bipartite_without(g: &Graph, removed: &[usize]) -> bool {
    let mut gone = vec![false; g.n()];
    for &v in removed {
        gone[v] = true;
    }
    let mut side: Vec<Option<bool>> = vec![None; g.n()];
    for s in 0..g.n() {
        if gone[s] || side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let sv = side[v].unwrap();
            for &u in g.neighbors(v) {
                if gone[u] {
                    continue;
                }
                match side[u] {
                    None => {
                        side[u] = Some(!sv);
                        stack.push(u);
                    }
                    Some(su) if su == sv => return false,
                    _ => {}
                }
            }
        }
    }
    true
}
