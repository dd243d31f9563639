//! Contraction records and the reverse replay that turns a cover of the
//! reduced instance into a cover of the original one.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnfoldRecord {
    /// `v` had degree 2 with non-adjacent neighbors `u`, `w`, merged into `z`.
    Fold2 { v: usize, u: usize, w: usize, z: usize },
    /// Degree-3 twins `v`, `w`; their independent neighborhood became `z`.
    Twin { v: usize, w: usize, neighbors: [usize; 3], z: usize },
    /// `common` was taken directly. `nv_minus` x `nw_minus` edges were added.
    Funnel { v: usize, w: usize, common: Vec<usize>, nv_minus: Vec<usize>, nw_minus: Vec<usize> },
    /// Chordless cycle `v1 v2 v3 v4`; `n13` x `n24` edges were added.
    Desk { v1: usize, v2: usize, v3: usize, v4: usize, n13: Vec<usize>, n24: Vec<usize> },
}

fn check(cover: &[bool], ids: &[usize]) -> Result<()> {
    match ids.iter().find(|&&v| v >= cover.len()) {
        Some(&v) => Err(Error::Unfold(v)),
        None => Ok(()),
    }
}

/// Replays `ledger` newest-first over `cover`, which is indexed by vertex id
/// and must span every id the ledger mentions.
pub fn unfold_solution(ledger: &[UnfoldRecord], cover: &mut [bool]) -> Result<()> {
    for rec in ledger.iter().rev() {
        match rec {
            &UnfoldRecord::Fold2 { v, u, w, z } => {
                check(cover, &[v, u, w, z])?;
                if cover[z] {
                    cover[z] = false;
                    cover[u] = true;
                    cover[w] = true;
                } else {
                    cover[v] = true;
                }
            }
            &UnfoldRecord::Twin { v, w, neighbors, z } => {
                check(cover, &[v, w, z])?;
                check(cover, &neighbors)?;
                if cover[z] {
                    cover[z] = false;
                    for x in neighbors {
                        cover[x] = true;
                    }
                } else {
                    cover[v] = true;
                    cover[w] = true;
                }
            }
            UnfoldRecord::Funnel { v, w, common, nv_minus, nw_minus } => {
                check(cover, &[*v, *w])?;
                check(cover, common)?;
                check(cover, nv_minus)?;
                check(cover, nw_minus)?;
                for &c in common {
                    cover[c] = true;
                }
                if nv_minus.iter().all(|&s| cover[s]) {
                    cover[*w] = true;
                } else {
                    cover[*v] = true;
                }
            }
            UnfoldRecord::Desk { v1, v2, v3, v4, n13, n24 } => {
                check(cover, &[*v1, *v2, *v3, *v4])?;
                check(cover, n13)?;
                check(cover, n24)?;
                if n13.iter().all(|&s| cover[s]) {
                    cover[*v2] = true;
                    cover[*v4] = true;
                } else {
                    cover[*v1] = true;
                    cover[*v3] = true;
                }
            }
        }
    }
    Ok(())
}
