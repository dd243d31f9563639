//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

pub const NONE: usize = usize::MAX;

/// A matching between `left.len()` left vertices and `n_right` right vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub size: usize,
}

/// Maximum matching of the bipartite graph whose left vertex `i` is adjacent
/// to the right vertices `adj[i]`.
///
/// `warm` may carry a valid partial matching (left to right, [`NONE`] when
/// unmatched) to start from. Augmenting paths are explored in ascending left
/// id and in adjacency order.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize, warm: Option<&[usize]>) -> Matching {
    let n_left = adj.len();
    let mut ml = vec![NONE; n_left];
    let mut mr = vec![NONE; n_right];
    let mut size = 0;
    if let Some(w) = warm {
        for (i, &j) in w.iter().enumerate().take(n_left) {
            if j != NONE && mr[j] == NONE {
                ml[i] = j;
                mr[j] = i;
                size += 1;
            }
        }
    }
    let mut dist = vec![0usize; n_left];
    let mut queue = VecDeque::new();
    let mut it = vec![0usize; n_left];
    let mut stack: Vec<usize> = Vec::new();
    loop {
        // BFS layering from free left vertices
        queue.clear();
        for i in 0..n_left {
            if ml[i] == NONE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let k = mr[j];
                if k == NONE {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }
        // layered DFS, iterative
        it.iter_mut().for_each(|x| *x = 0);
        for root in 0..n_left {
            if ml[root] != NONE {
                continue;
            }
            stack.clear();
            stack.push(root);
            let mut augmented = false;
            while let Some(&i) = stack.last() {
                if it[i] >= adj[i].len() {
                    dist[i] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let j = adj[i][it[i]];
                let k = mr[j];
                if k == NONE {
                    // flip the path held on the stack
                    let mut jj = j;
                    while let Some(x) = stack.pop() {
                        let prev = ml[x];
                        ml[x] = jj;
                        mr[jj] = x;
                        jj = prev;
                    }
                    augmented = true;
                    break;
                }
                if dist[k] != usize::MAX && dist[k] == dist[i] + 1 {
                    stack.push(k);
                } else {
                    it[i] += 1;
                }
            }
            if augmented {
                size += 1;
            }
        }
    }
    Matching { left: ml, right: mr, size }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_on_small_instance() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = hopcroft_karp(&adj, 3, None);
        assert_eq!(m.size, 3);
        assert_eq!(m.left, vec![1, 0, 2]);
    }

    #[test]
    fn bottleneck() {
        let adj = vec![vec![0], vec![0], vec![0]];
        assert_eq!(hopcroft_karp(&adj, 1, None).size, 1);
    }

    #[test]
    fn warm_start_is_extended() {
        let adj = vec![vec![0, 1], vec![0]];
        let m = hopcroft_karp(&adj, 2, Some(&[0, NONE]));
        assert_eq!(m.size, 2);
        assert_eq!(m.left, vec![1, 0]);
    }
}
