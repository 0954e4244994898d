use super::{CsrMatrix, Scalar};
use std::collections::VecDeque;

/// Reverse Cuthill-McKee permutation of the symmetrized pattern.
/// Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee<S: Scalar>(a: &CsrMatrix<S>) -> Vec<usize> {
    let n = a.n_rows;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for &j in a.row(i).0 {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    let deg: Vec<usize> = adj.iter().map(|l| l.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(seed, &adj, &deg);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nb: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            nb.sort_by_key(|&w| (deg[w], w));
            for w in nb {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(start: usize, adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut level = vec![usize::MAX; adj.len()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut last = start;
    while let Some(v) = queue.pop_front() {
        last = v;
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (level, last)
}

fn pseudo_peripheral(seed: usize, adj: &[Vec<usize>], deg: &[usize]) -> usize {
    let mut v = seed;
    let mut ecc = 0usize;
    for _ in 0..8 {
        let (level, _) = bfs_levels(v, adj);
        let max_level = level.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap_or(0);
        if max_level <= ecc && v != seed {
            break;
        }
        ecc = max_level;
        let cand = (0..adj.len())
            .filter(|&w| level[w] == max_level)
            .min_by_key(|&w| (deg[w], w))
            .unwrap();
        if cand == v {
            break;
        }
        v = cand;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TripletBuilder;

    #[test]
    fn rcm_is_a_permutation_and_narrows_a_path() {
        let n = 30;
        let shuffle: Vec<usize> = (0..n).map(|i| (i * 7) % n).collect();
        let mut b = TripletBuilder::new(n, n);
        for i in 0..n {
            b.push(shuffle[i], shuffle[i], 2.0);
            if i + 1 < n {
                b.push(shuffle[i], shuffle[i + 1], -1.0);
                b.push(shuffle[i + 1], shuffle[i], -1.0);
            }
        }
        let a = b.build();
        let p = reverse_cuthill_mckee(&a);
        let mut seen = p.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..n).collect::<Vec<_>>());
        let mut inv = vec![0; n];
        for (new, &old) in p.iter().enumerate() {
            inv[old] = new;
        }
        let bw = (0..n)
            .flat_map(|i| a.row(i).0.iter().map(move |&j| (i, j)).collect::<Vec<_>>())
            .map(|(i, j)| (inv[i] as i64 - inv[j] as i64).unsigned_abs())
            .max()
            .unwrap();
        assert_eq!(bw, 1);
    }
}
