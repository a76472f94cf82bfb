use crate::error::{Error, Result};
use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum bipartite matching as `(left, right)` pairs sorted by left vertex.
pub fn hopcroft_karp(
    left: usize,
    right: usize,
    edges: &[(usize, usize)],
) -> Result<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); left];
    for &(u, v) in edges {
        if u >= left || v >= right {
            return Err(Error::RejectedInput(format!(
                "edge ({u},{v}) outside a {left}x{right} bipartite graph"
            )));
        }
        adj[u].push(v);
    }
    let mut mate_l = vec![NIL; left];
    let mut mate_r = vec![NIL; right];
    let mut dist = vec![0usize; left];
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left {
            if mate_l[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match mate_r[v] {
                    NIL => found = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut next = vec![0usize; left];
        for u in 0..left {
            if mate_l[u] == NIL {
                augment(u, &adj, &mut mate_l, &mut mate_r, &mut dist, &mut next);
            }
        }
    }
    Ok((0..left)
        .filter(|&u| mate_l[u] != NIL)
        .map(|u| (u, mate_l[u]))
        .collect())
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [usize],
    mate_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
) -> bool {
    while next[u] < adj[u].len() {
        let v = adj[u][next[u]];
        next[u] += 1;
        let w = mate_r[v];
        if w == NIL || (dist[w] == dist[u] + 1 && augment(w, adj, mate_l, mate_r, dist, next)) {
            mate_l[u] = v;
            mate_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        assert_eq!(
            hopcroft_karp(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)])
                .unwrap()
                .len(),
            2
        );
        assert_eq!(
            hopcroft_karp(1, 3, &[(0, 0), (0, 1), (0, 2)])
                .unwrap()
                .len(),
            1
        );
        let six_cycle = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0)];
        assert_eq!(hopcroft_karp(3, 3, &six_cycle).unwrap().len(), 3);
    }

    #[test]
    fn bad_edge() {
        assert!(matches!(
            hopcroft_karp(1, 1, &[(0, 1)]),
            Err(Error::RejectedInput(_))
        ));
    }
}
