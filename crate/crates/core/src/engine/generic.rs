//! Greedy `TK_k` search on arbitrary hosts; exhaustive on tiny ones.

use std::collections::{BTreeMap, BTreeSet};

use crate::certify::{brute_force_max_tk, Certificate, BRUTE_FORCE_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::ops::shortest_path_between_sets;

/// Largest subdivided clique the search can find in `h`, never more than `target` cores.
///
/// Hosts with at most nine vertices are searched exhaustively. Larger hosts start from the
/// largest `k` for which `k` vertices have degree at least `k − 1`, take the `k` highest-degree
/// vertices as cores, and join pairs fewest-options-first by shortest paths. A pair that cannot
/// be joined costs the core with fewer free neighbours. Attempts continue with smaller `k` while
/// they could still beat the best result, ending with a cycle for `k = 3` and an edge for `k = 2`.
pub fn generic_tk(h: &Graph, target: Option<usize>) -> Result<Certificate> {
    if h.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = h.n();
    if n <= BRUTE_FORCE_LIMIT {
        return Ok(brute_force_max_tk(h, target.unwrap_or(n))?.1);
    }
    let cap = target.unwrap_or(n).min(degree_feasible(h));
    let (u, v) = h.edges().next().expect("m > 0");
    let mut best = if cap >= 2 {
        Certificate::new([u, v], [vec![u, v]])
    } else {
        Certificate::single(u)
    };
    let mut by_degree: Vec<Vertex> = (0..n).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    let mut k = cap;
    while k > best.ell() && k >= 3 {
        let got = attempt(h, &by_degree[..k]);
        if got.ell() > best.ell() {
            best = got;
        }
        k -= 1;
    }
    if best.ell() < 3 && cap >= 3 {
        if let Some(c) = find_cycle(h) {
            let tail: Vec<Vertex> = c[2..].iter().copied().chain([c[0]]).collect();
            best = Certificate::new([c[0], c[1], c[2]], [vec![c[0], c[1]], vec![c[1], c[2]], tail]);
        }
    }
    Ok(best)
}

/// Largest `k` such that at least `k` vertices have degree `≥ k − 1`.
fn degree_feasible(h: &Graph) -> usize {
    let mut degs: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    degs.sort_unstable_by(|a, b| b.cmp(a));
    let mut k = 0;
    while k < degs.len() && degs[k] >= k {
        k += 1;
    }
    k
}

fn attempt(h: &Graph, cores: &[Vertex]) -> Certificate {
    let n = h.n();
    let mut alive: BTreeSet<Vertex> = cores.iter().copied().collect();
    let mut paths: BTreeMap<(Vertex, Vertex), Vec<Vertex>> = BTreeMap::new();
    for &a in &alive {
        for &b in alive.range(a + 1..) {
            if h.has_edge(a, b) {
                paths.insert((a, b), vec![a, b]);
            }
        }
    }
    loop {
        let mut blocked = VertexSet::from_iter(n, alive.iter().copied());
        for seq in paths.values() {
            for &x in &seq[1..seq.len() - 1] {
                blocked.insert(x);
            }
        }
        let free = |x: Vertex| h.neighbors(x).iter().filter(|&&w| !blocked.contains(w)).count();
        let pending = alive
            .iter()
            .flat_map(|&a| alive.range(a + 1..).map(move |&b| (a, b)))
            .filter(|p| !paths.contains_key(p))
            .min_by_key(|&(a, b)| (free(a).min(free(b)), a, b));
        let Some((a, b)) = pending else {
            break;
        };
        let mut forbidden = blocked.clone();
        forbidden.remove(a);
        forbidden.remove(b);
        let from = VertexSet::from_iter(n, [a]);
        let to = VertexSet::from_iter(n, [b]);
        match shortest_path_between_sets(h, &from, &to, &forbidden, n) {
            Some(p) => {
                paths.insert((a, b), p.0);
            }
            None => {
                let drop = if (free(a), a) < (free(b), b) { a } else { b };
                alive.remove(&drop);
                paths.retain(|&(x, y), _| x != drop && y != drop);
            }
        }
    }
    Certificate::new(alive, paths.into_values())
}

/// Some cycle of `h`, as a vertex sequence, found by depth-first search.
pub(crate) fn find_cycle(h: &Graph) -> Option<Vec<Vertex>> {
    let n = h.n();
    let mut pos = vec![usize::MAX; n];
    let mut done = vec![false; n];
    for root in 0..n {
        if done[root] {
            continue;
        }
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        pos[root] = 0;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < h.degree(v) {
                let w = h.neighbors(v)[*i];
                *i += 1;
                let parent = (stack.len() >= 2).then(|| stack[stack.len() - 2].0);
                if Some(w) == parent || done[w] {
                    continue;
                }
                if pos[w] != usize::MAX {
                    return Some(stack[pos[w]..].iter().map(|&(x, _)| x).collect());
                }
                pos[w] = stack.len();
                stack.push((w, 0));
            } else {
                pos[v] = usize::MAX;
                done[v] = true;
                stack.pop();
            }
        }
    }
    None
}
