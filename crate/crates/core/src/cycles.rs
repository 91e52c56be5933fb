//! Exact detection of short cycles (length 3 to 8).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const MAX_CYCLE_LEN: usize = 8;

/// Returns a cycle whose length is one of `lengths`, or `None` if there is none.
///
/// The witness lists the cycle's vertices in order, starting at its smallest vertex.
pub fn has_short_cycle(g: &Graph, lengths: &[usize]) -> Result<Option<Vec<Vertex>>> {
    let mut wanted: Vec<usize> = lengths.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    if let Some(&bad) = wanted.iter().find(|&&l| !(3..=MAX_CYCLE_LEN).contains(&l)) {
        return Err(Error::Params(format!("cycle length {bad} outside 3..={MAX_CYCLE_LEN}")));
    }
    let Some(&longest) = wanted.last() else {
        return Ok(None);
    };
    if girth_up_to(g, longest).is_none() {
        return Ok(None);
    }
    for len in wanted {
        let found = if len == 4 {
            find_c4(g)
        } else {
            find_cycle_of_length(g, len)
        };
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Exact girth if it is at most `cap`.
pub fn girth_up_to(g: &Graph, cap: usize) -> Option<usize> {
    let n = g.n();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for s in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        dist[s] = 0;
        touched.push(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best.min(cap + 1) {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best <= cap).then_some(best)
}

fn find_c4(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut via = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for u in 0..n {
        for &w in &touched {
            via[w] = usize::MAX;
        }
        touched.clear();
        for &x in g.neighbors(u) {
            for &w in g.neighbors(x) {
                if w <= u {
                    continue;
                }
                if via[w] == usize::MAX {
                    via[w] = x;
                    touched.push(w);
                } else {
                    return Some(vec![u, via[w], w, x]);
                }
            }
        }
    }
    None
}

fn find_cycle_of_length(g: &Graph, len: usize) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut on_path = vec![false; n];
    for s in 0..n {
        // distances back to s through vertices >= s, for pruning
        for d in dist.iter_mut() {
            *d = usize::MAX;
        }
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= len / 2 {
                continue;
            }
            for &w in g.neighbors(u) {
                if w > s && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![s];
        on_path[s] = true;
        let found = extend(g, s, len, &dist, &mut path, &mut on_path);
        on_path[s] = false;
        if found {
            return Some(path);
        }
    }
    None
}

fn extend(g: &Graph, s: Vertex, len: usize, dist: &[usize], path: &mut Vec<Vertex>, on_path: &mut [bool]) -> bool {
    let u = *path.last().unwrap();
    if path.len() == len {
        return g.has_edge(u, s);
    }
    let remaining = len - path.len();
    for &w in g.neighbors(u) {
        if w <= s || on_path[w] || dist[w] > remaining {
            continue;
        }
        // each cycle is found twice; keep the orientation whose second vertex is smaller
        if path.len() == len - 1 && w < path[1] {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        if extend(g, s, len, dist, path, on_path) {
            return true;
        }
        on_path[w] = false;
        path.pop();
    }
    false
}
