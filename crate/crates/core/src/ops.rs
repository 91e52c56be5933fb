//! Neighbourhood, distance and peeling primitives shared by every embedder.

use std::collections::VecDeque;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Path, Side, Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub avg: Ratio<u64>,
    pub min: usize,
    pub max: usize,
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(DegreeStats {
        avg: g.avg_degree(),
        min: g.min_degree(),
        max: g.max_degree(),
    })
}

/// `Γ(X) = N(X) \ X`.
pub fn external_neighborhood(g: &Graph, x: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new(g.n());
    for u in x.iter() {
        for &w in g.neighbors(u) {
            if !x.contains(w) {
                out.insert(w);
            }
        }
    }
    out
}

/// BFS distances from `v`, cut off after `max_depth` layers. Unreached vertices get `usize::MAX`.
pub fn bfs_distances(g: &Graph, v: Vertex, max_depth: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == max_depth {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn sphere(g: &Graph, v: Vertex, i: usize) -> VertexSet {
    let dist = bfs_distances(g, v, i);
    VertexSet::from_iter(g.n(), (0..g.n()).filter(|&w| dist[w] == i))
}

pub fn ball(g: &Graph, v: Vertex, r: usize) -> VertexSet {
    let dist = bfs_distances(g, v, r);
    VertexSet::from_iter(g.n(), (0..g.n()).filter(|&w| dist[w] <= r))
}

/// Vertices at distance exactly `i` from every member of `s`.
pub fn common_i_neighborhood(g: &Graph, s: &VertexSet, i: usize) -> VertexSet {
    let mut members = s.iter();
    let Some(first) = members.next() else {
        return VertexSet::new(g.n());
    };
    let mut acc = sphere(g, first, i);
    for v in members {
        if acc.is_empty() {
            break;
        }
        acc.intersect_with(&sphere(g, v, i));
    }
    acc
}

/// Shortest path from some vertex of `from` to some vertex of `to` with at most `budget` edges
/// whose interior avoids `forbidden ∪ from ∪ to`.
///
/// Sources are seeded in ascending id order and neighbours are scanned in ascending order, so
/// among equally short paths the BFS-parent path is returned.
pub fn shortest_path_between_sets(
    g: &Graph,
    from: &VertexSet,
    to: &VertexSet,
    forbidden: &VertexSet,
    budget: usize,
) -> Option<Path> {
    if let Some(v) = from.iter().find(|&v| to.contains(v)) {
        return Some(Path(vec![v]));
    }
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in from.iter() {
        if forbidden.contains(v) {
            continue;
        }
        dist[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= budget {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] != usize::MAX {
                continue;
            }
            if to.contains(w) {
                let mut seq = vec![w, u];
                let mut cur = u;
                while parent[cur] != usize::MAX {
                    cur = parent[cur];
                    seq.push(cur);
                }
                seq.reverse();
                return Some(Path(seq));
            }
            if forbidden.contains(w) || from.contains(w) {
                continue;
            }
            dist[w] = dist[u] + 1;
            parent[w] = u;
            queue.push_back(w);
        }
    }
    None
}

/// Spanning bipartite subgraph keeping at least half the edges.
///
/// Labelled input is returned as is; 2-colourable input keeps every edge. Otherwise a seeded
/// balanced bisection is improved by single-vertex moves until every vertex has at least as many
/// crossing as non-crossing edges.
pub fn bipartite_half(g: &Graph, seed: u64) -> Graph {
    if g.sides().is_some() {
        return g.clone();
    }
    if let Some(sides) = g.two_coloring() {
        return g.crossing_subgraph(sides);
    }
    let n = g.n();
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut sides = vec![Side::B; n];
    for &v in &order[..n / 2] {
        sides[v] = Side::A;
    }
    loop {
        let mut moved = false;
        for v in 0..n {
            let same = g.neighbors(v).iter().filter(|&&w| sides[w] == sides[v]).count();
            if 2 * same > g.degree(v) {
                sides[v] = sides[v].flip();
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    g.crossing_subgraph(sides)
}

/// Repeatedly deletes vertices of degree `< tau`. The result may be empty.
pub fn peel_min_degree(g: &Graph, tau: Ratio<u64>) -> Graph {
    let keep = peel_set(g, &g.vertex_set(), tau);
    let h = g.induced(&keep);
    debug_assert!(
        h.n() == 0 || tau * 2 > g.avg_degree() || h.avg_degree() >= g.avg_degree(),
        "peeling below half the average degree lowered the density"
    );
    h
}

/// The vertex set surviving min-degree peeling of `g[alive]`.
pub fn peel_set(g: &Graph, alive: &VertexSet, tau: Ratio<u64>) -> VertexSet {
    let mut alive = alive.clone();
    let mut deg: Vec<usize> = (0..g.n())
        .map(|v| g.neighbors(v).iter().filter(|&&w| alive.contains(w)).count())
        .collect();
    let below = |d: usize| Ratio::from_integer(d as u64) < tau;
    let mut stack: Vec<Vertex> = alive.iter().filter(|&v| below(deg[v])).collect();
    while let Some(v) = stack.pop() {
        if !alive.contains(v) {
            continue;
        }
        alive.remove(v);
        for &w in g.neighbors(v) {
            if alive.contains(w) {
                deg[w] -= 1;
                if below(deg[w]) && !below(deg[w] + 1) {
                    stack.push(w);
                }
            }
        }
    }
    alive
}

/// Peels until `δ(H) ≥ d(H)/2` holds for the current `H`.
pub fn peel_to_half_average(g: &Graph) -> Graph {
    let mut h = g.clone();
    loop {
        if h.n() == 0 {
            return h;
        }
        let tau = h.avg_degree() / 2;
        if Ratio::from_integer(h.min_degree() as u64) >= tau {
            return h;
        }
        h = peel_min_degree(&h, tau);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::small::*;

    #[test]
    fn degree_stats_examples() {
        let s = degree_stats(&cycle(6)).unwrap();
        assert_eq!((s.avg, s.min, s.max), (Ratio::from_integer(2), 2, 2));
        let s = degree_stats(&complete_bipartite(3, 3)).unwrap();
        assert_eq!((s.avg, s.min, s.max), (Ratio::from_integer(3), 3, 3));
        let s = degree_stats(&k4_pendant()).unwrap();
        assert_eq!((s.avg, s.min, s.max), (Ratio::new(14, 5), 1, 4));
        assert!(matches!(degree_stats(&Graph::empty(0)), Err(Error::EmptyGraph)));
    }

    #[test]
    fn external_neighborhood_examples() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            external_neighborhood(&star, &VertexSet::from_iter(4, [0])).to_vec(),
            vec![1, 2, 3]
        );
        let c6 = cycle(6);
        assert!(external_neighborhood(&c6, &VertexSet::full(6)).is_empty());
        assert_eq!(
            external_neighborhood(&c6, &VertexSet::from_iter(6, [0, 1])).to_vec(),
            vec![2, 5]
        );
    }

    #[test]
    fn spheres_and_balls() {
        let c6 = cycle(6);
        assert_eq!(sphere(&c6, 0, 2).to_vec(), vec![2, 4]);
        assert_eq!(ball(&c6, 0, 1).to_vec(), vec![0, 1, 5]);
        assert_eq!(sphere(&c6, 0, 0).to_vec(), vec![0]);
        let p = path_graph(3);
        assert_eq!(sphere(&p, 0, 2).to_vec(), vec![2]);
    }

    #[test]
    fn common_neighborhood_examples() {
        let p5 = path_graph(5);
        assert_eq!(
            common_i_neighborhood(&p5, &VertexSet::from_iter(5, [0, 4]), 2).to_vec(),
            vec![2]
        );
        let c6 = cycle(6);
        assert_eq!(
            common_i_neighborhood(&c6, &VertexSet::from_iter(6, [0, 2]), 2).to_vec(),
            vec![4]
        );
        // K_{3,3}: a1,a2,a3 = 0,1,2
        let k33 = complete_bipartite(3, 3);
        assert_eq!(
            common_i_neighborhood(&k33, &VertexSet::from_iter(6, [0, 1]), 2).to_vec(),
            vec![2]
        );
    }

    #[test]
    fn shortest_path_examples() {
        let c6 = cycle(6);
        let from = VertexSet::from_iter(6, [0]);
        let to = VertexSet::from_iter(6, [3]);
        let forb = VertexSet::from_iter(6, [1, 2]);
        let p = shortest_path_between_sets(&c6, &from, &to, &forb, 6).unwrap();
        assert_eq!(p.vertices(), &[0, 5, 4, 3]);
        assert!(shortest_path_between_sets(&c6, &from, &to, &forb, 2).is_none());
        let forb = VertexSet::from_iter(6, [1, 5]);
        assert!(shortest_path_between_sets(&c6, &from, &to, &forb, 6).is_none());
    }

    #[test]
    fn shortest_path_ties_go_to_lowest_ids() {
        let c6 = cycle(6);
        let p = shortest_path_between_sets(
            &c6,
            &VertexSet::from_iter(6, [0]),
            &VertexSet::from_iter(6, [3]),
            &VertexSet::new(6),
            6,
        )
        .unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn bipartite_half_examples() {
        assert_eq!(bipartite_half(&complete(3), 7).m(), 2);
        for seed in 0..10 {
            let h = bipartite_half(&complete(4), seed);
            assert_eq!(h.m(), 4);
            assert!(h.sides().is_some());
        }
        let k33 = complete_bipartite(3, 3);
        assert_eq!(
            bipartite_half(&k33, 1).edges().collect::<Vec<_>>(),
            k33.edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn peel_examples() {
        assert_eq!(peel_min_degree(&path_graph(4), Ratio::from_integer(2)).n(), 0);
        assert_eq!(peel_min_degree(&cycle(6), Ratio::from_integer(2)).m(), 6);
        let h = peel_min_degree(&k4_pendant(), Ratio::from_integer(2));
        assert_eq!(h.origins(), &[0, 1, 2, 3]);
        assert_eq!(h.m(), 6);
    }
}
