//! Maximum-density subgraph: exact via parametric min-cut, with a peeling fallback.
//!
//! Density here is `e(S)/|S|`, i.e. half the average degree of `G[S]`; maximising one
//! maximises the other.

use std::collections::VecDeque;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DensestMethod {
    /// Min-cut iteration; optimal.
    #[default]
    Exact,
    /// Greedy min-degree peeling, keeping the densest prefix; a 2-approximation.
    Peeling,
}

pub fn density(g: &Graph, s: &VertexSet) -> Ratio<u64> {
    if s.is_empty() {
        Ratio::from_integer(0)
    } else {
        Ratio::new(g.edges_within(s) as u64, s.len() as u64)
    }
}

pub fn densest_subgraph(g: &Graph, method: DensestMethod) -> Result<VertexSet> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(match method {
        DensestMethod::Exact => densest_exact(g),
        DensestMethod::Peeling => densest_peeling(g),
    })
}

/// Dinkelbach iteration on `max e(S) - g|S|`: start from `S = V` and move to the source side of
/// the min cut while it is strictly denser.
fn densest_exact(g: &Graph) -> VertexSet {
    let mut best = g.vertex_set();
    let mut best_density = density(g, &best);
    loop {
        match denser_than(g, best_density) {
            Some(s) => {
                let d = density(g, &s);
                debug_assert!(d > best_density);
                best = s;
                best_density = d;
            }
            None => return best,
        }
    }
}

/// A set with density strictly above `guess`, if one exists (Goldberg's network scaled to
/// integers: `cut(S) = q·m·n + 2(p|S| − q·e(S))` for `guess = p/q`).
fn denser_than(g: &Graph, guess: Ratio<u64>) -> Option<VertexSet> {
    let n = g.n();
    let m = g.m() as i64;
    let p = *guess.numer() as i64;
    let q = *guess.denom() as i64;
    let source = n;
    let sink = n + 1;
    let mut net = FlowNetwork::new(n + 2);
    for v in 0..n {
        net.add_edge(source, v, q * m);
        net.add_edge(v, sink, q * m + 2 * p - q * g.degree(v) as i64);
    }
    for (u, v) in g.edges() {
        net.add_edge(u, v, q);
        net.add_edge(v, u, q);
    }
    let flow = net.max_flow(source, sink);
    if flow >= q * m * n as i64 {
        return None;
    }
    let side = net.source_side(source);
    let s = VertexSet::from_iter(n, (0..n).filter(|&v| side[v]));
    (!s.is_empty()).then_some(s)
}

fn densest_peeling(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = g.vertex_set();
    let mut edges = g.m();
    let mut order = Vec::with_capacity(n);
    let mut best_density = Ratio::new(edges as u64, n as u64);
    let mut best_cut = 0;
    // bucket queue keyed by current degree
    let maxd = g.max_degree();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut cur = 0;
    for removed in 1..n {
        let v = loop {
            while buckets[cur].is_empty() {
                cur += 1;
            }
            let v = buckets[cur].pop().unwrap();
            if alive.contains(v) && deg[v] == cur {
                break v;
            }
        };
        alive.remove(v);
        order.push(v);
        edges -= deg[v];
        for &w in g.neighbors(v) {
            if alive.contains(w) {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                cur = cur.min(deg[w]);
            }
        }
        let d = Ratio::new(edges as u64, (n - removed) as u64);
        if d > best_density {
            best_density = d;
            best_cut = removed;
        }
    }
    let mut s = g.vertex_set();
    for &v in &order[..best_cut] {
        s.remove(v);
    }
    s
}

/// Dinic max-flow on an adjacency-list residual network.
struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    fn new(n: usize) -> Self {
        FlowNetwork {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) {
        debug_assert!(c >= 0);
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<i64> {
        let mut level = vec![-1; self.head.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let level = self.levels(s);
            if level[t] < 0 {
                return total;
            }
            let mut it = vec![0usize; self.head.len()];
            loop {
                let pushed = self.augment(s, t, i64::MAX, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(&mut self, u: usize, t: usize, limit: i64, level: &[i64], it: &mut [usize]) -> i64 {
        if u == t {
            return limit;
        }
        while it[u] < self.head[u].len() {
            let e = self.head[u][it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, limit.min(self.cap[e]), level, it);
                if pushed > 0 {
                    self.cap[e] -= pushed;
                    self.cap[e ^ 1] += pushed;
                    return pushed;
                }
            }
            it[u] += 1;
        }
        0
    }

    fn source_side(&self, s: usize) -> Vec<bool> {
        self.levels(s).into_iter().map(|l| l >= 0).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::small::*;

    /// Exhaustive oracle over all nonempty subsets.
    fn brute_max_density(g: &Graph) -> Ratio<u64> {
        let n = g.n();
        (1u32..(1 << n))
            .map(|mask| {
                let s = VertexSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
                density(g, &s)
            })
            .max()
            .unwrap()
    }

    #[test]
    fn examples() {
        let g = k4_pendant();
        let s = densest_subgraph(&g, DensestMethod::Exact).unwrap();
        assert_eq!(s.to_vec(), vec![0, 1, 2, 3]);
        let k33 = complete_bipartite(3, 3);
        assert_eq!(densest_subgraph(&k33, DensestMethod::Exact).unwrap().len(), 6);
        let g = disjoint_union(&complete(4), &complete(3));
        assert_eq!(
            densest_subgraph(&g, DensestMethod::Exact).unwrap().to_vec(),
            vec![0, 1, 2, 3]
        );
        assert!(densest_subgraph(&Graph::empty(3), DensestMethod::Exact).is_err());
    }

    #[test]
    fn exact_matches_exhaustive_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=11);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.35))
                .collect();
            let g = Graph::from_edges(n, &edges).unwrap();
            if g.m() == 0 {
                continue;
            }
            let s = densest_subgraph(&g, DensestMethod::Exact).unwrap();
            assert_eq!(density(&g, &s), brute_max_density(&g));
            let p = densest_subgraph(&g, DensestMethod::Peeling).unwrap();
            assert!(density(&g, &p) * 2 >= brute_max_density(&g));
            assert!(density(&g, &p) >= density(&g, &g.vertex_set()));
        }
    }
}
