//! `(ε₁, t)`-expanders: the `ε(x)` profile, exact and heuristic expansion checks, and extraction
//! of a dense expanding subgraph.
//!
//! Logarithms are natural throughout.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::densest::{densest_subgraph, DensestMethod};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ops::{external_neighborhood, peel_to_half_average};

/// Largest graph [`certify_exhaustive`] accepts.
pub const EXHAUSTIVE_LIMIT: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpanderParams {
    pub eps1: f64,
    pub eps2: f64,
    pub t: f64,
}

impl ExpanderParams {
    pub fn new(eps1: f64, eps2: f64, t: f64) -> Result<Self> {
        if !(eps1 > 0.0 && eps1 <= 1.0) {
            return Err(Error::Params(format!("eps1 = {eps1} outside (0, 1]")));
        }
        let positive = |x: f64| x > 0.0;
        if !positive(eps2) || !positive(t) {
            return Err(Error::Params(format!("eps2 = {eps2} and t = {t} must be positive")));
        }
        Ok(ExpanderParams { eps1, eps2, t })
    }

    /// Parameters for a graph of average degree `d`: `t = ε₂·d²`.
    pub fn for_degree(eps1: f64, eps2: f64, d: f64) -> Result<Self> {
        Self::new(eps1, eps2, (eps2 * d * d).max(f64::MIN_POSITIVE))
    }

    pub fn epsilon(&self, x: f64) -> f64 {
        epsilon(x, self.eps1, self.t)
    }

    /// Inclusive range of set sizes the expansion condition constrains.
    pub fn window(&self, n: usize) -> (usize, usize) {
        let lo = ((self.t / 2.0).ceil() as usize).max(1);
        (lo, n / 2)
    }

    /// `ε(|X|)·|X|`.
    pub fn required(&self, size: usize) -> f64 {
        self.epsilon(size as f64) * size as f64
    }
}

/// `ε(x) = 0` for `x < t/5`, else `ε₁ / ln²(15x/t)`.
pub fn epsilon(x: f64, eps1: f64, t: f64) -> f64 {
    if x < t / 5.0 {
        0.0
    } else {
        let l = (15.0 * x / t).ln();
        eps1 / (l * l)
    }
}

/// `(2/ε₁)·ln³(15n/t)`.
pub fn diam_bound(n: usize, eps1: f64, t: f64) -> Result<f64> {
    let ratio = 15.0 * n as f64 / t;
    if ratio <= 1.0 {
        return Err(Error::DegenerateBudget(ratio));
    }
    Ok(2.0 / eps1 * ratio.ln().powi(3))
}

/// A set whose external neighbourhood is too small.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionWitness {
    pub set: VertexSet,
    pub boundary_size: usize,
    pub required: f64,
}

impl ExpansionWitness {
    /// Recomputes the boundary in `g` and checks the violation.
    pub fn holds_in(&self, g: &Graph, params: &ExpanderParams) -> bool {
        let b = external_neighborhood(g, &self.set).len();
        let (lo, hi) = params.window(g.n());
        let size = self.set.len();
        b == self.boundary_size && size >= lo && size <= hi && (b as f64) < params.required(size)
    }
}

fn witness(g: &Graph, params: &ExpanderParams, set: VertexSet) -> Option<ExpansionWitness> {
    let boundary_size = external_neighborhood(g, &set).len();
    let required = params.required(set.len());
    let w = ExpansionWitness {
        set,
        boundary_size,
        required,
    };
    w.holds_in(g, params).then_some(w)
}

/// Checks every set in the size window, by size and then in colexicographic order, and returns
/// the first violation.
pub fn certify_exhaustive(g: &Graph, params: &ExpanderParams) -> Result<Option<ExpansionWitness>> {
    let n = g.n();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let (lo, hi) = params.window(n);
    for k in lo..=hi {
        let required = params.required(k);
        let mut mask: u32 = (1u32 << k) - 1;
        let limit: u32 = 1u32 << n;
        while mask < limit {
            let mut reach = 0u32;
            let mut rest = mask;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                reach |= nbr[v];
                rest &= rest - 1;
            }
            let boundary = (reach & !mask).count_ones() as usize;
            if (boundary as f64) < required {
                let set = VertexSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
                return Ok(witness(g, params, set));
            }
            // Gosper's hack: next mask with the same popcount
            let c = mask & mask.wrapping_neg();
            let r = mask + c;
            mask = (((r ^ mask) >> 2) / c) | r;
        }
    }
    Ok(None)
}

/// Seeded local search for a violating set. `None` means nothing was found, not that `g` expands.
pub fn find_violation(g: &Graph, params: &ExpanderParams, effort: usize, seed: u64) -> Option<ExpansionWitness> {
    let n = g.n();
    let (lo, hi) = params.window(n);
    if n == 0 || lo > hi {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, VertexSet)> = None;
    for _ in 0..effort.max(1) {
        let start = rng.gen_range(0..n);
        if let Some((slack, set)) = grow(g, params, start, lo, hi) {
            if best.as_ref().is_none_or(|(s, _)| slack < *s) {
                best = Some((slack, set));
            }
        }
    }
    best.and_then(|(_, set)| witness(g, params, set))
}

/// Grows a set from `start`, always adding the boundary vertex that enlarges the boundary least,
/// and returns the most violating set seen inside the window.
fn grow(g: &Graph, params: &ExpanderParams, start: usize, lo: usize, hi: usize) -> Option<(f64, VertexSet)> {
    let n = g.n();
    let mut in_x = vec![false; n];
    let mut in_b = vec![false; n];
    let mut order = Vec::with_capacity(hi);
    let mut boundary: Vec<usize> = Vec::new();
    let mut bsize = 0usize;
    let mut best: Option<(f64, usize)> = None;
    let mut next_fresh = 0usize;
    let add = |v: usize,
               in_x: &mut Vec<bool>,
               in_b: &mut Vec<bool>,
               boundary: &mut Vec<usize>,
               bsize: &mut usize,
               order: &mut Vec<usize>| {
        if in_b[v] {
            in_b[v] = false;
            *bsize -= 1;
        }
        in_x[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !in_x[w] && !in_b[w] {
                in_b[w] = true;
                *bsize += 1;
                boundary.push(w);
            }
        }
    };
    add(start, &mut in_x, &mut in_b, &mut boundary, &mut bsize, &mut order);
    loop {
        let size = order.len();
        if size >= lo {
            let slack = bsize as f64 - params.required(size);
            if best.is_none_or(|(s, _)| slack < s) {
                best = Some((slack, size));
            }
        }
        if size >= hi {
            break;
        }
        boundary.retain(|&w| in_b[w]);
        let pick = boundary
            .iter()
            .map(|&w| {
                let fresh = g.neighbors(w).iter().filter(|&&u| !in_x[u] && !in_b[u]).count();
                (fresh, w)
            })
            .min()
            .map(|(_, w)| w);
        let v = match pick {
            Some(v) => v,
            None => {
                while next_fresh < n && in_x[next_fresh] {
                    next_fresh += 1;
                }
                if next_fresh == n {
                    break;
                }
                next_fresh
            }
        };
        add(v, &mut in_x, &mut in_b, &mut boundary, &mut bsize, &mut order);
    }
    best.map(|(slack, size)| (slack, VertexSet::from_iter(n, order[..size].iter().copied())))
}

#[derive(Clone, Debug, Serialize)]
pub struct Extraction {
    #[serde(skip)]
    pub graph: Graph,
    pub params: ExpanderParams,
    pub certified: bool,
    pub rounds: usize,
    pub d: f64,
    pub delta: usize,
    pub n: usize,
}

/// Dense subgraph `H` with `d(H) ≥ d(G)/2` and `δ(H) ≥ d(H)/2`, cleaned of the violations the
/// local search can find. `certified` is set only when `H` is small enough to check exhaustively
/// and passes.
pub fn extract_expander(
    g: &Graph,
    eps1: f64,
    eps2: f64,
    effort: usize,
    seed: u64,
    method: DensestMethod,
) -> Result<Extraction> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    ExpanderParams::new(eps1, eps2, 1.0)?;
    let floor = g.avg_degree() / 2;
    let dense = g.induced(&densest_subgraph(g, method)?);
    let mut h = peel_to_half_average(&dense);
    let max_rounds = 2 * (usize::BITS - g.n().leading_zeros()) as usize;
    let mut rounds = 0;
    while rounds < max_rounds {
        let params = ExpanderParams::for_degree(eps1, eps2, h.avg_degree_f64())?;
        let Some(w) = find_violation(&h, &params, effort, seed.wrapping_add(rounds as u64)) else {
            break;
        };
        let inside = w.set.union(&external_neighborhood(&h, &w.set));
        let a = peel_to_half_average(&h.induced(&inside));
        let b = peel_to_half_average(&h.induced(&w.set.complement()));
        let next = if a.avg_degree() >= b.avg_degree() { a } else { b };
        if next.n() == 0 || next.avg_degree() < floor {
            break;
        }
        h = next;
        rounds += 1;
    }
    let d = h.avg_degree();
    if d < floor || Ratio::from_integer(h.min_degree() as u64) < d / 2 {
        return Err(Error::Invariant(format!(
            "extracted subgraph has d = {d}, δ = {} against floor {floor}",
            h.min_degree()
        )));
    }
    let params = ExpanderParams::for_degree(eps1, eps2, h.avg_degree_f64())?;
    let certified = h.n() <= EXHAUSTIVE_LIMIT && certify_exhaustive(&h, &params)?.is_none();
    Ok(Extraction {
        d: h.avg_degree_f64(),
        delta: h.min_degree(),
        n: h.n(),
        graph: h,
        params,
        certified,
        rounds,
    })
}

/// Looks for a set of size at most `max_size` that fails to double (`|Γ(X)| < 2|X|`), growing
/// sets from `samples` random starts.
pub fn small_set_doubling_violation(g: &Graph, max_size: usize, samples: usize, seed: u64) -> Option<VertexSet> {
    let n = g.n();
    if n == 0 || max_size == 0 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let start = rng.gen_range(0..n);
        let mut set = VertexSet::from_iter(n, [start]);
        loop {
            let gamma = external_neighborhood(g, &set);
            if gamma.len() < 2 * set.len() {
                return Some(set);
            }
            if set.len() >= max_size {
                break;
            }
            match gamma.first() {
                Some(v) => {
                    set.insert(v);
                }
                None => break,
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::disjoint_kdd;
    use crate::small::*;

    #[test]
    fn epsilon_branches() {
        let t = 30.0;
        assert_eq!(epsilon(t / 6.0, 0.5, t), 0.0);
        assert!((epsilon(t, 0.5, t) - 0.5 / 15f64.ln().powi(2)).abs() < 1e-15);
        assert!((epsilon(t / 5.0, 0.5, t) - 0.5 / 3f64.ln().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn diam_examples() {
        assert!((diam_bound(150, 1.0, 10.0).unwrap() - 2.0 * 225f64.ln().powi(3)).abs() < 1e-9);
        let a = diam_bound(100, 0.2, 100.0).unwrap();
        assert!((a - 10.0 * 15f64.ln().powi(3)).abs() < 1e-9);
        assert!((diam_bound(100, 0.1, 100.0).unwrap() - 2.0 * a).abs() < 1e-9);
        assert!(matches!(diam_bound(1, 1.0, 15.0), Err(Error::DegenerateBudget(_))));
    }

    #[test]
    fn exhaustive_examples() {
        let p = ExpanderParams::new(0.5, 1.0, 2.0).unwrap();
        let w = certify_exhaustive(&disjoint_kdd(2, 2), &p).unwrap().unwrap();
        assert_eq!(w.boundary_size, 0);
        assert_eq!(w.set.len(), 4);
        assert!(certify_exhaustive(&complete(6), &p).unwrap().is_none());
        let p = ExpanderParams::new(0.1, 1.0, 2.0).unwrap();
        assert!(certify_exhaustive(&cycle(6), &p).unwrap().is_none());
        assert!(certify_exhaustive(&cycle(19), &p).is_err());
    }

    #[test]
    fn local_search_finds_components() {
        let p = ExpanderParams::new(0.5, 1.0, 2.0).unwrap();
        let g = disjoint_kdd(3, 3);
        let w = find_violation(&g, &p, 4, 1).unwrap();
        assert_eq!(w.boundary_size, 0);
        assert!(w.holds_in(&g, &p));
    }

    #[test]
    fn extraction_examples() {
        let g = disjoint_union(&complete(4), &complete(3));
        let x = extract_expander(&g, 0.05, 0.1, 4, 0, DensestMethod::Exact).unwrap();
        assert_eq!(x.graph.origins(), &[0, 1, 2, 3]);
        assert_eq!(x.delta, 3);
        let k33 = complete_bipartite(3, 3);
        let x = extract_expander(&k33, 0.1, 0.1, 4, 0, DensestMethod::Exact).unwrap();
        assert_eq!(x.n, 6);
        assert!(x.certified);
    }
}
