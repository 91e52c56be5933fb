//! Sparse-case constructions: hats (length-2 paths with both ends on one side) encode a
//! 1-subdivision of an auxiliary graph, and random sparsening produces a host where hats are
//! plentiful.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::certify::Certificate;
use crate::engine::generic::generic_tk;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::params::SparseParams;
use crate::report::StageRecord;

/// Preference among endpoint pairs: unused first, then busier endpoints, then the smaller pair.
type HatKey = (bool, usize, std::cmp::Reverse<(usize, usize)>);

#[derive(Clone, Debug, Serialize)]
pub struct HatOutcome {
    /// Certificate in the ids of the host `F`.
    pub cert: Certificate,
    /// `Σ_{v∈X} C(deg v, 2)`: every hat of `F`.
    pub total_hats: u64,
    /// Chosen hats as `(midpoint, end, end)`, at most one per midpoint.
    pub selected: Vec<(Vertex, Vertex, Vertex)>,
    /// Edges of the auxiliary graph on `Y`.
    pub h_edges: usize,
    pub h_vertices: usize,
    /// Core count of the subdivision found in the auxiliary graph.
    pub abstract_ell: usize,
}

/// Subdivision built from hats of the bipartite host `f` with sides `x` and `y`.
///
/// One hat is kept per midpoint in `x` (ascending), preferring an endpoint pair not yet used,
/// then the pair whose endpoints already have the most auxiliary edges, then the smallest pair.
/// The auxiliary graph on `y` gets one edge per kept hat; a subdivision found there lifts back by
/// inserting each edge's midpoint, doubling every path length.
pub fn hat_subdivision(f: &Graph, x: &VertexSet, y: &VertexSet) -> Result<HatOutcome> {
    let max_x = x.iter().map(|v| f.degree(v)).max().unwrap_or(0);
    if max_x <= 1 {
        return Err(Error::NoHats);
    }
    let total_hats: u64 = x
        .iter()
        .map(|v| {
            let k = f.degree(v) as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum();
    let ylist: Vec<Vertex> = y.iter().collect();
    let yidx: BTreeMap<Vertex, usize> = ylist.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut hdeg = vec![0usize; ylist.len()];
    let mut pairs: BTreeMap<(usize, usize), Vertex> = BTreeMap::new();
    let mut selected = Vec::new();
    for mid in x.iter() {
        let ends: Vec<usize> = f.neighbors(mid).iter().filter_map(|w| yidx.get(w).copied()).collect();
        let mut best: Option<(HatKey, (usize, usize))> = None;
        for (i, &a) in ends.iter().enumerate() {
            for &b in &ends[i + 1..] {
                let key = (
                    !pairs.contains_key(&(a, b)),
                    hdeg[a] + hdeg[b],
                    std::cmp::Reverse((a, b)),
                );
                if best.as_ref().is_none_or(|(k, _)| key > *k) {
                    best = Some((key, (a, b)));
                }
            }
        }
        if let Some((_, (a, b))) = best {
            if let std::collections::btree_map::Entry::Vacant(e) = pairs.entry((a, b)) {
                e.insert(mid);
                hdeg[a] += 1;
                hdeg[b] += 1;
            }
            selected.push((mid, ylist[a], ylist[b]));
        }
    }
    let h = Graph::from_edges_lossy(ylist.len(), pairs.keys().copied());
    let abstract_cert = generic_tk(&h, None)?;
    let lift_path = |seq: &[Vertex]| {
        let mut out = vec![ylist[seq[0]]];
        for w in seq.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            out.push(pairs[&key]);
            out.push(ylist[w[1]]);
        }
        out
    };
    let cert = Certificate::new(
        abstract_cert.cores.iter().map(|&c| ylist[c]),
        abstract_cert.paths.iter().map(|p| lift_path(&p.seq)),
    );
    Ok(HatOutcome {
        cert,
        total_hats,
        selected,
        h_edges: h.m(),
        h_vertices: h.n(),
        abstract_ell: abstract_cert.ell(),
    })
}

impl HatOutcome {
    pub fn record(&self) -> StageRecord {
        let mut rec = StageRecord::new("hat-subdivision", "1-subdivision from hats with distinct midpoints")
            .param("total_hats", self.total_hats as f64)
            .size("selected", self.selected.len())
            .size("h_vertices", self.h_vertices)
            .size("h_edges", self.h_edges)
            .size("ell", self.cert.ell());
        rec.warn("auxiliary-graph subdivision found greedily; no linear-order guarantee");
        rec
    }
}

/// Result of the degree split at `d³`.
#[derive(Clone, Debug)]
pub enum Split {
    /// Low-degree vertices mostly lost their neighbourhoods: hats into `B` gave a subdivision
    /// (ids of the input graph).
    Hat(HatOutcome),
    /// `G′ = G[A]` and `A′ = {v : deg_{G′}(v) ≥ d/10}` (ids of `G′`).
    Reduced { gprime: Graph, aprime: VertexSet },
}

/// Splits off `B = {deg ≥ d³}`. When at least half of `A = V ∖ B` falls below `d/10` inside
/// `G[A]`, those vertices keep at most `d` edges into `B` and the hat construction runs there.
pub fn sparse_split(g: &Graph, sp: &SparseParams, d: f64) -> Result<(Split, StageRecord)> {
    let n = g.n();
    let b = VertexSet::from_iter(n, (0..n).filter(|&v| g.degree(v) as f64 >= sp.deg_cut));
    let a = b.complement();
    let gprime = g.induced(&a);
    let aprime = VertexSet::from_iter(
        gprime.n(),
        (0..gprime.n()).filter(|&v| gprime.degree(v) as f64 >= sp.a_degree),
    );
    let low = gprime.n() - aprime.len();
    let mut rec = StageRecord::new("sparse-split", "degree cut at d³ with low and high remainders")
        .param("deg_cut", sp.deg_cut)
        .param("d", d)
        .size("a", a.len())
        .size("b", b.len())
        .size("a_prime", aprime.len())
        .size("a_double_prime", low);
    if 2 * low >= a.len() && low > 0 {
        let a_list = a.to_vec();
        let a2 = VertexSet::from_iter(n, (0..gprime.n()).filter(|&i| !aprime.contains(i)).map(|i| a_list[i]));
        let f = capped_bipartite(g, &a2, &b, sp.cap);
        let hat = hat_subdivision(&f, &a2, &b)?;
        rec = rec.outcome("case 1: hats into the high-degree side");
        return Ok((Split::Hat(hat), rec));
    }
    if 10 * gprime.n() < 9 * n {
        rec.warn(format!("|V(G′)| = {} < 9n/10", gprime.n()));
    }
    let dp = gprime.avg_degree_f64();
    if dp < d / 20.0 || dp > d {
        rec.warn(format!("d(G′) = {dp:.3} outside [d/20, d]"));
    }
    if 2 * aprime.len() < gprime.n() {
        rec.warn(format!("|A′| = {} < |V(G′)|/2", aprime.len()));
    }
    rec = rec.outcome("case 2: continue on G[A]");
    Ok((Split::Reduced { gprime, aprime }, rec))
}

/// Spanning subgraph of `g` keeping only `x`–`y` edges, at most `cap` per `x` vertex (lowest ids).
fn capped_bipartite(g: &Graph, x: &VertexSet, y: &VertexSet, cap: usize) -> Graph {
    let mut kept = vec![0usize; g.n()];
    let mut allowed = BTreeSet::new();
    for v in x.iter() {
        for &w in g.neighbors(v) {
            if y.contains(w) && kept[v] < cap {
                kept[v] += 1;
                allowed.insert((v.min(w), v.max(w)));
            }
        }
    }
    g.filter_edges(|u, v| allowed.contains(&(u, v)))
}

/// The vertex classes of the sparsening step, all in the ids of `G′`.
#[derive(Clone, Debug)]
pub struct Classes {
    /// `W = {deg ≥ c₀d²}`.
    pub w: VertexSet,
    pub u: VertexSet,
    /// `U′`: vertices of `A′ ∩ U` with at least `d/20` neighbours in `W`.
    pub u1: VertexSet,
    /// `U″ = (A′ ∩ U) ∖ U′`.
    pub u2: VertexSet,
}

pub fn classify(gp: &Graph, aprime: &VertexSet, sp: &SparseParams) -> Classes {
    let n = gp.n();
    let w = VertexSet::from_iter(n, (0..n).filter(|&v| gp.degree(v) as f64 >= sp.w_degree));
    let u = w.complement();
    let mut u1 = VertexSet::new(n);
    let mut u2 = VertexSet::new(n);
    for v in u.iter().filter(|&v| aprime.contains(v)) {
        let into_w = gp.neighbors(v).iter().filter(|&&x| w.contains(x)).count();
        if into_w as f64 >= sp.u_degree {
            u1.insert(v);
        } else {
            u2.insert(v);
        }
    }
    Classes { w, u, u1, u2 }
}

#[derive(Clone, Debug)]
pub enum Sparsified {
    /// `|W| < n/d²`: hats of `G′[U′, W]` gave a subdivision (ids of `G′`).
    Hat(HatOutcome),
    /// A verified sample: `f` is `G′[U₀, W₀]` as a spanning subgraph of `G′`.
    Pair { u0: VertexSet, w0: VertexSet, f: Graph },
}

/// Samples `W₀ ⊆ W` at rate `p`, keeps the `U′` vertices with at most `K` neighbours in `W₀`,
/// and checks `e(U₀, W₀) ≥ C′|U₀|`, `|U₀| ≥ |U|/6` and `|W₀| ≤ 2C|W|/d` directly, resampling up to
/// `retries` times. Every attempt's statistics are returned.
pub fn sparse_sparsify(
    gp: &Graph,
    cls: &Classes,
    sp: &SparseParams,
    d: f64,
    seed: u64,
) -> Result<(Sparsified, Vec<serde_json::Value>)> {
    let n = gp.n();
    let g3 = capped_bipartite(gp, &cls.u1, &cls.w, sp.cap);
    if (cls.w.len() as f64) < n as f64 / (d * d) {
        let hat = hat_subdivision(&g3, &cls.u1, &cls.w)?;
        return Ok((Sparsified::Hat(hat), Vec::new()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    for attempt in 0..sp.retries.max(1) {
        let w0 = if sp.p >= 1.0 {
            cls.w.clone()
        } else {
            VertexSet::from_iter(n, cls.w.iter().filter(|_| rng.gen::<f64>() < sp.p))
        };
        let mut u0 = VertexSet::new(n);
        let mut edges = 0usize;
        for v in cls.u1.iter() {
            let k = g3.neighbors(v).iter().filter(|&&x| w0.contains(x)).count();
            if k as f64 <= sp.big_k {
                u0.insert(v);
                edges += k;
            }
        }
        let ok_edges = edges as f64 >= sp.c_prime * u0.len() as f64;
        let ok_u = 6 * u0.len() >= cls.u.len();
        let ok_w = w0.len() as f64 <= 2.0 * sp.big_c * cls.w.len() as f64 / d;
        attempts.push(json!({
            "attempt": attempt,
            "w0": w0.len(),
            "u0": u0.len(),
            "edges": edges,
            "edges_ok": ok_edges,
            "u0_ok": ok_u,
            "w0_ok": ok_w,
        }));
        if ok_edges && ok_u && ok_w && edges > 0 {
            let f = g3.filter_edges(|a, b| (u0.contains(a) && w0.contains(b)) || (u0.contains(b) && w0.contains(a)));
            return Ok((Sparsified::Pair { u0, w0, f }, attempts));
        }
    }
    Err(Error::SparsifyFailed { attempts })
}
