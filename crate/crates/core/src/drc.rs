//! Dependent random choice over second neighbourhoods and the embedding of a clique whose edges
//! are each subdivided exactly three times.
//!
//! `N₂(v)` is the set of vertices at distance exactly 2 from `v`; for a set `S`, `N₂(S)` is the
//! intersection of the `N₂(s)`. In a bipartite host these stay on the side they start from.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::certify::Certificate;
use crate::error::{Error, ExclusionTally, FailureReason, Result};
use crate::graph::{Graph, Side, Vertex, VertexSet};
use crate::params::{ParamSet, Profile};
use crate::report::StageRecord;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DrcParams {
    /// Density: `e(G) = c·n^{3/2}`.
    pub c: f64,
    /// Required size of the selected set.
    pub a: f64,
    /// Size of the subsets whose common second neighbourhood must be large.
    pub r: usize,
    pub t_samples: usize,
    /// Floor on `|N₂(S)|`.
    pub m: usize,
}

impl DrcParams {
    /// `⌈a⌉`, at least 2.
    pub fn min_size(&self) -> usize {
        (self.a.ceil() as usize).max(2)
    }
}

/// `a = c⁶√n/240`, `r = 2`, `t = ⌈ln n / (4 ln(1/c))⌉`, `m = ⌊c⁶n/2⌋`, valid for `n > c^{-20}`.
pub fn paper_params(c: f64, n: usize) -> Result<DrcParams> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::HypothesisFailed(format!("c = {c} must lie in (0, 1)")));
    }
    let nf = n as f64;
    if nf <= c.powi(-20) {
        return Err(Error::HypothesisFailed(format!(
            "n = {n} must exceed 1/c^20 = {}",
            c.powi(-20)
        )));
    }
    let c6 = c.powi(6);
    Ok(DrcParams {
        c,
        a: c6 * nf.sqrt() / 240.0,
        r: 2,
        t_samples: ceil_tolerant(nf.ln() / (4.0 * (1.0 / c).ln())),
        m: (c6 * nf / 2.0).floor() as usize,
    })
}

/// The same formulas without the size hypothesis, floored at `t ≥ 1`, `m ≥ 1`, `a ≥ 2`, with
/// any `drc_t`, `drc_m`, `drc_a` overrides applied.
pub fn desk_params(c: f64, n: usize, ps: &ParamSet) -> DrcParams {
    let nf = n as f64;
    let c6 = c.powi(6);
    let t = if c > 0.0 && c < 1.0 {
        ceil_tolerant(nf.ln() / (4.0 * (1.0 / c).ln()))
    } else {
        1
    };
    DrcParams {
        c,
        a: ps.overrides.drc_a.unwrap_or((c6 * nf.sqrt() / 240.0).max(2.0)),
        r: 2,
        t_samples: ps.overrides.drc_t.unwrap_or(t.max(1)),
        m: ps.overrides.drc_m.unwrap_or(((c6 * nf / 2.0).floor() as usize).max(1)),
    }
}

/// `⌈x⌉`, ignoring float noise just above an integer.
fn ceil_tolerant(x: f64) -> usize {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r as usize
    } else {
        x.ceil() as usize
    }
}

/// Exact evaluation of `c^{2t}·n − C(n,r)·(m/(n/2))^t ≥ a`.
pub fn drc_feasible(p: &DrcParams, n: usize) -> bool {
    let (Some(c), Some(a)) = (BigRational::from_float(p.c), BigRational::from_float(p.a)) else {
        return false;
    };
    let n_big = BigInt::from(n);
    let t = p.t_samples as i32;
    let gain = pow(&c, 2 * t) * BigRational::from_integer(n_big.clone());
    let ratio = BigRational::new(BigInt::from(2 * p.m), n_big.clone());
    let loss = BigRational::from_integer(binomial(n, p.r)) * pow(&ratio, t);
    gain - loss >= a
}

fn pow(x: &BigRational, e: i32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..e {
        out *= x;
    }
    out
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..r {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Splits off a random half `B` of the vertices below degree `10d`, keeping the crossing edges.
///
/// A split is accepted when it keeps at least `0.36·e(G)` edges and every `B` vertex has degree
/// below `30·d` of the result.
pub fn balance_bipartite(g: &Graph, seed: u64, retries: usize) -> Result<Graph> {
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let n = g.n();
    let d = g.avg_degree_f64();
    let mut low: Vec<Vertex> = (0..n).filter(|&v| (g.degree(v) as f64) < 10.0 * d).collect();
    let half = n / 2;
    if low.len() < half {
        return Err(Error::BalanceFailed(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tries = retries.max(1);
    for _ in 0..tries {
        low.shuffle(&mut rng);
        let mut sides = vec![Side::A; n];
        for &v in &low[..half] {
            sides[v] = Side::B;
        }
        let h = g.crossing_subgraph(sides);
        let db = 30.0 * h.avg_degree_f64();
        let ok_edges = 100 * h.m() >= 36 * g.m();
        let ok_deg = h.side_set(Side::B).iter().all(|v| (h.degree(v) as f64) < db);
        if ok_edges && ok_deg {
            return Ok(h);
        }
    }
    Err(Error::BalanceFailed(tries))
}

/// Density `e/n^{3/2}`.
pub fn density_c(g: &Graph) -> f64 {
    g.m() as f64 / (g.n() as f64).powf(1.5)
}

/// Second neighbourhoods of every vertex.
pub struct SecondNeighborhoods {
    sets: Vec<VertexSet>,
}

impl SecondNeighborhoods {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let sets = (0..n)
            .map(|v| {
                let mut s = VertexSet::new(n);
                for &x in g.neighbors(v) {
                    for &w in g.neighbors(x) {
                        if w != v && !g.has_edge(v, w) {
                            s.insert(w);
                        }
                    }
                }
                s
            })
            .collect();
        SecondNeighborhoods { sets }
    }

    pub fn of(&self, v: Vertex) -> &VertexSet {
        &self.sets[v]
    }

    /// `N₂(S)`.
    pub fn common(&self, s: &[Vertex]) -> VertexSet {
        let mut out = self.sets[s[0]].clone();
        for &v in &s[1..] {
            out.intersect_with(&self.sets[v]);
        }
        out
    }
}

/// `N₂(T)` for one seeded draw of `t` vertices of side `A`, with repetition.
fn sample_w(a_side: &[Vertex], n2: &SecondNeighborhoods, t: usize, rng: &mut ChaCha8Rng) -> (Vec<Vertex>, VertexSet) {
    let draws: Vec<Vertex> = (0..t).map(|_| a_side[rng.gen_range(0..a_side.len())]).collect();
    let w = n2.common(&draws);
    (draws, w)
}

/// `|N₂(T)|` over `trials` independent draws; trial `i` uses seed `seed + i`.
pub fn n2_samples(g: &Graph, p: &DrcParams, trials: usize, seed: u64) -> Vec<usize> {
    let n2 = SecondNeighborhoods::new(g);
    let a_side = g.side_set(Side::A).to_vec();
    if a_side.is_empty() {
        return vec![0; trials];
    }
    (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            sample_w(&a_side, &n2, p.t_samples.max(1), &mut rng).1.len()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Selection {
    pub u: VertexSet,
    pub w: usize,
    pub bad_sets: usize,
    pub attempts: Vec<serde_json::Value>,
}

/// Dependent random choice on side `A`: `W = N₂(T)` for a random `T`, then one vertex deleted
/// per `r`-subset of `W` with `|N₂(S)| < m` (the vertex hitting the most remaining bad subsets,
/// lowest id on ties). The result is re-checked over every `r`-subset before it is returned.
pub fn drc_select(g: &Graph, p: &DrcParams, seed: u64, retries: usize) -> Result<Selection> {
    if g.sides().is_none() {
        return Err(Error::NotBipartite);
    }
    let n2 = SecondNeighborhoods::new(g);
    let a_side = g.side_set(Side::A).to_vec();
    if a_side.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = Vec::new();
    let r = p.r.max(1);
    for attempt in 0..retries.max(1) {
        let (draws, w) = sample_w(&a_side, &n2, p.t_samples.max(1), &mut rng);
        let wl = w.to_vec();
        let bad: Vec<Vec<Vertex>> = subsets(&wl, r)
            .into_iter()
            .filter(|s| n2.common(s).len() < p.m)
            .collect();
        let deleted = hitting_set(&bad, g.n());
        let mut u = w.clone();
        for &v in &deleted {
            u.remove(v);
        }
        attempts.push(json!({
            "attempt": attempt,
            "t": draws,
            "w": w.len(),
            "bad_sets": bad.len(),
            "deleted": deleted.len(),
            "u": u.len(),
        }));
        if u.len() >= p.min_size() {
            let ul = u.to_vec();
            if let Some(s) = subsets(&ul, r).into_iter().find(|s| n2.common(s).len() < p.m) {
                return Err(Error::Invariant(format!(
                    "selected subset {s:?} has a small second neighbourhood"
                )));
            }
            return Ok(Selection {
                u,
                w: w.len(),
                bad_sets: bad.len(),
                attempts,
            });
        }
    }
    Err(Error::SelectFailed { attempts })
}

/// Every `r`-subset of `items`, lexicographically.
fn subsets(items: &[Vertex], r: usize) -> Vec<Vec<Vertex>> {
    fn go(items: &[Vertex], r: usize, from: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            if items.len() - i < r - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if r <= items.len() {
        go(items, r, 0, &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// Greedy hitting set for `sets`: repeatedly the vertex in the most unhit sets, lowest id first.
fn hitting_set(sets: &[Vec<Vertex>], n: usize) -> Vec<Vertex> {
    let mut alive = vec![true; sets.len()];
    let mut count = vec![0usize; n];
    for s in sets {
        for &v in s {
            count[v] += 1;
        }
    }
    let mut out = Vec::new();
    while let Some((v, &c)) = count
        .iter()
        .enumerate()
        .max_by_key(|&(v, &c)| (c, std::cmp::Reverse(v)))
    {
        if c == 0 {
            break;
        }
        out.push(v);
        for (k, s) in sets.iter().enumerate() {
            if alive[k] && s.contains(&v) {
                alive[k] = false;
                for &x in s {
                    count[x] -= 1;
                }
            }
        }
    }
    out
}

/// Cores are the first `ell` vertices of `u`; each pair `{x, z}`, in lexicographic order, gets a
/// path `x–p–v–q–z` through a midpoint `v ∈ N₂({x, z})` whose connector set
/// `C(v) = N(v) ∩ (N(x) ∪ N(z))` is exactly `{p, q}`.
///
/// Candidates are skipped when `|C(v)| = 1`, when `v` is in `u`, when `v` is already used, and
/// when `C(v)` meets a used vertex or a core. Connector sets larger than two are 4-cycles; each
/// is reported in the returned list.
pub fn embed_3subdivision(g: &Graph, u: &VertexSet, ell: usize) -> Result<(Certificate, Vec<String>)> {
    let cores: Vec<Vertex> = u.iter().take(ell).collect();
    if cores.len() < ell || ell == 0 {
        return Err(Error::Params(format!("need {ell} cores, |U| = {}", u.len())));
    }
    let n = g.n();
    let n2 = SecondNeighborhoods::new(g);
    let core_set = VertexSet::from_iter(n, cores.iter().copied());
    let mut used = VertexSet::new(n);
    let mut seqs: Vec<Vec<Vertex>> = Vec::new();
    let mut evidence = Vec::new();
    for i in 0..cores.len() {
        for j in i + 1..cores.len() {
            let (x, z) = (cores[i], cores[j]);
            let cands = n2.common(&[x, z]);
            let mut tally = ExclusionTally {
                candidates: cands.len(),
                ..Default::default()
            };
            let mut chosen = None;
            for v in cands.iter() {
                let cx: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| g.has_edge(w, x)).collect();
                let cz: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| g.has_edge(w, z)).collect();
                let mut conn: Vec<Vertex> = cx.iter().chain(&cz).copied().collect();
                conn.sort_unstable();
                conn.dedup();
                if conn.len() > 2 {
                    evidence.push(format!("connector set of {v} for ({x}, {z}) is {conn:?}: a 4-cycle"));
                }
                if conn.len() == 1 {
                    tally.bad += 1;
                    continue;
                }
                if u.contains(v) {
                    tally.in_core_set += 1;
                    continue;
                }
                if used.contains(v) {
                    tally.used += 1;
                    continue;
                }
                if conn.iter().any(|&w| used.contains(w) || core_set.contains(w)) {
                    tally.connector_used += 1;
                    continue;
                }
                let pick = cx.iter().find_map(|&p| cz.iter().find(|&&q| q != p).map(|&q| (p, q)));
                if let Some((p, q)) = pick {
                    chosen = Some(vec![x, p, v, q, z]);
                    break;
                }
                tally.bad += 1;
            }
            let Some(seq) = chosen else {
                return Err(Error::NoConnector {
                    pair: (x, z),
                    tally,
                    partial: Box::new(partial(&cores, &seqs)),
                });
            };
            for &w in &seq[1..4] {
                used.insert(w);
            }
            seqs.push(seq);
        }
    }
    Ok((Certificate::new(cores, seqs), evidence))
}

fn partial(cores: &[Vertex], seqs: &[Vec<Vertex>]) -> Certificate {
    let c = Certificate::best_clique(cores, seqs);
    if c.ell() == 0 {
        Certificate::single(cores[0])
    } else {
        c
    }
}

#[derive(Clone, Debug, Default)]
pub struct DrcOptions {
    /// Fixed core count; searched downwards from `|U|` when absent.
    pub ell: Option<usize>,
    /// Density override; measured from the balanced graph when absent.
    pub c: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct DrcRun {
    pub cert: Certificate,
    pub balanced: Graph,
    pub params: DrcParams,
    pub selection: Selection,
    pub records: Vec<StageRecord>,
}

/// Balance, select, embed. Certificates use the ids of `g`.
pub fn run_drc(g: &Graph, ps: &ParamSet, opts: &DrcOptions, seed: u64) -> Result<DrcRun> {
    let balanced = balance_bipartite(g, seed, ps.retries)?;
    let n = balanced.n();
    let c = opts.c.unwrap_or_else(|| density_c(&balanced));
    let mut records = vec![
        StageRecord::new("balance", "balanced bipartite subgraph with low-degree half")
            .param("c", c)
            .size("n", n)
            .size("edges", balanced.m())
            .size("b", balanced.side_set(Side::B).len()),
    ];
    let params = match ps.profile {
        Profile::Paper => paper_params(c, n)?,
        Profile::Desk => desk_params(c, n, ps),
    };
    let mut sel_rec = StageRecord::new("drc-select", "dependent random choice on second neighbourhoods")
        .param("a", params.a)
        .param("t", params.t_samples as f64)
        .param("m", params.m as f64)
        .param("r", params.r as f64)
        .param("prediction", c.powi(2 * params.t_samples as i32) * n as f64);
    if !drc_feasible(&params, n) {
        sel_rec.warn("size inequality fails at these parameters");
    }
    let selection = drc_select(&balanced, &params, seed, ps.retries)?;
    records.push(
        sel_rec
            .size("w", selection.w)
            .size("bad_sets", selection.bad_sets)
            .size("u", selection.u.len())
            .discards(selection.attempts.len() - 1),
    );
    let (cert, evidence) = match opts.ell {
        Some(ell) => embed_3subdivision(&balanced, &selection.u, ell)?,
        None => search_ell(&balanced, &selection.u)?,
    };
    let mut rec = StageRecord::new("embed-3-subdivision", "length-4 paths through connector sets")
        .size("ell", cert.ell())
        .param("ell_over_sqrt_n", cert.ell() as f64 / (n as f64).sqrt());
    for e in evidence {
        rec.warn(e);
    }
    records.push(rec);
    Ok(DrcRun {
        cert,
        balanced,
        params,
        selection,
        records,
    })
}

/// Largest `ell ≤ min(|U|, Δ + 1)` for which the embedding succeeds, tried in descending order.
fn search_ell(g: &Graph, u: &VertexSet) -> Result<(Certificate, Vec<String>)> {
    let top = u.len().min(g.max_degree() + 1);
    let mut best_partial: Option<Box<Certificate>> = None;
    for ell in (2..=top).rev() {
        match embed_3subdivision(g, u, ell) {
            Ok(found) => return Ok(found),
            Err(Error::NoConnector { partial, .. }) => {
                if best_partial.as_ref().is_none_or(|b| partial.ell() > b.ell()) {
                    best_partial = Some(partial);
                }
            }
            Err(e) => return Err(e),
        }
    }
    let partial = best_partial.unwrap_or_else(|| Box::new(Certificate::single(u.first().unwrap_or(0))));
    Err(Error::EmbedFailed {
        partial,
        reason: FailureReason::Connection,
        trace: Vec::new(),
    })
}
