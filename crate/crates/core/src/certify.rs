//! Subdivision certificates, their validation, and the exhaustive small-graph oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

/// Largest host the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CertPath {
    pub u: Vertex,
    pub v: Vertex,
    pub seq: Vec<Vertex>,
}

impl CertPath {
    pub fn interior(&self) -> &[Vertex] {
        if self.seq.len() <= 2 {
            &[]
        } else {
            &self.seq[1..self.seq.len() - 1]
        }
    }
}

/// Core vertices plus one path per core pair.
///
/// The canonical form has cores ascending, paths sorted by `(u, v)` with `u < v`, and each
/// sequence running from `u` to `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub cores: Vec<Vertex>,
    pub paths: Vec<CertPath>,
}

impl Certificate {
    /// Builds a canonical certificate. Each sequence must be oriented between two cores; its pair
    /// is read off the endpoints.
    pub fn new(cores: impl IntoIterator<Item = Vertex>, seqs: impl IntoIterator<Item = Vec<Vertex>>) -> Self {
        let mut cores: Vec<Vertex> = cores.into_iter().collect();
        cores.sort_unstable();
        let mut paths: Vec<CertPath> = seqs
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|mut seq| {
                if seq[0] > seq[seq.len() - 1] {
                    seq.reverse();
                }
                CertPath {
                    u: seq[0],
                    v: seq[seq.len() - 1],
                    seq,
                }
            })
            .collect();
        paths.sort_by_key(|a| (a.u, a.v));
        Certificate { cores, paths }
    }

    pub fn single(v: Vertex) -> Self {
        Certificate {
            cores: vec![v],
            paths: Vec::new(),
        }
    }

    pub fn ell(&self) -> usize {
        self.cores.len()
    }

    pub fn path(&self, a: Vertex, b: Vertex) -> Option<&CertPath> {
        let (u, v) = (a.min(b), a.max(b));
        self.paths.iter().find(|p| p.u == u && p.v == v)
    }

    /// Re-expresses a certificate found in `g` in the ids of `g`'s root graph.
    pub fn lift(&self, g: &Graph) -> Certificate {
        Certificate::new(
            self.cores.iter().map(|&c| g.origin(c)),
            self.paths.iter().map(|p| g.lift_vertices(&p.seq)),
        )
    }

    /// The sub-certificate on `keep`, which must be a subset of the cores.
    pub fn restrict(&self, keep: &[Vertex]) -> Certificate {
        let set: BTreeSet<Vertex> = keep.iter().copied().collect();
        Certificate::new(
            set.iter().copied(),
            self.paths
                .iter()
                .filter(|p| set.contains(&p.u) && set.contains(&p.v))
                .map(|p| p.seq.clone()),
        )
    }

    /// Largest sub-certificate whose cores are pairwise joined by one of the given paths, with
    /// ties going to the lexicographically smallest core set. Paths must already be internally
    /// disjoint and avoid every core.
    pub fn best_clique(cores: &[Vertex], seqs: &[Vec<Vertex>]) -> Certificate {
        let idx: BTreeMap<Vertex, usize> = cores.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let k = cores.len();
        let mut adj = vec![vec![false; k]; k];
        for s in seqs {
            if let (Some(&a), Some(&b)) = (idx.get(&s[0]), idx.get(&s[s.len() - 1])) {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        let mut best = Vec::new();
        let mut cur = Vec::new();
        max_clique(&adj, 0, &mut cur, &mut best);
        let keep: Vec<Vertex> = best.iter().map(|&i| cores[i]).collect();
        if keep.is_empty() {
            return Certificate::default();
        }
        let keep_set: BTreeSet<Vertex> = keep.iter().copied().collect();
        Certificate::new(
            keep.iter().copied(),
            seqs.iter()
                .filter(|s| keep_set.contains(&s[0]) && keep_set.contains(&s[s.len() - 1]))
                .cloned(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        Ok(serde_json::from_str(text)?)
    }
}

fn max_clique(adj: &[Vec<bool>], from: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cur.len() > best.len() {
        *best = cur.clone();
    }
    let k = adj.len();
    if cur.len() + (k - from) <= best.len() {
        return;
    }
    for i in from..k {
        if cur.iter().all(|&j| adj[i][j]) {
            cur.push(i);
            max_clique(adj, i + 1, cur, best);
            cur.pop();
            if cur.len() + (k - i - 1) <= best.len() {
                return;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    OutOfRange,
    DuplicateCore,
    MissingPair,
    DuplicatePair,
    StrayPath,
    EndpointMismatch,
    NotAnEdge,
    RepeatedVertex,
    InternalReuse,
    CoreAsInternal,
    WrongInternalLength,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("kind serialises");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub ell: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Checks a certificate against `g` and lists every violation found.
pub fn validate(g: &Graph, cert: &Certificate, exact_internal: Option<usize>) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |kind, evidence: String| out.push(Violation { kind, evidence });
    let n = g.n();

    let mut core_set = BTreeSet::new();
    for &c in &cert.cores {
        if c >= n {
            push(ViolationKind::OutOfRange, format!("core {c} >= n = {n}"));
        }
        if !core_set.insert(c) {
            push(ViolationKind::DuplicateCore, format!("core {c} listed twice"));
        }
    }

    let mut seen_pairs: BTreeMap<(Vertex, Vertex), usize> = BTreeMap::new();
    let mut owner: BTreeMap<Vertex, (Vertex, Vertex)> = BTreeMap::new();
    for p in &cert.paths {
        let pair = (p.u.min(p.v), p.u.max(p.v));
        *seen_pairs.entry(pair).or_default() += 1;
        if !core_set.contains(&p.u) || !core_set.contains(&p.v) || p.u == p.v {
            push(
                ViolationKind::StrayPath,
                format!("path {}-{} is not between two distinct cores", p.u, p.v),
            );
        }
        let (first, last) = (p.seq.first().copied(), p.seq.last().copied());
        let ends_ok = p.seq.len() >= 2
            && ((first == Some(p.u) && last == Some(p.v)) || (first == Some(p.v) && last == Some(p.u)));
        if !ends_ok {
            push(
                ViolationKind::EndpointMismatch,
                format!("path for {}-{} runs {:?}..{:?}", p.u, p.v, first, last),
            );
        }
        if let Some(&bad) = p.seq.iter().find(|&&v| v >= n) {
            push(
                ViolationKind::OutOfRange,
                format!("vertex {bad} in path {}-{}", p.u, p.v),
            );
            continue;
        }
        for w in p.seq.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                push(
                    ViolationKind::NotAnEdge,
                    format!("{}-{} in path {}-{}", w[0], w[1], p.u, p.v),
                );
            }
        }
        let mut within = BTreeSet::new();
        for &v in &p.seq {
            if !within.insert(v) {
                push(
                    ViolationKind::RepeatedVertex,
                    format!("{v} repeats in path {}-{}", p.u, p.v),
                );
            }
        }
        for &x in p.interior() {
            if core_set.contains(&x) {
                push(
                    ViolationKind::CoreAsInternal,
                    format!("core {x} inside path {}-{}", p.u, p.v),
                );
            }
            if let Some(&other) = owner.get(&x) {
                if other != pair {
                    push(
                        ViolationKind::InternalReuse,
                        format!("{x} inside paths {}-{} and {}-{}", other.0, other.1, pair.0, pair.1),
                    );
                }
            } else {
                owner.insert(x, pair);
            }
        }
        if let Some(k) = exact_internal {
            if p.interior().len() != k {
                push(
                    ViolationKind::WrongInternalLength,
                    format!(
                        "path {}-{} has {} internal vertices, expected {k}",
                        p.u,
                        p.v,
                        p.interior().len()
                    ),
                );
            }
        }
    }

    let cores: Vec<Vertex> = core_set.iter().copied().collect();
    for (i, &a) in cores.iter().enumerate() {
        for &b in &cores[i + 1..] {
            match seen_pairs.get(&(a, b)) {
                None => push(ViolationKind::MissingPair, format!("no path for {a}-{b}")),
                Some(&c) if c > 1 => push(ViolationKind::DuplicatePair, format!("{c} paths for {a}-{b}")),
                _ => {}
            }
        }
    }

    ValidationReport {
        valid: out.is_empty(),
        ell: cert.cores.len(),
        violations: out,
    }
}

/// Largest `ℓ ≤ cap` with a `TK_ℓ` in `g`, with a witness. Exhaustive; `n ≤ 9` only.
pub fn brute_force_max_tk(g: &Graph, cap: usize) -> Result<(usize, Certificate)> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let top = cap.min(n);
    for ell in (1..=top).rev() {
        if let Some(cert) = find_tk_of_order(g, ell) {
            return Ok((ell, cert));
        }
    }
    Ok((0, Certificate::default()))
}

/// Exhaustive search for a `TK_ell` on a small host.
pub(crate) fn find_tk_of_order(g: &Graph, ell: usize) -> Option<Certificate> {
    let n = g.n();
    if ell == 0 || ell > n {
        return None;
    }
    let candidates: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) + 1 >= ell).collect();
    let mut chosen = Vec::with_capacity(ell);
    let mut found = None;
    choose_cores(g, &candidates, 0, ell, &mut chosen, &mut found);
    found
}

fn choose_cores(
    g: &Graph,
    candidates: &[Vertex],
    from: usize,
    ell: usize,
    chosen: &mut Vec<Vertex>,
    found: &mut Option<Certificate>,
) {
    if found.is_some() {
        return;
    }
    if chosen.len() == ell {
        *found = route_all_pairs(g, chosen);
        return;
    }
    for i in from..candidates.len() {
        if candidates.len() - i < ell - chosen.len() {
            return;
        }
        chosen.push(candidates[i]);
        choose_cores(g, candidates, i + 1, ell, chosen, found);
        chosen.pop();
        if found.is_some() {
            return;
        }
    }
}

/// Joins every pair of `cores` by internally disjoint paths, trying all path systems.
fn route_all_pairs(g: &Graph, cores: &[Vertex]) -> Option<Certificate> {
    let n = g.n();
    let mut direct = Vec::new();
    let mut pending = Vec::new();
    for (i, &a) in cores.iter().enumerate() {
        for &b in &cores[i + 1..] {
            if g.has_edge(a, b) {
                direct.push(vec![a, b]);
            } else {
                pending.push((a, b));
            }
        }
    }
    let free = n - cores.len();
    if pending.len() > free {
        return None;
    }
    let mut blocked = VertexSet::from_iter(n, cores.iter().copied());
    let mut routed = Vec::new();
    if assign_paths(g, &pending, 0, &mut blocked, &mut routed) {
        direct.extend(routed);
        Some(Certificate::new(cores.iter().copied(), direct))
    } else {
        None
    }
}

fn assign_paths(
    g: &Graph,
    pending: &[(Vertex, Vertex)],
    idx: usize,
    blocked: &mut VertexSet,
    routed: &mut Vec<Vec<Vertex>>,
) -> bool {
    if idx == pending.len() {
        return true;
    }
    let free = g.n() - blocked.len();
    if pending.len() - idx > free {
        return false;
    }
    let (a, b) = pending[idx];
    let mut options = Vec::new();
    let mut stack = vec![a];
    simple_paths(g, b, blocked, &mut stack, &mut options);
    options.sort_by_key(Vec::len);
    for path in options {
        for &x in &path[1..path.len() - 1] {
            blocked.insert(x);
        }
        routed.push(path.clone());
        if assign_paths(g, pending, idx + 1, blocked, routed) {
            return true;
        }
        routed.pop();
        for &x in &path[1..path.len() - 1] {
            blocked.remove(x);
        }
    }
    false
}

/// All simple paths from the top of `stack` to `target` with interiors outside `blocked`.
fn simple_paths(g: &Graph, target: Vertex, blocked: &VertexSet, stack: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
    let u = *stack.last().unwrap();
    for &w in g.neighbors(u) {
        if w == target {
            if stack.len() >= 2 {
                let mut p = stack.clone();
                p.push(w);
                out.push(p);
            }
            continue;
        }
        if blocked.contains(w) || stack.contains(&w) {
            continue;
        }
        stack.push(w);
        simple_paths(g, target, blocked, stack, out);
        stack.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JungReport {
    pub d: usize,
    pub max_tk: usize,
    pub bound: f64,
    pub holds: bool,
}

/// Measures the largest clique subdivision in `K_{d,d}` against `√(8d)`.
pub fn jung_bound_check(d: usize) -> Result<JungReport> {
    if 2 * d > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n: 2 * d,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let g = crate::small::complete_bipartite(d, d);
    let (max_tk, _) = brute_force_max_tk(&g, 2 * d)?;
    let bound = (8.0 * d as f64).sqrt();
    Ok(JungReport {
        d,
        max_tk,
        bound,
        holds: (max_tk as f64) < bound,
    })
}
