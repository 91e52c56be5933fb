//! Extremal and random graph families.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycles::has_short_cycle;
use crate::error::{Error, Result};
use crate::field::{projective_points, Elem, FieldSpec};
use crate::graph::{Graph, Side, Vertex};

fn field(q: u32, max: u32) -> Result<FieldSpec> {
    if q > max {
        return Err(Error::BadField(q));
    }
    FieldSpec::new(q)
}

/// Orthogonal-polarity graph of PG(2,q): points, `u ~ v` iff `u·v = 0` and `u ≠ v`.
///
/// `q²+q+1` vertices, `q(q+1)²/2` edges; the `q+1` absolute points have degree `q`, the rest
/// `q+1`. C4-free.
pub fn polarity_graph(q: u32) -> Result<Graph> {
    let f = field(q, 32)?;
    let pts = projective_points(&f, 3);
    let mut edges = Vec::new();
    for (i, u) in pts.iter().enumerate() {
        for (j, v) in pts.iter().enumerate().skip(i + 1) {
            if f.dot(u, v) == 0 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(pts.len(), &edges)
}

/// Point-line incidence graph of PG(2,q). Points are `0..N`, lines `N..2N`, `N = q²+q+1`.
pub fn projective_incidence(q: u32) -> Result<Graph> {
    let f = field(q, 32)?;
    let pts = projective_points(&f, 3);
    let n = pts.len();
    let mut edges = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for (j, line) in pts.iter().enumerate() {
            if f.dot(p, line) == 0 {
                edges.push((i, n + j));
            }
        }
    }
    let sides = (0..2 * n).map(|v| if v < n { Side::A } else { Side::B }).collect();
    Graph::from_edges(2 * n, &edges)?.with_sides(sides)
}

fn symplectic(f: &FieldSpec, x: &[Elem], y: &[Elem]) -> Elem {
    let a = f.sub(f.mul(x[0], y[1]), f.mul(x[1], y[0]));
    let b = f.sub(f.mul(x[2], y[3]), f.mul(x[3], y[2]));
    f.add(a, b)
}

/// Point-line incidence graph of the symplectic generalised quadrangle W(q).
///
/// Points are the `(q+1)(q²+1)` points of PG(3,q); lines are the totally isotropic lines of the
/// form `x0y1 − x1y0 + x2y3 − x3y2`. Points come first, then lines in lexicographic order of their
/// sorted point lists. Girth 8.
pub fn gq_incidence(q: u32) -> Result<Graph> {
    let f = field(q, 9)?;
    let pts = projective_points(&f, 4);
    let index: HashMap<Vec<Elem>, usize> = pts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut lines: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (i, p) in pts.iter().enumerate() {
        for (j, r) in pts.iter().enumerate().skip(i + 1) {
            if symplectic(&f, p, r) != 0 {
                continue;
            }
            let mut line = vec![i, j];
            for lambda in f.elements().skip(1) {
                let mut v: Vec<Elem> = r.iter().zip(p).map(|(&a, &b)| f.add(a, f.mul(lambda, b))).collect();
                f.normalize(&mut v);
                line.push(index[&v]);
            }
            line.sort_unstable();
            line.dedup();
            lines.insert(line);
        }
    }
    let np = pts.len();
    let mut edges = Vec::new();
    for (l, line) in lines.iter().enumerate() {
        for &p in line {
            edges.push((p, np + l));
        }
    }
    let n = np + lines.len();
    let sides = (0..n).map(|v| if v < np { Side::A } else { Side::B }).collect();
    Graph::from_edges(n, &edges)?.with_sides(sides)
}

/// `copies` disjoint copies of `K_{d,d}`; copy `i` occupies `2di..2d(i+1)`, its first `d`
/// vertices on side A.
pub fn disjoint_kdd(d: usize, copies: usize) -> Graph {
    let mut edges = Vec::new();
    let mut sides = Vec::new();
    for c in 0..copies {
        let base = 2 * d * c;
        for a in 0..d {
            for b in 0..d {
                edges.push((base + a, base + d + b));
            }
        }
        sides.extend(std::iter::repeat_n(Side::A, d));
        sides.extend(std::iter::repeat_n(Side::B, d));
    }
    Graph::from_edges(2 * d * copies, &edges)
        .and_then(|g| g.with_sides(sides))
        .expect("K_{d,d} union is a valid bipartite graph")
}

/// Random bipartite graph: side A is `0..na`, side B is `na..na+nb`, each cross pair an edge
/// with probability `p`.
pub fn random_bipartite(na: usize, nb: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Params(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..na {
        for b in 0..nb {
            if rng.gen_bool(p) {
                edges.push((a, na + b));
            }
        }
    }
    let sides = (0..na + nb).map(|v| if v < na { Side::A } else { Side::B }).collect();
    Graph::from_edges(na + nb, &edges)?.with_sides(sides)
}

#[derive(Clone, Debug)]
pub struct GyoriOutput {
    pub graph: Graph,
    pub retention: Ratio<u64>,
    pub deleted: Vec<(Vertex, Vertex)>,
}

/// C4-free spanning subgraph of a bipartite C6-free graph.
///
/// A graph that is already C4-free comes back unchanged without the C6 check. Otherwise the
/// graph must be C6-free, and the extractor repeatedly deletes the edge lying on the most 4-cycles (smallest `(u, v)` on ties) until no
/// 4-cycle remains. The retained fraction is reported, not guaranteed.
pub fn gyori_extract(g: &Graph) -> Result<GyoriOutput> {
    if !g.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    if has_short_cycle(g, &[4])?.is_some() {
        if let Some(c6) = has_short_cycle(g, &[6])? {
            return Err(Error::NotC6Free(c6));
        }
    }
    let mut h = g.clone();
    let mut deleted = Vec::new();
    while has_short_cycle(&h, &[4])?.is_some() {
        let (u, v) = busiest_c4_edge(&h);
        deleted.push((u, v));
        h = h.filter_edges(|a, b| (a, b) != (u, v));
    }
    let retention = if g.m() == 0 {
        Ratio::from_integer(1)
    } else {
        Ratio::new(h.m() as u64, g.m() as u64)
    };
    Ok(GyoriOutput {
        graph: h,
        retention,
        deleted,
    })
}

/// Edge on the most 4-cycles. Edge `ux` lies on `Σ_{w ∈ N(x)\u} (|N(u) ∩ N(w)| − 1)` of them.
fn busiest_c4_edge(g: &Graph) -> (Vertex, Vertex) {
    let n = g.n();
    let mut common = vec![0usize; n];
    let mut best = (0usize, (usize::MAX, usize::MAX));
    for u in 0..n {
        let mut touched = Vec::new();
        for &x in g.neighbors(u) {
            for &w in g.neighbors(x) {
                if w != u {
                    if common[w] == 0 {
                        touched.push(w);
                    }
                    common[w] += 1;
                }
            }
        }
        for &x in g.neighbors(u) {
            if x < u {
                continue;
            }
            let on_u_side: usize = g.neighbors(x).iter().filter(|&&w| w != u).map(|&w| common[w] - 1).sum();
            let count = on_u_side;
            let key = (u, x);
            if count > best.0 || (count == best.0 && key < best.1) {
                best = (count, key);
            }
        }
        for w in touched {
            common[w] = 0;
        }
    }
    best.1
}
