//! Immutable simple undirected graphs over dense vertex ids.
//!
//! Subgraphs produced by [`Graph::induced`] are relabelled to `0..k` but keep
//! an `origin` table mapping every local id back to the id it had in the root
//! graph the caller started from. Certificates found inside a subgraph are
//! lifted with [`Graph::lift`] so that they always speak about the input.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Bipartition label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => f.write_str("A"),
            Side::B => f.write_str("B"),
        }
    }
}

/// A set of vertices of a graph with `n` vertices, iterated in ascending order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Builds a set from `members`; panics if a member is `>= n`.
    pub fn from_iter<I: IntoIterator<Item = Vertex>>(n: usize, members: I) -> Self {
        let mut s = VertexSet::new(n);
        for v in members {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        assert!(v < self.bits.len(), "vertex {v} outside universe {}", self.bits.len());
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: Vertex) {
        if v < self.bits.len() {
            self.bits.set(v, false);
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.bits.len() && self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.bits.minimum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Complement within `0..universe`.
    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// A simple path `v0 v1 … vk` in some host graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn start(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn end(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn interior(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// True when consecutive vertices are adjacent in `g` and no vertex repeats.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut seen = VertexSet::new(g.n());
        for &v in &self.0 {
            if v >= g.n() || !seen.insert(v) {
                return false;
            }
        }
        self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

/// Turns a walk into a path with the same endpoints by cutting out every
/// closed sub-walk between repeated occurrences of a vertex.
pub fn walk_to_path(walk: &[Vertex]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(pos) = out.iter().position(|&u| u == v) {
            out.truncate(pos + 1);
        } else {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    side: Option<Vec<Side>>,
    origin: Vec<Vertex>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .field("bipartite_labels", &self.side.is_some())
            .finish()
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge {u}-{v} outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {}-{}",
                    v.min(w[0]),
                    v.max(w[0])
                )));
            }
        }
        Ok(Graph {
            adj,
            side: None,
            origin: (0..n).collect(),
        })
    }

    /// Like [`Graph::from_edges`] but silently drops loops and duplicates.
    pub(crate) fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph {
            adj,
            side: None,
            origin: (0..n).collect(),
        }
    }

    /// Attaches bipartition labels; every edge must cross.
    pub fn with_sides(mut self, sides: Vec<Side>) -> Result<Graph> {
        if sides.len() != self.n() {
            return Err(Error::InvalidGraph(format!(
                "{} side labels for {} vertices",
                sides.len(),
                self.n()
            )));
        }
        for (u, v) in self.edges() {
            if sides[u] == sides[v] {
                return Err(Error::InvalidGraph(format!(
                    "edge {u}-{v} does not cross the bipartition"
                )));
            }
        }
        self.side = Some(sides);
        Ok(self)
    }

    pub fn without_sides(mut self) -> Graph {
        self.side = None;
        self
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
            side: None,
            origin: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn sides(&self) -> Option<&[Side]> {
        self.side.as_deref()
    }

    pub fn side(&self, v: Vertex) -> Option<Side> {
        self.side.as_ref().map(|s| s[v])
    }

    /// Vertices carrying the given label (empty when unlabelled).
    pub fn side_set(&self, which: Side) -> VertexSet {
        match &self.side {
            Some(s) => VertexSet::from_iter(self.n(), (0..self.n()).filter(|&v| s[v] == which)),
            None => VertexSet::new(self.n()),
        }
    }

    /// Root-graph id of local vertex `v`.
    pub fn origin(&self, v: Vertex) -> Vertex {
        self.origin[v]
    }

    pub fn origins(&self) -> &[Vertex] {
        &self.origin
    }

    /// Forgets the relabelling history: this graph becomes its own root.
    pub fn into_root(mut self) -> Graph {
        self.origin = (0..self.n()).collect();
        self
    }

    /// Local id of a root-graph vertex, if it survived into this subgraph.
    pub fn local_of(&self, root: Vertex) -> Option<Vertex> {
        self.origin.binary_search(&root).ok()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Exact average degree `2e/n`; zero for the empty graph.
    pub fn avg_degree(&self) -> Ratio<u64> {
        if self.n() == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(2 * self.m() as u64, self.n() as u64)
        }
    }

    pub fn avg_degree_f64(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.m() as f64 / self.n() as f64
        }
    }

    /// Induced subgraph on `keep`, relabelled in ascending order.
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut local = vec![usize::MAX; self.n()];
        let kept: Vec<Vertex> = keep.iter().collect();
        for (i, &v) in kept.iter().enumerate() {
            local[v] = i;
        }
        let adj = kept
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (local[w] != usize::MAX).then_some(local[w]))
                    .collect()
            })
            .collect();
        Graph {
            adj,
            side: self.side.as_ref().map(|s| kept.iter().map(|&v| s[v]).collect()),
            origin: kept.iter().map(|&v| self.origin[v]).collect(),
        }
    }

    /// Spanning subgraph keeping only the edges accepted by `keep_edge`.
    pub fn filter_edges(&self, mut keep_edge: impl FnMut(Vertex, Vertex) -> bool) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (u, v) in self.edges() {
            if keep_edge(u, v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph {
            adj,
            side: self.side.clone(),
            origin: self.origin.clone(),
        }
    }

    /// Spanning bipartite subgraph of crossing edges under `sides`.
    pub fn crossing_subgraph(&self, sides: Vec<Side>) -> Graph {
        let g = self.filter_edges(|u, v| sides[u] != sides[v]);
        Graph { side: Some(sides), ..g }
    }

    /// Number of edges inside `set`.
    pub fn edges_within(&self, set: &VertexSet) -> usize {
        set.iter()
            .map(|v| self.adj[v].iter().filter(|&&w| w > v && set.contains(w)).count())
            .sum()
    }

    /// A proper 2-colouring if the graph is bipartite (BFS from lowest ids, first vertex of each
    /// component gets `A`).
    pub fn two_coloring(&self) -> Option<Vec<Side>> {
        let mut color: Vec<Option<Side>> = vec![None; self.n()];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(Side::A);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(cu.flip());
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        match &self.side {
            Some(_) => true,
            None => self.two_coloring().is_some(),
        }
    }

    /// Maps a local vertex list to root ids.
    pub fn lift_vertices(&self, vs: &[Vertex]) -> Vec<Vertex> {
        vs.iter().map(|&v| self.origin[v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::from_edges(3, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn sides_must_cross() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(g.clone().with_sides(vec![Side::A, Side::A]).is_err());
        assert!(g.with_sides(vec![Side::A, Side::B]).is_ok());
    }

    #[test]
    fn induced_keeps_origin() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let h = g.induced(&VertexSet::from_iter(5, [1, 2, 4]));
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 1);
        assert_eq!(h.origins(), &[1, 2, 4]);
        let k = h.induced(&VertexSet::from_iter(3, [1, 2]));
        assert_eq!(k.origins(), &[2, 4]);
        assert_eq!(k.local_of(4), Some(1));
    }

    #[test]
    fn walk_shortcuts() {
        assert_eq!(walk_to_path(&[0, 1, 2, 1, 3]), vec![0, 1, 3]);
        assert_eq!(walk_to_path(&[0, 1, 2, 3]), vec![0, 1, 2, 3]);
        assert_eq!(walk_to_path(&[5, 5]), vec![5]);
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_iter(6, [0, 1, 2]);
        let b = VertexSet::from_iter(6, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 1]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.complement().to_vec(), vec![3, 4, 5]);
    }
}
