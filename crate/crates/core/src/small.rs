//! Small named graphs used as hosts in examples and oracle checks.

use crate::graph::{Graph, Side};

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(
        n,
        &(0..n)
            .map(|i| (i.min((i + 1) % n), i.max((i + 1) % n)))
            .collect::<Vec<_>>(),
    )
    .expect("cycle needs n >= 3")
}

pub fn path_graph(n: usize) -> Graph {
    Graph::from_edges(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// `K_{a,b}` with side `A = 0..a` and side `B = a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges: Vec<_> = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect();
    let sides = (0..a + b).map(|v| if v < a { Side::A } else { Side::B }).collect();
    Graph::from_edges(a + b, &edges).unwrap().with_sides(sides).unwrap()
}

/// `K4` on `0..4` plus vertex 4 hanging off vertex 0.
pub fn k4_pendant() -> Graph {
    Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]).unwrap()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    Graph::from_edges(10, &edges).unwrap()
}

/// Disjoint union; the second graph's ids are shifted by `a.n()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.n();
    let edges: Vec<_> = a
        .edges()
        .chain(b.edges().map(|(u, v)| (u + shift, v + shift)))
        .collect();
    Graph::from_edges(a.n() + b.n(), &edges).unwrap()
}
