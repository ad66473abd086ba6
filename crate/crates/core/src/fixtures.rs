//! Small named graphs used as worked examples in tests, docs and the CLI.

use crate::graph::Multigraph;

fn build(n: usize, edges: &[(usize, usize)]) -> Multigraph {
    Multigraph::from_edges(n, edges).expect("fixture edges are in range")
}

/// Complete graph `K_n`.
pub fn k(n: usize) -> Multigraph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            e.push((u, v));
        }
    }
    build(n, &e)
}

/// Cycle `C_n` on `0..n` in index order.
pub fn cycle(n: usize) -> Multigraph {
    let e: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    build(n, &e)
}

/// Path `P_n` on `0..n` in index order.
pub fn path(n: usize) -> Multigraph {
    let e: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    build(n, &e)
}

/// Triangles `{0,1,2}` and `{2,3,4}` sharing vertex 2.
pub fn bowtie() -> Multigraph {
    build(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
}

/// Two disjoint triangles `{0,1,2}` and `{3,4,5}`.
pub fn two_triangles() -> Multigraph {
    build(6, &[(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
}

/// Two `K_4` on `{0..3}` and `{4..7}` joined by the bridge `3-4`.
pub fn two_k4_bridge() -> Multigraph {
    let mut e = Vec::new();
    for base in [0, 4] {
        for u in 0..4 {
            for v in u + 1..4 {
                e.push((base + u, base + v));
            }
        }
    }
    e.push((3, 4));
    build(8, &e)
}

/// Disjoint union of two graphs, the second relabelled after the first.
pub fn disjoint_union(a: &Multigraph, b: &Multigraph) -> Multigraph {
    use crate::graph::EdgeWeighted;
    let off = a.n();
    let mut e: Vec<(usize, usize, u64)> = a.weighted_pairs().collect();
    e.extend(b.weighted_pairs().map(|(u, v, w)| (u + off, v + off, w)));
    Multigraph::from_multiplicities(off + b.n(), &e).expect("union edges are in range")
}
