//! Seeded graph generators for tests, benches and the CLI.
//!
//! Plain Erdős-Rényi graphs almost never trigger contraction at the
//! `(1/6, 2n)` parameters: a vertex survives shaving only when its degree
//! is far above the average. [`clustered_multigraph`] produces dense
//! blobs of parallel edges so that the sparsifier has something to do.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeWeighted, Multigraph, MultigraphBuilder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Simple `G(n, p)`.
pub fn random_multigraph(n: usize, p: f64, seed: u64) -> Multigraph {
    let mut r = rng(seed);
    let mut b = MultigraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                b.add_edge(u, v).expect("in range");
            }
        }
    }
    b.build()
}

/// Vertices of the 2-core (repeatedly drop degree <= 1), sorted.
pub fn two_core_vertices(g: &Multigraph) -> Vec<usize> {
    let n = g.n();
    let mut deg = g.degrees();
    let mut alive = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &(u, w) in g.neighbors(v) {
            if alive[u] {
                deg[u] -= w;
                if deg[u] <= 1 {
                    stack.push(u);
                }
            }
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// `G(n, p)` reduced to its 2-core and relabelled. Reseeds until the core
/// has at least `min_core` vertices (at most 64 attempts; the last sample
/// is returned regardless).
pub fn min_degree_two_graph(n: usize, p: f64, seed: u64, min_core: usize) -> Multigraph {
    let mut last = Multigraph::empty(0);
    for attempt in 0..64u64 {
        let g = random_multigraph(n, p, seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)));
        let core = g.induced(&two_core_vertices(&g));
        if core.n() >= min_core {
            return core;
        }
        last = core;
    }
    last
}

/// Shape of a [`clustered_multigraph`].
#[derive(Clone, Debug)]
pub struct ClusterSpec {
    /// Sizes of the dense blobs.
    pub blobs: Vec<usize>,
    /// Multiplicity range for each intra-blob pair.
    pub multiplicity: (u64, u64),
    /// Number of single edges placed between random vertices of
    /// different blobs.
    pub bridges: usize,
    /// Extra low-degree vertices, each joined by single edges to
    /// `sparse_links` random blob vertices.
    pub sparse: usize,
    pub sparse_links: usize,
}

/// Dense blobs of parallel edges, sparse bridges between them, and a few
/// light vertices. Blob vertices come first in id order, but the final
/// labelling is a seeded permutation so tests don't depend on layout.
pub fn clustered_multigraph(cluster: &ClusterSpec, seed: u64) -> Multigraph {
    let mut r = rng(seed);
    let heavy: usize = cluster.blobs.iter().sum();
    let n = heavy + cluster.sparse;
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, r.gen_range(0..=i));
    }
    let mut b = MultigraphBuilder::new(n);
    let mut owner = Vec::with_capacity(heavy);
    let mut start = 0;
    for (bi, &size) in cluster.blobs.iter().enumerate() {
        for u in start..start + size {
            owner.push(bi);
            for v in u + 1..start + size {
                let m = r.gen_range(cluster.multiplicity.0..=cluster.multiplicity.1);
                b.add_edges(perm[u], perm[v], m).expect("in range");
            }
        }
        start += size;
    }
    if cluster.blobs.len() > 1 {
        let mut placed = 0;
        while placed < cluster.bridges {
            let (u, v) = (r.gen_range(0..heavy), r.gen_range(0..heavy));
            if owner[u] != owner[v] {
                b.add_edge(perm[u], perm[v]).expect("in range");
                placed += 1;
            }
        }
    }
    if heavy > 0 {
        for x in heavy..n {
            let mut used = Vec::new();
            while used.len() < cluster.sparse_links.min(heavy) {
                let u = r.gen_range(0..heavy);
                if !used.contains(&u) {
                    used.push(u);
                    b.add_edge(perm[x], perm[u]).expect("in range");
                }
            }
        }
    }
    b.build()
}

/// A random [`ClusterSpec`] with about `target` vertices (at most
/// `target`), blobs of 3 to 5 vertices.
pub fn random_cluster_spec(target: usize, seed: u64) -> ClusterSpec {
    let mut r = rng(seed ^ 0x5eed_c1a5);
    let sparse = r.gen_range(1..=3.min(target.saturating_sub(3)).max(1));
    let mut blobs = Vec::new();
    let mut left = target.saturating_sub(sparse);
    while left >= 3 {
        let s = r.gen_range(3..=5.min(left));
        blobs.push(s);
        left -= s;
    }
    ClusterSpec {
        blobs,
        multiplicity: (110, 150),
        bridges: r.gen_range(1..=4),
        sparse,
        sparse_links: 2,
    }
}

/// True when every vertex has degree at least 2.
pub fn has_min_degree_two(g: &Multigraph) -> bool {
    (0..g.n()).all(|v| g.weighted_degree(v) >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_multigraph(20, 0.3, 9), random_multigraph(20, 0.3, 9));
        let cluster = random_cluster_spec(14, 3);
        assert_eq!(clustered_multigraph(&cluster, 3), clustered_multigraph(&cluster, 3));
    }

    #[test]
    fn two_core_has_min_degree_two() {
        for seed in 0..20 {
            let g = min_degree_two_graph(12, 0.3, seed, 4);
            assert!(has_min_degree_two(&g), "seed {seed}");
        }
    }

    #[test]
    fn clustered_shape() {
        let cluster = ClusterSpec { blobs: vec![4, 4], multiplicity: (100, 100), bridges: 2, sparse: 2, sparse_links: 2 };
        let g = clustered_multigraph(&cluster, 1);
        assert_eq!(g.n(), 10);
        assert_eq!(g.edge_count(), 2 * 6 * 100 + 2 + 4);
    }
}
