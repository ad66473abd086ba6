//! Cut-query oracle with exact accounting, the layered hard-instance
//! generator, and an end-to-end APMC run driven only by cut queries.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::apmc::{apmc_pipeline_detailed, tree_from_crossing_edges};
use crate::error::{Error, Result};
use crate::friendly::ExpanderDecomposer;
use crate::gomory_hu::GomoryHuTree;
use crate::graph::{cut_value, membership, Multigraph, MultigraphBuilder, VertexId};
use crate::suite::rng;

/// Largest hidden graph the query-driven demo accepts.
pub const DEMO_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryRecord {
    pub set: Vec<VertexId>,
    pub answer: u64,
}

/// Answers `cut(S)` on a hidden graph and counts every call.
#[derive(Debug)]
pub struct CutQueryOracle {
    hidden: Multigraph,
    count: AtomicU64,
    log: Option<Mutex<Vec<QueryRecord>>>,
}

impl CutQueryOracle {
    pub fn new(hidden: Multigraph) -> Self {
        CutQueryOracle { hidden, count: AtomicU64::new(0), log: None }
    }

    /// Oracle that also records every query and answer.
    pub fn with_transcript(hidden: Multigraph) -> Self {
        CutQueryOracle { hidden, count: AtomicU64::new(0), log: Some(Mutex::new(Vec::new())) }
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn query_count(&self) -> u64 {
        self.count.load(Ordering::SeqCst)
    }

    /// Recorded queries, or `None` when the oracle was built without a log.
    pub fn transcript(&self) -> Option<Vec<QueryRecord>> {
        self.log.as_ref().map(|l| l.lock().expect("transcript lock").clone())
    }

    pub fn transcript_len(&self) -> Option<usize> {
        self.log.as_ref().map(|l| l.lock().expect("transcript lock").len())
    }

    pub fn cut_query(&self, s: &[VertexId]) -> Result<u64> {
        let answer = cut_value(&self.hidden, s)?;
        let mut set = s.to_vec();
        set.sort_unstable();
        set.dedup();
        // Count and log under the same lock so both stay in step.
        match &self.log {
            Some(l) => {
                let mut log = l.lock().expect("transcript lock");
                self.count.fetch_add(1, Ordering::SeqCst);
                log.push(QueryRecord { set, answer });
            }
            None => {
                self.count.fetch_add(1, Ordering::SeqCst);
            }
        }
        Ok(answer)
    }

    /// One singleton query per vertex.
    pub fn recover_degrees(&self) -> Result<Vec<u64>> {
        (0..self.n()).map(|v| self.cut_query(&[v])).collect()
    }

    /// `|E(A, B)|` for disjoint sets from three queries.
    pub fn cross_count(&self, a: &[VertexId], b: &[VertexId]) -> Result<u64> {
        let ma = membership(self.n(), a)?;
        let mb = membership(self.n(), b)?;
        if let Some(v) = (0..self.n()).find(|&v| ma[v] && mb[v]) {
            return Err(Error::InvalidInput(format!("sets overlap at vertex {v}")));
        }
        let ca = self.cut_query(a)?;
        let cb = self.cut_query(b)?;
        let union: Vec<VertexId> = a.iter().chain(b).copied().collect();
        let cab = self.cut_query(&union)?;
        Ok((ca + cb - cab) / 2)
    }

    /// The hidden graph. Only the stand-in partition step of the demo and
    /// tests look at it.
    pub fn hidden(&self) -> &Multigraph {
        &self.hidden
    }
}

/// Query totals from [`cut_query_apmc_demo`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryReport {
    pub degree_queries: u64,
    pub edge_queries: u64,
    pub total_queries: u64,
    pub transcript_len: Option<usize>,
    pub pairs_probed: usize,
    pub recovered_edges: u64,
    /// The contraction comes from the hidden graph, not from queries.
    pub partition_stand_in: bool,
}

#[derive(Clone, Debug)]
pub struct DemoOutcome {
    pub tree: GomoryHuTree,
    pub report: QueryReport,
}

/// APMC from cut queries: degrees by singleton queries, then every edge
/// between distinct super-vertices of a friendly cut sparsifier by
/// `cross_count`, then star transform and Gomory-Hu. The contraction
/// itself is computed offline on the hidden graph.
pub fn cut_query_apmc_demo(o: &CutQueryOracle) -> Result<DemoOutcome> {
    let n = o.n();
    if n > DEMO_LIMIT {
        return Err(Error::LimitExceeded { what: "cut-query demo vertices", limit: DEMO_LIMIT, actual: n });
    }
    let start = o.query_count();
    let partition = apmc_pipeline_detailed(o.hidden(), &ExpanderDecomposer::default())?.sparsifier.partition().clone();

    let degrees = o.recover_degrees()?;
    let after_degrees = o.query_count();
    let mut known = MultigraphBuilder::new(n);
    let mut pairs = 0;
    for u in 0..n {
        for v in u + 1..n {
            if degrees[u] == 0 || degrees[v] == 0 || partition.super_of(u) == partition.super_of(v) {
                continue;
            }
            pairs += 1;
            let m = o.cross_count(&[u], &[v])?;
            if m > 0 {
                known.add_edges(u, v, m)?;
            }
        }
    }
    let known = known.build();
    let (_, _, tree) = tree_from_crossing_edges(&known, &degrees, partition)?;
    let end = o.query_count();
    Ok(DemoOutcome {
        tree,
        report: QueryReport {
            degree_queries: after_degrees - start,
            edge_queries: end - after_degrees,
            total_queries: end - start,
            transcript_len: o.transcript_len(),
            pairs_probed: pairs,
            recovered_edges: known.edge_count(),
            partition_stand_in: true,
        },
    })
}

/// How consecutive layers of a [`Kl98Instance`] are wired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Junction {
    /// Every layer vertex has the same number of edges to each
    /// neighboring layer.
    #[default]
    Biregular,
    /// A uniformly random subset of the same size.
    Uniform,
}

/// Layered instance with designated terminals.
#[derive(Clone, Debug, Serialize)]
pub struct Kl98Instance {
    pub graph: Multigraph,
    pub s: VertexId,
    pub t: VertexId,
    pub phi: u64,
    pub layers: Vec<Vec<VertexId>>,
}

/// `φ = q²` closest to `n'`, with `4 | q`, `q | n'` and at least two
/// layers; ties go to the smaller value.
pub fn kl98_phi(n_prime: u64) -> Option<u64> {
    (1..=n_prime / 4)
        .map(|k| 4 * k)
        .filter(|q| n_prime.is_multiple_of(*q) && n_prime / q >= 2)
        .map(|q| q * q)
        .min_by_key(|&phi| (phi.abs_diff(n_prime), phi))
}

pub fn generate_kl98(n: usize, seed: u64) -> Result<Kl98Instance> {
    generate_kl98_with(n, seed, Junction::Biregular)
}

/// Graph on `n + 2` vertices: `s = 0`, `t = 1`, `n'/4` leaves on each
/// terminal, and `n'/√φ` layers of `√φ/2` vertices between them with
/// `φ/8` edges per junction. Leaves attach completely to the end layers.
pub fn generate_kl98_with(n: usize, seed: u64, junction: Junction) -> Result<Kl98Instance> {
    if n < 16 {
        return Err(Error::Parameter(format!("layered instance needs n >= 16, got {n}")));
    }
    let n_prime = 8 * (n / 8);
    let phi = kl98_phi(n_prime as u64).expect("n' >= 16 admits q = 4");
    let q = (phi as f64).sqrt().round() as usize;
    let width = q / 2;
    let quarter = n_prime / 4;
    let s_leaves: Vec<VertexId> = (2..2 + quarter).collect();
    let t_leaves: Vec<VertexId> = (2 + quarter..2 + 2 * quarter).collect();
    let first = 2 + 2 * quarter;
    let layers: Vec<Vec<VertexId>> = (0..n_prime / q).map(|i| (first + i * width..first + (i + 1) * width).collect()).collect();

    let mut r = rng(seed);
    let mut b = MultigraphBuilder::new(n + 2);
    for &x in &s_leaves {
        b.add_edge(0, x)?;
        for &y in &layers[0] {
            b.add_edge(x, y)?;
        }
    }
    for &x in &t_leaves {
        b.add_edge(1, x)?;
        for &y in layers.last().expect("at least two layers") {
            b.add_edge(x, y)?;
        }
    }
    let per_junction = (phi / 8) as usize;
    for pair in layers.windows(2) {
        let edges = match junction {
            Junction::Biregular => biregular_junction(width, &mut r),
            Junction::Uniform => sample(&mut r, width * width, per_junction)
                .into_iter()
                .map(|i| (i / width, i % width))
                .collect(),
        };
        debug_assert_eq!(edges.len(), per_junction);
        for (a, c) in edges {
            b.add_edge(pair[0][a], pair[1][c])?;
        }
    }
    Ok(Kl98Instance { graph: b.build(), s: 0, t: 1, phi, layers })
}

/// Simple bipartite `width × width` graph, `width/2`-regular on both
/// sides: a shuffled circulant followed by random degree-preserving swaps.
fn biregular_junction(width: usize, r: &mut impl Rng) -> Vec<(usize, usize)> {
    let d = width / 2;
    let mut rows: Vec<usize> = (0..width).collect();
    let mut cols: Vec<usize> = (0..width).collect();
    rows.shuffle(r);
    cols.shuffle(r);
    let mut edges: Vec<(usize, usize)> = (0..width)
        .flat_map(|a| (0..d).map(move |k| (a, (a + k) % width)))
        .map(|(a, c)| (rows[a], cols[c]))
        .collect();
    let mut present: BTreeMap<(usize, usize), ()> = edges.iter().map(|&e| (e, ())).collect();
    for _ in 0..4 * edges.len() {
        let i = r.gen_range(0..edges.len());
        let j = r.gen_range(0..edges.len());
        let ((a, c), (b, e)) = (edges[i], edges[j]);
        if a == b || c == e || present.contains_key(&(a, e)) || present.contains_key(&(b, c)) {
            continue;
        }
        present.remove(&(a, c));
        present.remove(&(b, e));
        present.insert((a, e), ());
        present.insert((b, c), ());
        edges[i] = (a, e);
        edges[j] = (b, c);
    }
    edges.sort_unstable();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::flow::{brute_force_apmc, min_st_cut};
    use crate::graph::EdgeWeighted;
    use crate::suite::{clustered_multigraph, random_cluster_spec, random_multigraph};
    use proptest::prelude::*;

    #[test]
    fn cut_query_examples() {
        let o = CutQueryOracle::new(k(4));
        assert_eq!(o.cut_query(&[2]).unwrap(), 3);
        assert_eq!(o.cut_query(&[]).unwrap(), 0);
        assert_eq!(o.cut_query(&[0, 1, 2, 3]).unwrap(), 0);
        assert_eq!(CutQueryOracle::new(k(3)).cut_query(&[0, 1]).unwrap(), 2);
        assert_eq!(o.query_count(), 3);
        assert!(o.cut_query(&[4]).is_err());
        assert_eq!(o.transcript(), None);
    }

    #[test]
    fn degree_recovery_examples() {
        let o = CutQueryOracle::with_transcript(k(4));
        assert_eq!(o.recover_degrees().unwrap(), vec![3; 4]);
        assert_eq!(o.query_count(), 4);
        assert_eq!(o.transcript_len(), Some(4));
        assert_eq!(CutQueryOracle::new(Multigraph::empty(3)).recover_degrees().unwrap(), vec![0; 3]);
        assert_eq!(CutQueryOracle::new(bowtie()).recover_degrees().unwrap(), vec![2, 2, 4, 2, 2]);
    }

    #[test]
    fn cross_count_examples() {
        let o = CutQueryOracle::with_transcript(k(3));
        assert_eq!(o.cross_count(&[0], &[1]).unwrap(), 1);
        assert_eq!(o.query_count(), 3);
        let t = o.transcript().unwrap();
        assert_eq!(t[2], QueryRecord { set: vec![0, 1], answer: 2 });
        assert_eq!(CutQueryOracle::new(two_triangles()).cross_count(&[0], &[3]).unwrap(), 0);
        assert_eq!(CutQueryOracle::new(cycle(4)).cross_count(&[0], &[2]).unwrap(), 0);
        assert!(o.cross_count(&[0, 1], &[1]).is_err());
        assert_eq!(o.query_count(), 3, "rejected overlap costs nothing");
    }

    #[test]
    fn counter_is_exact_under_threads() {
        use rayon::prelude::*;
        let o = CutQueryOracle::with_transcript(k(6));
        (0..500).into_par_iter().for_each(|i| {
            o.cut_query(&[i % 6]).unwrap();
        });
        assert_eq!(o.query_count(), 500);
        assert_eq!(o.transcript_len(), Some(500));
    }

    #[test]
    fn phi_rule() {
        assert_eq!(kl98_phi(64), Some(64));
        assert_eq!(kl98_phi(128), Some(64));
        assert_eq!(kl98_phi(16), Some(16));
        assert_eq!(kl98_phi(96), Some(64));
    }

    #[test]
    fn kl98_examples() {
        let a = generate_kl98(64, 7).unwrap();
        assert_eq!(a.phi, 64);
        assert_eq!(a.graph.n(), 66);
        assert!(a.layers.iter().all(|l| l.len() == 4));
        assert_eq!(a.layers.len(), 8);
        assert_eq!(min_st_cut(&a.graph, a.s, a.t).unwrap().value, 8);
        let b = generate_kl98(128, 7).unwrap();
        assert_eq!(min_st_cut(&b.graph, b.s, b.t).unwrap().value, b.phi / 8);
        assert_eq!(generate_kl98(64, 7).unwrap().graph, a.graph);
        assert!(generate_kl98(15, 0).is_err());
    }

    #[test]
    fn junctions_are_simple_and_sized() {
        for seed in 0..20 {
            let inst = generate_kl98(128, seed).unwrap();
            for w in inst.layers.windows(2) {
                let mut total = 0;
                for &x in &w[0] {
                    let out: u64 = w[1].iter().map(|&y| inst.graph.multiplicity(x, y)).sum();
                    assert_eq!(out as usize, w[0].len() / 2);
                    total += out;
                }
                assert_eq!(total, inst.phi / 8);
                assert!(inst.graph.weighted_pairs().all(|(_, _, m)| m == 1));
            }
        }
    }

    #[test]
    fn uniform_junctions_lose_flow() {
        let short = (0..20)
            .filter(|&seed| {
                let inst = generate_kl98_with(64, seed, Junction::Uniform).unwrap();
                min_st_cut(&inst.graph, inst.s, inst.t).unwrap().value < inst.phi / 8
            })
            .count();
        assert!(short > 0);
    }

    fn check_demo(g: Multigraph) {
        let o = CutQueryOracle::with_transcript(g.clone());
        let out = cut_query_apmc_demo(&o).unwrap();
        assert_eq!(out.tree.lambda_table(), brute_force_apmc(&g).unwrap());
        assert_eq!(out.report.degree_queries, g.n() as u64);
        assert_eq!(out.report.edge_queries, 3 * out.report.pairs_probed as u64);
        assert_eq!(Some(out.report.total_queries as usize), out.report.transcript_len);
    }

    #[test]
    fn demo_examples() {
        check_demo(k(4));
        let e = CutQueryOracle::new(Multigraph::empty(5));
        let out = cut_query_apmc_demo(&e).unwrap();
        assert_eq!(out.report.total_queries, 5);
        for seed in 0..3 {
            check_demo(random_multigraph(32, 0.2, seed));
        }
    }

    #[test]
    fn demo_on_contracting_graph() {
        let g = clustered_multigraph(&random_cluster_spec(20, 3), 3);
        let o = CutQueryOracle::with_transcript(g.clone());
        let out = cut_query_apmc_demo(&o).unwrap();
        assert_eq!(out.tree.lambda_table(), brute_force_apmc(&g).unwrap());
        assert!(out.report.pairs_probed < g.n() * (g.n() - 1) / 2);
    }

    #[test]
    fn demo_size_cap() {
        let o = CutQueryOracle::new(Multigraph::empty(DEMO_LIMIT + 1));
        assert!(matches!(cut_query_apmc_demo(&o), Err(Error::LimitExceeded { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn cross_count_matches_edges(n in 2usize..10, p in 0.1f64..0.9, seed in 0u64..1000, split in 1usize..9) {
            let g = random_multigraph(n, p, seed);
            let o = CutQueryOracle::new(g.clone());
            let cut = split.min(n - 1);
            let a: Vec<_> = (0..cut).collect();
            let b: Vec<_> = (cut..n).collect();
            let expect: u64 = g.weighted_pairs().filter(|&(u, v, _)| (u < cut) != (v < cut)).map(|(_, _, m)| m).sum();
            prop_assert_eq!(o.cross_count(&a, &b).unwrap(), expect);
            prop_assert_eq!(o.query_count(), 3);
        }
    }
}
