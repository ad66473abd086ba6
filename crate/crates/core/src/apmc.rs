//! All-pairs-min-cut sparsifiers from friendly-cut sparsifiers.
//!
//! The star transform splits every super-vertex back into its members and
//! hangs them off a fresh proxy vertex, each with weight equal to its
//! number of edges inside the super-vertex. Min cuts of the result,
//! restricted to the original vertices, are min cuts of the input.
//!
//! [`recover_min_cut_encoding`] answers one `λ(s, t)` directly from the
//! contracted graph plus degrees, by taking the best of three candidate
//! families. It is exponential in the number of super-vertices and is
//! used as an oracle-checked alternative to the transform.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, MinCutResult};
use crate::friendly::{build_friendly_sparsifier_with, ExpanderDecomposer, FriendlySparsifier, SlackPolicy};
use crate::gomory_hu::{build_gomory_hu_terminals, GomoryHuTree};
use crate::graph::{check_vertex, ContractionMap, EdgeWeighted, Multigraph, MultigraphBuilder, VertexId, WeightedGraph};
use crate::Rational;

/// Weighted graph on `0..n` plus proxies `n..`, one per non-singleton
/// super-vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApmcSparsifier {
    pub graph: WeightedGraph,
    /// Number of original vertices.
    pub n: usize,
    /// `(super-vertex id, proxy vertex id)` in super-vertex order.
    pub proxy_of: Vec<(usize, VertexId)>,
    pub origin: ContractionMap,
}

impl ApmcSparsifier {
    /// Distinct weighted pairs, `|E_ap|`.
    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn proxy_count(&self) -> usize {
        self.proxy_of.len()
    }
}

impl Serialize for ApmcSparsifier {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            n: usize,
            vertices: usize,
            proxies: &'a [(usize, VertexId)],
            edges: Vec<(VertexId, VertexId, u64)>,
        }
        Json {
            n: self.n,
            vertices: self.graph.n(),
            proxies: &self.proxy_of,
            edges: self.graph.weighted_pairs().collect(),
        }
        .serialize(ser)
    }
}

/// Star transform of `h` given the true degree of every original vertex.
pub fn star_transform(h: &FriendlySparsifier, degrees: &[u64]) -> Result<ApmcSparsifier> {
    let n = h.n();
    if degrees.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} degrees, got {}", degrees.len())));
    }
    let mut external = vec![0u64; n];
    let mut edges: Vec<(VertexId, VertexId, u64)> = Vec::with_capacity(h.edges().len() + n);
    for (&(u, v), &m) in h.edges() {
        external[u] += m;
        external[v] += m;
        edges.push((u, v, m));
    }
    let p = h.partition();
    let mut proxy_of = Vec::new();
    for sv in 0..p.len() {
        let members = p.members(sv);
        if members.len() < 2 {
            continue;
        }
        let proxy = n + proxy_of.len();
        proxy_of.push((sv, proxy));
        for &v in members {
            let internal = degrees[v].checked_sub(external[v]).ok_or_else(|| {
                Error::DataCorruption(format!(
                    "vertex {v} has degree {} but {} edges leave its super-vertex",
                    degrees[v], external[v]
                ))
            })?;
            if internal > 0 {
                edges.push((v, proxy, internal));
            }
        }
    }
    for v in 0..n {
        if p.members(p.super_of(v)).len() == 1 && external[v] != degrees[v] {
            return Err(Error::DataCorruption(format!(
                "singleton vertex {v} has degree {} but {} stored edges",
                degrees[v], external[v]
            )));
        }
    }
    let graph = WeightedGraph::from_weighted_edges(n + proxy_of.len(), &edges)?;
    Ok(ApmcSparsifier { graph, n, proxy_of, origin: p.clone() })
}

/// `λ(s, t)` from the sparsifier, with the source side restricted to the
/// original vertices.
pub fn apmc_lambda(h_ap: &ApmcSparsifier, s: VertexId, t: VertexId) -> Result<MinCutResult> {
    for v in [s, t] {
        if v >= h_ap.n {
            return Err(Error::InvalidInput(format!("{v} is not an original vertex (n = {})", h_ap.n)));
        }
    }
    let mut r = FlowNetwork::new(&h_ap.graph).min_cut(s, t)?;
    r.source_side.retain(|&v| v < h_ap.n);
    Ok(r)
}

/// Cap on super-vertices for [`recover_min_cut_encoding`].
pub const ENCODING_LIMIT: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CandidateKind {
    /// Min cut between the super-vertices of `s` and `t` in the contracted
    /// graph (absent when they coincide).
    ContractedFlow,
    /// `X ∪ {s}` for the best union `X` of other super-vertices.
    PlusSource,
    /// `X ∪ {t}`, reported by its complement so it contains `s`.
    PlusSink,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub value: u64,
    pub source_side: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingRecovery {
    pub value: u64,
    /// Original vertices, contains `s`.
    pub source_side: Vec<VertexId>,
    pub candidates: Vec<Candidate>,
}

/// Best of the three candidate families. `f_v(X) = cut_H(X) - 2w(X, v) +
/// deg(v)` is the value of `X ∪ {v}` in the original graph, so every
/// candidate is a genuine separating cut.
pub fn recover_min_cut_encoding(
    h: &FriendlySparsifier,
    degrees: &[u64],
    s: VertexId,
    t: VertexId,
) -> Result<EncodingRecovery> {
    let n = h.n();
    check_vertex(n, s)?;
    check_vertex(n, t)?;
    if s == t {
        return Err(Error::InvalidInput(format!("s and t are both {s}")));
    }
    if degrees.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} degrees, got {}", degrees.len())));
    }
    let p = h.partition();
    let k = p.len();
    if k > ENCODING_LIMIT {
        return Err(Error::LimitExceeded { what: "super-vertices for encoding recovery", limit: ENCODING_LIMIT, actual: k });
    }
    let contracted = h.contracted();
    let (ss, st) = (p.super_of(s), p.super_of(t));
    let expand = |sup: &[bool]| -> Vec<bool> { (0..n).map(|v| sup[p.super_of(v)]).collect() };
    let to_list = |mask: &[bool]| -> Vec<VertexId> { (0..n).filter(|&v| mask[v]).collect() };
    let mut candidates = Vec::new();

    if ss != st {
        let r = FlowNetwork::new(&contracted).min_cut(ss, st)?;
        let mut sup = vec![false; k];
        for x in r.source_side {
            sup[x] = true;
        }
        candidates.push(Candidate { kind: CandidateKind::ContractedFlow, value: r.value, source_side: to_list(&expand(&sup)) });
    }

    // Stored edges from s and t into each super-vertex.
    let mut to_s = vec![0u64; k];
    let mut to_t = vec![0u64; k];
    for (&(u, v), &m) in h.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if a == s {
                to_s[p.super_of(b)] += m;
            }
            if a == t {
                to_t[p.super_of(b)] += m;
            }
        }
    }
    let free: Vec<usize> = (0..k).filter(|&x| x != ss && x != st).collect();
    let mut inside = vec![false; k];
    let mut inw = vec![0u64; k];
    let (mut cut, mut ws, mut wt) = (0u64, 0u64, 0u64);
    let fs = |cut: u64, w: u64| cut + degrees[s] - 2 * w;
    let ft = |cut: u64, w: u64| cut + degrees[t] - 2 * w;
    let mut best_s = (fs(0, 0), 0u64);
    let mut best_t = (ft(0, 0), 0u64);
    let mut code = 0u64;
    for step in 1u64..1u64 << free.len() {
        let bit = step.trailing_zeros() as usize;
        code ^= 1 << bit;
        let x = free[bit];
        let deg = contracted.weighted_degree(x);
        if inside[x] {
            inside[x] = false;
            cut = cut + 2 * inw[x] - deg;
            ws -= to_s[x];
            wt -= to_t[x];
            for &(y, w) in contracted.neighbors(x) {
                inw[y] -= w;
            }
        } else {
            inside[x] = true;
            cut = cut + deg - 2 * inw[x];
            ws += to_s[x];
            wt += to_t[x];
            for &(y, w) in contracted.neighbors(x) {
                inw[y] += w;
            }
        }
        if fs(cut, ws) < best_s.0 {
            best_s = (fs(cut, ws), code);
        }
        if ft(cut, wt) < best_t.0 {
            best_t = (ft(cut, wt), code);
        }
    }
    let decode = |code: u64| -> Vec<bool> {
        let mut sup = vec![false; k];
        for (i, &x) in free.iter().enumerate() {
            sup[x] = code >> i & 1 == 1;
        }
        expand(&sup)
    };
    let mut side = decode(best_s.1);
    side[s] = true;
    candidates.push(Candidate { kind: CandidateKind::PlusSource, value: best_s.0, source_side: to_list(&side) });
    let mut side = decode(best_t.1);
    side[t] = true;
    let complement: Vec<bool> = side.iter().map(|b| !b).collect();
    candidates.push(Candidate { kind: CandidateKind::PlusSink, value: best_t.0, source_side: to_list(&complement) });

    let best = candidates.iter().min_by_key(|c| c.value).expect("at least two candidates");
    Ok(EncodingRecovery { value: best.value, source_side: best.source_side.clone(), candidates })
}

/// Result of repeatedly removing vertices of degree at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeling {
    /// Same vertex ids as the input; peeled vertices are isolated.
    pub core: Multigraph,
    pub alive: Vec<bool>,
    /// True degrees within the core (0 for peeled vertices).
    pub core_degrees: Vec<u64>,
    /// `(vertex, neighbor at removal time)` in removal order.
    pub peeled: Vec<(VertexId, Option<VertexId>)>,
}

impl Peeling {
    pub fn core_vertices(&self) -> Vec<VertexId> {
        (0..self.alive.len()).filter(|&v| self.alive[v]).collect()
    }
}

pub fn peel_degree_one(g: &Multigraph) -> Peeling {
    peel_known(g, &g.degrees()).expect("a graph's own degrees are consistent")
}

/// Peeling driven by true `degrees` when `known` may be missing edges.
/// Every vertex that ends up peeled must have all its edges in `known`;
/// otherwise the degrees and edges are inconsistent.
pub fn peel_known(known: &Multigraph, degrees: &[u64]) -> Result<Peeling> {
    let n = known.n();
    if degrees.len() != n {
        return Err(Error::InvalidInput(format!("expected {n} degrees, got {}", degrees.len())));
    }
    let mut deg = degrees.to_vec();
    let mut alive = vec![true; n];
    let mut peeled = Vec::new();
    let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        let live: Vec<(usize, u64)> = known.neighbors(v).iter().copied().filter(|&(u, _)| alive[u]).collect();
        let known_deg: u64 = live.iter().map(|&(_, m)| m).sum();
        if known_deg != deg[v] {
            return Err(Error::DataCorruption(format!(
                "vertex {v} has remaining degree {} but {known_deg} known live edges",
                deg[v]
            )));
        }
        let attach = live.first().map(|&(u, _)| u);
        if let Some(u) = attach {
            deg[u] -= 1;
            if deg[u] <= 1 {
                queue.push_back(u);
            }
        }
        peeled.push((v, attach));
    }
    let mut b = MultigraphBuilder::new(n);
    for (u, v, m) in known.weighted_pairs() {
        if alive[u] && alive[v] {
            b.add_edges(u, v, m).expect("in range");
        }
    }
    let core_degrees = (0..n).map(|v| if alive[v] { deg[v] } else { 0 }).collect();
    Ok(Peeling { core: b.build(), alive, core_degrees, peeled })
}

/// Extends a tree over the core vertices to all of `0..n`: peeled vertices
/// hang off their attachment with weight 1, and each fully peeled
/// component joins the root with weight 0.
pub fn attach_peeled(core_tree: &GomoryHuTree, peeling: &Peeling) -> Result<GomoryHuTree> {
    let n = peeling.alive.len();
    let mut edges = core_tree.edges().to_vec();
    let root = peeling
        .core_vertices()
        .first()
        .copied()
        .or_else(|| peeling.peeled.iter().find(|(_, a)| a.is_none()).map(|&(v, _)| v));
    for &(v, attach) in &peeling.peeled {
        match attach {
            Some(a) => edges.push((v, a, 1)),
            None if Some(v) != root => edges.push((v, root.expect("root exists when anything is peeled"), 0)),
            None => {}
        }
    }
    GomoryHuTree::from_edges((0..n).collect(), edges)
}

/// Restriction of `h` to live vertices: peeled vertices become singletons
/// and lose all their stored edges.
pub fn restrict_to_core(h: &FriendlySparsifier, alive: &[bool]) -> Result<FriendlySparsifier> {
    if alive.len() != h.n() {
        return Err(Error::InvalidInput(format!("alive mask covers {} vertices, sparsifier has {}", alive.len(), h.n())));
    }
    let p = h.partition();
    let labels: Vec<usize> = (0..h.n()).map(|v| if alive[v] { p.super_of(v) } else { p.len() + v }).collect();
    let kept: Vec<_> = h
        .edges()
        .iter()
        .filter(|&(&(u, v), _)| alive[u] && alive[v])
        .map(|(&(u, v), &m)| (u, v, m))
        .collect();
    let g = Multigraph::from_multiplicities(h.n(), &kept)?;
    FriendlySparsifier::from_partition(&g, ContractionMap::from_labels(&labels), h.alpha, h.w, h.beta)
}

/// Star transform, terminal Gomory-Hu tree over the core, then peeled
/// vertices re-attached. `h` must be a sparsifier of `peeling.core`.
pub fn tree_from_sparsifier(h: &FriendlySparsifier, peeling: &Peeling) -> Result<(ApmcSparsifier, GomoryHuTree)> {
    let ap = star_transform(h, &peeling.core_degrees)?;
    let core_tree = build_gomory_hu_terminals(&ap.graph, &peeling.core_vertices())?;
    let tree = attach_peeled(&core_tree, peeling)?;
    Ok((ap, tree))
}

/// Tree from exact degrees plus the edges between distinct super-vertices
/// of `partition`, which is all the query and streaming pipelines recover.
/// `known` must hold exactly those edges.
pub fn tree_from_crossing_edges(
    known: &Multigraph,
    degrees: &[u64],
    partition: ContractionMap,
) -> Result<(Peeling, ApmcSparsifier, GomoryHuTree)> {
    let n = known.n();
    let peeling = peel_known(known, degrees)?;
    let h = FriendlySparsifier::from_partition(
        known,
        partition,
        Rational::new(1, 6),
        Rational::from_integer(2 * n.max(1) as i128),
        Rational::from_integer(1),
    )?;
    let h = restrict_to_core(&h, &peeling.alive)?;
    let (ap, tree) = tree_from_sparsifier(&h, &peeling)?;
    Ok((peeling, ap, tree))
}

/// Everything the pipeline built, for inspection.
#[derive(Clone, Debug)]
pub struct ApmcOutcome {
    pub peeling: Peeling,
    pub sparsifier: FriendlySparsifier,
    pub apmc: ApmcSparsifier,
    pub tree: GomoryHuTree,
}

/// Peel, build the `(1/6, 2n)` sparsifier of the core, star transform,
/// Gomory-Hu, re-attach.
pub fn apmc_pipeline_detailed(g: &Multigraph, decomposer: &ExpanderDecomposer) -> Result<ApmcOutcome> {
    let peeling = peel_degree_one(&g.without_self_loops());
    let w = Rational::from_integer(2 * g.n().max(1) as i128);
    let sparsifier = build_friendly_sparsifier_with(
        &peeling.core,
        Rational::new(1, 6),
        w,
        Rational::from_integer(1),
        decomposer,
        &SlackPolicy::Mandatory,
    )?;
    let (apmc, tree) = tree_from_sparsifier(&sparsifier, &peeling)?;
    Ok(ApmcOutcome { peeling, sparsifier, apmc, tree })
}

pub fn apmc_pipeline(g: &Multigraph) -> Result<GomoryHuTree> {
    Ok(apmc_pipeline_detailed(g, &ExpanderDecomposer::default())?.tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::flow::brute_force_apmc;
    use crate::friendly::build_friendly_sparsifier;
    use crate::graph::{cut_value, EdgeWeighted};
    use crate::suite::{clustered_multigraph, random_cluster_spec, random_multigraph};
    use proptest::prelude::*;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    fn sixth(g: &Multigraph) -> FriendlySparsifier {
        build_friendly_sparsifier(g, r(1, 6), Rational::from_integer(2 * g.n() as i128), Rational::from_integer(1)).unwrap()
    }

    #[test]
    fn star_weight_counts_internal_neighbors() {
        // Super-vertex {0..4}; 4 is adjacent to 2 and 3 inside and to 5 outside.
        let g = Multigraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (0, 3), (2, 4), (3, 4), (4, 5), (0, 5)]).unwrap();
        let cm = ContractionMap::from_groups(6, &[vec![0, 1, 2, 3, 4], vec![5]]).unwrap();
        let h = FriendlySparsifier::from_partition(&g, cm, r(1, 6), Rational::from_integer(12), Rational::from_integer(1)).unwrap();
        let ap = star_transform(&h, &g.degrees()).unwrap();
        assert_eq!(ap.proxy_of, vec![(0, 6)]);
        assert_eq!(ap.graph.weight(4, 6), 2);
    }

    #[test]
    fn identity_star_transform_is_the_graph() {
        let g = bowtie();
        let h = FriendlySparsifier::identity(&g, r(1, 6), Rational::from_integer(10));
        let ap = star_transform(&h, &g.degrees()).unwrap();
        assert_eq!(ap.graph, g.to_weighted());
        assert_eq!(ap.proxy_count(), 0);
    }

    #[test]
    fn k4_pair_contracted() {
        let g = k(4);
        let cm = ContractionMap::from_groups(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let h = FriendlySparsifier::from_partition(&g, cm, r(1, 6), Rational::from_integer(8), Rational::from_integer(1)).unwrap();
        let ap = star_transform(&h, &g.degrees()).unwrap();
        assert_eq!((ap.graph.weight(0, 4), ap.graph.weight(1, 4)), (1, 1));
        assert!(ap.edge_count() as u64 <= h.edge_count() + 4);
    }

    #[test]
    fn inconsistent_degrees_are_corruption() {
        let g = k(4);
        let cm = ContractionMap::from_groups(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let h = FriendlySparsifier::from_partition(&g, cm, r(1, 6), Rational::from_integer(8), Rational::from_integer(1)).unwrap();
        assert!(matches!(star_transform(&h, &[1, 3, 3, 3]), Err(Error::DataCorruption(_))));
        assert!(matches!(star_transform(&h, &[3, 3, 2, 3]), Err(Error::DataCorruption(_))));
    }

    #[test]
    fn apmc_lambda_examples() {
        let g = k(4);
        let ap = star_transform(&FriendlySparsifier::identity(&g, r(1, 6), Rational::from_integer(8)), &g.degrees()).unwrap();
        assert_eq!(apmc_lambda(&ap, 0, 3).unwrap().value, 3);
        let g = two_triangles();
        let ap = star_transform(&FriendlySparsifier::identity(&g, r(1, 6), Rational::from_integer(12)), &g.degrees()).unwrap();
        assert_eq!(apmc_lambda(&ap, 0, 4).unwrap().value, 0);
        assert!(apmc_lambda(&ap, 0, 6).is_err());
    }

    #[test]
    fn encoding_examples() {
        let g = bowtie();
        let h = FriendlySparsifier::identity(&g, r(1, 6), Rational::from_integer(10));
        let rec = recover_min_cut_encoding(&h, &g.degrees(), 0, 4).unwrap();
        assert_eq!(rec.value, 2);
        let g = k(4);
        let h = FriendlySparsifier::identity(&g, r(1, 6), Rational::from_integer(8));
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    assert_eq!(recover_min_cut_encoding(&h, &g.degrees(), s, t).unwrap().value, 3);
                }
            }
        }
    }

    #[test]
    fn peel_examples() {
        let p = peel_degree_one(&path(3));
        assert!(p.core_vertices().is_empty());
        let t = attach_peeled(&GomoryHuTree::from_edges(vec![], vec![]).unwrap(), &p).unwrap();
        assert_eq!(t.query(0, 2).unwrap().0, 1);

        let p = peel_degree_one(&k(4));
        assert_eq!((p.core_vertices().len(), p.peeled.len()), (4, 0));

        let g = crate::fixtures::disjoint_union(&k(4), &Multigraph::empty(1));
        let mut b = g.to_builder();
        b.add_edge(4, 0).unwrap();
        let g = b.build();
        let tree = apmc_pipeline(&g).unwrap();
        let truth = brute_force_apmc(&g).unwrap();
        assert_eq!(tree.lambda_table(), truth);
        assert!((0..4).all(|v| truth.get(4, v) == 1));
        assert_eq!(truth.get(0, 1), 3);
    }

    #[test]
    fn pipeline_examples() {
        let t = apmc_pipeline(&Multigraph::empty(4)).unwrap();
        assert!(t.edges().iter().all(|e| e.2 == 0));
        assert_eq!(t.edges().len(), 3);
        let t = apmc_pipeline(&cycle(6)).unwrap();
        assert!(t.lambda_table().entries().iter().all(|e| e.2 == 2));
        assert_eq!(apmc_pipeline(&Multigraph::empty(1)).unwrap().edges().len(), 0);
        assert_eq!(apmc_pipeline(&Multigraph::empty(0)).unwrap().edges().len(), 0);
    }

    #[test]
    fn clustered_pipeline_matches_oracle() {
        for seed in 0..6 {
            let g = clustered_multigraph(&random_cluster_spec(16, seed), seed);
            let out = apmc_pipeline_detailed(&g, &ExpanderDecomposer::default()).unwrap();
            assert_eq!(out.tree.lambda_table(), brute_force_apmc(&g).unwrap(), "seed {seed}");
            assert!(out.apmc.edge_count() as u64 <= out.sparsifier.edge_count() + g.n() as u64);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn eq2_identity(seed in any::<u64>(), n in 2usize..=12, p in 0.1f64..0.9, bits in any::<u32>()) {
            let g = random_multigraph(n, p, seed);
            let v = (bits as usize) % n;
            let x: Vec<usize> = (0..n).filter(|&u| u != v && (bits >> (u % 31)) & 1 == 1).collect();
            let exv: u64 = g.neighbors(v).iter().filter(|(u, _)| x.contains(u)).map(|&(_, w)| w).sum();
            let mut xv = x.clone();
            xv.push(v);
            prop_assert_eq!(
                cut_value(&g, &xv).unwrap() + 2 * exv,
                cut_value(&g, &x).unwrap() + g.weighted_degree(v)
            );
        }

        #[test]
        fn encoding_candidates_bound_lambda(seed in any::<u64>(), clustered in any::<bool>()) {
            let g = if clustered {
                clustered_multigraph(&random_cluster_spec(12, seed), seed)
            } else {
                crate::suite::min_degree_two_graph(12, 0.35, seed, 4)
            };
            let h = sixth(&g);
            let truth = brute_force_apmc(&g).unwrap();
            let deg = g.degrees();
            for s in 0..g.n() {
                for t in s + 1..g.n() {
                    let rec = recover_min_cut_encoding(&h, &deg, s, t).unwrap();
                    prop_assert_eq!(rec.value, truth.get(s, t));
                    for c in &rec.candidates {
                        prop_assert!(c.value >= truth.get(s, t));
                        prop_assert_eq!(cut_value(&g, &c.source_side).unwrap(), c.value);
                    }
                }
            }
        }

        #[test]
        fn restricted_witness_is_a_min_cut(seed in any::<u64>()) {
            let g = clustered_multigraph(&random_cluster_spec(14, seed), seed);
            let h = sixth(&g);
            let ap = star_transform(&h, &g.degrees()).unwrap();
            for (s, t) in [(0, g.n() - 1), (1, 2)] {
                let r = apmc_lambda(&ap, s, t).unwrap();
                prop_assert_eq!(cut_value(&g, &r.source_side).unwrap(), r.value);
                prop_assert_eq!(r.value, crate::flow::min_st_cut(&g, s, t).unwrap().value);
            }
        }
    }
}
