//! Friendly-cut sparsifiers: iterated decompose, shave, contract.
//!
//! Each level `j` works on the current contracted graph `G_{j-1}`. It adds
//! `⌈(φ/ε)·√w_j⌉` self-loops to every vertex, decomposes, and inside each
//! cluster contracts every vertex that is heavy enough and keeps most of
//! its edges inside the cluster. Everything else is shaved off and stays
//! a separate super-vertex.
//!
//! `√w_j = (m/n) / 2^j` is rational, so the loop guard `w_j >= w` and all
//! shaving thresholds are exact.
//!
//! A built sparsifier stores its inter-super-vertex edges under their
//! original endpoints, which is what the star transform and the encoding
//! recovery consume, plus the intra-super-vertex edges so that deletions
//! can be validated.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expander::{default_phi, expander_decompose_with, DecomposeConfig, Decomposition};
use crate::graph::{check_vertex, contract, edge_key, ContractionMap, EdgeWeighted, Multigraph, VertexId};
use crate::Rational;

fn int(x: i128) -> Rational {
    Rational::from_integer(x)
}

/// `⌊√x⌋` for a nonnegative rational.
pub fn floor_sqrt(x: Rational) -> u64 {
    let f = x.floor().to_integer().max(0) as u64;
    let mut r = (f as f64).sqrt() as u64;
    while r * r > f {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= f {
        r += 1;
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UpdateKind {
    Insert,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeUpdate {
    pub kind: UpdateKind,
    pub u: VertexId,
    pub v: VertexId,
}

impl EdgeUpdate {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        EdgeUpdate { kind: UpdateKind::Insert, u, v }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        EdgeUpdate { kind: UpdateKind::Delete, u, v }
    }
}

impl fmt::Display for EdgeUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            UpdateKind::Insert => '+',
            UpdateKind::Delete => '-',
        };
        write!(f, "{c} {} {}", self.u, self.v)
    }
}

/// Inputs to the slack decision for one vertex that meets the relaxed
/// shaving test but not the mandatory one.
#[derive(Clone, Copy, Debug)]
pub struct SlackCandidate {
    /// Vertex of `G_{j-1}`.
    pub vertex: VertexId,
    pub degree: u64,
    pub outside: u64,
    pub threshold: Rational,
}

/// Which of the optional shaving candidates to shave.
#[derive(Clone, Default)]
pub enum SlackPolicy {
    /// Shave only what the mandatory test demands.
    #[default]
    Mandatory,
    /// Shave every optional candidate.
    Maximal,
    Custom(Arc<dyn Fn(&SlackCandidate) -> bool + Send + Sync>),
}

impl fmt::Debug for SlackPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlackPolicy::Mandatory => f.write_str("Mandatory"),
            SlackPolicy::Maximal => f.write_str("Maximal"),
            SlackPolicy::Custom(_) => f.write_str("Custom"),
        }
    }
}

/// Result of shaving one cluster.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Shaved {
    pub kept: Vec<VertexId>,
    pub mandatory: Vec<VertexId>,
    pub slack: Vec<VertexId>,
}

impl Shaved {
    /// Mandatory and slack together, sorted.
    pub fn shaved(&self) -> Vec<VertexId> {
        let mut s: Vec<_> = self.mandatory.iter().chain(&self.slack).copied().collect();
        s.sort_unstable();
        s
    }
}

/// Shaves `cluster` (vertices of `g_prev`, whose super-vertex sizes come
/// from `cm`). Degrees are real degrees; `g_prev` must not carry the
/// level's artificial self-loops, or they are ignored anyway.
pub fn shave(
    cluster: &[VertexId],
    g_prev: &Multigraph,
    cm: &ContractionMap,
    sqrt_w_j: Rational,
    alpha: Rational,
    beta: Rational,
    policy: &SlackPolicy,
) -> Result<Shaved> {
    if cm.len() != g_prev.n() {
        return Err(Error::InvalidInput(format!(
            "contraction map has {} super-vertices, graph has {}",
            cm.len(),
            g_prev.n()
        )));
    }
    let mut inside = vec![false; g_prev.n()];
    for &v in cluster {
        check_vertex(g_prev.n(), v)?;
        inside[v] = true;
    }
    let ten_over_alpha = int(10) / alpha;
    let four_over_alpha = int(4) / alpha;
    let mut out = Shaved::default();
    for &v in cluster {
        let degree = g_prev.weighted_degree(v);
        let outside: u64 = g_prev.neighbors(v).iter().filter(|&&(u, _)| !inside[u]).map(|&(_, w)| w).sum();
        let by_size = ten_over_alpha * sqrt_w_j * int(cm.members(v).len() as i128);
        let by_out = four_over_alpha * int(outside as i128);
        let threshold = by_size.max(by_out);
        let d = int(degree as i128);
        if d < threshold {
            out.mandatory.push(v);
        } else if beta * d < threshold {
            let cand = SlackCandidate { vertex: v, degree, outside, threshold };
            let take = match policy {
                SlackPolicy::Mandatory => false,
                SlackPolicy::Maximal => true,
                SlackPolicy::Custom(f) => f(&cand),
            };
            if take {
                out.slack.push(v);
            } else {
                out.kept.push(v);
            }
        } else {
            out.kept.push(v);
        }
    }
    Ok(out)
}

/// Picks `φ` for a level given the vertex count and loop-free volume.
/// The decomposer must then target conductance `ε/φ`.
pub trait Decomposer: Sync {
    fn phi(&self, n: usize, volume: u64) -> u64;
    fn decompose(&self, g: &Multigraph, eps: Rational, phi: u64) -> Result<Decomposition>;
}

/// Recursive sparsest-cut decomposition from [`crate::expander`].
#[derive(Clone, Debug, Default)]
pub struct ExpanderDecomposer {
    pub seed: Option<u64>,
    pub phi: Option<u64>,
}

impl Decomposer for ExpanderDecomposer {
    fn phi(&self, n: usize, volume: u64) -> u64 {
        self.phi.unwrap_or_else(|| default_phi(n, volume))
    }

    fn decompose(&self, g: &Multigraph, eps: Rational, phi: u64) -> Result<Decomposition> {
        expander_decompose_with(g, eps, &DecomposeConfig { phi: Some(phi), seed: self.seed })
    }
}

/// One level of the construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub j: u32,
    pub sqrt_w_j: Rational,
    /// Self-loops added to every vertex of `G_{j-1}`.
    pub loops: u64,
    pub phi: u64,
    /// Vertex count of `G_{j-1}`.
    pub input_vertices: usize,
    pub input_edges: u64,
    pub decomposition: Decomposition,
    /// Vertices of `G_{j-1}` shaved by the mandatory test.
    pub mandatory: Vec<VertexId>,
    /// Vertices of `G_{j-1}` shaved through slack.
    pub slack: Vec<VertexId>,
    /// Original vertex to super-vertex of `G_j`.
    pub partition: ContractionMap,
    pub output_edges: u64,
}

impl Level {
    /// `100 φ (αβ)⁻¹ n √w_j`.
    pub fn size_bound(&self, alpha: Rational, beta: Rational, n: usize) -> Rational {
        int(100) * int(self.phi as i128) / (alpha * beta) * int(n as i128) * self.sqrt_w_j
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FriendlySparsifier {
    n: usize,
    partition: ContractionMap,
    edges: BTreeMap<(VertexId, VertexId), u64>,
    interior: BTreeMap<(VertexId, VertexId), u64>,
    pub alpha: Rational,
    pub w: Rational,
    pub beta: Rational,
    pub epsilon: Rational,
    pub levels: Vec<Level>,
    pub update_budget_used: u64,
}

pub(crate) fn check_params(alpha: Rational, w: Rational, beta: Rational) -> Result<()> {
    let zero = int(0);
    if alpha <= zero || alpha >= Rational::new(1, 4) {
        return Err(Error::Parameter(format!("alpha must lie in (0, 1/4), got {alpha}")));
    }
    if w < int(1) {
        return Err(Error::Parameter(format!("w must be at least 1, got {w}")));
    }
    if beta <= zero || beta > int(1) {
        return Err(Error::Parameter(format!("beta must lie in (0, 1], got {beta}")));
    }
    Ok(())
}

/// Algorithm 1 with the default decomposer and no slack.
pub fn build_friendly_sparsifier(
    g: &Multigraph,
    alpha: Rational,
    w: Rational,
    beta: Rational,
) -> Result<FriendlySparsifier> {
    build_friendly_sparsifier_with(g, alpha, w, beta, &ExpanderDecomposer::default(), &SlackPolicy::Mandatory)
}

pub fn build_friendly_sparsifier_with(
    g: &Multigraph,
    alpha: Rational,
    w: Rational,
    beta: Rational,
    decomposer: &dyn Decomposer,
    policy: &SlackPolicy,
) -> Result<FriendlySparsifier> {
    check_params(alpha, w, beta)?;
    let g = g.without_self_loops();
    let n = g.n();
    let m = g.edge_count();
    let epsilon = alpha * beta / int(100);
    let mut cm = ContractionMap::identity(n);
    let mut levels = Vec::new();
    if m > 0 {
        let avg = Rational::new(m as i128, n as i128);
        let mut current = g.clone();
        let mut j = 1u32;
        loop {
            let sqrt_w_j = avg / int(1i128 << j);
            if sqrt_w_j * sqrt_w_j < w {
                break;
            }
            let level = run_level(&current, &cm, j, sqrt_w_j, alpha, beta, epsilon, decomposer, policy)?;
            cm = level.partition.clone();
            current = contract(&g, &cm)?;
            levels.push(level);
            j += 1;
        }
    }
    Ok(FriendlySparsifier::assemble(&g, cm, alpha, w, beta, epsilon, levels))
}

/// `(φ, ⌈(φ/ε)·√w_j⌉)` for a level on `k` vertices. The loop count depends
/// on φ and φ on the loop-inflated volume, so iterate until φ stops growing.
pub(crate) fn phi_and_loops(
    phi_of: impl Fn(usize, u64) -> u64,
    k: usize,
    base_volume: u64,
    epsilon: Rational,
    sqrt_w_j: Rational,
) -> (u64, u64) {
    let mut phi = phi_of(k, base_volume);
    loop {
        let loops = (int(phi as i128) / epsilon * sqrt_w_j).ceil().to_integer() as u64;
        let next = phi_of(k, base_volume + 2 * loops * k as u64);
        if next <= phi {
            return (phi, loops);
        }
        phi = next;
    }
}

#[allow(clippy::too_many_arguments)]
fn run_level(
    current: &Multigraph,
    cm: &ContractionMap,
    j: u32,
    sqrt_w_j: Rational,
    alpha: Rational,
    beta: Rational,
    epsilon: Rational,
    decomposer: &dyn Decomposer,
    policy: &SlackPolicy,
) -> Result<Level> {
    let k = current.n();
    let (phi, loops) = phi_and_loops(|n, vol| decomposer.phi(n, vol), k, 2 * current.edge_count(), epsilon, sqrt_w_j);
    let with_loops = current.with_uniform_self_loops(loops);
    let decomposition = decomposer.decompose(&with_loops, epsilon, phi)?;
    let mut labels: Vec<usize> = (0..k).collect();
    let (mut mandatory, mut slack) = (Vec::new(), Vec::new());
    for cluster in &decomposition.clusters {
        let s = shave(cluster, current, cm, sqrt_w_j, alpha, beta, policy)?;
        if let Some(&root) = s.kept.first() {
            for &v in &s.kept {
                labels[v] = root;
            }
        }
        mandatory.extend(s.mandatory);
        slack.extend(s.slack);
    }
    mandatory.sort_unstable();
    slack.sort_unstable();
    let step = ContractionMap::from_labels(&labels);
    let partition = cm.then(&step)?;
    let output_edges = contract(current, &step)?.edge_count();
    Ok(Level {
        j,
        sqrt_w_j,
        loops,
        phi,
        input_vertices: k,
        input_edges: current.edge_count(),
        decomposition,
        mandatory,
        slack,
        partition,
        output_edges,
    })
}

impl FriendlySparsifier {
    fn assemble(
        g: &Multigraph,
        partition: ContractionMap,
        alpha: Rational,
        w: Rational,
        beta: Rational,
        epsilon: Rational,
        levels: Vec<Level>,
    ) -> Self {
        let mut edges = BTreeMap::new();
        let mut interior = BTreeMap::new();
        for (u, v, m) in g.weighted_pairs() {
            if partition.super_of(u) == partition.super_of(v) {
                interior.insert((u, v), m);
            } else {
                edges.insert((u, v), m);
            }
        }
        FriendlySparsifier {
            n: g.n(),
            partition,
            edges,
            interior,
            alpha,
            w,
            beta,
            epsilon,
            levels,
            update_budget_used: 0,
        }
    }

    /// Sparsifier for `g` under a given partition, with no level trace.
    /// Used when a partition computed on another graph is reused.
    pub fn from_partition(
        g: &Multigraph,
        partition: ContractionMap,
        alpha: Rational,
        w: Rational,
        beta: Rational,
    ) -> Result<Self> {
        if partition.n() != g.n() {
            return Err(Error::InvalidInput(format!(
                "partition covers {} vertices, graph has {}",
                partition.n(),
                g.n()
            )));
        }
        let epsilon = alpha * beta / int(100);
        Ok(Self::assemble(&g.without_self_loops(), partition, alpha, w, beta, epsilon, Vec::new()))
    }

    /// Identity sparsifier (nothing contracted).
    pub fn identity(g: &Multigraph, alpha: Rational, w: Rational) -> Self {
        let epsilon = alpha / int(100);
        Self::assemble(&g.without_self_loops(), ContractionMap::identity(g.n()), alpha, w, int(1), epsilon, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partition(&self) -> &ContractionMap {
        &self.partition
    }

    /// Inter-super-vertex edges keyed by original endpoints, `u < v`.
    pub fn edges(&self) -> &BTreeMap<(VertexId, VertexId), u64> {
        &self.edges
    }

    /// `|E_{H_fr}|` with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().sum()
    }

    /// The contracted multigraph on super-vertices.
    pub fn contracted(&self) -> Multigraph {
        let p = &self.partition;
        let e: Vec<_> = self
            .edges
            .iter()
            .map(|(&(u, v), &m)| (p.super_of(u), p.super_of(v), m))
            .collect();
        Multigraph::from_multiplicities(p.len(), &e).expect("super-vertex ids are dense")
    }

    /// `⌊√w⌋`, the number of updates the doubled-α guarantee covers.
    pub fn update_budget(&self) -> u64 {
        floor_sqrt(self.w)
    }

    /// True once more updates were applied than the guarantee covers.
    pub fn guarantee_degraded(&self) -> bool {
        self.update_budget_used > self.update_budget()
    }

    /// Mirrors one graph update. Edges inside a super-vertex only touch
    /// the interior record; the contraction never changes.
    pub fn apply_update(&mut self, up: EdgeUpdate) -> Result<()> {
        check_vertex(self.n, up.u)?;
        check_vertex(self.n, up.v)?;
        if up.u == up.v {
            return Err(Error::InvalidInput(format!("self-loop update at {}", up.u)));
        }
        let key = edge_key(up.u, up.v);
        let inner = self.partition.super_of(up.u) == self.partition.super_of(up.v);
        let map = if inner { &mut self.interior } else { &mut self.edges };
        match up.kind {
            UpdateKind::Insert => *map.entry(key).or_insert(0) += 1,
            UpdateKind::Delete => match map.get_mut(&key) {
                Some(m) if *m > 1 => *m -= 1,
                Some(_) => {
                    map.remove(&key);
                }
                None => return Err(Error::InvalidInput(format!("no edge ({}, {}) to delete", up.u, up.v))),
            },
        }
        self.update_budget_used += 1;
        Ok(())
    }

    /// Weighted graph on the original vertices holding only the stored
    /// inter-super-vertex edges.
    pub fn edge_graph(&self) -> Multigraph {
        let e: Vec<_> = self.edges.iter().map(|(&(u, v), &m)| (u, v, m)).collect();
        Multigraph::from_multiplicities(self.n, &e).expect("endpoints are in range")
    }
}

#[derive(Serialize)]
struct SparsifierJson<'a> {
    n: usize,
    partition: &'a [Vec<VertexId>],
    edges: Vec<(VertexId, VertexId, u64)>,
    alpha: Rational,
    w: Rational,
    beta: Rational,
    epsilon: Rational,
    levels: &'a [Level],
    update_budget_used: u64,
}

impl Serialize for FriendlySparsifier {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SparsifierJson {
            n: self.n,
            partition: self.partition.groups(),
            edges: self.edges.iter().map(|(&(u, v), &m)| (u, v, m)).collect(),
            alpha: self.alpha,
            w: self.w,
            beta: self.beta,
            epsilon: self.epsilon,
            levels: &self.levels,
            update_budget_used: self.update_budget_used,
        }
        .serialize(ser)
    }
}

/// A cut on which the sparsifier disagrees with the graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub side: Vec<VertexId>,
    pub cut_g: u64,
    pub cut_h: u64,
    /// False if the side splits a super-vertex (the contracted cut is then
    /// not even defined).
    pub respects_partition: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub passed: bool,
    pub exact: bool,
    /// Number of qualifying cuts examined.
    pub checked: u64,
    pub violation: Option<Violation>,
}

/// Largest `n` for exhaustive preservation checks.
pub const PRESERVATION_EXACT_LIMIT: usize = 16;

/// Which cuts a preservation check must hold on.
#[derive(Clone, Copy, Debug)]
pub enum CutRule {
    /// `α`-friendly (isolated vertices skipped), at most `w` edges.
    Friendly { alpha: Rational, w: Rational },
    /// At most `w` edges; every vertex of degree at least
    /// `10 α⁻¹ √w` has ratio at least `α`.
    HeavyFriendly { alpha: Rational, w: Rational },
}

impl CutRule {
    fn max_cut(&self) -> Rational {
        match *self {
            CutRule::Friendly { w, .. } | CutRule::HeavyFriendly { w, .. } => w,
        }
    }

    /// Per-vertex predicate flags: `needs[v]` when `v`'s ratio matters.
    fn needs(&self, g: &Multigraph) -> (Rational, Vec<bool>) {
        match *self {
            CutRule::Friendly { alpha, .. } => (alpha, (0..g.n()).map(|v| g.weighted_degree(v) > 0).collect()),
            CutRule::HeavyFriendly { alpha, w } => {
                let needs = (0..g.n())
                    .map(|v| {
                        let d = int(g.weighted_degree(v) as i128);
                        // deg >= 10 α⁻¹ √w  <=>  (α deg / 10)² >= w
                        let x = alpha * d / int(10);
                        d > int(0) && x * x >= w
                    })
                    .collect();
                (alpha, needs)
            }
        }
    }
}

/// Gray-code cut scan with incremental cut values and per-vertex inside
/// weights for two graphs on the same vertex set. Vertex `n-1` stays
/// outside, so each cut is visited once (up to complement) and the empty
/// set is visited first.
pub(crate) struct CutScan<'a> {
    pub g: &'a Multigraph,
    pub inside: Vec<bool>,
    /// Weight from each vertex into the current side, in `g`.
    pub inw: Vec<u64>,
    pub cut: u64,
}

impl<'a> CutScan<'a> {
    pub fn new(g: &'a Multigraph) -> Self {
        CutScan { g, inside: vec![false; g.n()], inw: vec![0; g.n()], cut: 0 }
    }

    pub fn flip(&mut self, v: usize) {
        let deg = self.g.weighted_degree(v);
        if self.inside[v] {
            self.inside[v] = false;
            self.cut = self.cut + 2 * self.inw[v] - deg;
            for &(u, w) in self.g.neighbors(v) {
                self.inw[u] -= w;
            }
        } else {
            self.inside[v] = true;
            self.cut = self.cut + deg - 2 * self.inw[v];
            for &(u, w) in self.g.neighbors(v) {
                self.inw[u] += w;
            }
        }
    }

    /// Edges of `v` crossing the current side.
    pub fn cross(&self, v: usize) -> u64 {
        if self.inside[v] {
            self.g.weighted_degree(v) - self.inw[v]
        } else {
            self.inw[v]
        }
    }

    /// `ratio(v) >= alpha`; vertices of degree 0 pass.
    pub fn ratio_at_least(&self, v: usize, alpha: Rational) -> bool {
        let deg = self.g.weighted_degree(v);
        if deg == 0 {
            return true;
        }
        let keep = (deg - self.cross(v)) as i128;
        keep * *alpha.denom() >= *alpha.numer() * deg as i128
    }

    /// Visits every side not containing `n-1`; `f` returns false to stop.
    pub fn for_each(g: &'a Multigraph, mut f: impl FnMut(&CutScan<'a>) -> bool) {
        let n = g.n();
        let mut scan = CutScan::new(g);
        if !f(&scan) || n <= 1 {
            return;
        }
        for step in 1u64..1 << (n - 1) {
            scan.flip(step.trailing_zeros() as usize);
            if !f(&scan) {
                return;
            }
        }
    }
}

fn sampled_sides(n: usize, samples: usize, seed: u64) -> Vec<Vec<bool>> {
    use rand::Rng;
    let mut r = crate::suite::rng(seed);
    (0..samples)
        .map(|_| {
            let p = r.gen_range(0.05..0.95);
            (0..n).map(|_| r.gen_bool(p)).collect()
        })
        .collect()
}

/// Checks that every cut of `g` selected by `rule` respects `partition`
/// and has the same value in `h_edges` (a graph on the same vertex set).
/// Exhaustive for `n <= 16`, otherwise `samples` random sides.
pub fn verify_partition_preservation(
    g: &Multigraph,
    h_edges: &Multigraph,
    partition: &ContractionMap,
    rule: CutRule,
    samples: usize,
    seed: u64,
) -> Result<PreservationReport> {
    let n = g.n();
    if h_edges.n() != n || partition.n() != n {
        return Err(Error::InvalidInput("graph, sparsifier and partition sizes differ".into()));
    }
    let (alpha, needs) = rule.needs(g);
    let max_cut = rule.max_cut();
    let mut checked = 0u64;
    let mut violation = None;
    let mut test = |inside: &[bool], cut_g: u64, friendly: &dyn Fn(usize) -> bool| -> bool {
        if int(cut_g as i128) > max_cut || !(0..n).all(|v| !needs[v] || friendly(v)) {
            return true;
        }
        checked += 1;
        let respects = partition.respects(inside);
        let cut_h = h_edges.cut_of_mask(inside);
        if respects && cut_h == cut_g {
            return true;
        }
        violation = Some(Violation {
            side: (0..n).filter(|&v| inside[v]).collect(),
            cut_g,
            cut_h,
            respects_partition: respects,
        });
        false
    };
    let exact = n <= PRESERVATION_EXACT_LIMIT;
    if exact {
        CutScan::for_each(g, |s| test(&s.inside, s.cut, &|v| s.ratio_at_least(v, alpha)));
    } else {
        for side in sampled_sides(n, samples, seed) {
            let mut s = CutScan::new(g);
            for (v, &b) in side.iter().enumerate() {
                if b {
                    s.flip(v);
                }
            }
            if !test(&s.inside, s.cut, &|v| s.ratio_at_least(v, alpha)) {
                break;
            }
        }
    }
    Ok(PreservationReport { passed: violation.is_none(), exact, checked, violation })
}

/// Every `α`-friendly cut of `g` with at most `w` edges has the same value
/// in `h`.
pub fn verify_friendly_preservation(
    g: &Multigraph,
    h: &FriendlySparsifier,
    alpha: Rational,
    w: Rational,
) -> Result<PreservationReport> {
    verify_partition_preservation(g, &h.edge_graph(), h.partition(), CutRule::Friendly { alpha, w }, 4096, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::graph::is_alpha_friendly;
    use crate::suite::{clustered_multigraph, random_cluster_spec, random_multigraph};
    use proptest::prelude::*;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn guard_never_met_gives_identity() {
        let g = k(4);
        let h = build_friendly_sparsifier(&g, r(1, 6), int(8), int(1)).unwrap();
        assert!(h.levels.is_empty());
        assert!(h.partition().is_identity());
        assert_eq!(h.contracted(), g);
        let e = build_friendly_sparsifier(&Multigraph::empty(5), r(1, 6), int(10), int(1)).unwrap();
        assert_eq!(e.edge_count(), 0);
    }

    #[test]
    fn dense_random_graph_runs_a_level() {
        for seed in 0..3 {
            let g = random_multigraph(30, 0.5, seed);
            let h = build_friendly_sparsifier(&g, r(1, 6), int(4), int(1)).unwrap();
            assert!(!h.levels.is_empty());
            let rep = verify_friendly_preservation(&g, &h, r(1, 6), int(4)).unwrap();
            assert!(rep.passed && !rep.exact);
        }
    }

    #[test]
    fn parameter_errors() {
        let g = k(4);
        assert!(build_friendly_sparsifier(&g, r(1, 4), int(8), int(1)).is_err());
        assert!(build_friendly_sparsifier(&g, r(1, 6), r(1, 2), int(1)).is_err());
        assert!(build_friendly_sparsifier(&g, r(1, 6), int(8), int(0)).is_err());
    }

    #[test]
    fn shave_threshold_examples() {
        // Cluster {0}, vertex 0 has degree 4 with 3 edges leaving: 4 < 72.
        let g = Multigraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (4, 1)]).unwrap();
        let cm = ContractionMap::identity(5);
        let s = shave(&[0, 4], &g, &cm, int(1), r(1, 6), int(1), &SlackPolicy::Mandatory).unwrap();
        assert!(s.mandatory.contains(&0));

        // Super-vertex of size 2, degree 200, nothing leaving: 200 >= 120.
        let g = Multigraph::from_multiplicities(2, &[(0, 1, 200)]).unwrap();
        let cm = ContractionMap::from_groups(3, &[vec![0, 2], vec![1]]).unwrap();
        let s = shave(&[0, 1], &g, &cm, int(1), r(1, 6), int(1), &SlackPolicy::Mandatory).unwrap();
        assert!(s.kept.contains(&0));

        // Degree 100, threshold 60 by size: kept under the mandatory test,
        // eligible under β = 1/2.
        let g = Multigraph::from_multiplicities(2, &[(0, 1, 100)]).unwrap();
        let cm = ContractionMap::identity(2);
        let sq = r(1, 1);
        let keep = shave(&[0, 1], &g, &cm, sq, r(1, 6), r(1, 2), &SlackPolicy::Mandatory).unwrap();
        assert_eq!((keep.kept.len(), keep.slack.len()), (2, 0));
        let all = shave(&[0, 1], &g, &cm, sq, r(1, 6), r(1, 2), &SlackPolicy::Maximal).unwrap();
        assert_eq!(all.slack, vec![0, 1]);
        let pick = SlackPolicy::Custom(Arc::new(|c: &SlackCandidate| c.vertex == 1));
        let some = shave(&[0, 1], &g, &cm, sq, r(1, 6), r(1, 2), &pick).unwrap();
        assert_eq!((some.kept, some.slack), (vec![0], vec![1]));
    }

    #[test]
    fn insert_then_delete_restores_edges() {
        let g = bowtie();
        let mut h = FriendlySparsifier::identity(&g, r(1, 6), int(10));
        let before = h.edges().clone();
        h.apply_update(EdgeUpdate::insert(0, 4)).unwrap();
        h.apply_update(EdgeUpdate::delete(0, 4)).unwrap();
        assert_eq!(h.edges(), &before);
        assert_eq!(h.update_budget_used, 2);
        assert!(h.apply_update(EdgeUpdate::delete(0, 3)).is_err());
    }

    #[test]
    fn identity_updates_mirror_graph() {
        let g = cycle(5);
        let mut h = FriendlySparsifier::identity(&g, r(1, 6), int(10));
        let mut b = g.to_builder();
        for up in [EdgeUpdate::insert(0, 2), EdgeUpdate::delete(1, 2), EdgeUpdate::insert(0, 2)] {
            h.apply_update(up).unwrap();
            match up.kind {
                UpdateKind::Insert => b.add_edge(up.u, up.v).unwrap(),
                UpdateKind::Delete => b.remove_edge(up.u, up.v).unwrap(),
            }
        }
        assert_eq!(h.contracted(), b.build());
    }

    #[test]
    fn budget_flag() {
        let g = cycle(4);
        let mut h = FriendlySparsifier::identity(&g, r(1, 6), int(8));
        assert_eq!(h.update_budget(), 2);
        for _ in 0..2 {
            h.apply_update(EdgeUpdate::insert(0, 2)).unwrap();
        }
        assert!(!h.guarantee_degraded());
        h.apply_update(EdgeUpdate::insert(0, 2)).unwrap();
        assert!(h.guarantee_degraded());
    }

    #[test]
    fn verifier_reports_violation() {
        let g = two_k4_bridge();
        // Contract 2 and 3, then {0,1,2} vs the rest separates them: each of
        // 0,1,2 keeps 2 of 3 edges, 3 keeps 1 of 4, 4..7 keep almost all.
        let mut groups: Vec<Vec<usize>> = vec![vec![2, 3]];
        groups.extend([0, 1, 4, 5, 6, 7].map(|v| vec![v]));
        let cm = ContractionMap::from_groups(8, &groups).unwrap();
        let h = FriendlySparsifier::from_partition(&g, cm, r(1, 6), int(16), int(1)).unwrap();
        let rep = verify_friendly_preservation(&g, &h, r(1, 6), int(16)).unwrap();
        assert!(!rep.passed);
        let v = rep.violation.unwrap();
        assert!(!v.respects_partition);
        let side: Vec<bool> = (0..8).map(|x| v.side.contains(&x)).collect();
        assert!(is_alpha_friendly(&g, &v.side, r(1, 6)).unwrap());
        assert_ne!(side[2], side[3]);

        let id = FriendlySparsifier::identity(&g, r(1, 6), int(16));
        assert!(verify_friendly_preservation(&g, &id, r(1, 6), int(16)).unwrap().passed);
    }

    #[test]
    fn clustered_graphs_contract() {
        let mut contracted = 0;
        for seed in 0..8 {
            let g = clustered_multigraph(&random_cluster_spec(12, seed), seed);
            let w = int(2 * g.n() as i128);
            let h = build_friendly_sparsifier(&g, r(1, 6), w, int(1)).unwrap();
            if h.partition().len() < g.n() {
                contracted += 1;
            }
            let rep = verify_friendly_preservation(&g, &h, r(1, 6), w).unwrap();
            assert!(rep.passed, "seed {seed}: {:?}", rep.violation);
        }
        assert!(contracted > 0);
    }

    #[test]
    fn floor_sqrt_exact() {
        assert_eq!(floor_sqrt(int(24)), 4);
        assert_eq!(floor_sqrt(int(25)), 5);
        assert_eq!(floor_sqrt(r(99, 4)), 4);
        assert_eq!(floor_sqrt(int(0)), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn random_graphs_preserve_friendly_cuts(seed in any::<u64>(), n in 4usize..=12, p in 0.2f64..0.9) {
            let g = random_multigraph(n, p, seed);
            let w = int(2 * n as i128);
            let h = build_friendly_sparsifier(&g, r(1, 6), w, int(1)).unwrap();
            prop_assert!(verify_friendly_preservation(&g, &h, r(1, 6), w).unwrap().passed);
        }

        #[test]
        fn contracted_cut_equals_graph_cut_on_unions(seed in any::<u64>()) {
            let g = clustered_multigraph(&random_cluster_spec(12, seed), seed);
            let h = build_friendly_sparsifier(&g, r(1, 6), int(2 * g.n() as i128), int(1)).unwrap();
            let c = h.contracted();
            let p = h.partition();
            for bits in 0u32..(1 << p.len().min(10)) {
                let sup: Vec<usize> = (0..p.len()).filter(|&i| bits >> i & 1 == 1).collect();
                let side: Vec<usize> = sup.iter().flat_map(|&s| p.members(s).to_vec()).collect();
                let ce = crate::graph::cut_value(&c, &sup).unwrap();
                let ge = crate::graph::cut_value(&g, &side).unwrap();
                let he = crate::graph::cut_value(&h.edge_graph(), &side).unwrap();
                prop_assert_eq!(ce, ge);
                prop_assert_eq!(he, ge);
            }
        }
    }
}
