//! Two-pass dynamic-stream APMC.
//!
//! Pass one keeps only linear sketches. For every vertex `v` and sampling
//! level `i` an invertible Bloom table sketches the signed incidence
//! vector of `v` in `G_i`, the subgraph of edges that survive `i` fair
//! coin flips. Each edge is `+1` at its higher endpoint and `-1` at the
//! lower one, so summing the sketches of a super-vertex cancels its
//! internal edges. After the stream ends, any contraction can be sampled:
//! each super-vertex opens the level matching its degree and every
//! recovered edge gets weight `2^level`. Algorithm 1 runs on these
//! samples and returns only the partition.
//!
//! Pass two stores the exact edges between distinct super-vertices and
//! all degrees; the rest of the pipeline is the offline one.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::apmc::tree_from_crossing_edges;
use crate::error::{Error, Result};
use crate::expander::{default_phi, expander_decompose_with, DecomposeConfig};
use crate::friendly::{check_params, phi_and_loops, EdgeUpdate, UpdateKind};
use crate::gomory_hu::GomoryHuTree;
use crate::graph::{check_vertex, edge_key, ContractionMap, EdgeWeighted, Multigraph, VertexId, WeightedGraph};
use crate::Rational;

/// One stream item: insertion or deletion of a single edge.
pub type StreamEvent = EdgeUpdate;

const FP_MOD: u64 = (1 << 61) - 1;

fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % FP_MOD as u128) as u64
}

fn signed_mod(c: i64) -> u64 {
    c.rem_euclid(FP_MOD as i64) as u64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Cell {
    count: i64,
    key: i128,
    fp: u64,
}

impl Cell {
    fn add(&mut self, coord: u64, delta: i64, fp: u64) {
        self.count += delta;
        self.key += coord as i128 * delta as i128;
        self.fp = (self.fp + mul_mod(signed_mod(delta), fp)) % FP_MOD;
    }

    fn is_zero(&self) -> bool {
        self.count == 0 && self.key == 0 && self.fp == 0
    }
}

/// Linear sketch recovering any signed vector with at most `k` nonzeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseRecoverySketch {
    k: usize,
    rows: usize,
    width: usize,
    universe: u64,
    seed: u64,
    cells: Vec<Cell>,
}

/// Bytes per sketch cell: `i64` count, `i128` key sum, `u64` fingerprint.
pub const CELL_BYTES: u64 = 32;

impl SparseRecoverySketch {
    /// `max(3, ⌈log₂(1/p) / 3⌉)` rows of `2k` cells each.
    pub fn new(universe: u64, k: usize, fail_prob: f64, seed: u64) -> Self {
        let bits = (1.0 / fail_prob.clamp(f64::MIN_POSITIVE, 0.5)).log2().ceil() as usize;
        let rows = 3.max(bits.div_ceil(3));
        let width = 2 * k.max(1);
        SparseRecoverySketch { k, rows, width, universe, seed, cells: vec![Cell::default(); rows * width] }
    }

    pub fn capacity(&self) -> usize {
        self.k
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    fn slot(&self, row: usize, coord: u64) -> usize {
        let h = mix(coord ^ mix(self.seed ^ (row as u64 + 1).wrapping_mul(0xa076_1d64_78bd_642f)));
        row * self.width + (h % self.width as u64) as usize
    }

    fn fingerprint(&self, coord: u64) -> u64 {
        mix(coord ^ mix(self.seed ^ 0xe703_7ed1_a0b4_28db)) % FP_MOD
    }

    pub fn update(&mut self, coord: u64, delta: i64) -> Result<()> {
        if coord >= self.universe {
            return Err(Error::InvalidInput(format!("coordinate {coord} outside universe {}", self.universe)));
        }
        let fp = self.fingerprint(coord);
        for row in 0..self.rows {
            let s = self.slot(row, coord);
            self.cells[s].add(coord, delta, fp);
        }
        Ok(())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.k, self.rows, self.width, self.universe, self.seed)
            != (other.k, other.rows, other.width, other.universe, other.seed)
        {
            return Err(Error::InvalidInput("sketch shapes or seeds differ".into()));
        }
        Ok(())
    }

    pub fn merge_from(&mut self, other: &Self) -> Result<()> {
        self.check_shape(other)?;
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.count += b.count;
            a.key += b.key;
            a.fp = (a.fp + b.fp) % FP_MOD;
        }
        Ok(())
    }

    pub fn merged(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    fn pure_coord(&self, idx: usize) -> Option<u64> {
        let c = self.cells[idx];
        if c.count == 0 || c.key % c.count as i128 != 0 {
            return None;
        }
        let coord = c.key / c.count as i128;
        if coord < 0 || coord >= self.universe as i128 {
            return None;
        }
        let coord = coord as u64;
        let ok = self.slot(idx / self.width, coord) == idx
            && c.fp == mul_mod(signed_mod(c.count), self.fingerprint(coord));
        ok.then_some(coord)
    }

    /// Nonzero entries sorted by coordinate, or a detected failure when
    /// the vector is not `k`-sparse or the tables do not peel.
    pub fn recover(&self) -> Result<Vec<(u64, i64)>> {
        let mut work = self.clone();
        let mut out = BTreeMap::new();
        let mut queue: Vec<usize> = (0..work.cells.len()).collect();
        while let Some(idx) = queue.pop() {
            let Some(coord) = work.pure_coord(idx) else { continue };
            let count = work.cells[idx].count;
            *out.entry(coord).or_insert(0) += count;
            let fp = work.fingerprint(coord);
            for row in 0..work.rows {
                let s = work.slot(row, coord);
                work.cells[s].add(coord, -count, fp);
                queue.push(s);
            }
            if out.len() > self.k {
                break;
            }
        }
        out.retain(|_, v| *v != 0);
        if out.len() > self.k {
            return Err(Error::SketchFailure(format!("more than {} nonzero entries", self.k)));
        }
        if let Some(i) = work.cells.iter().position(|c| !c.is_zero()) {
            return Err(Error::SketchFailure(format!("cell {i} did not peel")));
        }
        Ok(out.into_iter().collect())
    }
}

/// Coordinate of the pair `(u, v)` in the `n²` universe.
pub fn edge_coordinate(n: usize, u: VertexId, v: VertexId) -> u64 {
    let (a, b) = edge_key(u, v);
    (a * n + b) as u64
}

pub fn coordinate_edge(n: usize, c: u64) -> (VertexId, VertexId) {
    ((c / n as u64) as usize, (c % n as u64) as usize)
}

/// `⌈log₂ n⌉`, at least 1.
fn log2_ceil(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

/// How a super-vertex of estimated degree `d` picks its sampling level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelRule {
    /// `⌊log₂(d / 2γ)⌋`.
    #[default]
    Ratio,
    /// `⌊log₂(d) / 2γ⌋`.
    Printed,
}

impl LevelRule {
    pub fn level(self, degree: u64, gamma: f64, max_level: usize) -> usize {
        let d = degree as f64;
        let raw = match self {
            LevelRule::Ratio => (d / (2.0 * gamma)).log2().floor(),
            LevelRule::Printed => (d.log2() / (2.0 * gamma)).floor(),
        };
        if raw.is_finite() && raw > 0.0 {
            (raw as usize).min(max_level)
        } else {
            0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SketchParams {
    pub capacity: usize,
    pub fail_prob: f64,
}

impl SketchParams {
    /// Capacity `max(8⌈log₂ n⌉, n)`, failure probability `2^-10`.
    pub fn for_n(n: usize) -> Self {
        SketchParams { capacity: (8 * log2_ceil(n)).max(n), fail_prob: 1.0 / 1024.0 }
    }
}

/// Estimate of `cut_G(u)` for a set of original vertices.
pub trait CutEstimator: Sync {
    fn cut(&self, members: &[VertexId]) -> Result<u64>;
    /// Storage in cells, for the space report.
    fn cells(&self) -> u64;
}

/// Per-vertex, per-level sketches with one shared seed.
#[derive(Clone, Debug)]
pub struct PowerCutSketchSet {
    n: usize,
    levels: usize,
    level_seed: u64,
    sketches: Vec<SparseRecoverySketch>,
}

/// `(level, retries, recovered boundary edges)` for one super-vertex.
type OpenedVertex = (usize, usize, Vec<((VertexId, VertexId), u64)>);

impl PowerCutSketchSet {
    /// Levels `0..=⌈log₂ n⌉`; level 0 holds every edge.
    pub fn new(n: usize, params: SketchParams, seed: u64) -> Self {
        let levels = log2_ceil(n) + 1;
        let universe = (n as u64 * n as u64).max(1);
        let proto = SparseRecoverySketch::new(universe, params.capacity, params.fail_prob, mix(seed));
        PowerCutSketchSet { n, levels, level_seed: mix(seed ^ 0x5851_f42d_4c95_7f2d), sketches: vec![proto; n * levels] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_level(&self) -> usize {
        self.levels - 1
    }

    pub fn cell_count(&self) -> u64 {
        self.sketches.iter().map(|s| s.cell_count() as u64).sum()
    }

    /// Deepest level containing the edge: the number of leading heads in
    /// its coin sequence.
    pub fn depth(&self, coord: u64) -> usize {
        ((mix(coord ^ self.level_seed).trailing_ones()) as usize).min(self.max_level())
    }

    pub fn update(&mut self, ev: StreamEvent) -> Result<()> {
        check_vertex(self.n, ev.u)?;
        check_vertex(self.n, ev.v)?;
        if ev.u == ev.v {
            return Err(Error::InvalidInput(format!("self-loop event at {}", ev.u)));
        }
        let coord = edge_coordinate(self.n, ev.u, ev.v);
        let delta = match ev.kind {
            UpdateKind::Insert => 1,
            UpdateKind::Delete => -1,
        };
        let (lo, hi) = edge_key(ev.u, ev.v);
        for i in 0..=self.depth(coord) {
            self.sketches[hi * self.levels + i].update(coord, delta)?;
            self.sketches[lo * self.levels + i].update(coord, -delta)?;
        }
        Ok(())
    }

    pub fn sketch(&self, v: VertexId, level: usize) -> &SparseRecoverySketch {
        &self.sketches[v * self.levels + level]
    }

    /// Sum of the members' sketches at `level`.
    pub fn merged(&self, members: &[VertexId], level: usize) -> Result<SparseRecoverySketch> {
        let mut it = members.iter();
        let first = it.next().ok_or_else(|| Error::InvalidInput("empty super-vertex".into()))?;
        let mut s = self.sketch(*first, level).clone();
        for &v in it {
            s.merge_from(self.sketch(v, level))?;
        }
        Ok(s)
    }

    /// Edges of `G_level` leaving `members`, with multiplicities.
    pub fn recover_boundary(&self, members: &[VertexId], level: usize) -> Result<Vec<((VertexId, VertexId), u64)>> {
        Ok(self
            .merged(members, level)?
            .recover()?
            .into_iter()
            .map(|(c, x)| (coordinate_edge(self.n, c), x.unsigned_abs()))
            .collect())
    }

    /// Power cut sparsifier sample of the contraction `cm`, on super-vertex
    /// ids. A failed recovery retries one level up before giving up.
    pub fn sample(&self, cm: &ContractionMap, est: &dyn CutEstimator, gamma: f64, rule: LevelRule) -> Result<PowerCutSample> {
        if cm.n() != self.n {
            return Err(Error::InvalidInput(format!("partition covers {} vertices, sketches {}", cm.n(), self.n)));
        }
        let opened: Vec<Option<OpenedVertex>> = (0..cm.len())
            .into_par_iter()
            .map(|u| -> Result<_> {
                let members = cm.members(u);
                let d = est.cut(members)?;
                if d == 0 {
                    return Ok(None);
                }
                let level = rule.level(d, gamma, self.max_level());
                match self.recover_boundary(members, level) {
                    Ok(e) => Ok(Some((level, 0, e))),
                    Err(Error::SketchFailure(_)) if level < self.max_level() => {
                        let e = self.recover_boundary(members, level + 1).map_err(|err| {
                            Error::SketchFailure(format!("super-vertex {u} at levels {level} and {}: {err}", level + 1))
                        })?;
                        Ok(Some((level + 1, 1, e)))
                    }
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let levels: Vec<Option<usize>> = opened.iter().map(|o| o.as_ref().map(|(l, _, _)| *l)).collect();
        let retries = opened.iter().flatten().map(|(_, r, _)| r).sum();
        let mut pairs: BTreeMap<(VertexId, VertexId), u64> = BTreeMap::new();
        for (u, o) in opened.iter().enumerate() {
            let Some((lu, _, edges)) = o else { continue };
            for &((a, b), m) in edges {
                let (sa, sb) = (cm.super_of(a), cm.super_of(b));
                if sa == sb || (sa != u && sb != u) {
                    return Err(Error::SketchFailure(format!("super-vertex {u} recovered foreign edge ({a}, {b})")));
                }
                let other = if sa == u { sb } else { sa };
                let level = levels[other].map_or(*lu, |lo| lo.min(*lu));
                pairs.insert((a, b), m << level);
            }
        }
        let mut weights: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (&(a, b), &wt) in &pairs {
            *weights.entry(edge_key(cm.super_of(a), cm.super_of(b))).or_insert(0) += wt;
        }
        let e: Vec<_> = weights.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        Ok(PowerCutSample { graph: WeightedGraph::from_weighted_edges(cm.len(), &e)?, levels, retries })
    }
}

#[derive(Clone, Debug)]
pub struct PowerCutSample {
    /// Weighted graph on super-vertex ids.
    pub graph: WeightedGraph,
    /// Level opened per super-vertex; `None` when its degree estimate is 0.
    pub levels: Vec<Option<usize>>,
    pub retries: usize,
}

/// Stand-in for a `(1 ± 1/100)` cut sparsifier sketch: keeps the net edge
/// multiset, so estimates are exact.
#[derive(Clone, Debug)]
pub struct ExactCutEstimator {
    graph: Multigraph,
}

impl ExactCutEstimator {
    pub fn from_stream(n: usize, stream: &[StreamEvent]) -> Result<Self> {
        Ok(ExactCutEstimator { graph: net_graph(n, stream)? })
    }
}

impl CutEstimator for ExactCutEstimator {
    fn cut(&self, members: &[VertexId]) -> Result<u64> {
        crate::graph::cut_value(&self.graph, members)
    }

    fn cells(&self) -> u64 {
        self.graph.distinct_pair_count() as u64
    }
}

/// Cut estimate from a dedicated sketch set: the boundary recovered at
/// the lowest level that decodes, scaled by `2^level`.
#[derive(Clone, Debug)]
pub struct SketchCutEstimator {
    set: PowerCutSketchSet,
}

impl SketchCutEstimator {
    pub fn new(set: PowerCutSketchSet) -> Self {
        SketchCutEstimator { set }
    }
}

impl CutEstimator for SketchCutEstimator {
    fn cut(&self, members: &[VertexId]) -> Result<u64> {
        for level in 0..=self.set.max_level() {
            match self.set.recover_boundary(members, level) {
                Ok(edges) => return Ok(edges.iter().map(|&(_, m)| m).sum::<u64>() << level),
                Err(Error::SketchFailure(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SketchFailure(format!("no level decodes for a set of {} vertices", members.len())))
    }

    fn cells(&self) -> u64 {
        self.set.cell_count()
    }
}

/// Net multigraph of a stream; errors when an edge count goes negative.
pub fn net_graph(n: usize, stream: &[StreamEvent]) -> Result<Multigraph> {
    let mut counts: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();
    for ev in stream {
        check_vertex(n, ev.u)?;
        check_vertex(n, ev.v)?;
        if ev.u == ev.v {
            return Err(Error::InvalidInput(format!("self-loop event at {}", ev.u)));
        }
        *counts.entry(edge_key(ev.u, ev.v)).or_insert(0) += match ev.kind {
            UpdateKind::Insert => 1,
            UpdateKind::Delete => -1,
        };
    }
    net_from_counts(n, counts)
}

fn net_from_counts(n: usize, counts: BTreeMap<(VertexId, VertexId), i64>) -> Result<Multigraph> {
    let mut e = Vec::with_capacity(counts.len());
    for ((u, v), c) in counts {
        if c < 0 {
            return Err(Error::InvalidInput(format!("edge ({u}, {v}) has net count {c}")));
        }
        e.push((u, v, c as u64));
    }
    Multigraph::from_multiplicities(n, &e)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    #[default]
    Exact,
    Sketch,
}

#[derive(Clone, Debug, Serialize)]
pub struct StreamConfig {
    pub alpha: Rational,
    /// Defaults to `2n`.
    pub w: Option<Rational>,
    pub beta: Rational,
    pub rho: Rational,
    /// Samples per level; defaults to `min(64, 8⌈1/ε⌉)`.
    pub samples_per_level: Option<usize>,
    /// `c` in `γ = c·ln²n / (εδ)`.
    pub gamma_c: f64,
    pub gamma: Option<f64>,
    pub level_rule: LevelRule,
    pub sketch: Option<SketchParams>,
    /// Upper bound on net edges, used to size the per-level sketch bank.
    /// Defaults to `n(n-1)/2`.
    pub max_edges: Option<u64>,
    pub estimator: EstimatorKind,
    pub seed: u64,
    /// Seed for the decomposer; `None` is RNG-free.
    pub decomposer_seed: Option<u64>,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            alpha: Rational::new(1, 6),
            w: None,
            beta: Rational::new(1, 2),
            rho: Rational::new(3, 4),
            samples_per_level: None,
            gamma_c: 4.0,
            gamma: None,
            level_rule: LevelRule::Ratio,
            sketch: None,
            max_edges: None,
            estimator: EstimatorKind::Exact,
            seed: 0,
            decomposer_seed: None,
        }
    }
}

/// Pass-one constants derived from `n` and a config.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StreamParams {
    pub n: usize,
    pub alpha: Rational,
    pub w: Rational,
    pub beta: Rational,
    pub rho: Rational,
    /// `αβ / (100 ⌈log₂ n⌉³)`.
    pub epsilon: Rational,
    /// `1 / (5 ⌈log₂ n⌉)`.
    pub delta: Rational,
    pub gamma: f64,
    pub samples_per_level: usize,
    /// Algorithm-1 levels the sketch bank covers.
    pub max_levels: usize,
    pub sketch: SketchParams,
}

impl StreamParams {
    pub fn new(n: usize, cfg: &StreamConfig) -> Result<Self> {
        let w = cfg.w.unwrap_or_else(|| Rational::from_integer(2 * n.max(1) as i128));
        check_params(cfg.alpha, w, cfg.beta)?;
        let lg = log2_ceil(n) as i128;
        let epsilon = cfg.alpha * cfg.beta / Rational::from_integer(100 * lg * lg * lg);
        let delta = Rational::new(1, 5 * lg);
        let to_f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
        let ln = (n.max(2) as f64).ln();
        let gamma = cfg.gamma.unwrap_or(cfg.gamma_c * ln * ln / (to_f(epsilon) * to_f(delta)));
        let inv_eps = (Rational::from_integer(1) / epsilon).ceil().to_integer();
        let samples_per_level = cfg.samples_per_level.unwrap_or((8 * inv_eps).min(64) as usize).max(1);
        let max_edges = cfg.max_edges.unwrap_or((n * n.saturating_sub(1) / 2) as u64);
        let max_levels = levels_for(n, max_edges, w);
        Ok(StreamParams {
            n,
            alpha: cfg.alpha,
            w,
            beta: cfg.beta,
            rho: cfg.rho,
            epsilon,
            delta,
            gamma,
            samples_per_level,
            max_levels,
            sketch: cfg.sketch.unwrap_or_else(|| SketchParams::for_n(n)),
        })
    }
}

/// Algorithm-1 iterations for `m` edges on `n` vertices: the number of
/// `j ≥ 1` with `((m/n)/2^j)² ≥ w`.
pub fn levels_for(n: usize, m: u64, w: Rational) -> usize {
    if n == 0 || m == 0 {
        return 0;
    }
    let avg = Rational::new(m as i128, n as i128);
    let mut j = 0;
    loop {
        let s = avg / Rational::from_integer(1i128 << (j + 1));
        if s * s < w {
            return j;
        }
        j += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceRow {
    pub pass: u8,
    pub component: &'static str,
    pub cells: u64,
    pub bytes: u64,
}

pub fn space_csv(rows: &[SpaceRow]) -> String {
    let mut out = String::from("pass,cells,bytes\n");
    for p in [1u8, 2] {
        let cells: u64 = rows.iter().filter(|r| r.pass == p).map(|r| r.cells).sum();
        let bytes: u64 = rows.iter().filter(|r| r.pass == p).map(|r| r.bytes).sum();
        out.push_str(&format!("{p},{cells},{bytes}\n"));
    }
    out
}

/// Trace of one Algorithm-1 level run on sketches.
#[derive(Clone, Debug, Serialize)]
pub struct StreamLevel {
    pub j: u32,
    pub sqrt_w_j: Rational,
    pub loops: u64,
    pub phi: u64,
    pub input_vertices: usize,
    pub clusters: usize,
    pub shaved_by_degree: usize,
    pub shaved_by_out: usize,
    /// Super-vertices per opened sampling level, summed over samples.
    pub level_histogram: Vec<usize>,
    pub retries: usize,
    pub output_vertices: usize,
}

/// Sketch state after pass one, before any contraction is known.
pub struct PassOneSketches {
    pub params: StreamParams,
    /// `max_levels` banks of `samples_per_level + 1` sketch sets; the last
    /// set of each bank estimates out-degrees for shaving.
    banks: Vec<Vec<PowerCutSketchSet>>,
    estimator: Box<dyn CutEstimator>,
    edges: u64,
    events: usize,
}

impl PassOneSketches {
    pub fn cell_count(&self) -> u64 {
        self.banks.iter().flatten().map(|s| s.cell_count()).sum()
    }

    pub fn space(&self) -> Vec<SpaceRow> {
        let sketch = self.cell_count();
        let est = self.estimator.cells();
        vec![
            SpaceRow { pass: 1, component: "sketches", cells: sketch, bytes: sketch * CELL_BYTES },
            SpaceRow { pass: 1, component: "estimator", cells: est, bytes: est * 24 },
            SpaceRow { pass: 1, component: "edge counter", cells: 1, bytes: 8 },
        ]
    }
}

/// Reads the stream once into sketches.
pub fn ingest_pass_one(n: usize, stream: &[StreamEvent], cfg: &StreamConfig) -> Result<PassOneSketches> {
    let params = StreamParams::new(n, cfg)?;
    let set_seed = |bank: usize, copy: usize| mix(cfg.seed ^ mix(((bank as u64) << 32) | copy as u64));
    let mut banks: Vec<Vec<PowerCutSketchSet>> = (0..params.max_levels)
        .map(|b| (0..=params.samples_per_level).map(|c| PowerCutSketchSet::new(n, params.sketch, set_seed(b, c))).collect())
        .collect();
    let mut est_set = match cfg.estimator {
        EstimatorKind::Sketch => Some(PowerCutSketchSet::new(n, params.sketch, set_seed(usize::MAX >> 32, 0))),
        EstimatorKind::Exact => None,
    };
    let mut edges: i64 = 0;
    for &ev in stream {
        for set in banks.iter_mut().flatten() {
            set.update(ev)?;
        }
        if let Some(s) = est_set.as_mut() {
            s.update(ev)?;
        }
        edges += if ev.kind == UpdateKind::Insert { 1 } else { -1 };
    }
    if edges < 0 {
        return Err(Error::InvalidInput(format!("stream ends with {edges} net edges")));
    }
    let estimator: Box<dyn CutEstimator> = match est_set {
        Some(s) => Box::new(SketchCutEstimator::new(s)),
        None => Box::new(ExactCutEstimator::from_stream(n, stream)?),
    };
    Ok(PassOneSketches { params, banks, estimator, edges: edges as u64, events: stream.len() })
}

#[derive(Clone, Debug, Serialize)]
pub struct PassOne {
    pub partition: ContractionMap,
    pub params: StreamParams,
    pub levels: Vec<StreamLevel>,
    pub space: Vec<SpaceRow>,
    pub events: usize,
}

/// Algorithm 1 with slack `β` on power cut samples of each level's
/// contraction. Returns the partition only.
pub fn pass_one(n: usize, stream: &[StreamEvent], cfg: &StreamConfig) -> Result<PassOne> {
    let sk = ingest_pass_one(n, stream, cfg)?;
    partition_from_sketches(&sk, cfg.decomposer_seed)
}

pub fn partition_from_sketches(sk: &PassOneSketches, decomposer_seed: Option<u64>) -> Result<PassOne> {
    let p = &sk.params;
    let n = p.n;
    let mut cm = ContractionMap::identity(n);
    let mut levels = Vec::new();
    let needed = levels_for(n, sk.edges, p.w);
    if needed > p.max_levels {
        return Err(Error::LimitExceeded { what: "pass-one levels (raise max_edges)", limit: p.max_levels, actual: needed });
    }
    let avg = Rational::new(sk.edges as i128, n.max(1) as i128);
    let int = |x: i128| Rational::from_integer(x);
    for (bank, j) in sk.banks.iter().zip(1u32..).take(needed) {
        let sqrt_w_j = avg / int(1i128 << j);
        let k = cm.len();
        let kk = p.samples_per_level as u64;
        let mut hist = vec![0usize; log2_ceil(n) + 1];
        let mut retries = 0;
        let mut summed: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let samples: Vec<PowerCutSample> = bank
            .iter()
            .map(|set| set.sample(&cm, sk.estimator.as_ref(), p.gamma, LevelRule::Ratio))
            .collect::<Result<_>>()?;
        for s in &samples {
            for l in s.levels.iter().flatten() {
                hist[*l] += 1;
            }
            retries += s.retries;
        }
        let (h_p, decomposition_samples) = samples.split_last().expect("bank holds at least two sets");
        for s in decomposition_samples {
            for (u, v, w) in s.graph.weighted_pairs() {
                *summed.entry((u, v)).or_insert(0) += w;
            }
        }
        let e: Vec<_> = summed.into_iter().map(|((u, v), w)| (u, v, w)).collect();
        let sum = Multigraph::from_multiplicities(k, &e)?;
        let (phi, loops) = phi_and_loops(default_phi, k, 2 * sum.edge_count() / kk, p.epsilon, sqrt_w_j);
        let d = expander_decompose_with(
            &sum.with_uniform_self_loops(kk * loops),
            p.epsilon,
            &DecomposeConfig { phi: Some(phi), seed: decomposer_seed },
        )?;
        let degrees: Vec<u64> = (0..k).into_par_iter().map(|u| sk.estimator.cut(cm.members(u))).collect::<Result<_>>()?;
        let mut labels: Vec<usize> = (0..k).collect();
        let (mut by_degree, mut by_out) = (0, 0);
        for cluster in &d.clusters {
            let mut inside = vec![false; k];
            for &u in cluster {
                inside[u] = true;
            }
            let mut kept = Vec::new();
            for &u in cluster {
                let dt = int(degrees[u] as i128);
                let out: u64 = h_p.graph.neighbors(u).iter().filter(|&&(x, _)| !inside[x]).map(|&(_, w)| w).sum();
                let size = int(cm.members(u).len() as i128);
                if dt * Rational::new(100, 101) < int(10) / p.alpha * sqrt_w_j * size {
                    by_degree += 1;
                } else if p.rho * dt < int(4) / p.alpha * int(out as i128) {
                    by_out += 1;
                } else {
                    kept.push(u);
                }
            }
            if let Some(&root) = kept.first() {
                for &u in &kept {
                    labels[u] = root;
                }
            }
        }
        cm = cm.then(&ContractionMap::from_labels(&labels))?;
        levels.push(StreamLevel {
            j,
            sqrt_w_j,
            loops,
            phi,
            input_vertices: k,
            clusters: d.clusters.len(),
            shaved_by_degree: by_degree,
            shaved_by_out: by_out,
            level_histogram: hist,
            retries,
            output_vertices: cm.len(),
        });
    }
    Ok(PassOne { partition: cm, params: p.clone(), levels, space: sk.space(), events: sk.events })
}

#[derive(Clone, Debug, Serialize)]
pub struct PassTwo {
    /// Net edges between distinct super-vertices, original endpoints.
    pub edges: BTreeMap<(VertexId, VertexId), u64>,
    pub degrees: Vec<u64>,
    pub space: Vec<SpaceRow>,
}

impl PassTwo {
    pub fn edge_graph(&self) -> Multigraph {
        let e: Vec<_> = self.edges.iter().map(|(&(u, v), &m)| (u, v, m)).collect();
        Multigraph::from_multiplicities(self.degrees.len(), &e).expect("endpoints are in range")
    }
}

/// Exact crossing edges and degrees under a partition fixed in advance.
pub fn pass_two(stream: &[StreamEvent], partition: &ContractionMap) -> Result<PassTwo> {
    let n = partition.n();
    let mut counts: BTreeMap<(VertexId, VertexId), i64> = BTreeMap::new();
    let mut deg = vec![0i64; n];
    for ev in stream {
        check_vertex(n, ev.u)?;
        check_vertex(n, ev.v)?;
        if ev.u == ev.v {
            return Err(Error::InvalidInput(format!("self-loop event at {}", ev.u)));
        }
        let d = if ev.kind == UpdateKind::Insert { 1 } else { -1 };
        deg[ev.u] += d;
        deg[ev.v] += d;
        if partition.super_of(ev.u) != partition.super_of(ev.v) {
            let c = counts.entry(edge_key(ev.u, ev.v)).or_insert(0);
            *c += d;
            if *c == 0 {
                counts.remove(&edge_key(ev.u, ev.v));
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| deg[v] < 0) {
        return Err(Error::InvalidInput(format!("vertex {v} ends with degree {}", deg[v])));
    }
    let g = net_from_counts(n, counts)?;
    let edges: BTreeMap<_, _> = g.weighted_pairs().map(|(u, v, m)| ((u, v), m)).collect();
    let cells = edges.len() as u64;
    let space = vec![
        SpaceRow { pass: 2, component: "degrees", cells: n as u64, bytes: 8 * n as u64 },
        SpaceRow { pass: 2, component: "crossing edges", cells, bytes: 24 * cells },
    ];
    Ok(PassTwo { edges, degrees: deg.into_iter().map(|d| d as u64).collect(), space })
}

#[derive(Clone, Debug)]
pub struct TwoPassOutcome {
    pub pass_one: PassOne,
    pub pass_two: PassTwo,
    pub ap_edges: usize,
    pub tree: GomoryHuTree,
}

impl TwoPassOutcome {
    pub fn space(&self) -> Vec<SpaceRow> {
        self.pass_one.space.iter().chain(&self.pass_two.space).cloned().collect()
    }
}

/// Partition from pass one, exact crossing edges and degrees from pass
/// two, then peeling, star transform and Gomory-Hu.
pub fn two_pass_apmc(n: usize, stream: &[StreamEvent], cfg: &StreamConfig) -> Result<TwoPassOutcome> {
    let one = pass_one(n, stream, cfg)?;
    let two = pass_two(stream, &one.partition)?;
    let (_, ap, tree) = tree_from_crossing_edges(&two.edge_graph(), &two.degrees, one.partition.clone())?;
    Ok(TwoPassOutcome { pass_one: one, pass_two: two, ap_edges: ap.edge_count(), tree })
}

/// First violation of the `(δ, ε)` cut inequality on `class`: `H{C}` vs
/// `G{C}`, where `G{C}` keeps full degrees for volumes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCutViolation {
    pub class: usize,
    pub side: Vec<VertexId>,
    pub cut_g: u64,
    pub cut_h: u64,
    pub volume: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCutCheck {
    pub passed: bool,
    pub cuts_checked: u64,
    pub violation: Option<PowerCutViolation>,
}

/// Largest class [`check_power_cut`] enumerates.
pub const POWER_CUT_CLASS_LIMIT: usize = 12;

/// Checks every subset of every class in `classes` (vertices of `g`).
pub fn check_power_cut(
    g: &Multigraph,
    h: &WeightedGraph,
    classes: &[Vec<VertexId>],
    delta: Rational,
    eps: Rational,
) -> Result<PowerCutCheck> {
    if g.n() != h.n() {
        return Err(Error::InvalidInput(format!("graph has {} vertices, sample {}", g.n(), h.n())));
    }
    let one = Rational::from_integer(1);
    let mut checked = 0;
    for (ci, class) in classes.iter().enumerate() {
        if class.len() > POWER_CUT_CLASS_LIMIT {
            return Err(Error::LimitExceeded { what: "power-cut class size", limit: POWER_CUT_CLASS_LIMIT, actual: class.len() });
        }
        for &v in class {
            check_vertex(g.n(), v)?;
        }
        let pos: BTreeMap<VertexId, usize> = class.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let inner = |adj: &[(VertexId, u64)]| -> Vec<(usize, u64)> {
            adj.iter().filter_map(|&(u, w)| pos.get(&u).map(|&i| (i, w))).collect()
        };
        let ga: Vec<_> = class.iter().map(|&v| inner(g.neighbors(v))).collect();
        let ha: Vec<_> = class.iter().map(|&v| inner(h.neighbors(v))).collect();
        let degs: Vec<u64> = class.iter().map(|&v| g.weighted_degree(v)).collect();
        let size = class.len();
        for mask in 1u32..(1u32 << size) {
            let inside = |i: usize| mask >> i & 1 == 1;
            let (mut cg, mut ch, mut vol) = (0u64, 0u64, 0u64);
            for i in (0..size).filter(|&i| inside(i)) {
                vol += degs[i];
                cg += ga[i].iter().filter(|&&(x, _)| !inside(x)).map(|&(_, w)| w).sum::<u64>();
                ch += ha[i].iter().filter(|&&(x, _)| !inside(x)).map(|&(_, w)| w).sum::<u64>();
            }
            checked += 1;
            let (cg_r, ch_r, vol_r) = (Rational::from_integer(cg as i128), Rational::from_integer(ch as i128), Rational::from_integer(vol as i128));
            let lo = (one - delta) * cg_r - eps * vol_r;
            let hi = (one + delta) * cg_r + eps * vol_r;
            if ch_r < lo || ch_r > hi {
                let side = (0..size).filter(|&i| inside(i)).map(|i| class[i]).collect();
                return Ok(PowerCutCheck {
                    passed: false,
                    cuts_checked: checked,
                    violation: Some(PowerCutViolation { class: ci, side, cut_g: cg, cut_h: ch, volume: vol }),
                });
            }
        }
    }
    Ok(PowerCutCheck { passed: true, cuts_checked: checked, violation: None })
}

/// Insertions of every edge of `g` in a seeded order, with `churn` extra
/// insert/delete pairs of random edges interleaved.
pub fn stream_from_graph(g: &Multigraph, churn: usize, seed: u64) -> Vec<StreamEvent> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = crate::suite::rng(seed);
    let n = g.n();
    let mut ev: Vec<StreamEvent> = g
        .weighted_pairs()
        .flat_map(|(u, v, m)| std::iter::repeat_n(EdgeUpdate::insert(u, v), m as usize))
        .collect();
    ev.shuffle(&mut rng);
    if n >= 2 {
        for _ in 0..churn {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            let at = rng.gen_range(0..=ev.len());
            ev.insert(at, EdgeUpdate::insert(u, v));
            let later = rng.gen_range(at + 1..=ev.len());
            ev.insert(later, EdgeUpdate::delete(u, v));
        }
    }
    ev
}
