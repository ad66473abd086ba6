//! Expander decomposition by recursive sparsest-cut splitting.
//!
//! A component is split along the best cut we can find whenever that cut's
//! conductance is below `ε/φ`; otherwise it becomes a cluster. Components
//! of at most [`EXACT_LIMIT`] vertices are searched exhaustively, so those
//! clusters are certified. Larger components use spectral and BFS sweeps
//! followed by single-vertex refinement, and are flagged as uncertified.
//!
//! Volumes always include self-loops (two per loop). The split charging
//! argument bounds the inter-cluster edge count by
//! `(ε/φ) · ⌈log₂ vol⌉ · vol`, so the default `φ` is at least
//! `2⌈log₂ vol⌉` and the crossing count stays within `ε · (m + loops)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{membership, EdgeWeighted, Multigraph, VertexId};
use crate::Rational;

/// Largest component searched by full enumeration.
pub const EXACT_LIMIT: usize = 18;
/// Largest cluster [`certify_decomposition`] will enumerate.
pub const CERTIFY_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Sorted clusters ordered by smallest member.
    pub clusters: Vec<Vec<VertexId>>,
    /// Inter-cluster non-loop edges, with multiplicity.
    pub crossing: u64,
    /// The `φ` this decomposition targets: clusters have conductance at
    /// least `ε/φ`.
    pub phi: u64,
    pub epsilon: Rational,
    /// False if some cluster above [`EXACT_LIMIT`] was only searched
    /// heuristically.
    pub certified: bool,
}

#[derive(Clone, Debug, Default)]
pub struct DecomposeConfig {
    /// Overrides [`default_phi`].
    pub phi: Option<u64>,
    /// Seeds the spectral start vector. `None` uses a fixed start and no
    /// randomness at all.
    pub seed: Option<u64>,
}

/// `max(⌈4 ln(n+2)⌉, 2⌈log₂ vol⌉)`.
pub fn default_phi(n: usize, volume: u64) -> u64 {
    let by_n = (4.0 * ((n + 2) as f64).ln()).ceil() as u64;
    let by_vol = 2 * u64::from(ceil_log2(volume.max(2)));
    by_n.max(by_vol)
}

pub(crate) fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// `cut(S) / min(vol(S), vol(V \ S))` with loop-inflated volumes.
pub fn conductance(g: &Multigraph, s: &[VertexId]) -> Result<Rational> {
    let mask = membership(g.n(), s)?;
    let inside = mask.iter().filter(|&&b| b).count();
    if inside == 0 || inside == g.n() {
        return Err(Error::InvalidInput("conductance needs a proper nonempty subset".into()));
    }
    let vs: u64 = (0..g.n()).filter(|&v| mask[v]).map(|v| g.vertex_volume(v)).sum();
    let low = vs.min(g.total_volume() - vs);
    if low == 0 {
        return Err(Error::InvalidInput("conductance undefined: a side has zero volume".into()));
    }
    Ok(Rational::new(g.cut_of_mask(&mask) as i128, low as i128))
}

/// Cut with its value and smaller-side volume.
#[derive(Clone, Debug)]
struct Candidate {
    inside: Vec<bool>,
    cut: u64,
    low: u64,
}

impl Candidate {
    /// Strictly sparser than `other`.
    fn beats(&self, other: &Candidate) -> bool {
        (self.cut as u128) * (other.low as u128) < (other.cut as u128) * (self.low as u128)
    }
}

struct Local<'a> {
    g: &'a Multigraph,
    vol: Vec<u64>,
    total: u64,
}

impl<'a> Local<'a> {
    fn new(g: &'a Multigraph) -> Self {
        let vol: Vec<u64> = (0..g.n()).map(|v| g.vertex_volume(v)).collect();
        let total = vol.iter().sum();
        Local { g, vol, total }
    }

    fn consider(&self, best: &mut Option<Candidate>, inside: &[bool], cut: u64, vs: u64) {
        let low = vs.min(self.total - vs);
        if low == 0 {
            return;
        }
        let c = Candidate { inside: inside.to_vec(), cut, low };
        if best.as_ref().is_none_or(|b| c.beats(b)) {
            *best = Some(c);
        }
    }

    /// Gray-code walk over all subsets not containing vertex 0.
    fn exact(&self) -> Option<Candidate> {
        let k = self.g.n();
        let mut inside = vec![false; k];
        let mut inw = vec![0u64; k];
        let (mut cut, mut vs) = (0u64, 0u64);
        let mut best = None;
        // Candidate storage is cloned only on improvement; track it lazily.
        let mut best_val: Option<(u64, u64)> = None;
        let mut best_code = 0u64;
        let mut code = 0u64;
        for step in 1u64..1 << (k - 1) {
            let bit = step.trailing_zeros() as usize;
            let v = bit + 1;
            self.flip(&mut inside, &mut inw, &mut cut, &mut vs, v);
            code ^= 1 << bit;
            let low = vs.min(self.total - vs);
            if low == 0 {
                continue;
            }
            let better = match best_val {
                None => true,
                Some((bc, bl)) => (cut as u128) * (bl as u128) < (bc as u128) * (low as u128),
            };
            if better {
                best_val = Some((cut, low));
                best_code = code;
            }
        }
        if let Some((c, l)) = best_val {
            let mut mask = vec![false; k];
            for (i, slot) in mask.iter_mut().enumerate().skip(1) {
                *slot = best_code >> (i - 1) & 1 == 1;
            }
            best = Some(Candidate { inside: mask, cut: c, low: l });
        }
        best
    }

    fn flip(&self, inside: &mut [bool], inw: &mut [u64], cut: &mut u64, vs: &mut u64, v: usize) {
        let deg: u64 = self.g.weighted_degree(v);
        if inside[v] {
            inside[v] = false;
            // v leaves S: its edges to S start crossing, the rest stop.
            *cut = *cut + 2 * inw[v] - deg;
            *vs -= self.vol[v];
            for &(u, w) in self.g.neighbors(v) {
                inw[u] -= w;
            }
        } else {
            inside[v] = true;
            *cut = *cut + deg - 2 * inw[v];
            *vs += self.vol[v];
            for &(u, w) in self.g.neighbors(v) {
                inw[u] += w;
            }
        }
    }

    /// Best prefix of `order`.
    fn sweep(&self, order: &[usize], best: &mut Option<Candidate>) {
        let k = self.g.n();
        let mut inside = vec![false; k];
        let mut inw = vec![0u64; k];
        let (mut cut, mut vs) = (0u64, 0u64);
        let mut local: Option<(usize, u64, u64)> = None;
        for (i, &v) in order.iter().enumerate().take(k - 1) {
            self.flip(&mut inside, &mut inw, &mut cut, &mut vs, v);
            let low = vs.min(self.total - vs);
            if low == 0 {
                continue;
            }
            let better = match local {
                None => true,
                Some((_, bc, bl)) => (cut as u128) * (bl as u128) < (bc as u128) * (low as u128),
            };
            if better {
                local = Some((i, cut, low));
            }
        }
        if let Some((i, _, _)) = local {
            let mut mask = vec![false; k];
            for &v in &order[..=i] {
                mask[v] = true;
            }
            let cut = self.g.cut_of_mask(&mask);
            let vs: u64 = (0..k).filter(|&v| mask[v]).map(|v| self.vol[v]).sum();
            self.consider(best, &mask, cut, vs);
        }
    }

    fn spectral_order(&self, seed: Option<u64>) -> Vec<usize> {
        let k = self.g.n();
        let d: Vec<f64> = self.vol.iter().map(|&x| x as f64).collect();
        let sq: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
        let norm_sq: f64 = d.iter().sum();
        let mut x: Vec<f64> = match seed {
            Some(s) => {
                use rand::Rng;
                let mut r = crate::suite::rng(s);
                (0..k).map(|_| r.gen_range(-1.0..1.0)).collect()
            }
            None => (0..k).map(|i| ((i * 7919 + 13) % 101) as f64 - 50.0).collect(),
        };
        let iters = 60 + 20 * k;
        for _ in 0..iters {
            // Deflate the trivial eigenvector sqrt(vol).
            let dot: f64 = x.iter().zip(&sq).map(|(a, b)| a * b).sum::<f64>() / norm_sq;
            for i in 0..k {
                x[i] -= dot * sq[i];
            }
            let mut y = vec![0.0; k];
            for v in 0..k {
                if d[v] == 0.0 {
                    continue;
                }
                // Lazy normalized walk: (I + D^-1/2 A D^-1/2) / 2, loops on the diagonal.
                let mut acc = 2.0 * self.g.self_loops(v) as f64 * x[v] / d[v];
                for &(u, w) in self.g.neighbors(v) {
                    if d[u] > 0.0 {
                        acc += w as f64 * x[u] / (sq[u] * sq[v]);
                    }
                }
                y[v] = 0.5 * (x[v] + acc);
            }
            let len = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            if len == 0.0 || !len.is_finite() {
                break;
            }
            x = y.into_iter().map(|a| a / len).collect();
        }
        let score: Vec<f64> = (0..k).map(|v| if sq[v] > 0.0 { x[v] / sq[v] } else { 0.0 }).collect();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| score[a].total_cmp(&score[b]).then(a.cmp(&b)));
        order
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let k = self.g.n();
        let mut seen = vec![false; k];
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &(u, _) in self.g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
        }
        order.extend((0..k).filter(|&v| !seen[v]));
        order
    }

    /// Single-vertex moves while they strictly improve conductance.
    fn refine(&self, mut c: Candidate) -> Candidate {
        let k = self.g.n();
        for _ in 0..4 * k {
            let mut improved = false;
            for v in 0..k {
                let mut mask = c.inside.clone();
                mask[v] = !mask[v];
                let count = mask.iter().filter(|&&b| b).count();
                if count == 0 || count == k {
                    continue;
                }
                let cut = self.g.cut_of_mask(&mask);
                let vs: u64 = (0..k).filter(|&u| mask[u]).map(|u| self.vol[u]).sum();
                let low = vs.min(self.total - vs);
                if low == 0 {
                    continue;
                }
                let next = Candidate { inside: mask, cut, low };
                if next.beats(&c) {
                    c = next;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        c
    }

    fn heuristic(&self, seed: Option<u64>) -> Option<Candidate> {
        let mut best = None;
        let order = self.spectral_order(seed);
        self.sweep(&order, &mut best);
        let mut rev = order;
        rev.reverse();
        self.sweep(&rev, &mut best);
        let k = self.g.n();
        let roots: Vec<usize> = if k <= 64 { (0..k).collect() } else { (0..k).step_by(k / 32).collect() };
        for r in roots {
            self.sweep(&self.bfs_order(r), &mut best);
        }
        best.map(|c| self.refine(c))
    }
}

struct Splitter<'a> {
    eps: Rational,
    phi: u64,
    seed: Option<u64>,
    g: &'a Multigraph,
}

impl Splitter<'_> {
    /// `cut/low < ε/φ` exactly.
    fn sparse(&self, c: &Candidate) -> bool {
        let lhs = c.cut as u128 * self.phi as u128 * *self.eps.denom() as u128;
        lhs < *self.eps.numer() as u128 * c.low as u128
    }

    /// Returns clusters and whether every accepted cluster was searched
    /// exactly.
    fn split(&self, verts: Vec<VertexId>) -> (Vec<Vec<VertexId>>, bool) {
        if verts.len() <= 1 {
            return (vec![verts], true);
        }
        let sub = self.g.induced(&verts);
        let comps = sub.components();
        if comps.len() > 1 {
            return self.merge(comps.into_iter().map(|c| c.into_iter().map(|i| verts[i]).collect()).collect());
        }
        let local = Local::new(&sub);
        let exact = verts.len() <= EXACT_LIMIT;
        let best = if exact { local.exact() } else { local.heuristic(self.seed) };
        match best {
            Some(c) if self.sparse(&c) => {
                let (a, b): (Vec<_>, Vec<_>) = (0..verts.len()).partition(|&i| c.inside[i]);
                let a = a.into_iter().map(|i| verts[i]).collect();
                let b = b.into_iter().map(|i| verts[i]).collect();
                self.merge(vec![a, b])
            }
            _ => (vec![verts], exact),
        }
    }

    fn merge(&self, parts: Vec<Vec<VertexId>>) -> (Vec<Vec<VertexId>>, bool) {
        let results: Vec<_> = parts.into_par_iter().map(|p| self.split(p)).collect();
        let mut all = Vec::new();
        let mut ok = true;
        for (cl, c) in results {
            all.extend(cl);
            ok &= c;
        }
        (all, ok)
    }
}

/// Decomposition with [`default_phi`] and no randomness.
pub fn expander_decompose(g: &Multigraph, eps: Rational) -> Result<Decomposition> {
    expander_decompose_with(g, eps, &DecomposeConfig::default())
}

pub fn expander_decompose_with(g: &Multigraph, eps: Rational, cfg: &DecomposeConfig) -> Result<Decomposition> {
    if eps <= Rational::from_integer(0) || eps >= Rational::from_integer(1) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let phi = cfg.phi.unwrap_or_else(|| default_phi(g.n(), g.total_volume()));
    if phi == 0 {
        return Err(Error::Parameter("phi must be positive".into()));
    }
    let sp = Splitter { eps, phi, seed: cfg.seed, g };
    let (mut clusters, certified) = if g.n() == 0 { (Vec::new(), true) } else { sp.split((0..g.n()).collect()) };
    for c in clusters.iter_mut() {
        c.sort_unstable();
    }
    clusters.sort();
    let crossing = crossing_count(g, &clusters);
    Ok(Decomposition { clusters, crossing, phi, epsilon: eps, certified })
}

/// Recounted inter-cluster non-loop edges.
pub fn crossing_count(g: &Multigraph, clusters: &[Vec<VertexId>]) -> u64 {
    let mut label = vec![usize::MAX; g.n()];
    for (i, c) in clusters.iter().enumerate() {
        for &v in c {
            label[v] = i;
        }
    }
    g.weighted_pairs().filter(|&(u, v, _)| label[u] != label[v]).map(|(_, _, w)| w).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub passed: bool,
    /// True when every cluster was enumerated.
    pub exact: bool,
    /// Sparsest cut found in the worst cluster: `(cluster index, side,
    /// conductance)`.
    pub worst: Option<(usize, Vec<VertexId>, Rational)>,
}

/// Checks every cluster's induced conductance against `ε/φ`, exhaustively
/// up to [`CERTIFY_LIMIT`] vertices and by sweeps above that.
pub fn certify_decomposition(g: &Multigraph, d: &Decomposition) -> Result<CertifyReport> {
    let threshold = d.epsilon / Rational::from_integer(d.phi as i128);
    let mut worst: Option<(usize, Vec<VertexId>, Rational)> = None;
    let mut exact = true;
    for (i, cluster) in d.clusters.iter().enumerate() {
        if cluster.len() <= 1 {
            continue;
        }
        let sub = g.induced(cluster);
        let local = Local::new(&sub);
        let found = if cluster.len() <= CERTIFY_LIMIT {
            local.exact()
        } else {
            exact = false;
            local.heuristic(None)
        };
        // A disconnected cluster has a zero-cut side; exact() sees it.
        if let Some(c) = found {
            let phi = Rational::new(c.cut as i128, c.low as i128);
            if worst.as_ref().is_none_or(|w| phi < w.2) {
                let side = (0..cluster.len()).filter(|&j| c.inside[j]).map(|j| cluster[j]).collect();
                worst = Some((i, side, phi));
            }
        }
    }
    let passed = worst.as_ref().is_none_or(|w| w.2 >= threshold);
    Ok(CertifyReport { passed, exact, worst })
}
