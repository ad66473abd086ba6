//! Graph representations and the cut arithmetic shared by every pipeline.
//!
//! Two concrete graphs live here. [`Multigraph`] is the unweighted input
//! model: parallel edges are counted with multiplicity and self-loops are
//! tracked separately, because they inflate volume but never cross a cut.
//! [`WeightedGraph`] carries nonnegative integer weights and is what the
//! sparsifiers and Gomory-Hu trees are computed on.
//!
//! Vertex ids are dense `0..n`. Every edge is stored once under its sorted
//! pair, so iteration order (and therefore serialization) is canonical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

/// Sorted-pair key for an undirected edge.
#[inline]
pub fn edge_key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Read access shared by [`Multigraph`] and [`WeightedGraph`].
///
/// `neighbors` never lists a vertex as its own neighbor; self-loops are
/// not part of this view.
pub trait EdgeWeighted {
    fn vertex_count(&self) -> usize;

    fn neighbors(&self, v: VertexId) -> &[(VertexId, u64)];

    /// Canonical `(u, v, weight)` triples with `u < v`.
    fn weighted_pairs(&self) -> Box<dyn Iterator<Item = (VertexId, VertexId, u64)> + '_>;

    /// Sum of incident non-loop weight.
    fn weighted_degree(&self, v: VertexId) -> u64 {
        self.neighbors(v).iter().map(|&(_, w)| w).sum()
    }

    /// Total weight of edges with exactly one endpoint in the masked set.
    fn cut_of_mask(&self, inside: &[bool]) -> u64 {
        self.weighted_pairs()
            .filter(|&(u, v, _)| inside[u] != inside[v])
            .map(|(_, _, w)| w)
            .sum()
    }
}

/// Converts a vertex list into a membership mask, validating ids.
pub fn membership(n: usize, set: &[VertexId]) -> Result<Vec<bool>> {
    let mut mask = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        mask[v] = true;
    }
    Ok(mask)
}

pub(crate) fn check_vertex(n: usize, v: VertexId) -> Result<()> {
    if v >= n {
        Err(Error::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// Total weight crossing `(s, V \ s)`. Self-loops never contribute.
pub fn cut_value<G: EdgeWeighted + ?Sized>(g: &G, s: &[VertexId]) -> Result<u64> {
    let mask = membership(g.vertex_count(), s)?;
    Ok(g.cut_of_mask(&mask))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Adjacency {
    pairs: BTreeMap<(VertexId, VertexId), u64>,
    adj: Vec<Vec<(VertexId, u64)>>,
}

impl Adjacency {
    fn new(n: usize, pairs: BTreeMap<(VertexId, VertexId), u64>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (&(u, v), &w) in &pairs {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Adjacency { pairs, adj }
    }
}

/// Unweighted multigraph with parallel edges and per-vertex self-loop counts.
///
/// Serializes as `{"n": .., "edges": [[u, v, mult], ..]}` with sorted
/// pairs; self-loops appear as `[v, v, count]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphJson", try_from = "GraphJson")]
pub struct Multigraph {
    n: usize,
    inner: Adjacency,
    loops: Vec<u64>,
    edge_count: u64,
}

impl Multigraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            inner: Adjacency::new(n, BTreeMap::new()),
            loops: vec![0; n],
            edge_count: 0,
        }
    }

    /// Builds from an edge list; `(u, u)` entries become self-loops and
    /// repeated pairs become parallel edges.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut b = MultigraphBuilder::new(n);
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    /// Builds from `(u, v, multiplicity)` triples.
    pub fn from_multiplicities(n: usize, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        let mut b = MultigraphBuilder::new(n);
        for &(u, v, m) in edges {
            b.add_edges(u, v, m)?;
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of non-loop edges, counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edge_count
    }

    /// Number of distinct adjacent pairs.
    pub fn distinct_pair_count(&self) -> usize {
        self.inner.pairs.len()
    }

    pub fn self_loops(&self, v: VertexId) -> u64 {
        self.loops[v]
    }

    pub fn total_self_loops(&self) -> u64 {
        self.loops.iter().sum()
    }

    /// Non-loop incident edge count.
    pub fn degree(&self, v: VertexId) -> Result<u64> {
        check_vertex(self.n, v)?;
        Ok(self.weighted_degree(v))
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.n).map(|v| self.weighted_degree(v)).collect()
    }

    /// `deg(v) + 2 * loops(v)`.
    pub fn vertex_volume(&self, v: VertexId) -> u64 {
        self.weighted_degree(v) + 2 * self.loops[v]
    }

    /// Sum of degrees plus twice the self-loops over the set.
    pub fn volume(&self, s: &[VertexId]) -> Result<u64> {
        let mask = membership(self.n, s)?;
        Ok((0..self.n)
            .filter(|&v| mask[v])
            .map(|v| self.vertex_volume(v))
            .sum())
    }

    pub fn total_volume(&self) -> u64 {
        (0..self.n).map(|v| self.vertex_volume(v)).sum()
    }

    /// Multiplicity of the pair (0 if absent). `u == v` answers loops.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> u64 {
        if u == v {
            return self.loops.get(u).copied().unwrap_or(0);
        }
        self.inner.pairs.get(&edge_key(u, v)).copied().unwrap_or(0)
    }

    /// Same edges, with `count` self-loops added to every vertex.
    pub fn with_uniform_self_loops(&self, count: u64) -> Multigraph {
        let mut out = self.clone();
        for l in out.loops.iter_mut() {
            *l += count;
        }
        out
    }

    /// Same edges, loops dropped.
    pub fn without_self_loops(&self) -> Multigraph {
        let mut out = self.clone();
        out.loops = vec![0; self.n];
        out
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in the given order.
    /// Self-loops are kept.
    pub fn induced(&self, vertices: &[VertexId]) -> Multigraph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut b = MultigraphBuilder::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            b.loops[i] = self.loops[v];
            for &(u, w) in self.neighbors(v) {
                let j = index[u];
                if j != usize::MAX && i < j {
                    *b.pairs.entry((i, j)).or_insert(0) += w;
                }
            }
        }
        b.build()
    }

    /// Connected components (self-loops ignored), each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        components_of(self)
    }

    pub fn to_builder(&self) -> MultigraphBuilder {
        MultigraphBuilder {
            n: self.n,
            pairs: self.inner.pairs.clone(),
            loops: self.loops.clone(),
        }
    }

    /// Weighted view with multiplicities as weights (loops dropped).
    pub fn to_weighted(&self) -> WeightedGraph {
        WeightedGraph {
            n: self.n,
            inner: self.inner.clone(),
        }
    }
}

impl EdgeWeighted for Multigraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn neighbors(&self, v: VertexId) -> &[(VertexId, u64)] {
        &self.inner.adj[v]
    }
    fn weighted_pairs(&self) -> Box<dyn Iterator<Item = (VertexId, VertexId, u64)> + '_> {
        Box::new(self.inner.pairs.iter().map(|(&(u, v), &w)| (u, v, w)))
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(VertexId, VertexId, u64)>,
}

impl From<Multigraph> for GraphJson {
    fn from(g: Multigraph) -> Self {
        let mut edges: Vec<_> = g.weighted_pairs().collect();
        edges.extend((0..g.n).filter(|&v| g.loops[v] > 0).map(|v| (v, v, g.loops[v])));
        edges.sort_unstable();
        GraphJson { n: g.n, edges }
    }
}

impl TryFrom<GraphJson> for Multigraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        Multigraph::from_multiplicities(j.n, &j.edges)
    }
}

/// Mutable accumulator for a [`Multigraph`]; the graph itself is immutable.
#[derive(Clone, Debug, Default)]
pub struct MultigraphBuilder {
    n: usize,
    pairs: BTreeMap<(VertexId, VertexId), u64>,
    loops: Vec<u64>,
}

impl MultigraphBuilder {
    pub fn new(n: usize) -> Self {
        MultigraphBuilder {
            n,
            pairs: BTreeMap::new(),
            loops: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.add_edges(u, v, 1)
    }

    pub fn add_edges(&mut self, u: VertexId, v: VertexId, count: u64) -> Result<()> {
        check_vertex(self.n, u)?;
        check_vertex(self.n, v)?;
        if count == 0 {
            return Ok(());
        }
        if u == v {
            self.loops[u] += count;
        } else {
            *self.pairs.entry(edge_key(u, v)).or_insert(0) += count;
        }
        Ok(())
    }

    /// Removes one unit of the pair; errors if none is present.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        check_vertex(self.n, u)?;
        check_vertex(self.n, v)?;
        if u == v {
            if self.loops[u] == 0 {
                return Err(Error::InvalidInput(format!("no self-loop at {u} to delete")));
            }
            self.loops[u] -= 1;
            return Ok(());
        }
        let key = edge_key(u, v);
        match self.pairs.get_mut(&key) {
            Some(m) if *m > 1 => *m -= 1,
            Some(_) => {
                self.pairs.remove(&key);
            }
            None => {
                return Err(Error::InvalidInput(format!("no edge ({u}, {v}) to delete")));
            }
        }
        Ok(())
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> u64 {
        if u == v {
            return self.loops.get(u).copied().unwrap_or(0);
        }
        self.pairs.get(&edge_key(u, v)).copied().unwrap_or(0)
    }

    pub fn build(&self) -> Multigraph {
        let edge_count = self.pairs.values().sum();
        Multigraph {
            n: self.n,
            inner: Adjacency::new(self.n, self.pairs.clone()),
            loops: self.loops.clone(),
            edge_count,
        }
    }
}

/// Graph with nonnegative integer edge weights. Zero weights are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    inner: Adjacency,
}

impl WeightedGraph {
    /// Builds from `(u, v, weight)` triples; repeated pairs accumulate,
    /// zero weights and loops are dropped.
    pub fn from_weighted_edges(n: usize, edges: &[(VertexId, VertexId, u64)]) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for &(u, v, w) in edges {
            check_vertex(n, u)?;
            check_vertex(n, v)?;
            if u == v || w == 0 {
                continue;
            }
            *pairs.entry(edge_key(u, v)).or_insert(0) += w;
        }
        Ok(WeightedGraph {
            n,
            inner: Adjacency::new(n, pairs),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (distinct, positive-weight) edges.
    pub fn edge_count(&self) -> usize {
        self.inner.pairs.len()
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> u64 {
        self.inner.pairs.get(&edge_key(u, v)).copied().unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.inner.pairs.values().sum()
    }

    /// Rounds nothing: weights become multiplicities.
    pub fn to_multigraph(&self) -> Multigraph {
        let edge_count = self.inner.pairs.values().sum();
        Multigraph {
            n: self.n,
            inner: self.inner.clone(),
            loops: vec![0; self.n],
            edge_count,
        }
    }
}

impl EdgeWeighted for WeightedGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn neighbors(&self, v: VertexId) -> &[(VertexId, u64)] {
        &self.inner.adj[v]
    }
    fn weighted_pairs(&self) -> Box<dyn Iterator<Item = (VertexId, VertexId, u64)> + '_> {
        Box::new(self.inner.pairs.iter().map(|(&(u, v), &w)| (u, v, w)))
    }
}

pub(crate) fn components_of<G: EdgeWeighted + ?Sized>(g: &G) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &(u, _) in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Partition of original vertices into super-vertices.
///
/// Super-vertex ids are dense and ordered by smallest member, so two maps
/// describing the same partition compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionMap {
    part: Vec<usize>,
    members: Vec<Vec<VertexId>>,
}

impl ContractionMap {
    pub fn identity(n: usize) -> Self {
        ContractionMap {
            part: (0..n).collect(),
            members: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// From an arbitrary label per vertex; labels are renumbered canonically.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let mut part = Vec::with_capacity(labels.len());
        let mut members: Vec<Vec<VertexId>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let next = relabel.len();
            let id = *relabel.entry(l).or_insert(next);
            if id == members.len() {
                members.push(Vec::new());
            }
            members[id].push(v);
            part.push(id);
        }
        ContractionMap { part, members }
    }

    /// From explicit groups, which must partition `0..n`.
    pub fn from_groups(n: usize, groups: &[Vec<VertexId>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (g, group) in groups.iter().enumerate() {
            for &v in group {
                check_vertex(n, v)?;
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!(
                        "vertex {v} appears in more than one group"
                    )));
                }
                labels[v] = g;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidInput(format!("vertex {v} is in no group")));
        }
        Ok(Self::from_labels(&labels))
    }

    /// Number of original vertices.
    pub fn n(&self) -> usize {
        self.part.len()
    }

    /// Number of super-vertices.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn super_of(&self, v: VertexId) -> usize {
        self.part[v]
    }

    pub fn members(&self, s: usize) -> &[VertexId] {
        &self.members[s]
    }

    pub fn labels(&self) -> &[usize] {
        &self.part
    }

    pub fn groups(&self) -> &[Vec<VertexId>] {
        &self.members
    }

    pub fn is_identity(&self) -> bool {
        self.members.len() == self.part.len()
    }

    /// Applies `next` (a partition of this map's super-vertices) on top.
    pub fn then(&self, next: &ContractionMap) -> Result<ContractionMap> {
        if next.n() != self.len() {
            return Err(Error::InvalidInput(format!(
                "composed map expects {} super-vertices, got {}",
                self.len(),
                next.n()
            )));
        }
        let labels: Vec<usize> = self.part.iter().map(|&s| next.part[s]).collect();
        Ok(Self::from_labels(&labels))
    }

    /// True when the set is a union of whole super-vertices.
    pub fn respects(&self, inside: &[bool]) -> bool {
        self.members
            .iter()
            .all(|m| m.iter().all(|&v| inside[v] == inside[m[0]]))
    }
}

/// Contracts each super-vertex of `cm` to one vertex, keeping inter-part
/// edges with multiplicity and discarding intra-part edges and all loops.
pub fn contract(g: &Multigraph, cm: &ContractionMap) -> Result<Multigraph> {
    if cm.n() != g.n() {
        return Err(Error::InvalidInput(format!(
            "contraction map covers {} vertices, graph has {}",
            cm.n(),
            g.n()
        )));
    }
    let mut b = MultigraphBuilder::new(cm.len());
    for (u, v, w) in g.weighted_pairs() {
        let (a, c) = (cm.super_of(u), cm.super_of(v));
        if a != c {
            *b.pairs.entry(edge_key(a, c)).or_insert(0) += w;
        }
    }
    Ok(b.build())
}

/// Number of edges incident to `v` that cross `(inside, V \ inside)`.
pub(crate) fn crossing_at(g: &Multigraph, inside: &[bool], v: VertexId) -> u64 {
    g.neighbors(v)
        .iter()
        .filter(|&&(u, _)| inside[u] != inside[v])
        .map(|&(_, w)| w)
        .sum()
}

/// `1 - cross(v, S) / deg(v)`.
pub fn friendliness_ratio(g: &Multigraph, s: &[VertexId], v: VertexId) -> Result<Rational> {
    check_vertex(g.n(), v)?;
    let mask = membership(g.n(), s)?;
    ratio_of_mask(g, &mask, v)
}

pub(crate) fn ratio_of_mask(g: &Multigraph, inside: &[bool], v: VertexId) -> Result<Rational> {
    let deg = g.weighted_degree(v);
    if deg == 0 {
        return Err(Error::UndefinedRatio(v));
    }
    let cross = crossing_at(g, inside, v);
    Ok(Rational::from_integer(1) - Rational::new(cross as i128, deg as i128))
}

/// True iff every positive-degree vertex has friendliness ratio `>= alpha`.
/// Isolated vertices are skipped.
pub fn is_alpha_friendly(g: &Multigraph, s: &[VertexId], alpha: Rational) -> Result<bool> {
    let mask = membership(g.n(), s)?;
    Ok(mask_is_friendly(g, &mask, alpha))
}

pub(crate) fn mask_is_friendly(g: &Multigraph, inside: &[bool], alpha: Rational) -> bool {
    (0..g.n()).all(|v| {
        let deg = g.weighted_degree(v);
        if deg == 0 {
            return true;
        }
        // ratio >= alpha  <=>  (deg - cross) * den >= num * deg
        let cross = crossing_at(g, inside, v);
        let lhs = (deg - cross) as i128 * *alpha.denom();
        lhs >= *alpha.numer() * deg as i128
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn cut_value_examples() {
        assert_eq!(cut_value(&k(3), &[0]).unwrap(), 2);
        assert_eq!(cut_value(&cycle(4), &[0, 2]).unwrap(), 4);
        assert_eq!(cut_value(&bowtie(), &[0, 1]).unwrap(), 2);
        assert!(matches!(
            cut_value(&k(3), &[5]),
            Err(Error::VertexOutOfRange { vertex: 5, n: 3 })
        ));
    }

    #[test]
    fn self_loops_never_cross() {
        let g = Multigraph::from_edges(2, &[(0, 0), (0, 1), (1, 1), (1, 1)]).unwrap();
        assert_eq!(cut_value(&g, &[0]).unwrap(), 1);
        assert_eq!(g.degree(1).unwrap(), 1);
        assert_eq!(g.volume(&[1]).unwrap(), 5);
    }

    #[test]
    fn degree_and_volume_examples() {
        let g = k(4);
        assert_eq!(g.degree(2).unwrap(), 3);
        assert_eq!(g.volume(&[0, 1]).unwrap(), 6);
        let h = Multigraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (0, 0), (0, 0)]).unwrap();
        assert_eq!(h.degree(0).unwrap(), 3);
        assert_eq!(h.volume(&[0]).unwrap(), 7);
        assert!(h.degree(4).is_err());
    }

    #[test]
    fn contract_examples() {
        let cm = ContractionMap::from_groups(3, &[vec![0, 1], vec![2]]).unwrap();
        let h = contract(&k(3), &cm).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.multiplicity(0, 1), 2);
        assert_eq!(h.total_self_loops(), 0);

        let g = bowtie();
        assert_eq!(contract(&g, &ContractionMap::identity(5)).unwrap(), g);

        let cm = ContractionMap::from_groups(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let h = contract(&cycle(4), &cm).unwrap();
        assert_eq!((h.n(), h.edge_count()), (2, 2));
    }

    #[test]
    fn contract_rejects_non_partition() {
        assert!(ContractionMap::from_groups(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(ContractionMap::from_groups(3, &[vec![0, 1]]).is_err());
        assert!(contract(&k(3), &ContractionMap::identity(4)).is_err());
    }

    #[test]
    fn friendliness_examples() {
        let r = |g: &Multigraph, s: &[usize], v| friendliness_ratio(g, s, v).unwrap();
        assert_eq!(r(&cycle(4), &[0], 0), Rational::from_integer(0));
        assert_eq!(r(&k(4), &[0, 1], 0), Rational::new(1, 3));
        assert_eq!(r(&bowtie(), &[], 2), Rational::from_integer(1));
        let iso = Multigraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            friendliness_ratio(&iso, &[0], 2),
            Err(Error::UndefinedRatio(2))
        ));
    }

    #[test]
    fn alpha_friendly_examples() {
        let sixth = Rational::new(1, 6);
        assert!(is_alpha_friendly(&k(4), &[0, 1], sixth).unwrap());
        assert!(!is_alpha_friendly(&cycle(4), &[0], sixth).unwrap());
        assert!(is_alpha_friendly(&bowtie(), &[], Rational::from_integer(1)).unwrap());
    }

    #[test]
    fn composition_and_canonical_ids() {
        let a = ContractionMap::from_labels(&[7, 7, 3, 3, 9]);
        assert_eq!(a.labels(), &[0, 0, 1, 1, 2]);
        let b = ContractionMap::from_labels(&[0, 1, 0]);
        let c = a.then(&b).unwrap();
        assert_eq!(c.groups(), &[vec![0, 1, 4], vec![2, 3]]);
    }

    #[test]
    fn builder_remove_is_checked() {
        let mut b = MultigraphBuilder::new(3);
        b.add_edges(0, 1, 2).unwrap();
        b.remove_edge(1, 0).unwrap();
        assert_eq!(b.multiplicity(0, 1), 1);
        b.remove_edge(0, 1).unwrap();
        assert!(b.remove_edge(0, 1).is_err());
        assert!(b.remove_edge(2, 2).is_err());
    }
}
