//! Exact minimum s,t-cuts.
//!
//! [`FlowNetwork`] runs Dinic's algorithm on integer capacities. Parallel
//! edges are folded into one capacity before the network is built, so the
//! arc count is twice the number of distinct adjacent pairs. The reported
//! source side is the set of vertices reachable from `s` in the final
//! residual graph, which is the inclusion-minimal minimum cut.
//!
//! The enumeration routines at the bottom are brute-force oracles and are
//! deliberately independent of the flow code.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{check_vertex, EdgeWeighted, VertexId};

/// Default cap on `n` for the all-pairs oracle.
pub const APMC_ORACLE_LIMIT: usize = 64;
/// Cap on `n` for exhaustive cut enumeration.
pub const ENUMERATION_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinCutResult {
    pub value: u64,
    /// Sorted, contains `s`, excludes `t`.
    pub source_side: Vec<VertexId>,
}

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: u64,
    flow: u64,
}

/// Reusable residual network over a fixed graph.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    n: usize,
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new<G: EdgeWeighted + ?Sized>(g: &G) -> Self {
        let n = g.vertex_count();
        let mut net = FlowNetwork {
            n,
            arcs: Vec::new(),
            head: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
        };
        for (u, v, w) in g.weighted_pairs() {
            // Undirected edge: two arcs, each the other's residual.
            let a = net.arcs.len();
            net.arcs.push(Arc { to: v, cap: w, flow: 0 });
            net.arcs.push(Arc { to: u, cap: w, flow: 0 });
            net.head[u].push(a);
            net.head[v].push(a + 1);
        }
        net
    }

    #[inline]
    fn residual(&self, a: usize) -> u64 {
        // Flow on the partner arc is returnable capacity.
        self.arcs[a].cap - self.arcs[a].flow + self.arcs[a ^ 1].flow
    }

    fn push(&mut self, a: usize, amount: u64) {
        let back = self.arcs[a ^ 1].flow;
        let cancel = back.min(amount);
        self.arcs[a ^ 1].flow -= cancel;
        self.arcs[a].flow += amount - cancel;
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for i in 0..self.head[v].len() {
                let a = self.head[v][i];
                let to = self.arcs[a].to;
                if self.level[to] < 0 && self.residual(a) > 0 {
                    self.level[to] = self.level[v] + 1;
                    q.push_back(to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, v: usize, t: usize, limit: u64) -> u64 {
        if v == t {
            return limit;
        }
        while self.iter[v] < self.head[v].len() {
            let a = self.head[v][self.iter[v]];
            let to = self.arcs[a].to;
            let r = self.residual(a);
            if r > 0 && self.level[to] == self.level[v] + 1 {
                let got = self.dfs(to, t, limit.min(r));
                if got > 0 {
                    self.push(a, got);
                    return got;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    /// Max flow from `s` to `t` from a zero flow, with the minimal cut.
    pub fn min_cut(&mut self, s: VertexId, t: VertexId) -> Result<MinCutResult> {
        check_vertex(self.n, s)?;
        check_vertex(self.n, t)?;
        if s == t {
            return Err(Error::InvalidInput(format!("source and sink are both {s}")));
        }
        self.arcs.iter_mut().for_each(|a| a.flow = 0);
        let mut value = 0u64;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, u64::MAX);
                if f == 0 {
                    break;
                }
                value += f;
            }
        }
        // The last BFS left level >= 0 exactly on the residual-reachable set.
        let source_side = (0..self.n).filter(|&v| self.level[v] >= 0).collect();
        Ok(MinCutResult { value, source_side })
    }
}

/// `λ(s, t)` with a witnessing source side.
pub fn min_st_cut<G: EdgeWeighted + ?Sized>(g: &G, s: VertexId, t: VertexId) -> Result<MinCutResult> {
    FlowNetwork::new(g).min_cut(s, t)
}

/// Same value as [`min_st_cut`]; the source side is guaranteed to be the
/// inclusion-minimal one. (Dinic already produces it, so this is an alias
/// kept for call sites that depend on minimality.)
pub fn minimal_min_st_cut<G: EdgeWeighted + ?Sized>(
    g: &G,
    s: VertexId,
    t: VertexId,
) -> Result<MinCutResult> {
    min_st_cut(g, s, t)
}

/// Symmetric table of `λ(s, t)` for all pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    n: usize,
    values: Vec<u64>,
}

impl LambdaTable {
    pub fn new(n: usize) -> Self {
        LambdaTable { n, values: vec![0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: VertexId, t: VertexId) -> u64 {
        self.values[s * self.n + t]
    }

    pub fn set(&mut self, s: VertexId, t: VertexId, v: u64) {
        self.values[s * self.n + t] = v;
        self.values[t * self.n + s] = v;
    }

    /// `(s, t, value)` with `s < t`, lexicographic.
    pub fn entries(&self) -> Vec<(VertexId, VertexId, u64)> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for s in 0..self.n {
            for t in s + 1..self.n {
                out.push((s, t, self.get(s, t)));
            }
        }
        out
    }

    /// First pair where the tables disagree, as `(s, t, self, other)`.
    pub fn first_difference(&self, other: &LambdaTable) -> Option<(VertexId, VertexId, u64, u64)> {
        if self.n != other.n {
            return Some((self.n, other.n, 0, 0));
        }
        self.entries()
            .into_iter()
            .find(|&(s, t, v)| other.get(s, t) != v)
            .map(|(s, t, v)| (s, t, v, other.get(s, t)))
    }
}

#[derive(Serialize, Deserialize)]
struct LambdaTableJson {
    n: usize,
    lambda: Vec<(usize, usize, u64)>,
}

impl Serialize for LambdaTable {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        LambdaTableJson { n: self.n, lambda: self.entries() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for LambdaTable {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = LambdaTableJson::deserialize(de)?;
        let mut t = LambdaTable::new(raw.n);
        for (s, u, v) in raw.lambda {
            if s >= raw.n || u >= raw.n {
                return Err(serde::de::Error::custom("pair out of range"));
            }
            t.set(s, u, v);
        }
        Ok(t)
    }
}

/// One max-flow per pair, in parallel. Refuses graphs above `limit`.
pub fn brute_force_apmc_with_limit<G: EdgeWeighted + Sync + ?Sized>(
    g: &G,
    limit: usize,
) -> Result<LambdaTable> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::LimitExceeded { what: "all-pairs oracle vertex count", limit, actual: n });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|s| (s + 1..n).map(move |t| (s, t))).collect();
    let base = FlowNetwork::new(g);
    let values: Vec<u64> = pairs
        .par_iter()
        .map_init(|| base.clone(), |net, &(s, t)| net.min_cut(s, t).map(|r| r.value))
        .collect::<Result<_>>()?;
    let mut table = LambdaTable::new(n);
    for (&(s, t), v) in pairs.iter().zip(values) {
        table.set(s, t, v);
    }
    Ok(table)
}

pub fn brute_force_apmc<G: EdgeWeighted + Sync + ?Sized>(g: &G) -> Result<LambdaTable> {
    brute_force_apmc_with_limit(g, APMC_ORACLE_LIMIT)
}

fn check_enumerable(n: usize, s: VertexId, t: VertexId) -> Result<()> {
    check_vertex(n, s)?;
    check_vertex(n, t)?;
    if s == t {
        return Err(Error::InvalidInput(format!("source and sink are both {s}")));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::LimitExceeded {
            what: "cut enumeration vertex count",
            limit: ENUMERATION_LIMIT,
            actual: n,
        });
    }
    Ok(())
}

/// Every `s`-side of `{s} ⊆ S ⊆ V \ {t}` with its cut value.
fn separating_sets<G: EdgeWeighted + ?Sized>(g: &G, s: VertexId, t: VertexId) -> Vec<(u64, Vec<bool>)> {
    let n = g.vertex_count();
    let free: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let pairs: Vec<(usize, usize, u64)> = g.weighted_pairs().collect();
    (0u64..1 << free.len())
        .map(|bits| {
            let mut inside = vec![false; n];
            inside[s] = true;
            for (i, &v) in free.iter().enumerate() {
                inside[v] = bits >> i & 1 == 1;
            }
            let cut = pairs
                .iter()
                .filter(|&&(u, v, _)| inside[u] != inside[v])
                .map(|&(_, _, w)| w)
                .sum();
            (cut, inside)
        })
        .collect()
}

/// `λ(s, t)` by exhaustive enumeration (`n <= 16`).
pub fn enumerate_lambda<G: EdgeWeighted + ?Sized>(g: &G, s: VertexId, t: VertexId) -> Result<u64> {
    check_enumerable(g.vertex_count(), s, t)?;
    Ok(separating_sets(g, s, t).into_iter().map(|(c, _)| c).min().unwrap_or(0))
}

/// All minimum `s,t`-cut sides containing `s`, each sorted, in subset order.
pub fn enumerate_min_st_cuts<G: EdgeWeighted + ?Sized>(
    g: &G,
    s: VertexId,
    t: VertexId,
) -> Result<Vec<Vec<VertexId>>> {
    check_enumerable(g.vertex_count(), s, t)?;
    let all = separating_sets(g, s, t);
    let best = all.iter().map(|(c, _)| *c).min().unwrap_or(0);
    Ok(all
        .into_iter()
        .filter(|(c, _)| *c == best)
        .map(|(_, m)| (0..m.len()).filter(|&v| m[v]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::graph::{cut_value, Multigraph};
    use crate::suite::random_multigraph;
    use proptest::prelude::*;

    #[test]
    fn min_cut_examples() {
        let g = k(4);
        for s in 0..4 {
            for t in 0..4 {
                if s != t {
                    assert_eq!(min_st_cut(&g, s, t).unwrap().value, 3);
                }
            }
        }
        assert_eq!(min_st_cut(&bowtie(), 0, 4).unwrap().value, 2);
        let r = min_st_cut(&two_triangles(), 0, 4).unwrap();
        assert_eq!((r.value, r.source_side), (0, vec![0, 1, 2]));
        assert!(min_st_cut(&g, 1, 1).is_err());
    }

    #[test]
    fn minimal_side_examples() {
        assert_eq!(minimal_min_st_cut(&k(4), 0, 1).unwrap().source_side, vec![0]);
        assert_eq!(minimal_min_st_cut(&bowtie(), 0, 4).unwrap().source_side, vec![0]);
        assert_eq!(minimal_min_st_cut(&path(4), 0, 3).unwrap().source_side, vec![0]);
    }

    #[test]
    fn apmc_oracle_examples() {
        let c5 = brute_force_apmc(&cycle(5)).unwrap();
        assert!(c5.entries().iter().all(|&(_, _, v)| v == 2));
        let k4 = brute_force_apmc(&k(4)).unwrap();
        assert!(k4.entries().iter().all(|&(_, _, v)| v == 3));
        let b = brute_force_apmc(&bowtie()).unwrap();
        assert!(b.entries().iter().all(|&(_, _, v)| v == 2));
        assert!(brute_force_apmc(&Multigraph::empty(65)).is_err());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_min_st_cuts(&path(3), 0, 2).unwrap(), vec![vec![0], vec![0, 1]]);
        // {a,c} has cut 4 in K4, so only the two extreme sides are minimum.
        assert_eq!(enumerate_min_st_cuts(&k(4), 0, 1).unwrap(), vec![vec![0], vec![0, 2, 3]]);
        let g = Multigraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(enumerate_min_st_cuts(&g, 0, 2).unwrap(), vec![vec![0, 1]]);
        assert!(enumerate_min_st_cuts(&Multigraph::empty(17), 0, 1).is_err());
    }

    #[test]
    fn lambda_table_json_roundtrip() {
        let t = brute_force_apmc(&bowtie()).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"n\":5,\"lambda\":[[0,1,2]"));
        let back: LambdaTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn flow_matches_enumeration(seed in any::<u64>(), n in 2usize..=10, p in 0.1f64..0.9) {
            let g = random_multigraph(n, p, seed);
            for s in 0..n {
                for t in s + 1..n {
                    let r = min_st_cut(&g, s, t).unwrap();
                    prop_assert_eq!(r.value, enumerate_lambda(&g, s, t).unwrap());
                    prop_assert_eq!(cut_value(&g, &r.source_side).unwrap(), r.value);
                    prop_assert!(r.source_side.contains(&s) && !r.source_side.contains(&t));
                }
            }
        }

        #[test]
        fn minimal_side_is_contained_in_every_min_cut(seed in any::<u64>(), n in 2usize..=9) {
            let g = random_multigraph(n, 0.5, seed);
            let r = minimal_min_st_cut(&g, 0, n - 1).unwrap();
            for side in enumerate_min_st_cuts(&g, 0, n - 1).unwrap() {
                prop_assert!(r.source_side.iter().all(|v| side.contains(v)));
            }
        }
    }
}
