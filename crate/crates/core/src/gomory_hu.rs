//! Gomory-Hu trees.
//!
//! Graphs use Gusfield's construction: `|T| - 1` max-flows on the original
//! graph, no contraction. The classic contraction-based construction is
//! also here, written against a generic [`SeparationOracle`]. It serves as
//! an independent check on small graphs and builds trees for symmetric
//! submodular functions, where separation is brute-force minimization.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flow::{FlowNetwork, LambdaTable};
use crate::graph::{check_vertex, EdgeWeighted, Multigraph, VertexId};
use crate::Rational;

/// Spanning tree on `vertices`; the path minimum between two vertices is
/// their separation value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GomoryHuTree<W = u64> {
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId, W)>,
    calls: u64,
}

impl<W: Copy + Ord> GomoryHuTree<W> {
    /// Builds from explicit edges, checking that they span `vertices`.
    pub fn from_edges(mut vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId, W)>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if edges.len() + 1 != vertices.len().max(1) {
            return Err(Error::InvalidInput(format!(
                "a tree on {} vertices needs {} edges, got {}",
                vertices.len(),
                vertices.len().saturating_sub(1),
                edges.len()
            )));
        }
        let t = GomoryHuTree { vertices, edges, calls: 0 };
        for &(u, v, _) in &t.edges {
            t.position(u)?;
            t.position(v)?;
        }
        let adj = t.adjacency();
        if !t.vertices.is_empty() {
            let mut seen = vec![false; t.vertices.len()];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(i) = stack.pop() {
                for &(j, _) in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            if seen.iter().any(|&b| !b) {
                return Err(Error::InvalidInput("tree edges do not connect all vertices".into()));
            }
        }
        Ok(t)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, W)] {
        &self.edges
    }

    /// Separation calls (max-flows or oracle minimizations) spent building.
    pub fn construction_calls(&self) -> u64 {
        self.calls
    }

    fn position(&self, v: VertexId) -> Result<usize> {
        self.vertices
            .binary_search(&v)
            .map_err(|_| Error::InvalidInput(format!("vertex {v} is not in the tree")))
    }

    /// Adjacency by position: `(neighbor position, edge index)`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (e, &(u, v, _)) in self.edges.iter().enumerate() {
            let (a, b) = (self.position(u).expect("checked"), self.position(v).expect("checked"));
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    /// Minimum edge weight on the tree path, and the side of `s` after
    /// removing that edge (sorted).
    pub fn query(&self, s: VertexId, t: VertexId) -> Result<(W, Vec<VertexId>)> {
        let (a, b) = (self.position(s)?, self.position(t)?);
        if a == b {
            return Err(Error::InvalidInput(format!("query needs two distinct vertices, got {s} twice")));
        }
        let adj = self.adjacency();
        let mut via: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut q = VecDeque::from([a]);
        let mut seen = vec![false; self.vertices.len()];
        seen[a] = true;
        while let Some(i) = q.pop_front() {
            for &(j, e) in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    via[j] = Some((i, e));
                    q.push_back(j);
                }
            }
        }
        let mut best: Option<usize> = None;
        let mut cur = b;
        while let Some((prev, e)) = via[cur] {
            // Ties keep the edge nearest t, which is deterministic.
            if best.is_none_or(|x| self.edges[e].2 < self.edges[x].2) {
                best = Some(e);
            }
            cur = prev;
        }
        let e = best.expect("tree is connected");
        let mut side = vec![false; self.vertices.len()];
        side[a] = true;
        let mut stack = vec![a];
        while let Some(i) = stack.pop() {
            for &(j, f) in &adj[i] {
                if f != e && !side[j] {
                    side[j] = true;
                    stack.push(j);
                }
            }
        }
        let set = (0..self.vertices.len()).filter(|&i| side[i]).map(|i| self.vertices[i]).collect();
        Ok((self.edges[e].2, set))
    }

    /// Path-minimum value for every pair, by position in [`Self::vertices`].
    pub fn path_min_matrix(&self) -> Vec<Vec<Option<W>>> {
        let k = self.vertices.len();
        let adj = self.adjacency();
        let mut out = vec![vec![None; k]; k];
        for (root, row) in out.iter_mut().enumerate() {
            let mut stack = vec![(root, None::<W>)];
            let mut seen = vec![false; k];
            seen[root] = true;
            while let Some((i, m)) = stack.pop() {
                row[i] = m;
                for &(j, e) in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        let w = self.edges[e].2;
                        stack.push((j, Some(m.map_or(w, |x| x.min(w)))));
                    }
                }
            }
        }
        out
    }
}

impl GomoryHuTree<u64> {
    /// All-pairs table over `0..n`; the tree must span exactly `0..n`.
    pub fn lambda_table(&self) -> LambdaTable {
        let n = self.vertices.len();
        debug_assert!(self.vertices.iter().enumerate().all(|(i, &v)| i == v));
        let m = self.path_min_matrix();
        let mut t = LambdaTable::new(n);
        for (s, row) in m.iter().enumerate() {
            for (u, w) in row.iter().enumerate().skip(s + 1) {
                t.set(s, u, w.unwrap_or(0));
            }
        }
        t
    }
}

impl<W: Serialize> Serialize for GomoryHuTree<W> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a, W> {
            edges: &'a [(VertexId, VertexId, W)],
        }
        Json { edges: &self.edges }.serialize(ser)
    }
}

/// Gusfield's construction over all vertices of `g`.
pub fn build_gomory_hu<G: EdgeWeighted + ?Sized>(g: &G) -> GomoryHuTree<u64> {
    let all: Vec<_> = (0..g.vertex_count()).collect();
    build_gomory_hu_terminals(g, &all).expect("all vertices are valid terminals")
}

/// Gusfield's construction restricted to `terminals`: the tree spans the
/// terminals and its path minima are `λ_g` between them. Cuts are taken
/// in the whole graph.
pub fn build_gomory_hu_terminals<G: EdgeWeighted + ?Sized>(
    g: &G,
    terminals: &[VertexId],
) -> Result<GomoryHuTree<u64>> {
    let mut terms = terminals.to_vec();
    terms.sort_unstable();
    terms.dedup();
    for &v in &terms {
        check_vertex(g.vertex_count(), v)?;
    }
    if terms.len() <= 1 {
        return GomoryHuTree::from_edges(terms, Vec::new());
    }
    let n = g.vertex_count();
    let mut net = FlowNetwork::new(g);
    let root = terms[0];
    let mut parent = vec![root; n];
    let mut flow = vec![0u64; n];
    for &s in &terms[1..] {
        let t = parent[s];
        let cut = net.min_cut(s, t)?;
        let mut inside = vec![false; n];
        for &v in &cut.source_side {
            inside[v] = true;
        }
        flow[s] = cut.value;
        for &i in &terms {
            if i != s && inside[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        // The root is its own parent and never inside, so it never swaps.
        if inside[parent[t]] {
            parent[s] = parent[t];
            parent[t] = s;
            flow[s] = flow[t];
            flow[t] = cut.value;
        }
    }
    let edges = terms
        .iter()
        .filter(|&&v| parent[v] != v)
        .map(|&v| (v, parent[v], flow[v]))
        .collect();
    let mut tree = GomoryHuTree::from_edges(terms.clone(), edges)?;
    tree.calls = terms.len() as u64 - 1;
    Ok(tree)
}

/// Minimum separation between `items[s]` and `items[t]` where each item is
/// a group of ground elements treated as one (a contracted node).
pub trait SeparationOracle {
    type W: Copy + Ord;
    fn ground_size(&self) -> usize;
    /// Returns the value and a membership mask over `items` containing `s`
    /// and not `t`.
    fn separate(&self, items: &[Vec<VertexId>], s: usize, t: usize) -> Result<(Self::W, Vec<bool>)>;
}

/// Max-flow separation on a graph with the items contracted.
pub struct GraphSeparation<'a, G: ?Sized>(pub &'a G);

impl<G: EdgeWeighted + ?Sized> SeparationOracle for GraphSeparation<'_, G> {
    type W = u64;

    fn ground_size(&self) -> usize {
        self.0.vertex_count()
    }

    fn separate(&self, items: &[Vec<VertexId>], s: usize, t: usize) -> Result<(u64, Vec<bool>)> {
        let mut label = vec![0; self.0.vertex_count()];
        for (i, item) in items.iter().enumerate() {
            for &v in item {
                label[v] = i;
            }
        }
        let e: Vec<_> = self
            .0
            .weighted_pairs()
            .filter(|&(u, v, _)| label[u] != label[v])
            .map(|(u, v, w)| (label[u], label[v], w))
            .collect();
        let c = crate::graph::WeightedGraph::from_weighted_edges(items.len(), &e)?;
        let r = FlowNetwork::new(&c).min_cut(s, t)?;
        let mut mask = vec![false; items.len()];
        for v in r.source_side {
            mask[v] = true;
        }
        Ok((r.value, mask))
    }
}

/// Classic Gomory-Hu construction by repeated splitting of tree nodes,
/// with contraction of the subtrees hanging off the node being split.
pub fn build_gomory_hu_classic<O: SeparationOracle>(oracle: &O) -> Result<GomoryHuTree<O::W>> {
    let n = oracle.ground_size();
    if n <= 1 {
        return GomoryHuTree::from_edges((0..n).collect(), Vec::new());
    }
    // Tree over supernodes.
    let mut nodes: Vec<Vec<VertexId>> = vec![(0..n).collect()];
    let mut tree: Vec<(usize, usize, O::W)> = Vec::new();
    let mut calls = 0u64;
    while let Some(x) = nodes.iter().position(|s| s.len() >= 2) {
        let (s, t) = (nodes[x][0], nodes[x][1]);
        // Components of the tree with node x removed, keyed by the
        // neighbor of x they contain.
        let mut adj = vec![Vec::new(); nodes.len()];
        for (e, &(a, b, _)) in tree.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        let mut comp = vec![usize::MAX; nodes.len()];
        // Tree edge joining x to each branch.
        let mut branches: Vec<usize> = Vec::new();
        for &(nb, e) in &adj[x] {
            let id = branches.len();
            branches.push(e);
            let mut stack = vec![nb];
            comp[nb] = id;
            while let Some(i) = stack.pop() {
                for &(j, _) in &adj[i] {
                    if j != x && comp[j] == usize::MAX {
                        comp[j] = id;
                        stack.push(j);
                    }
                }
            }
        }
        // Items: members of x singly, then one item per branch.
        let mut items: Vec<Vec<VertexId>> = nodes[x].iter().map(|&v| vec![v]).collect();
        let base = items.len();
        items.extend((0..branches.len()).map(|_| Vec::new()));
        for (node, &c) in comp.iter().enumerate() {
            if c != usize::MAX {
                items[base + c].extend(nodes[node].iter().copied());
            }
        }
        let (value, mask) = oracle.separate(&items, 0, 1)?;
        calls += 1;
        let (mut xs, mut xt) = (Vec::new(), Vec::new());
        for (i, &v) in nodes[x].iter().enumerate() {
            if mask[i] {
                xs.push(v);
            } else {
                xt.push(v);
            }
        }
        debug_assert!(xs.contains(&s) && xt.contains(&t));
        nodes[x] = xs;
        let y = nodes.len();
        nodes.push(xt);
        for (c, &e) in branches.iter().enumerate() {
            if !mask[base + c] {
                let (a, b, w) = tree[e];
                tree[e] = if a == x { (y, b, w) } else { (a, y, w) };
            }
        }
        tree.push((x, y, value));
    }
    let edges = tree.into_iter().map(|(a, b, w)| (nodes[a][0], nodes[b][0], w)).collect();
    let mut out = GomoryHuTree::from_edges((0..n).collect(), edges)?;
    out.calls = calls;
    Ok(out)
}

/// Largest ground set for brute-force separating minimization.
pub const SFM_LIMIT: usize = 16;
/// Largest ground set for the submodular tree builder.
pub const SUBMODULAR_TREE_LIMIT: usize = 12;

type SetFn = dyn Fn(&[bool]) -> Rational + Send + Sync;

/// Set function on `0..ground_size` with call accounting. Values are
/// normalized so that `f(∅) = 0`.
#[derive(Clone)]
pub struct SubmodularOracle {
    ground: usize,
    f: Arc<SetFn>,
    offset: Rational,
    calls: Arc<AtomicU64>,
}

impl std::fmt::Debug for SubmodularOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubmodularOracle")
            .field("ground", &self.ground)
            .field("calls", &self.call_count())
            .finish()
    }
}

impl SubmodularOracle {
    pub fn new(ground: usize, f: impl Fn(&[bool]) -> Rational + Send + Sync + 'static) -> Self {
        let offset = f(&vec![false; ground]);
        SubmodularOracle { ground, f: Arc::new(f), offset, calls: Arc::new(AtomicU64::new(0)) }
    }

    /// The cut function of a graph.
    pub fn graph_cut(g: &Multigraph) -> Self {
        let g = g.clone();
        SubmodularOracle::new(g.n(), move |s| Rational::from_integer(g.cut_of_mask(s) as i128))
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn call_count(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    /// `f(S) - f(∅)`; counts one call.
    pub fn evaluate(&self, set: &[bool]) -> Rational {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.f)(set) - self.offset
    }

    fn random_set(&self, r: &mut rand_chacha::ChaCha8Rng) -> Vec<bool> {
        use rand::Rng;
        (0..self.ground).map(|_| r.gen_bool(0.5)).collect()
    }

    /// Checks `f(S) = f(V \ S)` on sampled sets and on `∅` vs `V`.
    pub fn check_symmetric(&self, samples: usize, seed: u64) -> bool {
        let mut r = crate::suite::rng(seed);
        let full = vec![true; self.ground];
        if self.evaluate(&full) != Rational::from_integer(0) {
            return false;
        }
        (0..samples).all(|_| {
            let s = self.random_set(&mut r);
            let c: Vec<bool> = s.iter().map(|b| !b).collect();
            self.evaluate(&s) == self.evaluate(&c)
        })
    }

    /// Checks `f(A) + f(B) >= f(A ∪ B) + f(A ∩ B)` on sampled pairs.
    pub fn check_submodular(&self, samples: usize, seed: u64) -> bool {
        let mut r = crate::suite::rng(seed);
        (0..samples).all(|_| {
            let a = self.random_set(&mut r);
            let b = self.random_set(&mut r);
            let union: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x || *y).collect();
            let inter: Vec<bool> = a.iter().zip(&b).map(|(x, y)| *x && *y).collect();
            self.evaluate(&a) + self.evaluate(&b) >= self.evaluate(&union) + self.evaluate(&inter)
        })
    }
}

/// Brute-force `min { f(S) : s ∈ S, t ∉ S }`, first minimizer in subset
/// order.
pub fn sfm_separating(f: &SubmodularOracle, s: VertexId, t: VertexId) -> Result<(Rational, Vec<VertexId>)> {
    let n = f.ground_size();
    check_vertex(n, s)?;
    check_vertex(n, t)?;
    if s == t {
        return Err(Error::InvalidInput(format!("s and t are both {s}")));
    }
    if n > SFM_LIMIT {
        return Err(Error::LimitExceeded { what: "submodular minimization ground size", limit: SFM_LIMIT, actual: n });
    }
    let items: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let (value, mask) = SubmodularSeparation(f).separate(&items, s, t)?;
    Ok((value, (0..n).filter(|&v| mask[v]).collect()))
}

struct SubmodularSeparation<'a>(&'a SubmodularOracle);

impl SeparationOracle for SubmodularSeparation<'_> {
    type W = Rational;

    fn ground_size(&self) -> usize {
        self.0.ground_size()
    }

    fn separate(&self, items: &[Vec<VertexId>], s: usize, t: usize) -> Result<(Rational, Vec<bool>)> {
        let k = items.len();
        let free: Vec<usize> = (0..k).filter(|&i| i != s && i != t).collect();
        let mut best: Option<(Rational, Vec<bool>)> = None;
        for bits in 0u64..1 << free.len() {
            let mut mask = vec![false; k];
            mask[s] = true;
            for (j, &i) in free.iter().enumerate() {
                mask[i] = bits >> j & 1 == 1;
            }
            let mut set = vec![false; self.0.ground_size()];
            for (i, item) in items.iter().enumerate() {
                if mask[i] {
                    for &v in item {
                        set[v] = true;
                    }
                }
            }
            let val = self.0.evaluate(&set);
            if best.as_ref().is_none_or(|(b, _)| val < *b) {
                best = Some((val, mask));
            }
        }
        Ok(best.expect("at least one separating set"))
    }
}

/// Gomory-Hu tree of a symmetric submodular function by the classic
/// construction over brute-force separation. The oracle's call counter
/// records the total evaluations.
pub fn build_gomory_hu_submodular(f: &SubmodularOracle) -> Result<GomoryHuTree<Rational>> {
    let n = f.ground_size();
    if n > SUBMODULAR_TREE_LIMIT {
        return Err(Error::LimitExceeded {
            what: "submodular tree ground size",
            limit: SUBMODULAR_TREE_LIMIT,
            actual: n,
        });
    }
    build_gomory_hu_classic(&SubmodularSeparation(f))
}
