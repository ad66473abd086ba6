//! Fully dynamic all-pairs min cut.
//!
//! Updates are grouped into epochs of `⌊√n⌋`. During the last few updates
//! of an epoch a replacement sparsifier is built from a snapshot taken
//! when that window opened, with its cost spread over the window as work
//! quanta. Updates arriving inside the window are buffered and replayed on
//! the replacement when the epoch ends. After every update the APMC
//! sparsifier and Gomory-Hu tree are rebuilt from the active sparsifier.

use serde::Serialize;

use crate::apmc::{peel_degree_one, restrict_to_core, tree_from_sparsifier};
use crate::error::{Error, Result};
use crate::flow::{brute_force_apmc, LambdaTable};
use crate::friendly::{
    build_friendly_sparsifier_with, EdgeUpdate, ExpanderDecomposer, FriendlySparsifier, Level, SlackPolicy, UpdateKind,
};
use crate::gomory_hu::GomoryHuTree;
use crate::graph::{check_vertex, ContractionMap, Multigraph, MultigraphBuilder, VertexId};
use crate::Rational;

/// Why the active sparsifier was replaced during an update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rebuild {
    /// The pending sparsifier took over at an epoch boundary.
    Swap,
    /// Small-`n` mode: rebuilt after every update.
    Synchronous,
    /// The active sparsifier ran out of update budget.
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WorkRecord {
    pub index: usize,
    pub epoch: usize,
    pub quanta: u64,
    pub hfr_edges: u64,
    pub ap_edges: usize,
    pub rebuild: Option<Rebuild>,
}

#[derive(Clone, Debug, Default)]
pub struct DynamicConfig {
    /// `None` gives an RNG-free decomposer.
    pub seed: Option<u64>,
    /// Overrides `⌊√n⌋`.
    pub epoch_len: Option<usize>,
    /// Overrides the rebuild window length.
    pub window: Option<usize>,
}

#[derive(Clone, Debug)]
struct Pending {
    snapshot: Multigraph,
    partition: ContractionMap,
    levels: Vec<Level>,
    total_quanta: u64,
    spent: u64,
    buffer: Vec<EdgeUpdate>,
}

#[derive(Clone, Debug)]
pub struct DynamicEngine {
    n: usize,
    graph: MultigraphBuilder,
    degrees: Vec<u64>,
    active: FriendlySparsifier,
    pending: Option<Pending>,
    epoch_len: usize,
    window: usize,
    cap: u64,
    synchronous: bool,
    updates_in_epoch: usize,
    epoch: usize,
    processed: usize,
    tree: GomoryHuTree,
    ap_edges: usize,
    decomposer: ExpanderDecomposer,
    work_log: Vec<WorkRecord>,
}

fn r(a: i128, b: i128) -> Rational {
    Rational::new(a, b)
}

/// `⌈√n / ln n⌉`, capped so an epoch plus its buffer fits in `cap`.
fn default_window(n: usize, epoch_len: usize, cap: u64) -> usize {
    if n < 3 {
        return 0;
    }
    let raw = ((n as f64).sqrt() / (n as f64).ln()).ceil() as usize;
    raw.min((cap as usize).saturating_sub(epoch_len))
}

impl DynamicEngine {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_config(n, DynamicConfig::default())
    }

    pub fn with_config(n: usize, cfg: DynamicConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("dynamic engine needs n >= 1".into()));
        }
        let epoch_len = cfg.epoch_len.unwrap_or((n as f64).sqrt().floor() as usize).max(1);
        let w = r(2 * n as i128, 1);
        let empty = Multigraph::empty(n);
        let active = FriendlySparsifier::identity(&empty, r(1, 6), w);
        let cap = active.update_budget();
        let window = cfg.window.unwrap_or_else(|| default_window(n, epoch_len, cap)).min(epoch_len);
        let synchronous = n < 9 || window == 0;
        let mut e = DynamicEngine {
            n,
            graph: MultigraphBuilder::new(n),
            degrees: vec![0; n],
            active,
            pending: None,
            epoch_len,
            window,
            cap,
            synchronous,
            updates_in_epoch: 0,
            epoch: 0,
            processed: 0,
            tree: GomoryHuTree::from_edges(vec![0], Vec::new())?,
            ap_edges: 0,
            decomposer: ExpanderDecomposer { seed: cfg.seed, phi: None },
            work_log: Vec::new(),
        };
        e.refresh_tree()?;
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epoch_len(&self) -> usize {
        self.epoch_len
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Updates the active sparsifier may absorb, `⌊√(2n)⌋`.
    pub fn guarantee_cap(&self) -> u64 {
        self.cap
    }

    pub fn is_synchronous(&self) -> bool {
        self.synchronous
    }

    pub fn graph(&self) -> Multigraph {
        self.graph.build()
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn active(&self) -> &FriendlySparsifier {
        &self.active
    }

    pub fn tree(&self) -> &GomoryHuTree {
        &self.tree
    }

    pub fn work_log(&self) -> &[WorkRecord] {
        &self.work_log
    }

    pub fn updates_in_epoch(&self) -> usize {
        self.updates_in_epoch
    }

    pub fn query(&self, s: VertexId, t: VertexId) -> Result<u64> {
        check_vertex(self.n, s)?;
        check_vertex(self.n, t)?;
        if s == t {
            return Err(Error::InvalidInput(format!("query needs distinct vertices, got {s} twice")));
        }
        Ok(self.tree.query(s, t)?.0)
    }

    pub fn lambda_table(&self) -> LambdaTable {
        self.tree.lambda_table()
    }

    /// First pair where the maintained tree disagrees with brute force.
    pub fn verify(&self) -> Result<Option<(VertexId, VertexId, u64, u64)>> {
        Ok(self.lambda_table().first_difference(&brute_force_apmc(&self.graph())?))
    }

    pub fn process_update(&mut self, up: EdgeUpdate) -> Result<()> {
        check_vertex(self.n, up.u)?;
        check_vertex(self.n, up.v)?;
        if up.u == up.v {
            return Err(Error::InvalidInput(format!("self-loop update at {}", up.u)));
        }
        match up.kind {
            UpdateKind::Insert => self.graph.add_edge(up.u, up.v)?,
            UpdateKind::Delete => self.graph.remove_edge(up.u, up.v)?,
        }
        let delta = |d: &mut u64| match up.kind {
            UpdateKind::Insert => *d += 1,
            UpdateKind::Delete => *d -= 1,
        };
        delta(&mut self.degrees[up.u]);
        delta(&mut self.degrees[up.v]);

        let index = self.processed;
        self.processed += 1;
        let mut quanta = 0;
        let mut rebuild = None;
        if self.synchronous {
            quanta = self.rebuild_now()?;
            rebuild = Some(Rebuild::Synchronous);
        } else {
            if self.active.update_budget_used + 1 > self.cap {
                quanta = self.rebuild_now()?;
                rebuild = Some(Rebuild::Overflow);
            } else {
                self.active.apply_update(up)?;
            }
            let window_start = self.epoch_len - self.window;
            if self.updates_in_epoch >= window_start {
                if self.updates_in_epoch == window_start {
                    // The snapshot precedes this update, which is buffered.
                    let mut snap = self.graph.clone();
                    match up.kind {
                        UpdateKind::Insert => snap.remove_edge(up.u, up.v)?,
                        UpdateKind::Delete => snap.add_edge(up.u, up.v)?,
                    }
                    self.pending = Some(self.start_pending(snap.build())?);
                }
                let step = self.updates_in_epoch - window_start;
                let pending = self.pending.as_mut().expect("window has a pending build");
                let w = self.window as u64;
                let share = pending.total_quanta * (step as u64 + 1) / w - pending.total_quanta * step as u64 / w;
                pending.spent += share;
                pending.buffer.push(up);
                quanta += share;
            }
            self.updates_in_epoch += 1;
            if self.updates_in_epoch == self.epoch_len {
                self.swap_in_pending()?;
                rebuild = Some(Rebuild::Swap);
                self.updates_in_epoch = 0;
                self.epoch += 1;
            }
        }
        self.refresh_tree()?;
        self.work_log.push(WorkRecord {
            index,
            epoch: self.epoch,
            quanta,
            hfr_edges: self.active.edge_count(),
            ap_edges: self.ap_edges,
            rebuild,
        });
        Ok(())
    }

    pub fn process_all(&mut self, ups: &[EdgeUpdate]) -> Result<()> {
        ups.iter().try_for_each(|&u| self.process_update(u))
    }

    /// Partition from Algorithm 1 on the peeled core of `g`.
    fn core_partition(&self, g: &Multigraph, alpha: Rational) -> Result<(ContractionMap, Vec<Level>)> {
        let peeling = peel_degree_one(g);
        let h = build_friendly_sparsifier_with(
            &peeling.core,
            alpha,
            self.active.w,
            r(1, 1),
            &self.decomposer,
            &SlackPolicy::Mandatory,
        )?;
        Ok((h.partition().clone(), h.levels))
    }

    fn start_pending(&self, snapshot: Multigraph) -> Result<Pending> {
        let (partition, levels) = self.core_partition(&snapshot, r(1, 24))?;
        let total_quanta = snapshot.edge_count() + self.n as u64;
        Ok(Pending { snapshot, partition, levels, total_quanta, spent: 0, buffer: Vec::new() })
    }

    fn swap_in_pending(&mut self) -> Result<()> {
        let p = self.pending.take().expect("epoch ends after its window");
        debug_assert_eq!(p.spent, p.total_quanta);
        let mut h = FriendlySparsifier::from_partition(&p.snapshot, p.partition, r(1, 24), self.active.w, r(1, 1))?;
        h.levels = p.levels;
        for &u in &p.buffer {
            h.apply_update(u)?;
        }
        self.active = h;
        Ok(())
    }

    /// Fresh sparsifier of the current graph, returning its quanta.
    fn rebuild_now(&mut self) -> Result<u64> {
        let g = self.graph.build();
        let (partition, levels) = self.core_partition(&g, r(1, 6))?;
        let mut h = FriendlySparsifier::from_partition(&g, partition, r(1, 6), self.active.w, r(1, 1))?;
        h.levels = levels;
        self.active = h;
        Ok(g.edge_count() + self.n as u64)
    }

    fn refresh_tree(&mut self) -> Result<()> {
        let peeling = peel_degree_one(&self.graph.build());
        let h = restrict_to_core(&self.active, &peeling.alive)?;
        let (ap, tree) = tree_from_sparsifier(&h, &peeling)?;
        self.ap_edges = ap.edge_count();
        self.tree = tree;
        Ok(())
    }

    /// Per-update log as CSV with a header row.
    pub fn work_log_csv(&self) -> String {
        let mut out = String::from("index,epoch,quanta,hfr_edges,ap_edges\n");
        for w in &self.work_log {
            out.push_str(&format!("{},{},{},{},{}\n", w.index, w.epoch, w.quanta, w.hfr_edges, w.ap_edges));
        }
        out
    }
}

/// Seeded script on `n` vertices: two dense communities are built,
/// joined by bridges, then the bridges are cut and edges churn. The
/// script never deletes an absent edge.
pub fn community_script(n: usize, len: usize, seed: u64) -> Vec<EdgeUpdate> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = crate::suite::rng(seed);
    let half = n / 2;
    let side = |v: usize| v < half;
    let mut inside: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| side(u) == side(v))
        .collect();
    inside.shuffle(&mut rng);
    let mut present: Vec<(usize, usize)> = Vec::new();
    let mut bridges: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::with_capacity(len);
    let build = len * 3 / 5;
    while out.len() < len {
        let i = out.len();
        if i < build {
            if i % 10 == 9 && half > 0 && half < n {
                let b = (rng.gen_range(0..half), rng.gen_range(half..n));
                bridges.push(b);
                out.push(EdgeUpdate::insert(b.0, b.1));
            } else if let Some(e) = inside.pop() {
                present.push(e);
                out.push(EdgeUpdate::insert(e.0, e.1));
            } else {
                let e = present[rng.gen_range(0..present.len())];
                present.push(e);
                out.push(EdgeUpdate::insert(e.0, e.1));
            }
        } else if let Some(b) = bridges.pop() {
            out.push(EdgeUpdate::delete(b.0, b.1));
        } else if !present.is_empty() && rng.gen_bool(0.5) {
            let e = present.swap_remove(rng.gen_range(0..present.len()));
            out.push(EdgeUpdate::delete(e.0, e.1));
        } else {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            if side(u) == side(v) {
                present.push((u.min(v), u.max(v)));
            } else {
                bridges.push((u, v));
            }
            out.push(EdgeUpdate::insert(u, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::k;
    use proptest::prelude::*;

    #[test]
    fn fresh_engines() {
        let e = DynamicEngine::new(4).unwrap();
        for s in 0..4 {
            for t in s + 1..4 {
                assert_eq!(e.query(s, t).unwrap(), 0);
            }
        }
        assert!(e.query(1, 1).is_err());
        assert!(e.query(0, 4).is_err());
        let one = DynamicEngine::new(1).unwrap();
        assert!(one.lambda_table().entries().is_empty());
        let forty = DynamicEngine::new(40).unwrap();
        assert_eq!(forty.epoch_len(), 6);
        assert_eq!(forty.guarantee_cap(), 8);
        assert_eq!(forty.window(), 2);
        assert!(!forty.is_synchronous());
        assert!(DynamicEngine::new(0).is_err());
    }

    #[test]
    fn k4_replay_then_delete() {
        let mut e = DynamicEngine::new(4).unwrap();
        for u in 0..4 {
            for v in u + 1..4 {
                e.process_update(EdgeUpdate::insert(u, v)).unwrap();
            }
        }
        assert_eq!(e.lambda_table(), crate::brute_force_apmc(&k(4)).unwrap());
        assert_eq!(e.query(0, 1).unwrap(), 3);
        e.process_update(EdgeUpdate::delete(0, 1)).unwrap();
        assert_eq!(e.query(0, 1).unwrap(), 2);
        assert_eq!(e.verify().unwrap(), None);
    }

    #[test]
    fn isolating_a_vertex_gives_zero() {
        let mut e = DynamicEngine::new(12).unwrap();
        let edges: Vec<_> = (0..12).flat_map(|u| (u + 1..12).map(move |v| (u, v))).filter(|&(u, v)| v - u <= 2).collect();
        for &(u, v) in &edges {
            e.process_update(EdgeUpdate::insert(u, v)).unwrap();
        }
        for &(u, v) in edges.iter().filter(|&&(u, v)| u == 5 || v == 5) {
            e.process_update(EdgeUpdate::delete(u, v)).unwrap();
        }
        assert_eq!(e.query(5, 0).unwrap(), 0);
        assert_eq!(e.verify().unwrap(), None);
    }

    #[test]
    fn insert_then_delete_is_a_no_op() {
        let mut e = DynamicEngine::new(10).unwrap();
        for u in 0..9 {
            e.process_update(EdgeUpdate::insert(u, u + 1)).unwrap();
            e.process_update(EdgeUpdate::insert(u, (u + 3) % 10)).unwrap();
        }
        let before = e.lambda_table();
        e.process_update(EdgeUpdate::insert(0, 5)).unwrap();
        e.process_update(EdgeUpdate::delete(0, 5)).unwrap();
        assert_eq!(e.lambda_table(), before);
    }

    #[test]
    fn absent_delete_leaves_engine_unchanged() {
        let mut e = DynamicEngine::new(10).unwrap();
        e.process_update(EdgeUpdate::insert(0, 1)).unwrap();
        let log = e.work_log().len();
        assert!(e.process_update(EdgeUpdate::delete(2, 3)).is_err());
        assert!(e.process_update(EdgeUpdate::insert(4, 4)).is_err());
        assert_eq!(e.work_log().len(), log);
        assert_eq!(e.degrees()[2], 0);
        assert_eq!(e.graph().edge_count(), 1);
    }

    #[test]
    fn epochs_and_quanta() {
        let ups = community_script(40, 120, 1);
        let mut e = DynamicEngine::new(40).unwrap();
        for &u in &ups {
            e.process_update(u).unwrap();
            assert!(e.updates_in_epoch() < e.epoch_len());
            assert!(e.active().update_budget_used <= e.guarantee_cap());
            assert!(e.active().update_budget_used as usize <= 2 * e.epoch_len());
        }
        let log = e.work_log();
        assert!(log.iter().all(|w| w.rebuild != Some(Rebuild::Overflow)));
        let swaps = log.iter().filter(|w| w.rebuild == Some(Rebuild::Swap)).count();
        assert_eq!(swaps, 120 / 6);
        // Quanta appear only in the last two updates of each epoch.
        for w in log {
            if w.index % 6 < 4 {
                assert_eq!(w.quanta, 0);
            }
        }
        assert_eq!(e.verify().unwrap(), None);
    }

    #[test]
    fn overflow_triggers_synchronous_rebuild() {
        let cfg = DynamicConfig { seed: None, epoch_len: Some(20), window: Some(2) };
        let mut e = DynamicEngine::with_config(16, cfg).unwrap();
        assert_eq!(e.guarantee_cap(), 5);
        for &u in &community_script(16, 30, 4) {
            e.process_update(u).unwrap();
            assert!(e.active().update_budget_used <= e.guarantee_cap());
        }
        assert!(e.work_log().iter().any(|w| w.rebuild == Some(Rebuild::Overflow)));
        assert_eq!(e.verify().unwrap(), None);
    }

    #[test]
    fn small_graphs_rebuild_every_update() {
        let mut e = DynamicEngine::new(8).unwrap();
        assert!(e.is_synchronous());
        e.process_update(EdgeUpdate::insert(0, 1)).unwrap();
        assert_eq!(e.work_log()[0].rebuild, Some(Rebuild::Synchronous));
        assert_eq!(e.active().update_budget_used, 0);
    }

    #[test]
    fn csv_has_expected_columns() {
        let mut e = DynamicEngine::new(10).unwrap();
        e.process_update(EdgeUpdate::insert(0, 1)).unwrap();
        let csv = e.work_log_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("index,epoch,quanta,hfr_edges,ap_edges"));
        assert_eq!(lines.next(), Some("0,0,0,1,0"));
    }

    #[test]
    fn script_is_valid() {
        let ups = community_script(40, 500, 9);
        assert_eq!(ups.len(), 500);
        let mut b = MultigraphBuilder::new(40);
        for u in ups {
            match u.kind {
                UpdateKind::Insert => b.add_edge(u.u, u.v).unwrap(),
                UpdateKind::Delete => b.remove_edge(u.u, u.v).unwrap(),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn exact_after_every_update(n in 9usize..16, seed in 0u64..1000) {
            let mut e = DynamicEngine::new(n).unwrap();
            for u in community_script(n, 40, seed) {
                e.process_update(u).unwrap();
                prop_assert_eq!(e.verify().unwrap(), None);
            }
        }
    }
}
