//! `cutforge` command-line tool.
//!
//! Exit codes: 0 on success, 1 on bad input or any other error, 2 when a
//! verification step finds a mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cutforge_core::apmc::apmc_pipeline_detailed;
use cutforge_core::dynamic::{community_script, DynamicConfig, DynamicEngine};
use cutforge_core::friendly::ExpanderDecomposer;
use cutforge_core::gomory_hu::{
    build_gomory_hu_classic, build_gomory_hu_submodular, GraphSeparation, SubmodularOracle,
};
use cutforge_core::harness::{generate_kl98_with, Junction};
use cutforge_core::io::{
    format_edge_list, format_update_script, read_edge_list, read_update_script, UpdateScript,
};
use cutforge_core::streaming::{
    pass_one, space_csv, two_pass_apmc, EstimatorKind, LevelRule, SpaceRow, StreamConfig,
};
use cutforge_core::suite::{clustered_multigraph, random_cluster_spec, random_multigraph};
use cutforge_core::{
    brute_force_apmc, build_gomory_hu, cut_query_apmc_demo, CutQueryOracle, GomoryHuTree, LambdaTable, Multigraph,
};

#[derive(Parser)]
#[command(name = "cutforge", version, about = "Exact cut sparsifiers and all-pairs minimum cuts")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "CUTFORGE_SEED", default_value_t = 0)]
    seed: u64,
    /// Use the RNG-free decomposer everywhere.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the all-pairs-min-cut sparsifier of an edge list.
    Apmc(ApmcArgs),
    /// Gomory-Hu tree of an edge list.
    Ghtree(GhArgs),
    /// Replay an update script through the dynamic engine.
    Dynamic(DynamicArgs),
    /// Run the streaming pipeline over an update script.
    Stream(StreamArgs),
    /// Recover the λ table through cut queries only.
    Oracle(OracleArgs),
    /// Generate graphs and scripts.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compare every pipeline against brute force on one graph.
    Verify(VerifyArgs),
    /// Time the pipelines on generated graphs.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ApmcArgs {
    #[arg(long)]
    input: PathBuf,
    /// Sparsifier JSON destination.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Gomory-Hu tree JSON destination.
    #[arg(long)]
    tree_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GhMethod {
    /// Gusfield on the input graph.
    Gusfield,
    /// Classic contraction construction.
    Classic,
    /// Classic construction over the cut function as a submodular oracle.
    Submodular,
    /// Through the all-pairs-min-cut sparsifier.
    Apmc,
}

#[derive(Args)]
struct GhArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = GhMethod::Gusfield)]
    method: GhMethod,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DynamicArgs {
    #[arg(long)]
    script: PathBuf,
    /// Compare against brute force after every update.
    #[arg(long)]
    verify: bool,
    /// Per-update CSV work log destination.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Estimator {
    Exact,
    Sketch,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Ratio,
    Printed,
}

#[derive(Args)]
struct StreamArgs {
    #[arg(long)]
    script: PathBuf,
    /// 1 prints the pass-one partition only; 2 runs the whole pipeline.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    passes: u8,
    /// Print the per-pass space CSV.
    #[arg(long)]
    space_report: bool,
    /// Power-cut samples per level.
    #[arg(long)]
    samples: Option<usize>,
    /// Declared bound on net edges.
    #[arg(long)]
    max_edges: Option<u64>,
    #[arg(long, value_enum, default_value_t = Estimator::Exact)]
    estimator: Estimator,
    #[arg(long, value_enum, default_value_t = Rule::Ratio)]
    level_rule: Rule,
    /// Compare the result against brute force.
    #[arg(long)]
    verify: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    /// Query transcript JSON destination.
    #[arg(long)]
    transcript: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Layered hard instance.
    Kl98 {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = JunctionArg::Biregular)]
        junction: JunctionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simple G(n, p).
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense blobs of parallel edges joined by sparse bridges.
    Clustered {
        /// Target vertex count; the result may be up to two vertices short.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-community update script.
    Script {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum JunctionArg {
    Biregular,
    Uniform,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Vertex counts to time.
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 32, 64])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.3)]
    p: f64,
}

/// Non-error outcome of a command.
enum Status {
    Ok,
    Mismatch,
}

struct Ctx {
    seed: u64,
    deterministic: bool,
    json: bool,
}

impl Ctx {
    fn decomposer(&self) -> ExpanderDecomposer {
        ExpanderDecomposer { seed: (!self.deterministic).then_some(self.seed), phi: None }
    }

    fn decomposer_seed(&self) -> Option<u64> {
        (!self.deterministic).then_some(self.seed)
    }

    fn emit(&self, value: serde_json::Value, text: impl FnOnce() -> String) {
        if self.json {
            write_stdout(&(serde_json::to_string_pretty(&value).expect("JSON value") + "\n"));
        } else {
            write_stdout(&text());
        }
    }
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn write_stdout(s: &str) {
    use std::io::Write;
    let mut lock = std::io::stdout().lock();
    if let Err(e) = lock.write_all(s.as_bytes()).and_then(|_| lock.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(1);
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(value)?;
    std::fs::write(path, s + "\n").with_context(|| format!("writing {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Multigraph> {
    read_edge_list(path).with_context(|| format!("reading {}", path.display()))
}

fn read_script(path: &Path) -> Result<UpdateScript> {
    read_update_script(path).with_context(|| format!("reading {}", path.display()))
}

fn table_json(t: &LambdaTable) -> serde_json::Value {
    json!(t.entries())
}

fn table_text(t: &LambdaTable) -> String {
    t.entries().iter().map(|(s, u, v)| format!("{s} {u} {v}\n")).collect()
}

fn tree_text(t: &GomoryHuTree) -> String {
    t.edges().iter().map(|(u, v, w)| format!("{u} {v} {w}\n")).collect()
}

fn mismatch(expect: &LambdaTable, got: &LambdaTable) -> Option<String> {
    got.first_difference(expect).map(|(s, t, g, e)| format!("λ({s},{t}) = {g}, brute force {e}"))
}

fn cmd_apmc(ctx: &Ctx, a: &ApmcArgs) -> Result<Status> {
    let g = read_graph(&a.input)?;
    let out = apmc_pipeline_detailed(&g, &ctx.decomposer())?;
    if let Some(p) = &a.out {
        write_json(p, &out.apmc)?;
    }
    if let Some(p) = &a.tree_out {
        write_json(p, &out.tree)?;
    }
    let report = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "core_vertices": out.peeling.core_vertices().len(),
        "super_vertices": out.sparsifier.partition().len(),
        "levels": out.sparsifier.levels.len(),
        "hfr_edges": out.sparsifier.edges().len(),
        "ap_edges": out.apmc.edge_count(),
        "proxies": out.apmc.proxy_count(),
    });
    ctx.emit(report, || {
        format!(
            "n {}  m {}  super-vertices {}  |E_fr| {}  |E_ap| {}  proxies {}\n",
            g.n(),
            g.edge_count(),
            out.sparsifier.partition().len(),
            out.sparsifier.edges().len(),
            out.apmc.edge_count(),
            out.apmc.proxy_count()
        )
    });
    Ok(Status::Ok)
}

fn cmd_ghtree(ctx: &Ctx, a: &GhArgs) -> Result<Status> {
    let g = read_graph(&a.input)?;
    let (tree, calls) = match a.method {
        GhMethod::Gusfield => (build_gomory_hu(&g), None),
        GhMethod::Classic => (build_gomory_hu_classic(&GraphSeparation(&g))?, None),
        GhMethod::Submodular => {
            let f = SubmodularOracle::graph_cut(&g);
            let t = build_gomory_hu_submodular(&f)?;
            let edges = t
                .edges()
                .iter()
                .map(|&(u, v, w)| {
                    if !w.is_integer() || *w.numer() < 0 {
                        bail!("non-integral tree weight {w}");
                    }
                    Ok((u, v, w.to_integer() as u64))
                })
                .collect::<Result<Vec<_>>>()?;
            (GomoryHuTree::from_edges(t.vertices().to_vec(), edges)?, Some(f.call_count()))
        }
        GhMethod::Apmc => (apmc_pipeline_detailed(&g, &ctx.decomposer())?.tree, None),
    };
    if let Some(p) = &a.out {
        write_json(p, &tree)?;
    }
    let mut report = serde_json::to_value(&tree)?;
    if let Some(c) = calls {
        report["oracle_calls"] = json!(c);
    }
    ctx.emit(report, || {
        let mut s = tree_text(&tree);
        if let Some(c) = calls {
            s.push_str(&format!("# oracle calls {c}\n"));
        }
        s
    });
    Ok(Status::Ok)
}

fn cmd_dynamic(ctx: &Ctx, a: &DynamicArgs) -> Result<Status> {
    let script = read_script(&a.script)?;
    let n = script.vertex_count().max(1);
    let mut e = DynamicEngine::with_config(n, DynamicConfig { seed: ctx.decomposer_seed(), ..DynamicConfig::default() })?;
    let mut bad = None;
    for (i, &up) in script.updates.iter().enumerate() {
        e.process_update(up).with_context(|| format!("update {} ({up})", i + 1))?;
        if a.verify && bad.is_none() {
            if let Some((s, t, got, want)) = e.verify()? {
                bad = Some(format!("after update {}: λ({s},{t}) = {got}, brute force {want}", i + 1));
            }
        }
    }
    if let Some(p) = &a.log {
        write_text(p, &e.work_log_csv())?;
    }
    let table = e.lambda_table();
    let report = json!({
        "n": n,
        "updates": script.updates.len(),
        "epoch_len": e.epoch_len(),
        "window": e.window(),
        "verified": a.verify,
        "mismatch": bad,
        "lambda": table_json(&table),
        "work_log": e.work_log(),
    });
    ctx.emit(report, || {
        let mut s = format!("n {n}  updates {}  epoch {}  window {}\n", script.updates.len(), e.epoch_len(), e.window());
        if a.verify && bad.is_none() {
            s.push_str("verified after every update\n");
        }
        s + &table_text(&table)
    });
    if let Some(b) = bad {
        eprintln!("verification failed: {b}");
        return Ok(Status::Mismatch);
    }
    Ok(Status::Ok)
}

fn cmd_stream(ctx: &Ctx, a: &StreamArgs) -> Result<Status> {
    let script = read_script(&a.script)?;
    let n = script.vertex_count();
    let cfg = StreamConfig {
        samples_per_level: a.samples,
        max_edges: a.max_edges,
        estimator: match a.estimator {
            Estimator::Exact => EstimatorKind::Exact,
            Estimator::Sketch => EstimatorKind::Sketch,
        },
        level_rule: match a.level_rule {
            Rule::Ratio => LevelRule::Ratio,
            Rule::Printed => LevelRule::Printed,
        },
        seed: ctx.seed,
        decomposer_seed: ctx.decomposer_seed(),
        ..StreamConfig::default()
    };
    let stream = &script.updates;
    let (partition, levels, space, tree): (_, _, Vec<SpaceRow>, _) = if a.passes == 1 {
        let one = pass_one(n, stream, &cfg)?;
        (one.partition, one.levels, one.space, None)
    } else {
        let out = two_pass_apmc(n, stream, &cfg)?;
        let space = out.space();
        (out.pass_one.partition, out.pass_one.levels, space, Some(out.tree))
    };
    let mut bad = None;
    if a.verify {
        let truth = brute_force_apmc(&cutforge_core::streaming::net_graph(n, stream)?)?;
        match &tree {
            Some(t) => bad = mismatch(&truth, &t.lambda_table()),
            None => bail!("--verify needs --passes 2"),
        }
    }
    let report = json!({
        "n": n,
        "passes": a.passes,
        "partition": partition.groups(),
        "levels": levels,
        "space": space,
        "tree": tree,
        "mismatch": bad,
    });
    ctx.emit(report, || {
        let mut s = format!("n {n}  super-vertices {}  levels {}\n", partition.len(), levels.len());
        if a.space_report {
            s.push_str(&space_csv(&space));
        }
        if let Some(t) = &tree {
            s.push_str(&tree_text(t));
        }
        s
    });
    if let Some(b) = bad {
        eprintln!("verification failed: {b}");
        return Ok(Status::Mismatch);
    }
    Ok(Status::Ok)
}

fn cmd_oracle(ctx: &Ctx, a: &OracleArgs) -> Result<Status> {
    let g = read_graph(&a.input)?;
    let o = CutQueryOracle::with_transcript(g.clone());
    let out = cut_query_apmc_demo(&o)?;
    if let Some(p) = &a.transcript {
        write_json(p, &o.transcript())?;
    }
    let bad = mismatch(&brute_force_apmc(&g)?, &out.tree.lambda_table());
    ctx.emit(json!({ "report": out.report, "tree": out.tree, "mismatch": bad }), || {
        let r = &out.report;
        format!(
            "queries {} (degrees {}, edges {})  pairs probed {}  partition from offline stand-in\n{}",
            r.total_queries,
            r.degree_queries,
            r.edge_queries,
            r.pairs_probed,
            tree_text(&out.tree)
        )
    });
    if let Some(b) = bad {
        eprintln!("verification failed: {b}");
        return Ok(Status::Mismatch);
    }
    Ok(Status::Ok)
}

fn emit_graph(ctx: &Ctx, g: &Multigraph, out: &Option<PathBuf>, extra: serde_json::Value) -> Result<()> {
    let text = format_edge_list(g);
    match out {
        Some(p) => {
            write_text(p, &text)?;
            let mut report = json!({ "n": g.n(), "edges": g.edge_count(), "file": p });
            if let (Some(r), Some(x)) = (report.as_object_mut(), extra.as_object()) {
                r.extend(x.clone());
            }
            ctx.emit(report.clone(), || {
                let extras: String = extra.as_object().into_iter().flatten().map(|(k, v)| format!("  {k} {v}")).collect();
                format!("wrote {} (n {}, m {}){extras}\n", p.display(), g.n(), g.edge_count())
            });
        }
        None => write_stdout(&text),
    }
    Ok(())
}

fn cmd_gen(ctx: &Ctx, g: &GenCommand) -> Result<Status> {
    match g {
        GenCommand::Kl98 { n, junction, out } => {
            let j = match junction {
                JunctionArg::Biregular => Junction::Biregular,
                JunctionArg::Uniform => Junction::Uniform,
            };
            let inst = generate_kl98_with(*n, ctx.seed, j)?;
            let extra = json!({ "phi": inst.phi, "s": inst.s, "t": inst.t, "layers": inst.layers.len() });
            if out.is_none() {
                eprintln!("phi {}", inst.phi);
            }
            emit_graph(ctx, &inst.graph, out, extra)?;
        }
        GenCommand::Random { n, p, out } => {
            if !(0.0..=1.0).contains(p) {
                bail!("p must lie in [0, 1], got {p}");
            }
            emit_graph(ctx, &random_multigraph(*n, *p, ctx.seed), out, json!({}))?;
        }
        GenCommand::Clustered { n, out } => {
            emit_graph(ctx, &clustered_multigraph(&random_cluster_spec(*n, ctx.seed), ctx.seed), out, json!({}))?;
        }
        GenCommand::Script { n, len, out } => {
            let text = format_update_script(&UpdateScript { n: Some(*n), updates: community_script(*n, *len, ctx.seed) });
            match out {
                Some(p) => {
                    write_text(p, &text)?;
                    ctx.emit(json!({ "n": n, "updates": len, "file": p }), || format!("wrote {} ({len} updates)\n", p.display()));
                }
                None => write_stdout(&text),
            }
        }
    }
    Ok(Status::Ok)
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Status> {
    let g = read_graph(&a.input)?;
    let truth = brute_force_apmc(&g)?;
    let mut checks: Vec<(&str, Option<String>)> = vec![
        ("gusfield", mismatch(&truth, &build_gomory_hu(&g).lambda_table())),
        ("apmc", mismatch(&truth, &apmc_pipeline_detailed(&g, &ctx.decomposer())?.tree.lambda_table())),
    ];
    if g.n() <= cutforge_core::harness::DEMO_LIMIT {
        let o = CutQueryOracle::new(g.clone());
        checks.push(("oracle", mismatch(&truth, &cut_query_apmc_demo(&o)?.tree.lambda_table())));
    }
    let failed: Vec<_> = checks.iter().filter(|c| c.1.is_some()).collect();
    ctx.emit(json!(checks.iter().map(|(k, v)| json!({ "check": k, "mismatch": v })).collect::<Vec<_>>()), || {
        checks
            .iter()
            .map(|(k, v)| match v {
                None => format!("ok    {k}\n"),
                Some(m) => format!("FAIL  {k}: {m}\n"),
            })
            .collect()
    });
    Ok(if failed.is_empty() { Status::Ok } else { Status::Mismatch })
}

fn cmd_bench(ctx: &Ctx, a: &BenchArgs) -> Result<Status> {
    let mut rows = Vec::new();
    for &n in &a.sizes {
        let g = random_multigraph(n, a.p, ctx.seed);
        let t = Instant::now();
        let _ = build_gomory_hu(&g);
        let gh = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let out = apmc_pipeline_detailed(&g, &ctx.decomposer())?;
        let ap = t.elapsed().as_secs_f64();
        rows.push(json!({ "n": n, "m": g.edge_count(), "gusfield_s": gh, "apmc_s": ap, "ap_edges": out.apmc.edge_count() }));
    }
    ctx.emit(json!(rows), || {
        let mut s = String::from("n,m,gusfield_s,apmc_s,ap_edges\n");
        for r in &rows {
            s.push_str(&format!("{},{},{:.6},{:.6},{}\n", r["n"], r["m"], r["gusfield_s"].as_f64().unwrap_or(0.0), r["apmc_s"].as_f64().unwrap_or(0.0), r["ap_edges"]));
        }
        s
    });
    Ok(Status::Ok)
}

fn run(cli: &Cli) -> Result<Status> {
    let ctx = Ctx { seed: cli.seed, deterministic: cli.deterministic, json: cli.json };
    match &cli.cmd {
        Command::Apmc(a) => cmd_apmc(&ctx, a),
        Command::Ghtree(a) => cmd_ghtree(&ctx, a),
        Command::Dynamic(a) => cmd_dynamic(&ctx, a),
        Command::Stream(a) => cmd_stream(&ctx, a),
        Command::Oracle(a) => cmd_oracle(&ctx, a),
        Command::Gen(g) => cmd_gen(&ctx, g),
        Command::Verify(a) => cmd_verify(&ctx, a),
        Command::Bench(a) => cmd_bench(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
