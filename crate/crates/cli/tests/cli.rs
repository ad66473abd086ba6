use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cutforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutforge"))
        .args(args)
        .env_remove("CUTFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const K4: &str = "# K4\n4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";

#[test]
fn ghtree_on_k4_is_a_star_of_weight_three() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.edges", K4);
    for method in ["gusfield", "classic", "submodular", "apmc"] {
        let o = cutforge(&["--json", "ghtree", "--input", &k4, "--method", method]);
        assert!(o.status.success(), "{method}");
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        let edges = v["edges"].as_array().unwrap();
        assert_eq!(edges.len(), 3);
        assert!(edges.iter().all(|e| e[2] == 3), "{method}: {edges:?}");
    }
}

#[test]
fn verify_passes_on_valid_input() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.edges", K4);
    let o = cutforge(&["verify", "--input", &k4]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ok    apmc"));
}

#[test]
fn gen_kl98_reports_phi_and_writes_a_readable_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("kl.edges");
    let o = cutforge(&["--json", "--seed", "7", "gen", "kl98", "--n", "64", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["phi"], 64);
    assert_eq!(v["n"], 66);
    let g = cutforge_core::io::read_edge_list(&out).unwrap();
    assert_eq!(cutforge_core::min_st_cut(&g, 0, 1).unwrap().value, 8);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, arg: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_cutforge"));
        c.env_remove("CUTFORGE_SEED");
        if let Some(e) = env {
            c.env("CUTFORGE_SEED", e);
        }
        if let Some(a) = arg {
            c.args(["--seed", a]);
        }
        c.args(["gen", "random", "--n", "12", "--p", "0.5"]);
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    assert_eq!(run(Some("9"), None), run(None, Some("9")));
    assert_ne!(run(Some("9"), None), run(None, Some("10")));
    assert_eq!(run(Some("3"), Some("9")), run(None, Some("9")));
}

#[test]
fn input_errors_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.edges", "3 2\n0 1\n");
    assert_eq!(cutforge(&["apmc", "--input", &bad]).status.code(), Some(1));
    let missing = dir.path().join("missing.edges");
    assert_eq!(cutforge(&["ghtree", "--input", missing.to_str().unwrap()]).status.code(), Some(1));
    let script = write(&dir, "s.txt", "3\n- 0 1\n");
    let o = cutforge(&["dynamic", "--script", &script]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("update 1"));
    assert_eq!(cutforge(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn dynamic_verified_replay_writes_the_work_log() {
    let dir = TempDir::new().unwrap();
    let script = dir.path().join("s.txt");
    let log = dir.path().join("work.csv");
    let gen = cutforge(&["--seed", "4", "gen", "script", "--n", "16", "--len", "60", "--out", script.to_str().unwrap()]);
    assert!(gen.status.success());
    let run = || {
        cutforge(&["--deterministic", "dynamic", "--script", script.to_str().unwrap(), "--verify", "--log", log.to_str().unwrap()])
    };
    let a = run();
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("verified after every update"));
    let csv = std::fs::read_to_string(&log).unwrap();
    assert!(csv.starts_with("index,epoch,quanta,hfr_edges,ap_edges\n"));
    assert_eq!(csv.lines().count(), 61);
    let b = run();
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(csv, std::fs::read_to_string(&log).unwrap());
}

#[test]
fn stream_two_passes_with_space_report() {
    let dir = TempDir::new().unwrap();
    let script = write(&dir, "s.txt", "4\n+ 0 1\n+ 1 2\n+ 2 3\n+ 0 3\n+ 0 2\n- 0 2\n+ 1 3\n");
    let o = cutforge(&["stream", "--script", &script, "--passes", "2", "--space-report", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("pass,cells,bytes\n1,"));
    assert!(text.contains("\n2,"));
    let o = cutforge(&["--json", "stream", "--script", &script, "--passes", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["partition"].as_array().unwrap().len(), 4);
    assert!(v["tree"].is_null());
    assert_eq!(cutforge(&["stream", "--script", &script, "--passes", "3"]).status.code(), Some(1));
}

#[test]
fn oracle_transcript_matches_reported_count() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.edges", K4);
    let t = dir.path().join("t.json");
    let o = cutforge(&["--json", "oracle", "--input", &k4, "--transcript", t.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let transcript: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(v["report"]["total_queries"].as_u64().unwrap() as usize, transcript.len());
    assert_eq!(v["report"]["degree_queries"], 4);
    assert!(v["report"]["partition_stand_in"].as_bool().unwrap());
}

#[test]
fn apmc_writes_sparsifier_json() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("c.edges");
    assert!(cutforge(&["--seed", "1", "gen", "clustered", "--n", "14", "--out", g.to_str().unwrap()]).status.success());
    let h = dir.path().join("h.json");
    let o = cutforge(&["--json", "apmc", "--input", g.to_str().unwrap(), "--out", h.to_str().unwrap()]);
    assert!(o.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&h).unwrap()).unwrap();
    assert_eq!(file["edges"].as_array().unwrap().len() as u64, report["ap_edges"].as_u64().unwrap());
    assert!(report["ap_edges"].as_u64().unwrap() <= report["hfr_edges"].as_u64().unwrap() + report["n"].as_u64().unwrap());
    assert!(Path::new(&h).exists());
}

#[test]
fn bench_prints_csv_rows() {
    let o = cutforge(&["bench", "--sizes", "8,12"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,m,gusfield_s,apmc_s,ap_edges\n8,"));
    assert_eq!(text.lines().count(), 3);
}
