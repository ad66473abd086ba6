//! Text formats: edge lists and update scripts.
//!
//! Edge list: `#` comment lines, then `n m`, then `m` lines `u v`.
//! Repeated pairs are parallel edges and `u u` is a self-loop.
//!
//! Update script: optional first line `n`, then lines `+ u v` or `- u v`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::friendly::{EdgeUpdate, UpdateKind};
use crate::graph::{EdgeWeighted, Multigraph, MultigraphBuilder};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} {tok:?}") })
}

fn no_trailing<'a>(mut toks: impl Iterator<Item = &'a str>, line: usize) -> Result<()> {
    match toks.next() {
        Some(t) => Err(Error::Parse { line, msg: format!("unexpected token {t:?}") }),
        None => Ok(()),
    }
}

pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing `n m` header".into() })?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_num(toks.next(), hl, "vertex count")?;
    let m: usize = parse_num(toks.next(), hl, "edge count")?;
    no_trailing(toks, hl)?;
    let mut b = MultigraphBuilder::new(n);
    let mut seen = 0;
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let u: usize = parse_num(toks.next(), line, "endpoint")?;
        let v: usize = parse_num(toks.next(), line, "endpoint")?;
        no_trailing(toks, line)?;
        b.add_edge(u, v).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse { line: hl, msg: format!("header declares {m} edges, found {seen}") });
    }
    Ok(b.build())
}

pub fn read_edge_list(path: &Path) -> Result<Multigraph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Canonical edge list: sorted pairs, one line per parallel copy,
/// self-loops last.
pub fn format_edge_list(g: &Multigraph) -> String {
    let mut out = String::new();
    let m = g.edge_count() + g.total_self_loops();
    writeln!(out, "{} {}", g.n(), m).expect("string write");
    for (u, v, k) in g.weighted_pairs() {
        for _ in 0..k {
            writeln!(out, "{u} {v}").expect("string write");
        }
    }
    for v in 0..g.n() {
        for _ in 0..g.self_loops(v) {
            writeln!(out, "{v} {v}").expect("string write");
        }
    }
    out
}

pub fn write_edge_list(path: &Path, g: &Multigraph) -> Result<()> {
    Ok(std::fs::write(path, format_edge_list(g))?)
}

/// Parsed update script; `n` is the optional leading vertex count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateScript {
    pub n: Option<usize>,
    pub updates: Vec<EdgeUpdate>,
}

impl UpdateScript {
    /// Declared vertex count, else one past the largest endpoint.
    pub fn vertex_count(&self) -> usize {
        self.n
            .unwrap_or_else(|| self.updates.iter().map(|u| u.u.max(u.v) + 1).max().unwrap_or(0))
    }
}

pub fn parse_update_script(text: &str) -> Result<UpdateScript> {
    let mut n = None;
    let mut updates = Vec::new();
    for (idx, (line, l)) in content_lines(text).enumerate() {
        let mut toks = l.split_whitespace();
        let head = toks.next().expect("content lines are nonempty");
        let kind = match head {
            "+" => UpdateKind::Insert,
            "-" => UpdateKind::Delete,
            _ if idx == 0 => {
                n = Some(parse_num(Some(head), line, "vertex count")?);
                no_trailing(toks, line)?;
                continue;
            }
            _ => return Err(Error::Parse { line, msg: format!("expected `+` or `-`, got {head:?}") }),
        };
        let u: usize = parse_num(toks.next(), line, "endpoint")?;
        let v: usize = parse_num(toks.next(), line, "endpoint")?;
        no_trailing(toks, line)?;
        if u == v {
            return Err(Error::Parse { line, msg: format!("self-loop update at {u}") });
        }
        if let Some(n) = n {
            if u.max(v) >= n {
                return Err(Error::Parse { line, msg: format!("vertex {} out of range for n = {n}", u.max(v)) });
            }
        }
        updates.push(EdgeUpdate { kind, u, v });
    }
    Ok(UpdateScript { n, updates })
}

pub fn read_update_script(path: &Path) -> Result<UpdateScript> {
    parse_update_script(&std::fs::read_to_string(path)?)
}

pub fn format_update_script(script: &UpdateScript) -> String {
    let mut out = String::new();
    if let Some(n) = script.n {
        writeln!(out, "{n}").expect("string write");
    }
    for up in &script.updates {
        writeln!(out, "{up}").expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::suite::random_multigraph;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_parallel_edges_and_loops() {
        let g = parse_edge_list("# demo\n3 4\n0 1\n1 0\n\n1 2\n2 2\n").unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.self_loops(2), 1);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_edge_list("3 2\n0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("3 1\n0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 1\n0 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list("3 1\n0 1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn json_dump_is_canonical() {
        let g = Multigraph::from_edges(3, &[(2, 1), (0, 1), (1, 2), (0, 0)]).unwrap();
        let j = serde_json::to_string(&g).unwrap();
        assert_eq!(j, r#"{"n":3,"edges":[[0,0,1],[0,1,1],[1,2,2]]}"#);
        let back: Multigraph = serde_json::from_str(&j).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn update_scripts() {
        let s = parse_update_script("# two updates\n4\n+ 0 1\n- 1 0\n").unwrap();
        assert_eq!(s.n, Some(4));
        assert_eq!(s.updates, vec![EdgeUpdate::insert(0, 1), EdgeUpdate::delete(1, 0)]);
        assert_eq!(parse_update_script(&format_update_script(&s)).unwrap(), s);
        let t = parse_update_script("+ 2 5\n").unwrap();
        assert_eq!(t.vertex_count(), 6);
        assert!(parse_update_script("3\n+ 0 3\n").is_err());
        assert!(parse_update_script("+ 1 1\n").is_err());
        assert!(parse_update_script("+ 0 1\n7\n").is_err());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("cutforge-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.edges");
        write_edge_list(&path, &bowtie()).unwrap();
        assert_eq!(read_edge_list(&path).unwrap(), bowtie());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    proptest! {
        #[test]
        fn edge_list_round_trip(n in 1usize..12, p in 0.0f64..1.0, seed in 0u64..500, loops in 0u64..3) {
            let g = random_multigraph(n, p, seed).with_uniform_self_loops(loops);
            prop_assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
        }
    }
}
