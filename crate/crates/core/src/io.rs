//! Text formats for graphs and partitions.
//!
//! Graphs use the DIMACS edge format: an optional run of `c` comment lines, one
//! `p edge <n> <m>` header, then `m` lines `e <u> <v>` with 1-based ids.
//! Partitions use one line per class, `c <id> <v1> <v2> ...`, with 1-based
//! class and vertex ids. Writers emit the canonical form, which parses back to
//! the same value and re-serializes to the same bytes.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_id(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

fn one_based(id: usize, line: usize) -> Result<usize> {
    id.checked_sub(1)
        .ok_or_else(|| parse_err(line, "vertex ids are 1-based"))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    other => return Err(parse_err(line, format!("unsupported format {other:?}"))),
                }
                let n = parse_id(toks.next(), line, "vertex count")?;
                let m = parse_id(toks.next(), line, "edge count")?;
                header = Some((n, m));
            }
            Some("e") => {
                let (n, _) = header.ok_or_else(|| parse_err(line, "edge before problem line"))?;
                let u = one_based(parse_id(toks.next(), line, "endpoint")?, line)?;
                let v = one_based(parse_id(toks.next(), line, "endpoint")?, line)?;
                if u >= n || v >= n {
                    return Err(parse_err(line, format!("endpoint out of range 1..={n}")));
                }
                if u == v {
                    return Err(parse_err(line, "self-loop"));
                }
                edges.push((u, v));
            }
            Some(tok) => return Err(parse_err(line, format!("unknown line type {tok:?}"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    if edges.len() != m {
        return Err(parse_err(0, format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Parses a partition of `n` vertices. Class lines may appear in any order;
/// ids must be exactly `1..=k`.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let mut classes: Vec<Option<Vec<usize>>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None => continue,
            Some("c") => {}
            Some(tok) if tok.starts_with('#') => continue,
            Some(tok) => return Err(parse_err(line, format!("unknown line type {tok:?}"))),
        }
        let id = one_based(parse_id(toks.next(), line, "class id")?, line)?;
        let members = toks
            .map(|t| one_based(parse_id(Some(t), line, "vertex")?, line))
            .collect::<Result<Vec<_>>>()?;
        if classes.len() <= id {
            classes.resize(id + 1, None);
        }
        if classes[id].replace(members).is_some() {
            return Err(parse_err(line, format!("class {} listed twice", id + 1)));
        }
    }
    let classes = classes
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| parse_err(0, format!("class {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Partition::new(n, classes)
}

pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    for (i, class) in p.iter().enumerate() {
        let _ = write!(out, "c {}", i + 1);
        for &v in class {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}
