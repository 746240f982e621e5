//! Plain-text graph cache.
//!
//! ```text
//! avgraph v1 <pattern> <cutoff> <v1|v2>
//! <idx> <perm>          one line per vertex
//! <src> <dst> <mult>    one line per edge
//! ```

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::perm::{PatternSpec, Permutation};

use super::graph::{AvoiderGraph, EdgeRule};

/// Write `g` to `path`, replacing any previous file atomically.
pub fn write_graph(g: &AvoiderGraph, path: &Path) -> Result<()> {
    write_atomic(path, |w| {
        writeln!(
            w,
            "avgraph v1 {} {} {}",
            g.spec.pattern(),
            g.cutoff,
            g.edge_rule
        )?;
        for (i, p) in g.vertices.iter().enumerate() {
            writeln!(w, "{i} {p}")?;
        }
        for u in 0..g.num_vertices() {
            for (v, m) in g.graph.out_edges(u) {
                writeln!(w, "{u} {v} {m}")?;
            }
        }
        Ok(())
    })
}

pub(crate) fn write_atomic(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::process::id()
    ));
    {
        let mut w = BufWriter::new(fs::File::create(&tmp)?);
        body(&mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<AvoiderGraph> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut lines = reader.lines().enumerate();
    let parse_err = |line: usize, msg: String| Error::Parse {
        line: line + 1,
        msg,
    };

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty file".into()))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "avgraph" || fields[1] != "v1" {
        return Err(parse_err(0, format!("bad header {header:?}")));
    }
    let spec = PatternSpec::parse(fields[2]).map_err(|e| parse_err(0, e.to_string()))?;
    let cutoff: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(0, format!("bad cutoff {:?}", fields[3])))?;
    let edge_rule: EdgeRule = fields[4]
        .parse()
        .map_err(|e: Error| parse_err(0, e.to_string()))?;

    let mut vertices: Vec<Permutation> = Vec::new();
    let mut rows: Vec<Vec<(u32, u64)>> = Vec::new();
    for (no, line) in lines {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.len() {
            0 => continue,
            2 => {
                if !rows.is_empty() {
                    return Err(parse_err(no, "vertex line after edge lines".into()));
                }
                let idx: usize = tokens[0]
                    .parse()
                    .map_err(|_| parse_err(no, format!("bad index {:?}", tokens[0])))?;
                if idx != vertices.len() {
                    return Err(parse_err(no, format!("expected vertex {}", vertices.len())));
                }
                let p: Permutation = tokens[1]
                    .parse()
                    .map_err(|e: Error| parse_err(no, e.to_string()))?;
                vertices.push(p);
            }
            3 => {
                if rows.is_empty() {
                    rows = vec![Vec::new(); vertices.len()];
                }
                let nums: Vec<u64> = tokens
                    .iter()
                    .map(|t| {
                        t.parse::<u64>()
                            .map_err(|_| parse_err(no, format!("bad number {t:?}")))
                    })
                    .collect::<Result<_>>()?;
                let (u, v) = (nums[0] as usize, nums[1] as usize);
                if u >= vertices.len() || v >= vertices.len() || nums[2] == 0 {
                    return Err(parse_err(no, format!("bad edge {line:?}")));
                }
                rows[u].push((v as u32, nums[2]));
            }
            _ => return Err(parse_err(no, format!("unexpected line {line:?}"))),
        }
    }
    if rows.is_empty() {
        rows = vec![Vec::new(); vertices.len()];
    }
    let sorted = vertices.windows(2).all(|w| w[0] < w[1]);
    if !sorted {
        return Err(parse_err(0, "vertices are not in graded order".into()));
    }
    let start = vertices.binary_search(&Permutation::trivial()).ok();
    Ok(AvoiderGraph {
        spec,
        cutoff,
        edge_rule,
        vertices,
        graph: Digraph::from_rows(rows),
        start,
    })
}
