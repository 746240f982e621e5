//! Plain-text quotient cache.
//!
//! ```text
//! quot v1 <kind> <cutoff> <start index or ->
//! c <n> <stat>              one line per class; stat is r or a descent mask
//! e <src> <dst> <num> <den> one line per edge
//! ```

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::oracle::write_atomic;
use crate::perm::DescentSet;

use super::graph::QuotientGraph;
use super::key::{ClassKey, QuotientKind};

pub fn write_quotient(q: &QuotientGraph, path: &Path) -> Result<()> {
    write_atomic(path, |w| {
        let start = q.start.map_or("-".to_string(), |s| s.to_string());
        writeln!(w, "quot v1 {} {} {}", q.kind, q.cutoff, start)?;
        for key in &q.keys {
            match *key {
                ClassKey::SizeRun(n, r) | ClassKey::SizeShort(n, r) => writeln!(w, "c {n} {r}")?,
                ClassKey::SizeDescents(n, d) => writeln!(w, "c {n} {}", d.0)?,
            }
        }
        for (i, row) in q.rows.iter().enumerate() {
            for (j, wt) in row {
                writeln!(w, "e {i} {j} {} {}", wt.numer(), wt.denom())?;
            }
        }
        Ok(())
    })
}

pub fn read_quotient(path: &Path) -> Result<QuotientGraph> {
    let reader = BufReader::new(fs::File::open(path)?);
    let parse_err = |line: usize, msg: String| Error::Parse {
        line: line + 1,
        msg,
    };
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty file".into()))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "quot" || fields[1] != "v1" {
        return Err(parse_err(0, format!("bad header {header:?}")));
    }
    let kind: QuotientKind = fields[2]
        .parse()
        .map_err(|e: Error| parse_err(0, e.to_string()))?;
    let cutoff: usize = fields[3]
        .parse()
        .map_err(|_| parse_err(0, format!("bad cutoff {:?}", fields[3])))?;
    let start: Option<usize> = match fields[4] {
        "-" => None,
        s => Some(
            s.parse()
                .map_err(|_| parse_err(0, format!("bad start {s:?}")))?,
        ),
    };

    let mut keys = Vec::new();
    let mut rows: Vec<Vec<(u32, BigRational)>> = Vec::new();
    for (no, line) in lines {
        let line = line?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first() {
            None => continue,
            Some(&"c") if tokens.len() == 3 => {
                if !rows.is_empty() {
                    return Err(parse_err(no, "class line after edge lines".into()));
                }
                let nums: Vec<u64> = parse_all(&tokens[1..]).map_err(|m| parse_err(no, m))?;
                let n = nums[0] as usize;
                keys.push(match kind {
                    QuotientKind::Run | QuotientKind::Chain => {
                        ClassKey::SizeRun(n, nums[1] as usize)
                    }
                    QuotientKind::Short => ClassKey::SizeShort(n, nums[1] as usize),
                    QuotientKind::Descents => ClassKey::SizeDescents(n, DescentSet(nums[1])),
                });
            }
            Some(&"e") if tokens.len() == 5 => {
                if rows.is_empty() {
                    rows = vec![Vec::new(); keys.len()];
                }
                let idx: Vec<u64> = parse_all(&tokens[1..3]).map_err(|m| parse_err(no, m))?;
                let (i, j) = (idx[0] as usize, idx[1] as usize);
                let num: BigInt = tokens[3]
                    .parse()
                    .map_err(|_| parse_err(no, format!("bad numerator {:?}", tokens[3])))?;
                let den: BigInt = tokens[4]
                    .parse()
                    .map_err(|_| parse_err(no, format!("bad denominator {:?}", tokens[4])))?;
                if i >= keys.len()
                    || j >= keys.len()
                    || den <= BigInt::zero()
                    || num <= BigInt::zero()
                {
                    return Err(parse_err(no, format!("bad edge {line:?}")));
                }
                rows[i].push((j as u32, BigRational::new(num, den)));
            }
            _ => return Err(parse_err(no, format!("unexpected line {line:?}"))),
        }
    }
    if rows.is_empty() {
        rows = vec![Vec::new(); keys.len()];
    }
    if !keys.windows(2).all(|w| w[0] < w[1]) {
        return Err(parse_err(0, "classes are not sorted".into()));
    }
    if rows.iter().any(|r| !r.windows(2).all(|w| w[0].0 < w[1].0)) {
        return Err(parse_err(0, "edges are not sorted by target".into()));
    }
    if start.is_some_and(|s| s >= keys.len()) {
        return Err(parse_err(0, "start index out of range".into()));
    }
    Ok(QuotientGraph {
        kind,
        cutoff,
        keys,
        rows,
        start,
    })
}

fn parse_all(tokens: &[&str]) -> std::result::Result<Vec<u64>, String> {
    tokens
        .iter()
        .map(|t| t.parse::<u64>().map_err(|_| format!("bad number {t:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::quotient::{build_quotient_a, build_quotient_b, build_quotient_c, Boundary};

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.quot");
        for q in [
            build_quotient_a(Exec::Sequential, 7, Boundary::Drop).unwrap(),
            build_quotient_a(Exec::Sequential, 6, Boundary::Redirect).unwrap(),
            build_quotient_b(8).unwrap(),
            build_quotient_c(Exec::Sequential, 6).unwrap(),
        ] {
            write_quotient(&q, &path).unwrap();
            assert_eq!(read_quotient(&path).unwrap(), q);
        }
    }

    #[test]
    fn rejects_bad_edges() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.quot");
        fs::write(&path, "quot v1 run 3 0\nc 2 1\ne 0 4 1 1\n").unwrap();
        match read_quotient(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
