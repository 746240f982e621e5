use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::numeric::to_bigint;
use crate::oracle::{build_avoider_graph, EdgeRule};
use crate::perm::PatternSpec;

use super::edges::EdgeCounts;
use super::graph::{aggregate_graph, aggregate_streaming, Aggregation, QuotientGraph};
use super::key::{ClassKey, Keyer, QuotientKind};

/// Largest cutoff for quotients built from the full graph.
pub const FULL_GRAPH_CUTOFF_CAP: usize = 14;

/// Largest cutoff for explicitly stored weighted quotients.
pub const EXPLICIT_SHORT_CUTOFF_CAP: usize = 80;

/// What a quotient does with insertions that would leave the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Drop them, as the full graph does under [`EdgeRule::VersionOne`].
    Drop,
    /// Keep them redirected to the length-`N` prefix, as under
    /// [`EdgeRule::VersionTwo`]. The class weights are then obtained by
    /// aggregating the full graph.
    Redirect,
}

/// Initial-run quotient of the 2134 graph.
///
/// Class `(n, r)` with `r < n` reaches `(n + 1, s)` for `1 <= s <= r + 1` while
/// `n < N`, and `(m, r)` for `r < m <= n`. Increasing permutations are left
/// out, and the result is cut down to the component of `(2, 1)`.
pub fn build_quotient_b(cutoff: usize) -> Result<QuotientGraph> {
    let (q, _) = build_quotient_b_with_dropped(cutoff)?;
    Ok(q)
}

/// As [`build_quotient_b`], also returning the classes removed by pruning.
pub fn build_quotient_b_with_dropped(cutoff: usize) -> Result<(QuotientGraph, Vec<ClassKey>)> {
    if cutoff < 2 {
        return Err(invalid("the run quotient needs cutoff at least 2"));
    }
    let mut keys = Vec::new();
    let mut edges = Vec::new();
    let unit = BigRational::one();
    for n in 2..=cutoff {
        for r in 1..n {
            let from = ClassKey::SizeRun(n, r);
            keys.push(from);
            if n < cutoff {
                for s in 1..=r + 1 {
                    edges.push((from, ClassKey::SizeRun(n + 1, s), unit.clone()));
                }
            }
            for m in r + 1..=n {
                edges.push((from, ClassKey::SizeRun(m, r), unit.clone()));
            }
        }
    }
    let hub = ClassKey::SizeRun(2, 1);
    let full = QuotientGraph::from_edges(QuotientKind::Run, cutoff, keys, edges, Some(hub))?;
    full.pruned(Some(&hub))
}

/// Descent-set quotient of the 3124 graph, aggregated from the full
/// version-two graph with a check that every class is uniform.
pub fn build_quotient_c(exec: Exec, cutoff: usize) -> Result<QuotientGraph> {
    build_quotient_c_capped(exec, cutoff, FULL_GRAPH_CUTOFF_CAP)
}

pub fn build_quotient_c_capped(exec: Exec, cutoff: usize, cap: usize) -> Result<QuotientGraph> {
    check_cap(cutoff, cap)?;
    if cutoff > 65 {
        return Err(invalid("descent sets are limited to length 65"));
    }
    let spec = PatternSpec::parse("3124")?;
    aggregate_streaming(
        exec,
        &spec,
        cutoff,
        EdgeRule::VersionTwo,
        QuotientKind::Descents,
        Aggregation::Lossless,
    )
}

fn check_cap(cutoff: usize, cap: usize) -> Result<()> {
    if cutoff > cap {
        return Err(Error::ResourceCap {
            what: "full-graph cutoff",
            requested: cutoff,
            cap,
        });
    }
    if cutoff == 0 {
        return Err(invalid("cutoff must be at least 1"));
    }
    Ok(())
}

/// Weighted short-count quotient of the 1324 graph.
///
/// With [`Boundary::Drop`] the weights come from the edge counts:
/// `E(n, r, m, s) / |A(n, r)|`, and ascending edges into `(n + 1, s)` for
/// `r <= s <= n` have weight one. With [`Boundary::Redirect`] the full graph
/// is aggregated, which is only possible up to the full-graph cap.
pub fn build_quotient_a(exec: Exec, cutoff: usize, boundary: Boundary) -> Result<QuotientGraph> {
    match boundary {
        Boundary::Drop => {
            if cutoff > EXPLICIT_SHORT_CUTOFF_CAP {
                return Err(Error::ResourceCap {
                    what: "explicit weighted quotient cutoff",
                    requested: cutoff,
                    cap: EXPLICIT_SHORT_CUTOFF_CAP,
                });
            }
            build_quotient_a_from_counts(&EdgeCounts::new(cutoff), cutoff)
        }
        Boundary::Redirect => {
            check_cap(cutoff, FULL_GRAPH_CUTOFF_CAP)?;
            let spec = PatternSpec::parse("1324")?;
            aggregate_streaming(
                exec,
                &spec,
                cutoff,
                EdgeRule::VersionTwo,
                QuotientKind::Short,
                Aggregation::Averaged,
            )
        }
    }
}

/// [`Boundary::Drop`] quotient from an edge-count table covering `cutoff`.
pub fn build_quotient_a_from_counts(e: &EdgeCounts, cutoff: usize) -> Result<QuotientGraph> {
    if cutoff == 0 || cutoff > e.n_max() {
        return Err(invalid(format!(
            "cutoff {cutoff} outside the edge-count table"
        )));
    }
    let t = e.triangle();
    let mut keys = Vec::new();
    let mut edges = Vec::new();
    for n in 1..=cutoff {
        for r in 0..n {
            let from = ClassKey::SizeShort(n, r);
            keys.push(from);
            if n < cutoff {
                for s in r..=n {
                    edges.push((from, ClassKey::SizeShort(n + 1, s), BigRational::one()));
                }
            }
            let size = to_bigint(t.class_a(n, r));
            for m in 2..=n {
                for s in 1..m {
                    let count = e.get(n as i64, r as i64, m as i64, s as i64);
                    if count.bits() > 0 {
                        let w = BigRational::new(BigInt::from(count), size.clone());
                        edges.push((from, ClassKey::SizeShort(m, s), w));
                    }
                }
            }
        }
    }
    QuotientGraph::from_edges(
        QuotientKind::Short,
        cutoff,
        keys,
        edges,
        Some(ClassKey::SizeShort(1, 0)),
    )
}

/// The 213 graph itself: vertex `12...k` has edges to `12...j` for `j <= k`
/// and to `12...(k+1)`.
pub fn build_chain(exec: Exec, cutoff: usize, rule: EdgeRule) -> Result<QuotientGraph> {
    let spec = PatternSpec::parse("213")?;
    let g = build_avoider_graph(exec, &spec, cutoff, rule)?;
    aggregate_graph(
        &g,
        QuotientKind::Chain,
        Keyer::InitialRun,
        Aggregation::Lossless,
    )
}
