//! Weighted walk totals on quotients and their comparison with walk counts
//! on the full graph.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::numeric::{decimal_string, to_bigint};
use crate::oracle::{build_avoider_graph, count_walks_from, EdgeRule};
use crate::perm::PatternSpec;
use crate::spectral::{LeftOperator, SparseOperator};

use super::build::FULL_GRAPH_CUTOFF_CAP;
use super::graph::{aggregate_graph, Aggregation};
use super::key::{Keyer, QuotientKind};

/// Largest walk index for exact weighted totals.
pub const EXACT_WALK_CAP: usize = 50;

/// Total weight of walks with `k - 1` steps from `start`, for
/// `k = 1..=k_max`, as reduced fractions.
///
/// The row vector is kept as integers over a common denominator; each step
/// multiplies the denominator by the operator scale and the common factor is
/// divided out.
pub fn weighted_walks_exact<O: LeftOperator + ?Sized>(
    exec: Exec,
    op: &O,
    start: usize,
    k_max: usize,
) -> Result<Vec<BigRational>> {
    check_start(op.dim(), start)?;
    let mut u = vec![BigUint::zero(); op.dim()];
    u[start] = BigUint::one();
    let mut den = BigUint::one();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k > 1 {
            let image = op.apply_left_scaled(exec, &u);
            u = image.values;
            den *= image.scale;
            let g = u
                .iter()
                .fold(den.clone(), |g, x| if g.is_one() { g } else { g.gcd(x) });
            if !g.is_one() {
                for x in &mut u {
                    *x /= &g;
                }
                den /= &g;
            }
        }
        let total: BigUint = u.iter().sum();
        out.push(BigRational::new(to_bigint(&total), to_bigint(&den)));
    }
    Ok(out)
}

/// Floating-point version of [`weighted_walks_exact`].
pub fn weighted_walks_f64<O: LeftOperator + ?Sized>(
    exec: Exec,
    op: &O,
    start: usize,
    k_max: usize,
) -> Result<Vec<f64>> {
    check_start(op.dim(), start)?;
    let mut u = vec![0.0; op.dim()];
    u[start] = 1.0;
    let mut next = vec![0.0; op.dim()];
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k > 1 {
            op.apply_left(exec, &u, &mut next);
            std::mem::swap(&mut u, &mut next);
        }
        let total: f64 = u.iter().sum();
        if !total.is_finite() {
            return Err(Error::NumericOverflow(format!("walk total at k = {k}")));
        }
        out.push(total);
    }
    Ok(out)
}

fn check_start(dim: usize, start: usize) -> Result<()> {
    if start >= dim {
        return Err(invalid(format!(
            "start index {start} outside dimension {dim}"
        )));
    }
    Ok(())
}

/// One cell of the comparison between weighted and unweighted walk totals.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureRow {
    /// Cutoff of both graphs.
    pub n: usize,
    /// Walk index: walks with `k - 1` steps.
    pub k: usize,
    /// Walk count on the full 1324 graph.
    pub full: BigUint,
    /// Weighted walk total on the short-count quotient.
    pub weighted: BigRational,
}

impl ConjectureRow {
    pub fn ratio(&self) -> BigRational {
        if self.full.is_zero() {
            return BigRational::zero();
        }
        self.weighted.clone() / BigRational::from_integer(to_bigint(&self.full))
    }

    /// Whether the weighted total exceeds the walk count.
    pub fn exceeds(&self) -> bool {
        self.weighted > BigRational::from_integer(BigInt::from(self.full.clone()))
    }
}

/// Walk counts of the full version-two 1324 graph against weighted totals of
/// its averaged short-count quotient, for cutoffs `1..=n_max` and walk
/// indices `1..=k_max`.
pub fn conjecture_report(exec: Exec, n_max: usize, k_max: usize) -> Result<Vec<ConjectureRow>> {
    if n_max > FULL_GRAPH_CUTOFF_CAP {
        return Err(Error::ResourceCap {
            what: "full-graph cutoff",
            requested: n_max,
            cap: FULL_GRAPH_CUTOFF_CAP,
        });
    }
    let spec = PatternSpec::parse("1324")?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let g = build_avoider_graph(exec, &spec, n, EdgeRule::VersionTwo)?;
        let start = g
            .start
            .ok_or_else(|| Error::DegenerateGraph("graph has no start vertex".into()))?;
        let full = count_walks_from(exec, &g.graph, start, k_max);
        let q = aggregate_graph(
            &g,
            QuotientKind::Short,
            Keyer::ShortCount,
            Aggregation::Averaged,
        )?;
        let q_start = q
            .start
            .ok_or_else(|| Error::DegenerateGraph("quotient has no start class".into()))?;
        let op = SparseOperator::from_quotient(&q);
        let weighted = weighted_walks_exact(exec, &op, q_start, k_max)?;
        for (k, (w, wt)) in full.into_iter().zip(weighted).enumerate() {
            rows.push(ConjectureRow {
                n,
                k: k + 1,
                full: w,
                weighted: wt,
            });
        }
    }
    Ok(rows)
}

/// CSV with header `n,k,W,Wtilde,ratio`; `Wtilde` and `ratio` are printed
/// with `digits` fractional digits.
pub fn walk_csv(rows: &[ConjectureRow], digits: usize) -> String {
    let mut out = String::from("n,k,W,Wtilde,ratio\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            r.k,
            r.full,
            decimal_string(&r.weighted, digits),
            decimal_string(&r.ratio(), digits)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{build_quotient_a, Boundary, ShortOperator};

    #[test]
    fn exact_and_float_walks_agree() {
        let q = build_quotient_a(Exec::Sequential, 10, Boundary::Drop).unwrap();
        let op = SparseOperator::from_quotient(&q);
        let exact = weighted_walks_exact(Exec::Sequential, &op, q.start.unwrap(), 12).unwrap();
        let float = weighted_walks_f64(Exec::Parallel, &op, q.start.unwrap(), 12).unwrap();
        for (e, f) in exact.iter().zip(&float) {
            let e = crate::numeric::rational_f64(e);
            assert!((e - f).abs() <= 1e-12 * e);
        }
        let implicit = ShortOperator::new(10).unwrap();
        let start = implicit.index_of(1, 0).unwrap();
        assert_eq!(
            weighted_walks_exact(Exec::Parallel, &implicit, start, 12).unwrap(),
            exact
        );
    }

    #[test]
    fn short_walks_are_exact() {
        // the first steps only visit classes whose members all behave alike
        let rows = conjecture_report(Exec::Sequential, 5, 4).unwrap();
        for r in rows {
            assert_eq!(
                r.weighted,
                BigRational::from_integer(to_bigint(&r.full)),
                "{r:?}"
            );
        }
    }

    #[test]
    fn csv_layout() {
        let rows = conjecture_report(Exec::Sequential, 2, 2).unwrap();
        let csv = walk_csv(&rows, 3);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,k,W,Wtilde,ratio");
        assert_eq!(lines[1], "1,1,1,1.000,1.000");
        assert_eq!(lines.len(), 5);
    }
}
