use num_bigint::BigUint;
use num_traits::Zero;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};

use super::graph::AvoiderGraph;

/// `W_{N,k}`: walks with `k - 1` steps from the start vertex, counted with
/// edge multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkTable {
    pub pattern: String,
    pub cutoff: usize,
    /// `counts[k - 1] = W_{N,k}`.
    pub counts: Vec<BigUint>,
}

impl WalkTable {
    /// `W_{N,k}` for `k >= 1`.
    pub fn get(&self, k: usize) -> Option<&BigUint> {
        k.checked_sub(1).and_then(|i| self.counts.get(i))
    }

    pub fn k_max(&self) -> usize {
        self.counts.len()
    }
}

pub fn count_walks(exec: Exec, g: &AvoiderGraph, k_max: usize) -> Result<WalkTable> {
    let start = g
        .start
        .ok_or_else(|| Error::DegenerateGraph("graph has no start vertex".into()))?;
    Ok(WalkTable {
        pattern: g.spec.pattern().to_string(),
        cutoff: g.cutoff,
        counts: count_walks_from(exec, &g.graph, start, k_max),
    })
}

/// Total number of walks with `k - 1` steps from `start`, for `k = 1..=k_max`.
///
/// Counts are propagated in `u128` while they fit and in big integers after
/// the first overflow. Each vertex pulls from its in-neighbours, so both
/// execution paths sum in the same order.
pub fn count_walks_from(exec: Exec, g: &Digraph, start: usize, k_max: usize) -> Vec<BigUint> {
    let incoming = g.transpose();
    let n = g.num_vertices();
    let mut out = Vec::with_capacity(k_max);
    if k_max == 0 {
        return out;
    }
    let mut small = vec![0u128; n];
    small[start] = 1;
    out.push(BigUint::from(1u32));
    let mut k = 1;
    while k < k_max {
        let next = map_range(exec, n, |j| {
            let mut acc: u128 = 0;
            for (i, m) in incoming.out_edges(j) {
                acc = acc.checked_add(small[i].checked_mul(m as u128)?)?;
            }
            Some(acc)
        });
        let Some(next) = next.into_iter().collect::<Option<Vec<u128>>>() else {
            break;
        };
        match next.iter().try_fold(0u128, |a, &b| a.checked_add(b)) {
            Some(total) => out.push(BigUint::from(total)),
            None => out.push(next.iter().map(|&x| BigUint::from(x)).sum()),
        }
        small = next;
        k += 1;
    }
    if k == k_max {
        return out;
    }
    let mut big: Vec<BigUint> = small.into_iter().map(BigUint::from).collect();
    while k < k_max {
        big = map_range(exec, n, |j| {
            let mut acc = BigUint::zero();
            for (i, m) in incoming.out_edges(j) {
                if !big[i].is_zero() {
                    acc += &big[i] * m;
                }
            }
            acc
        });
        out.push(big.iter().sum());
        k += 1;
    }
    out
}
