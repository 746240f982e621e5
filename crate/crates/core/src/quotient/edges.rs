//! `E(n, r, m, s)`: the number of edges of the full 1324 graph from class
//! `A(n, r)` to class `A(m, s)`, where `A(n, r)` holds the 132-avoiders of
//! length `n` with `r` short values.
//!
//! * `m = n + 1` (nothing trimmed): every member reaches `A(n + 1, s)` once
//!   for each `s >= r`, so `E = T(n - 1, r)` when `r <= s <= n`.
//! * `m = n`: `E(n, r, n, s) = sum_{q <= r + s - n} T(n - 2, q)`.
//! * `m < n`: `E(n, r, m, s) = E(n - 1, r, m, s) + E(n, r - 1, m, s)`, where
//!   terms outside `0 <= r < n` vanish.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::catalan::TriangleTable;

/// All `E(n, r, m, s)` with `m <= n <= n_max`.
#[derive(Clone, Debug)]
pub struct EdgeCounts {
    n_max: usize,
    t: TriangleTable,
    /// `cols[m][s]` holds rows `n = m..=n_max`, each with entries `r = 0..n`.
    cols: Vec<Vec<Vec<BigUint>>>,
}

impl EdgeCounts {
    pub fn new(n_max: usize) -> EdgeCounts {
        let t = TriangleTable::new(n_max + 1);
        let mut cols = vec![Vec::new(); n_max + 1];
        for (m, col) in cols.iter_mut().enumerate().skip(1) {
            *col = (0..m).map(|s| column(&t, n_max, m, s)).collect();
        }
        EdgeCounts { n_max, t, cols }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn triangle(&self) -> &TriangleTable {
        &self.t
    }

    /// `E(n, r, m, s)` for any arguments with `n <= n_max`.
    pub fn get(&self, n: i64, r: i64, m: i64, s: i64) -> BigUint {
        if guard(n, r, m, s) {
            return BigUint::zero();
        }
        assert!(n as usize <= self.n_max, "n = {n} beyond the table");
        if m == n + 1 {
            return if s >= r {
                self.t.get(n - 1, r).clone()
            } else {
                BigUint::zero()
            };
        }
        let (n, r, m, s) = (n as usize, r as usize, m as usize, s as usize);
        self.cols[m][s][offset(m, n) + r].clone()
    }
}

/// Cases in which `E` vanishes outright.
fn guard(n: i64, r: i64, m: i64, s: i64) -> bool {
    r >= n || s >= m || n < 1 || m < 1 || r < 0 || s < 0 || m > n + 1
}

/// Position of row `n` inside a column that starts at row `m`.
fn offset(m: usize, n: usize) -> usize {
    // rows m, m+1, ..., n-1 have m, m+1, ..., n-1 entries
    (m + n - 1) * (n - m) / 2
}

fn column(t: &TriangleTable, n_max: usize, m: usize, s: usize) -> Vec<BigUint> {
    let len = offset(m, n_max + 1);
    let mut col = vec![BigUint::zero(); len];
    // base row n = m as running prefix sums of T(m - 2, .)
    let base = offset(m, m);
    let mut prefix = BigUint::zero();
    let mut q = 0i64;
    for r in 0..m {
        let upto = r as i64 + s as i64 - m as i64;
        while q <= upto {
            prefix += t.get(m as i64 - 2, q);
            q += 1;
        }
        col[base + r] = prefix.clone();
    }
    for n in m + 1..=n_max {
        let (row, prev) = (offset(m, n), offset(m, n - 1));
        for r in 0..n {
            let mut v = if r + 1 < n {
                col[prev + r].clone()
            } else {
                BigUint::zero()
            };
            if r > 0 {
                v += &col[row + r - 1];
            }
            col[row + r] = v;
        }
    }
    col
}

/// `E(n, r, m, s)` without a precomputed table; costs `O(n^2)` big additions.
pub fn edge_count_e(n: i64, r: i64, m: i64, s: i64) -> BigUint {
    if guard(n, r, m, s) {
        return BigUint::zero();
    }
    let t = TriangleTable::new(n as usize + 1);
    if m == n + 1 {
        return if s >= r {
            t.get(n - 1, r).clone()
        } else {
            BigUint::zero()
        };
    }
    let col = column(&t, n as usize, m as usize, s as usize);
    col[offset(m as usize, n as usize) + r as usize].clone()
}
