use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `T(n, k) = (n - k + 1) / (n + 1) * C(n + k, n)`, zero outside `0 <= k <= n`.
pub fn catalan_triangle(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let (n, k) = (n as u64, k as u64);
    binomial(n + k, k) * BigUint::from(n - k + 1) / BigUint::from(n + 1)
}

/// `C(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `|B(n, r)| = T(n - 1, n - r)`: 213-avoiders of length `n` whose initial
/// increasing run has length `r`.
pub fn class_size_b(n: u64, r: u64) -> BigUint {
    if r == 0 || r > n {
        return BigUint::zero();
    }
    catalan_triangle(n as i64 - 1, (n - r) as i64)
}

/// `|A(n, k)| = T(n - 1, k)`: 132-avoiders of length `n` with `k` values that
/// are not right-to-left maxima.
pub fn class_size_a(n: u64, k: u64) -> BigUint {
    if n == 0 {
        return if k == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    catalan_triangle(n as i64 - 1, k as i64)
}

/// `|A(n, k)|` for all `n <= n_max` from the decomposition at the maximum:
/// with `m` values to the right of the maximum, all of them and the maximum's
/// left part contribute
/// `|A(n, k)| = sum_m Catalan(m) * |A(n - m - 1, k - m)|`.
pub fn class_size_a_by_recurrence(n_max: usize) -> Vec<Vec<BigUint>> {
    let cat: Vec<BigUint> = (0..=n_max as u64).map(catalan).collect();
    let mut a: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
    a.push(vec![BigUint::one()]);
    for n in 1..=n_max {
        let mut row = vec![BigUint::zero(); n];
        for (k, slot) in row.iter_mut().enumerate() {
            for m in 0..=k.min(n - 1) {
                let rest = &a[n - m - 1];
                if let Some(x) = rest.get(k - m) {
                    *slot += &cat[m] * x;
                }
            }
        }
        a.push(row);
    }
    a
}

/// Rows `T(n, 0..=n)` for `n <= n_max`, filled by `T(n, k) = T(n-1, k) + T(n, k-1)`.
#[derive(Clone, Debug)]
pub struct TriangleTable {
    rows: Vec<Vec<BigUint>>,
    zero: BigUint,
}

impl TriangleTable {
    pub fn new(n_max: usize) -> TriangleTable {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row: Vec<BigUint> = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let value = if k == 0 {
                    BigUint::one()
                } else {
                    let up = if k < n {
                        rows[n - 1][k].clone()
                    } else {
                        BigUint::zero()
                    };
                    up + &row[k - 1]
                };
                row.push(value);
            }
            rows.push(row);
        }
        TriangleTable {
            rows,
            zero: BigUint::zero(),
        }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `T(n, k)`, zero outside the triangle.
    pub fn get(&self, n: i64, k: i64) -> &BigUint {
        if n < 0 || k < 0 || k > n {
            return &self.zero;
        }
        &self.rows[n as usize][k as usize]
    }

    /// `|A(n, r)| = T(n - 1, r)`.
    pub fn class_a(&self, n: usize, r: usize) -> &BigUint {
        self.get(n as i64 - 1, r as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_values() {
        for n in 0..20 {
            assert_eq!(catalan_triangle(n, 0), BigUint::one());
            assert_eq!(catalan_triangle(n, n), catalan(n as u64));
        }
        assert_eq!(catalan_triangle(3, 2), BigUint::from(5u32));
        assert_eq!(catalan_triangle(3, 4), BigUint::zero());
        assert_eq!(catalan_triangle(-1, 0), BigUint::zero());
    }

    #[test]
    fn catalan_matches_direct_recurrence() {
        let mut c = vec![BigUint::one()];
        for n in 1..=12usize {
            let next = (0..n).map(|i| &c[i] * &c[n - 1 - i]).sum();
            c.push(next);
            assert_eq!(catalan(n as u64), c[n]);
        }
    }

    #[test]
    fn table_matches_closed_form() {
        let t = TriangleTable::new(40);
        for n in 0..=40i64 {
            for k in -1..=n + 1 {
                assert_eq!(t.get(n, k), &catalan_triangle(n, k), "T({n},{k})");
            }
        }
    }

    #[test]
    fn a_recurrence_matches_closed_form() {
        let rec = class_size_a_by_recurrence(40);
        for n in 1..=40u64 {
            for k in 0..n {
                assert_eq!(
                    rec[n as usize][k as usize],
                    class_size_a(n, k),
                    "A({n},{k})"
                );
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_catalan() {
        for n in 1..=20u64 {
            let b: BigUint = (1..=n).map(|r| class_size_b(n, r)).sum();
            let a: BigUint = (0..n).map(|k| class_size_a(n, k)).sum();
            assert_eq!(a, catalan(n));
            assert_eq!(b, catalan(n));
        }
        assert_eq!(class_size_b(4, 1), BigUint::from(5u32));
        assert_eq!(class_size_a(4, 2), BigUint::from(5u32));
    }
}
