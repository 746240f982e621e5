//! Nonnegative linear operators in floating point, exact scaled-integer and
//! lower-bound forms.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::digraph::Digraph;
use crate::exec::{fill_indexed, Exec};
use crate::numeric::{f64_rational, lcm_all, rational_f64, rational_f64_down, unsigned_parts};
use crate::quotient::QuotientGraph;

/// A nonnegative matrix acting on column vectors, `y = A x`.
pub trait Operator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, exec: Exec, x: &[f64], y: &mut [f64]);
}

/// `A v = values / scale` for an integer vector `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledImage {
    pub values: Vec<BigUint>,
    pub scale: BigUint,
}

/// Operators whose action on integer vectors can be evaluated exactly.
pub trait ExactOperator: Operator {
    fn apply_scaled(&self, exec: Exec, v: &[BigUint]) -> ScaledImage;
}

/// Operators with guaranteed lower bounds in floating point.
pub trait IntervalOperator: Operator {
    /// `lo[i] <= (A v)[i]`, every rounding directed downwards.
    fn apply_lower(&self, exec: Exec, v: &[f64]) -> Vec<f64>;
}

/// Row-vector action `y = x A`, used to propagate walks.
pub trait LeftOperator: Sync {
    fn dim(&self) -> usize;
    fn apply_left(&self, exec: Exec, x: &[f64], y: &mut [f64]);
    fn apply_left_scaled(&self, exec: Exec, u: &[BigUint]) -> ScaledImage;
}

/// Sparse nonnegative matrix with rational weights.
#[derive(Clone, Debug)]
pub struct SparseOperator {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<u32>,
    w: Vec<f64>,
    w_lo: Vec<f64>,
    /// `w * scale`, exact integers.
    w_int: Vec<BigUint>,
    scale: BigUint,
    /// Same matrix stored by columns, for the left action.
    by_col: Option<Box<SparseOperator>>,
}

impl SparseOperator {
    /// Rows of `(column, weight)` with nonnegative rational weights.
    pub fn from_rational_rows(rows: &[Vec<(u32, num_rational::BigRational)>]) -> SparseOperator {
        let mut op = Self::build(rows);
        let mut cols: Vec<Vec<(u32, num_rational::BigRational)>> = vec![Vec::new(); rows.len()];
        for (i, row) in rows.iter().enumerate() {
            for (j, w) in row {
                cols[*j as usize].push((i as u32, w.clone()));
            }
        }
        op.by_col = Some(Box::new(Self::build(&cols)));
        op
    }

    fn build(rows: &[Vec<(u32, num_rational::BigRational)>]) -> SparseOperator {
        let denominators: Vec<BigUint> = rows
            .iter()
            .flatten()
            .map(|(_, w)| unsigned_parts(w).1)
            .collect();
        let scale = lcm_all(&denominators);
        let mut offsets = vec![0];
        let (mut cols, mut w, mut w_lo, mut w_int) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            for (j, x) in row {
                let (num, den) = unsigned_parts(x);
                cols.push(*j);
                w.push(rational_f64(x));
                w_lo.push(rational_f64_down(x));
                w_int.push(num * (&scale / den));
            }
            offsets.push(cols.len());
        }
        SparseOperator {
            n: rows.len(),
            offsets,
            cols,
            w,
            w_lo,
            w_int,
            scale,
            by_col: None,
        }
    }

    pub fn from_quotient(q: &QuotientGraph) -> SparseOperator {
        Self::from_rational_rows(&q.rows)
    }

    /// Adjacency matrix with multiplicities as weights.
    pub fn from_digraph(g: &Digraph) -> SparseOperator {
        let rows: Vec<Vec<(u32, num_rational::BigRational)>> = (0..g.num_vertices())
            .map(|u| {
                g.out_edges(u)
                    .map(|(v, m)| {
                        (
                            v as u32,
                            num_rational::BigRational::from_integer(BigInt::from(m)),
                        )
                    })
                    .collect()
            })
            .collect();
        Self::from_rational_rows(&rows)
    }

    /// The transposed operator.
    pub fn transpose(&self) -> SparseOperator {
        let mut t = (**self.by_col.as_ref().expect("column storage")).clone();
        let mut back = self.clone();
        back.by_col = None;
        t.by_col = Some(Box::new(back));
        t
    }

    pub fn scale(&self) -> &BigUint {
        &self.scale
    }

    pub fn num_entries(&self) -> usize {
        self.cols.len()
    }

    fn row(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }
}

impl Operator for SparseOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        fill_indexed(exec, y, |i| {
            self.row(i)
                .map(|e| self.w[e] * x[self.cols[e] as usize])
                .sum()
        });
    }
}

impl ExactOperator for SparseOperator {
    fn apply_scaled(&self, exec: Exec, v: &[BigUint]) -> ScaledImage {
        let mut values = vec![BigUint::zero(); self.n];
        fill_indexed(exec, &mut values, |i| {
            let mut acc = BigUint::zero();
            for e in self.row(i) {
                let x = &v[self.cols[e] as usize];
                if !x.is_zero() {
                    acc += &self.w_int[e] * x;
                }
            }
            acc
        });
        ScaledImage {
            values,
            scale: self.scale.clone(),
        }
    }
}

impl IntervalOperator for SparseOperator {
    fn apply_lower(&self, exec: Exec, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        fill_indexed(exec, &mut out, |i| {
            let mut acc = 0.0f64;
            for e in self.row(i) {
                let p = down_mul(self.w_lo[e], v[self.cols[e] as usize]);
                acc = down_add(acc, p);
            }
            acc
        });
        out
    }
}

impl LeftOperator for SparseOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_left(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        self.by_col
            .as_ref()
            .expect("column storage")
            .apply(exec, x, y);
    }

    fn apply_left_scaled(&self, exec: Exec, u: &[BigUint]) -> ScaledImage {
        self.by_col
            .as_ref()
            .expect("column storage")
            .apply_scaled(exec, u)
    }
}

/// `a * b` rounded towards zero, for nonnegative operands.
pub(crate) fn down_mul(a: f64, b: f64) -> f64 {
    let p = a * b;
    if p == 0.0 || exact_product(a, b, p) {
        p
    } else {
        p.next_down().max(0.0)
    }
}

/// `a + b` rounded down, for nonnegative operands.
pub(crate) fn down_add(a: f64, b: f64) -> f64 {
    let s = a + b;
    // two-sum error term: s - a - b is exact when computed this way
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// `a / b` rounded down, for nonnegative `a` and positive `b`.
pub(crate) fn down_div(a: f64, b: f64) -> f64 {
    let q = a / b;
    if q == 0.0 {
        return 0.0;
    }
    // q * b compared exactly against a
    if f64_rational(q) * f64_rational(b) > f64_rational(a) {
        q.next_down()
    } else {
        q
    }
}

fn exact_product(a: f64, b: f64, p: f64) -> bool {
    // fused multiply-add recovers the rounding error of a * b exactly
    a.mul_add(b, -p) == 0.0
}

/// Dense row-major nonnegative matrix.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    n: usize,
    a: Vec<f64>,
}

impl DenseOperator {
    pub fn new(n: usize, a: Vec<f64>) -> DenseOperator {
        assert_eq!(a.len(), n * n);
        assert!(
            a.iter().all(|x| x.is_finite() && *x >= 0.0),
            "entries must be finite and nonnegative"
        );
        DenseOperator { n, a }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    /// Support graph with unit multiplicities.
    pub fn structure(&self) -> Digraph {
        Digraph::from_rows(
            (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .filter(|&j| self.entry(i, j) > 0.0)
                        .map(|j| (j as u32, 1))
                        .collect()
                })
                .collect(),
        )
    }
}

impl Operator for DenseOperator {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        fill_indexed(exec, y, |i| {
            self.a[i * self.n..(i + 1) * self.n]
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum()
        });
    }
}

impl ExactOperator for DenseOperator {
    /// Every `f64` is a dyadic rational, so the matrix is an integer matrix
    /// over a common power of two.
    fn apply_scaled(&self, exec: Exec, v: &[BigUint]) -> ScaledImage {
        let parts: Vec<(BigUint, i64)> = self.a.iter().map(|&x| dyadic_parts(x)).collect();
        let min_exp = parts
            .iter()
            .filter(|(m, _)| !m.is_zero())
            .map(|p| p.1)
            .min()
            .unwrap_or(0)
            .min(0);
        let ints: Vec<BigUint> = parts
            .iter()
            .map(|(m, e)| {
                if m.is_zero() {
                    BigUint::zero()
                } else {
                    m << (e - min_exp) as usize
                }
            })
            .collect();
        let mut values = vec![BigUint::zero(); self.n];
        fill_indexed(exec, &mut values, |i| {
            let mut acc = BigUint::zero();
            for j in 0..self.n {
                let w = &ints[i * self.n + j];
                if !w.is_zero() && !v[j].is_zero() {
                    acc += w * &v[j];
                }
            }
            acc
        });
        ScaledImage {
            values,
            scale: BigUint::from(1u32) << (-min_exp) as usize,
        }
    }
}

impl IntervalOperator for DenseOperator {
    fn apply_lower(&self, exec: Exec, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        fill_indexed(exec, &mut out, |i| {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            row.iter()
                .zip(v)
                .fold(0.0, |acc, (&a, &x)| down_add(acc, down_mul(a, x)))
        });
        out
    }
}

/// `x = m * 2^e` with integer `m`.
fn dyadic_parts(x: f64) -> (BigUint, i64) {
    if x == 0.0 {
        return (BigUint::zero(), 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (BigUint::from(frac), -1074)
    } else {
        (BigUint::from(frac | (1u64 << 52)), exp - 1075)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn dyadic_round_trip() {
        for x in [1.0, 0.1, 3.75, 1e-300, 5e-324, 1e300] {
            let (m, e) = dyadic_parts(x);
            let r = BigRational::from_integer(BigInt::from(m))
                * if e >= 0 {
                    BigRational::from_integer(BigInt::from(1) << e as usize)
                } else {
                    BigRational::new(1.into(), BigInt::from(1) << (-e) as usize)
                };
            assert_eq!(r, f64_rational(x));
        }
    }

    #[test]
    fn directed_rounding_is_below() {
        let xs = [0.1, 0.2, 0.3, 1.0 / 3.0, 7.0, 1e-8];
        for &a in &xs {
            for &b in &xs {
                let exact_sum = f64_rational(a) + f64_rational(b);
                assert!(f64_rational(down_add(a, b)) <= exact_sum);
                let exact_mul = f64_rational(a) * f64_rational(b);
                assert!(f64_rational(down_mul(a, b)) <= exact_mul);
                let exact_div = f64_rational(a) / f64_rational(b);
                assert!(f64_rational(down_div(a, b)) <= exact_div);
            }
        }
    }

    #[test]
    fn sparse_forms_agree() {
        let third = BigRational::new(1.into(), 3.into());
        let rows = vec![
            vec![
                (0u32, third.clone()),
                (1, BigRational::from_integer(2.into())),
            ],
            vec![(0u32, BigRational::new(1.into(), 2.into()))],
        ];
        let op = SparseOperator::from_rational_rows(&rows);
        assert_eq!(op.scale(), &BigUint::from(6u32));
        let img = op.apply_scaled(
            Exec::Sequential,
            &[BigUint::from(3u32), BigUint::from(1u32)],
        );
        // (1 + 2, 3/2) scaled by 6
        assert_eq!(img.values, vec![BigUint::from(18u32), BigUint::from(9u32)]);
        let left = op.apply_left_scaled(
            Exec::Sequential,
            &[BigUint::from(3u32), BigUint::from(1u32)],
        );
        // (1 + 1/2, 6) scaled by 6
        assert_eq!(left.values, vec![BigUint::from(9u32), BigUint::from(36u32)]);
        let mut y = vec![0.0; 2];
        op.apply(Exec::Parallel, &[3.0, 1.0], &mut y);
        assert!((y[0] - 3.0).abs() < 1e-15 && (y[1] - 1.5).abs() < 1e-15);
        let lo = op.apply_lower(Exec::Sequential, &[3.0, 1.0]);
        assert!(lo[0] <= 3.0 && lo[1] <= 1.5);
        assert_eq!(
            op.transpose().transpose().apply_scaled(
                Exec::Sequential,
                &[BigUint::from(3u32), BigUint::from(1u32)]
            ),
            img
        );
    }
}
