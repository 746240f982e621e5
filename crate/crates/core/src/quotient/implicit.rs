//! Quotient operators applied through their recurrences instead of stored
//! weights.
//!
//! [`ShortOperator`] is the weighted short-count quotient with dropped
//! boundary edges. Writing `F(n, r) = sum_{m <= n, s} E(n, r, m, s) v(m, s)`,
//! the Pascal step of `E` gives
//!
//! ```text
//! F(n, r) = F(n - 1, r) + F(n, r - 1) + sum_{q < r} T(n - 2, q) v(n, q + n - r)
//! ```
//!
//! so one application costs `O(N^3)` instead of the `O(N^4)` stored weights.
//! The row action uses `(A v)(n, r) = sum_{s >= r} v(n + 1, s) + F(n, r) / T(n - 1, r)`.
//! The column action runs the same recurrence backwards through
//! `Y(a, b) = x(a, b) + Y(a + 1, b) + Y(a, b + 1)`.
//!
//! [`RunOperator`] is the initial-run quotient, applied with prefix sums in
//! `O(N^2)`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::catalan::TriangleTable;
use crate::error::{invalid, Result};
use crate::exec::{fill_indexed, map_range, Exec};
use crate::numeric::{lcm_all, ratio_f64};
use crate::spectral::{
    down_add, ExactOperator, IntervalOperator, LeftOperator, Operator, ScaledImage,
};

use super::key::ClassKey;

/// Largest cutoff for the implicit operators.
pub const IMPLICIT_CUTOFF_CAP: usize = 512;

/// Weighted short-count quotient with dropped boundary edges, classes
/// `(n, r)` for `1 <= n <= N`, `0 <= r < n` in key order.
#[derive(Clone, Debug)]
pub struct ShortOperator {
    cutoff: usize,
    t: TriangleTable,
    classes: Vec<(usize, usize)>,
    /// Least common multiple of all class sizes.
    scale: BigUint,
    /// `scale / T(n - 1, r)` per class.
    mult: Vec<BigUint>,
    // normalised recurrence coefficients per class
    coef_a: Vec<f64>,
    coef_b: Vec<f64>,
    coef_c: Vec<f64>,
    /// `T(n - 2, q) / Catalan(n - 2)` per length `n`.
    u: Vec<Vec<f64>>,
    /// `T(n - 2, q)` per length `n`, and `1 / T(n - 1, r)` per class.
    t_f64: Vec<Vec<f64>>,
    inv_size: Vec<f64>,
}

fn short_index(n: usize, r: usize) -> usize {
    n * (n - 1) / 2 + r
}

impl ShortOperator {
    pub fn new(cutoff: usize) -> Result<ShortOperator> {
        if cutoff == 0 || cutoff > IMPLICIT_CUTOFF_CAP {
            return Err(invalid(format!(
                "cutoff {cutoff} outside 1..={IMPLICIT_CUTOFF_CAP}"
            )));
        }
        let t = TriangleTable::new(cutoff);
        let classes: Vec<(usize, usize)> = (1..=cutoff)
            .flat_map(|n| (0..n).map(move |r| (n, r)))
            .collect();
        let scale = lcm_all(classes.iter().map(|&(n, r)| t.class_a(n, r)));
        let mult = classes
            .iter()
            .map(|&(n, r)| &scale / t.class_a(n, r))
            .collect();
        let mut coef_a = Vec::with_capacity(classes.len());
        let mut coef_b = Vec::with_capacity(classes.len());
        let mut coef_c = Vec::with_capacity(classes.len());
        let mut inv_size = Vec::with_capacity(classes.len());
        for &(n, r) in &classes {
            let (n, r) = (n as i64, r as i64);
            let size = t.get(n - 1, r);
            coef_a.push(ratio_f64(t.get(n - 2, r), size));
            coef_b.push(ratio_f64(t.get(n - 1, r - 1), size));
            coef_c.push(if n >= 2 {
                ratio_f64(t.get(n - 2, n - 2), size)
            } else {
                0.0
            });
            inv_size.push(ratio_f64(&BigUint::from(1u32), size));
        }
        let mut u = vec![Vec::new(); cutoff + 1];
        let mut t_f64 = vec![Vec::new(); cutoff + 1];
        for n in 2..=cutoff {
            let cat = t.get(n as i64 - 2, n as i64 - 2);
            u[n] = (0..=n - 2)
                .map(|q| ratio_f64(t.get(n as i64 - 2, q as i64), cat))
                .collect();
            t_f64[n] = (0..=n - 2)
                .map(|q| ratio_f64(t.get(n as i64 - 2, q as i64), &BigUint::from(1u32)))
                .collect();
        }
        Ok(ShortOperator {
            cutoff,
            t,
            classes,
            scale,
            mult,
            coef_a,
            coef_b,
            coef_c,
            u,
            t_f64,
            inv_size,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn keys(&self) -> Vec<ClassKey> {
        self.classes
            .iter()
            .map(|&(n, r)| ClassKey::SizeShort(n, r))
            .collect()
    }

    pub fn index_of(&self, n: usize, r: usize) -> Option<usize> {
        (n >= 1 && n <= self.cutoff && r < n).then(|| short_index(n, r))
    }

    pub fn scale(&self) -> &BigUint {
        &self.scale
    }

    /// `sum_{s >= r} v(n + 1, s)` for every class, zero on the last row.
    fn ascending<T, F>(&self, exec: Exec, v: &[T], zero: F) -> Vec<T>
    where
        T: Clone + Send + Sync + for<'a> std::ops::AddAssign<&'a T>,
        F: Fn() -> T + Sync,
    {
        let n_max = self.cutoff;
        let rows = map_range(exec, n_max, |i| {
            let n = i + 1;
            let mut out = vec![zero(); n];
            if n < n_max {
                let next = short_index(n + 1, 0);
                let mut acc = v[next + n].clone();
                for r in (0..n).rev() {
                    acc += &v[next + r];
                    out[r] = acc.clone();
                }
            }
            out
        });
        rows.into_iter().flatten().collect()
    }
}

impl Operator for ShortOperator {
    fn dim(&self) -> usize {
        self.classes.len()
    }

    fn apply(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        let mut g = vec![0.0; self.classes.len()];
        fill_indexed(exec, &mut g, |i| {
            let (n, r) = self.classes[i];
            if n < 2 {
                return 0.0;
            }
            let row = short_index(n, 0) + n - r;
            let u = &self.u[n];
            let mut acc = 0.0;
            for q in 0..r {
                acc += u[q] * x[row + q];
            }
            self.coef_c[i] * acc
        });
        let asc = self.ascending(exec, x, || 0.0);
        let mut f = vec![0.0; self.classes.len()];
        for n in 1..=self.cutoff {
            let base = short_index(n, 0);
            for r in 0..n {
                let i = base + r;
                let mut v = g[i];
                if r + 2 <= n {
                    v += self.coef_a[i] * f[short_index(n - 1, r)];
                }
                if r >= 1 {
                    v += self.coef_b[i] * f[i - 1];
                }
                f[i] = v;
            }
        }
        fill_indexed(exec, y, |i| asc[i] + f[i]);
    }
}

impl ExactOperator for ShortOperator {
    fn apply_scaled(&self, exec: Exec, v: &[BigUint]) -> ScaledImage {
        let mut g = vec![BigUint::zero(); self.classes.len()];
        fill_indexed(exec, &mut g, |i| {
            let (n, r) = self.classes[i];
            let row = short_index(n, 0) + n - r;
            let mut acc = BigUint::zero();
            for q in 0..r {
                let x = &v[row + q];
                if !x.is_zero() {
                    acc += self.t.get(n as i64 - 2, q as i64) * x;
                }
            }
            acc
        });
        let asc = self.ascending(exec, v, BigUint::zero);
        let mut f: Vec<BigUint> = vec![BigUint::zero(); self.classes.len()];
        for n in 1..=self.cutoff {
            let base = short_index(n, 0);
            for r in 0..n {
                let i = base + r;
                let mut acc = std::mem::take(&mut g[i]);
                if r + 2 <= n {
                    acc += &f[short_index(n - 1, r)];
                }
                if r >= 1 {
                    acc += &f[i - 1];
                }
                f[i] = acc;
            }
        }
        let mut values = vec![BigUint::zero(); self.classes.len()];
        fill_indexed(exec, &mut values, |i| {
            &asc[i] * &self.scale + &self.mult[i] * &f[i]
        });
        ScaledImage {
            values,
            scale: self.scale.clone(),
        }
    }
}

impl ShortOperator {
    /// `Y(a, b) = x(a, b) + Y(a + 1, b) + Y(a, b + 1)` over the class region.
    fn backward<T>(&self, x: Vec<T>) -> Vec<T>
    where
        T: Clone + for<'a> std::ops::AddAssign<&'a T>,
    {
        let mut y = x;
        for a in (1..=self.cutoff).rev() {
            for b in (0..a).rev() {
                let i = short_index(a, b);
                if a < self.cutoff {
                    let below = y[short_index(a + 1, b)].clone();
                    y[i] += &below;
                }
                if b + 1 < a {
                    let right = y[i + 1].clone();
                    y[i] += &right;
                }
            }
        }
        y
    }

    /// `sum_{r <= s} u(m - 1, r)` for every class `(m, s)`.
    fn ascending_in<T, F>(&self, exec: Exec, u: &[T], zero: F) -> Vec<T>
    where
        T: Clone + Send + Sync + for<'a> std::ops::AddAssign<&'a T>,
        F: Fn() -> T + Sync,
    {
        let rows = map_range(exec, self.cutoff, |i| {
            let m = i + 1;
            let mut out = vec![zero(); m];
            if m >= 2 {
                let prev = short_index(m - 1, 0);
                let mut acc = zero();
                for (s, slot) in out.iter_mut().enumerate() {
                    if s < m - 1 {
                        acc += &u[prev + s];
                    }
                    *slot = acc.clone();
                }
            }
            out
        });
        rows.into_iter().flatten().collect()
    }
}

impl LeftOperator for ShortOperator {
    fn dim(&self) -> usize {
        self.classes.len()
    }

    fn apply_left(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        let scaled: Vec<f64> = x.iter().zip(&self.inv_size).map(|(a, b)| a * b).collect();
        let big_y = self.backward(scaled);
        let asc = self.ascending_in(exec, x, || 0.0);
        fill_indexed(exec, y, |i| {
            let (m, s) = self.classes[i];
            let mut acc = asc[i];
            if m >= 2 {
                let row = short_index(m, 0) + m - s;
                let t = &self.t_f64[m];
                for q in 0..s {
                    acc += t[q] * big_y[row + q];
                }
            }
            acc
        });
    }

    fn apply_left_scaled(&self, exec: Exec, u: &[BigUint]) -> ScaledImage {
        let mut scaled = vec![BigUint::zero(); self.classes.len()];
        fill_indexed(exec, &mut scaled, |i| &u[i] * &self.mult[i]);
        let big_y = self.backward(scaled);
        let asc = self.ascending_in(exec, u, BigUint::zero);
        let mut values = vec![BigUint::zero(); self.classes.len()];
        fill_indexed(exec, &mut values, |i| {
            let (m, s) = self.classes[i];
            let mut acc = &asc[i] * &self.scale;
            let row = short_index(m, 0) + m - s;
            for q in 0..s {
                let y = &big_y[row + q];
                if !y.is_zero() {
                    acc += self.t.get(m as i64 - 2, q as i64) * y;
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

/// Initial-run quotient on classes `(n, r)` with `2 <= n <= N`,
/// `1 <= r < n`, except `(N, N - 1)`, in key order.
#[derive(Clone, Debug)]
pub struct RunOperator {
    cutoff: usize,
    dim: usize,
}

fn run_index(n: usize, r: usize) -> usize {
    (n - 1) * (n - 2) / 2 + r - 1
}

impl RunOperator {
    pub fn new(cutoff: usize) -> Result<RunOperator> {
        if !(3..=IMPLICIT_CUTOFF_CAP * 2).contains(&cutoff) {
            return Err(invalid(format!(
                "cutoff {cutoff} outside 3..={}",
                IMPLICIT_CUTOFF_CAP * 2
            )));
        }
        Ok(RunOperator {
            cutoff,
            dim: cutoff * (cutoff - 1) / 2 - 1,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn keys(&self) -> Vec<ClassKey> {
        (2..=self.cutoff)
            .flat_map(|n| (1..n).map(move |r| ClassKey::SizeRun(n, r)))
            .take(self.dim)
            .collect()
    }

    fn apply_generic<T, F>(&self, exec: Exec, v: &[T], zero: F) -> Vec<T>
    where
        T: Clone + Send + Sync + for<'a> std::ops::AddAssign<&'a T>,
        F: Fn() -> T + Sync,
    {
        let n_max = self.cutoff;
        let get = |n: usize, r: usize| -> Option<&T> {
            let i = run_index(n, r);
            (i < self.dim).then(|| &v[i])
        };
        // prefix[n][s] = sum_{s' <= s} v(n, s'), rows n = 2..=N
        let prefix: Vec<Vec<T>> = map_range(exec, n_max + 1, |n| {
            let mut out = Vec::new();
            if n >= 2 {
                let mut acc = zero();
                for s in 1..n {
                    if let Some(x) = get(n, s) {
                        acc += x;
                    }
                    out.push(acc.clone());
                }
            }
            out
        });
        // column[r][n - r - 1] = sum_{r < m <= n} v(m, r)
        let column: Vec<Vec<T>> = map_range(exec, n_max, |r| {
            let mut out = Vec::new();
            if r >= 1 {
                let mut acc = zero();
                for m in r + 1..=n_max {
                    if let Some(x) = get(m, r) {
                        acc += x;
                    }
                    out.push(acc.clone());
                }
            }
            out
        });
        map_range(exec, self.dim, |i| {
            let (n, r) = run_class(i);
            let mut acc = column[r][n - r - 1].clone();
            if n < n_max {
                acc += &prefix[n + 1][r];
            }
            acc
        })
    }
}

/// Inverse of `run_index`.
fn run_class(i: usize) -> (usize, usize) {
    let mut n = 2;
    while run_index(n + 1, 1) <= i {
        n += 1;
    }
    (n, i - run_index(n, 1) + 1)
}

impl Operator for RunOperator {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        let out = self.apply_generic(exec, x, || 0.0);
        y.copy_from_slice(&out);
    }
}

impl ExactOperator for RunOperator {
    fn apply_scaled(&self, exec: Exec, v: &[BigUint]) -> ScaledImage {
        ScaledImage {
            values: self.apply_generic(exec, v, BigUint::zero),
            scale: BigUint::from(1u32),
        }
    }
}

/// `f64` whose additions round down.
#[derive(Clone, Copy)]
struct Down(f64);

impl std::ops::AddAssign<&Down> for Down {
    fn add_assign(&mut self, other: &Down) {
        self.0 = down_add(self.0, other.0);
    }
}

impl IntervalOperator for RunOperator {
    fn apply_lower(&self, exec: Exec, v: &[f64]) -> Vec<f64> {
        let x: Vec<Down> = v.iter().map(|&a| Down(a)).collect();
        self.apply_generic(exec, &x, || Down(0.0))
            .into_iter()
            .map(|d| d.0)
            .collect()
    }
}
