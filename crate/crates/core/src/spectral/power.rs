use crate::error::{invalid, Error, Result};
use crate::exec::Exec;

use super::operator::Operator;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 200_000;

/// The bracket `min (A v)_i / v_i <= lambda <= max (A v)_i / v_i` must close
/// to `BRACKET_FACTOR * tolerance * max(1, lambda)` before stopping.
pub const BRACKET_FACTOR: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerOptions {
    pub tolerance: f64,
    pub max_iters: usize,
    pub exec: Exec,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_iters: DEFAULT_MAX_ITERS,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerResult {
    /// Growth of the max norm in the last step.
    pub lambda: f64,
    /// `min` and `max` of `(A v)_i / v_i` over the last iterate's support.
    pub bracket: (f64, f64),
    /// Final iterate, scaled to max norm one.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Power iteration from the all-ones vector.
pub fn power_iteration<O: Operator + ?Sized>(op: &O, opts: &PowerOptions) -> Result<PowerResult> {
    power_iteration_from(op, vec![1.0; op.dim()], opts)
}

/// Power iteration from `start`, renormalising in the max norm every step.
/// Stops once successive estimates differ by less than the tolerance and the
/// ratio bracket has closed.
pub fn power_iteration_from<O: Operator + ?Sized>(
    op: &O,
    start: Vec<f64>,
    opts: &PowerOptions,
) -> Result<PowerResult> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::DegenerateGraph("operator has dimension zero".into()));
    }
    if start.len() != n || start.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(invalid(
            "start vector must be finite, nonnegative and match the dimension",
        ));
    }
    let mut v = start;
    let norm = max_norm(&v);
    if norm == 0.0 {
        return Err(invalid("start vector is zero"));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    let mut y = vec![0.0; n];
    let mut lambda = f64::NAN;
    let mut bracket = (f64::NAN, f64::NAN);
    for it in 1..=opts.max_iters.max(1) {
        op.apply(opts.exec, &v, &mut y);
        let norm = max_norm(&y);
        bracket = ratio_bracket(&v, &y);
        if !norm.is_finite() {
            return Err(Error::NumericOverflow(format!(
                "non-finite iterate at step {it}"
            )));
        }
        if norm == 0.0 {
            return Err(Error::DegenerateGraph(
                "iterate vanished; the operator is nilpotent on it".into(),
            ));
        }
        y.iter_mut().for_each(|x| *x /= norm);
        std::mem::swap(&mut v, &mut y);
        let width = bracket.1 - bracket.0;
        let done = (norm - lambda).abs() < opts.tolerance
            && width <= BRACKET_FACTOR * opts.tolerance * norm.max(1.0);
        lambda = norm;
        if done {
            return Ok(PowerResult {
                lambda,
                bracket,
                vector: v,
                iterations: it,
                converged: true,
            });
        }
    }
    Ok(PowerResult {
        lambda,
        bracket,
        vector: v,
        iterations: opts.max_iters.max(1),
        converged: false,
    })
}

fn ratio_bracket(v: &[f64], av: &[f64]) -> (f64, f64) {
    v.iter()
        .zip(av)
        .filter(|(x, _)| **x >= f64::MIN_POSITIVE)
        .map(|(x, y)| y / x)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r), hi.max(r))
        })
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter()
        .fold(0.0f64, |m, &x| if x.is_nan() { f64::NAN } else { m.max(x) })
}
