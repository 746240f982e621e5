//! Collatz-Wielandt lower bounds: for `v >= 0`, `v != 0`, the spectral
//! radius is at least `min_{v_i > 0} (A v)_i / v_i`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::numeric::{f64_rational, to_bigint};

use super::operator::{down_div, ExactOperator, IntervalOperator};

/// Fewest fractional bits of a snapped vector.
pub const MIN_FRAC_BITS: u32 = 64;

/// How a bound was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertMode {
    /// Exact rational arithmetic.
    Exact,
    /// Floating point with every rounding directed downwards.
    Interval,
}

impl fmt::Display for CertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertMode::Exact => "exact",
            CertMode::Interval => "interval",
        })
    }
}

impl FromStr for CertMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CertMode::Exact),
            "interval" => Ok(CertMode::Interval),
            _ => Err(invalid(format!("unknown certification mode {s:?}"))),
        }
    }
}

/// A certified lower bound and the coordinate attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct Certified {
    pub rho: BigRational,
    pub argmin: usize,
    pub mode: CertMode,
}

/// `v / max(v)` as integer numerators over `2^frac_bits`.
///
/// Every `f64` is a dyadic rational, so the snapped vector is the normalised
/// iterate itself, exactly; `frac_bits` is the least number, at least
/// [`MIN_FRAC_BITS`], that represents all entries.
pub fn snap_dyadic(v: &[f64]) -> Result<(Vec<BigUint>, u32)> {
    if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(invalid("vector must be finite and nonnegative"));
    }
    let max = v.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return Err(invalid("vector is zero"));
    }
    let parts: Vec<(u64, i32)> = v.iter().map(|&x| dyadic_parts(x / max)).collect();
    let frac_bits = parts
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|&(_, e)| (-e).max(0) as u32)
        .max()
        .unwrap_or(0)
        .max(MIN_FRAC_BITS);
    let nums = parts
        .iter()
        .map(|&(m, e)| BigUint::from(m) << (frac_bits as i64 + e as i64) as usize)
        .collect();
    Ok((nums, frac_bits))
}

/// `x = m * 2^e` with `m < 2^53`.
fn dyadic_parts(x: f64) -> (u64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    };
    let tz = m.trailing_zeros() as i32;
    (m >> tz, e + tz)
}

/// `n / 2^frac_bits` as an `f64`, if that is exact.
fn dyadic_to_f64(n: &BigUint, frac_bits: u32) -> Option<f64> {
    if n.is_zero() {
        return Some(0.0);
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    let m = (n >> tz).to_u64().filter(|&m| m < (1u64 << 53))?;
    let exp = tz as i64 - frac_bits as i64;
    let mut e = exp;
    let mut x = m as f64;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        x *= (step as f64).exp2();
        e -= step;
    }
    // m is odd, so exactness means the parts come back unchanged
    (x.is_finite() && dyadic_parts(x) == (m, exp as i32)).then_some(x)
}

fn check_vector(v: &[BigUint], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(invalid(format!(
            "vector has length {}, operator dimension {dim}",
            v.len()
        )));
    }
    if v.iter().all(Zero::is_zero) {
        return Err(invalid("vector is zero"));
    }
    Ok(())
}

/// Exact `min_{v_i > 0} (A v)_i / v_i`.
pub fn certify_exact<O: ExactOperator + ?Sized>(
    exec: Exec,
    op: &O,
    v: &[BigUint],
) -> Result<Certified> {
    check_vector(v, op.dim())?;
    let image = op.apply_scaled(exec, v);
    // compare values_i / v_i by cross-multiplication
    let mut best: Option<usize> = None;
    for (i, (a, b)) in image.values.iter().zip(v).enumerate() {
        if b.is_zero() {
            continue;
        }
        let better = match best {
            None => true,
            Some(j) => a * &v[j] < &image.values[j] * b,
        };
        if better {
            best = Some(i);
        }
    }
    let i = best.expect("nonzero vector");
    Ok(Certified {
        rho: BigRational::new(
            to_bigint(&image.values[i]),
            to_bigint(&(&image.scale * &v[i])),
        ),
        argmin: i,
        mode: CertMode::Exact,
    })
}

/// Lower bound on `min_{v_i > 0} (A v)_i / v_i` with downward rounding,
/// for `v` given as numerators over `2^frac_bits`. Every entry must be an
/// exact `f64`.
pub fn certify_interval<O: IntervalOperator + ?Sized>(
    exec: Exec,
    op: &O,
    v: &[BigUint],
    frac_bits: u32,
) -> Result<Certified> {
    check_vector(v, op.dim())?;
    let x: Vec<f64> = v
        .iter()
        .map(|b| {
            dyadic_to_f64(b, frac_bits)
                .ok_or_else(|| invalid("interval certification needs entries exact in f64"))
        })
        .collect::<Result<_>>()?;
    let lo = op.apply_lower(exec, &x);
    let mut best: Option<(usize, f64)> = None;
    for (i, (&a, &b)) in lo.iter().zip(&x).enumerate() {
        if b == 0.0 {
            continue;
        }
        let q = down_div(a, b);
        if best.is_none_or(|(_, m)| q < m) {
            best = Some((i, q));
        }
    }
    let (i, q) = best.expect("nonzero vector");
    Ok(Certified {
        rho: f64_rational(q),
        argmin: i,
        mode: CertMode::Interval,
    })
}

/// Body of the vector sidecar file.
pub fn vector_body(v: &[BigUint], frac_bits: u32) -> String {
    let mut out = format!("bvec v1 {} {}\n", v.len(), frac_bits);
    for x in v {
        let _ = writeln!(out, "{x}");
    }
    out
}

/// Parse a sidecar body back into the vector and its fractional bits.
pub fn parse_vector_body(body: &str) -> Result<(Vec<BigUint>, u32)> {
    let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
    let mut lines = body.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty vector file".into()))?;
    let f: Vec<&str> = header.split_whitespace().collect();
    if f.len() != 4 || f[0] != "bvec" || f[1] != "v1" {
        return Err(parse_err(1, format!("bad header {header:?}")));
    }
    let dim: usize = f[2]
        .parse()
        .map_err(|_| parse_err(1, format!("bad dimension {:?}", f[2])))?;
    let bits: u32 = f[3]
        .parse()
        .map_err(|_| parse_err(1, format!("bad bit count {:?}", f[3])))?;
    let mut v = Vec::with_capacity(dim);
    for (no, line) in lines.enumerate() {
        let x: BigUint = line
            .trim()
            .parse()
            .map_err(|_| parse_err(no + 2, format!("bad entry {line:?}")))?;
        v.push(x);
    }
    if v.len() != dim {
        return Err(parse_err(
            1,
            format!("expected {dim} entries, found {}", v.len()),
        ));
    }
    Ok((v, bits))
}

/// SHA-256 of the sidecar body, in lowercase hex.
pub fn vector_digest(v: &[BigUint], frac_bits: u32) -> String {
    hex_digest(vector_body(v, frac_bits).as_bytes())
}

pub(crate) fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// `rho` as an `f64` rounded to nearest, for display.
pub fn rho_f64(rho: &BigRational) -> f64 {
    crate::numeric::rational_f64(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::DenseOperator;

    #[test]
    fn snapping() {
        let (v, bits) = snap_dyadic(&[0.5, 1.0, 0.0]).unwrap();
        assert_eq!(bits, 64);
        assert_eq!(
            v,
            vec![
                BigUint::from(1u32) << 63,
                BigUint::from(1u32) << 64,
                BigUint::zero()
            ]
        );
        let (v, bits) = snap_dyadic(&[1e-300, 2.0]).unwrap();
        assert!(bits > 1000);
        assert_eq!(dyadic_to_f64(&v[0], bits), Some(1e-300 / 2.0));
        assert_eq!(dyadic_to_f64(&v[1], bits), Some(1.0));
        assert!(snap_dyadic(&[0.0, 0.0]).is_err());
        assert!(snap_dyadic(&[-1.0]).is_err());
    }

    #[test]
    fn eigenvector_gives_equality() {
        let op = DenseOperator::new(2, vec![2.0, 1.0, 1.0, 2.0]);
        let v = vec![BigUint::from(1u32), BigUint::from(1u32)];
        let c = certify_exact(Exec::Sequential, &op, &v).unwrap();
        assert_eq!(c.rho, BigRational::from_integer(3.into()));
        let c = certify_interval(Exec::Sequential, &op, &v, 0).unwrap();
        assert_eq!(c.rho, BigRational::from_integer(3.into()));
    }

    #[test]
    fn minimum_skips_unsupported_coordinates() {
        let op = DenseOperator::new(3, vec![1.0, 0.0, 5.0, 0.0, 3.0, 0.0, 0.0, 0.0, 0.25]);
        let v = vec![BigUint::from(2u32), BigUint::from(1u32), BigUint::zero()];
        let c = certify_exact(Exec::Sequential, &op, &v).unwrap();
        assert_eq!(c.rho, BigRational::from_integer(1.into()));
        assert_eq!(c.argmin, 0);
    }

    #[test]
    fn interval_is_below_exact() {
        let op = DenseOperator::new(2, vec![0.1, 0.7, 0.3, 0.2]);
        let (v, bits) = snap_dyadic(&[0.9, 0.7]).unwrap();
        let exact = certify_exact(Exec::Sequential, &op, &v).unwrap();
        let lower = certify_interval(Exec::Sequential, &op, &v, bits).unwrap();
        assert!(lower.rho <= exact.rho);
        assert!(rho_f64(&exact.rho) - rho_f64(&lower.rho) < 1e-14);
    }

    #[test]
    fn sidecar_round_trip() {
        let v = vec![BigUint::from(3u32), BigUint::from(1u32) << 64];
        let body = vector_body(&v, 64);
        assert_eq!(parse_vector_body(&body).unwrap(), (v.clone(), 64));
        assert_eq!(vector_digest(&v, 64).len(), 64);
        assert_ne!(vector_digest(&v, 64), vector_digest(&v, 52));
    }
}
