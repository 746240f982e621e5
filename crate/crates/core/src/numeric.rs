//! Conversions between big rationals and floating point.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `a / b` rounded to a nearby `f64` (relative error below `2^-60`).
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    assert!(!b.is_zero(), "division by zero");
    if a.is_zero() {
        return 0.0;
    }
    let (ba, bb) = (a.bits() as i64, b.bits() as i64);
    // keep ~62 significant bits of each operand
    let sa = (ba - 62).max(0);
    let sb = (bb - 62).max(0);
    let ma = (a >> sa as usize).to_f64().unwrap();
    let mb = (b >> sb as usize).to_f64().unwrap();
    let exp = sa - sb;
    ma / mb * 2f64.powi(exp.clamp(-1100, 1100) as i32)
}

pub fn rational_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    let sign = if (n.sign() == Sign::Minus) ^ (d.sign() == Sign::Minus) {
        -1.0
    } else {
        1.0
    };
    sign * ratio_f64(n.magnitude(), d.magnitude())
}

/// Exact value of a finite `f64`.
pub fn f64_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Largest `f64` not above `r`, for nonnegative `r`.
pub fn rational_f64_down(r: &BigRational) -> f64 {
    let mut x = rational_f64(r);
    while f64_rational(x) > *r {
        x = x.next_down();
    }
    x
}

pub fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigUint>) -> BigUint {
    values.into_iter().fold(
        BigUint::one(),
        |acc, v| if v.is_zero() { acc } else { acc.lcm(v) },
    )
}

pub fn to_bigint(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// Nonnegative rational as `(numerator, denominator)` magnitudes.
pub fn unsigned_parts(r: &BigRational) -> (BigUint, BigUint) {
    assert!(!r.is_negative(), "negative rational");
    (r.numer().magnitude().clone(), r.denom().magnitude().clone())
}

/// Decimal expansion of a nonnegative rational truncated to `digits`
/// fractional digits.
pub fn decimal_string(r: &BigRational, digits: usize) -> String {
    let (n, d) = unsigned_parts(r);
    let (int, rem) = n.div_rem(&d);
    if digits == 0 {
        return int.to_string();
    }
    let frac = rem * BigUint::from(10u32).pow(digits as u32) / d;
    format!("{int}.{:0>width$}", frac.to_string(), width = digits)
}
