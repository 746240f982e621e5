//! Closed-form test vector for the 213 chain graph.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::error::{invalid, Result};
use crate::exec::Exec;
use crate::quotient::{ClassKey, QuotientKind};

use super::bound::{bound_operator, BoundOperator};
use super::certificate::BoundCertificate;
use super::certify::{certify_exact, vector_digest};
use super::power::{power_iteration, PowerOptions};

/// Chain certificate together with its vector and the sum `alpha` of the
/// normalised vector `(1, 1, 2/3, (2/3)^2, ...)`.
#[derive(Clone, Debug)]
pub struct AnalyticCertificate {
    pub certificate: BoundCertificate,
    pub vector: Vec<BigUint>,
    pub alpha: BigRational,
}

/// `4 - 2^(N-1) / 3^(N-2)`.
pub fn chain_alpha(cutoff: usize) -> BigRational {
    let n = cutoff as u32;
    let two = BigInt::from(2).pow(n - 1);
    let three = BigInt::from(3).pow(n - 2);
    BigRational::from_integer(BigInt::from(4)) - BigRational::new(two, three)
}

/// `(1, 1, 2/3, (2/3)^2, ...)` scaled by `3^(N-2)` to integers, indexed by
/// the length of the increasing permutation.
pub fn chain_vector(cutoff: usize) -> Vec<BigUint> {
    let n = cutoff as u32;
    (1..=n)
        .map(|k| {
            if k == 1 {
                BigUint::from(3u32).pow(n - 2)
            } else {
                BigUint::from(2u32).pow(k - 2) * BigUint::from(3u32).pow(n - k)
            }
        })
        .collect()
}

/// Exact Collatz-Wielandt bound of [`chain_vector`] on the version-two chain
/// operator, with a power-iteration estimate alongside.
pub fn analytic_213_certificate(exec: Exec, cutoff: usize) -> Result<AnalyticCertificate> {
    if cutoff < 3 {
        return Err(invalid("the chain certificate needs cutoff at least 3"));
    }
    let setup = bound_operator(exec, QuotientKind::Chain, cutoff)?;
    let expected: Vec<ClassKey> = (1..=cutoff).map(|k| ClassKey::SizeRun(k, k)).collect();
    if setup.keys != expected {
        return Err(crate::error::Error::Consistency(
            "unexpected chain classes".into(),
        ));
    }
    let BoundOperator::Sparse(op) = &setup.operator else {
        unreachable!("the chain operator is explicit")
    };
    let vector = chain_vector(cutoff);
    let certified = certify_exact(exec, op, &vector)?;
    let opts = PowerOptions {
        exec,
        ..PowerOptions::default()
    };
    let power = power_iteration(op, &opts)?;
    let certificate = BoundCertificate {
        pattern: "213".into(),
        quotient: QuotientKind::Chain,
        cutoff,
        dimension: vector.len(),
        lambda_estimate: power.lambda,
        rho: certified.rho,
        argmin: certified.argmin,
        iterations: power.iterations,
        converged: power.converged,
        tolerance: opts.tolerance,
        mode: certified.mode,
        vector_frac_bits: 0,
        vector_digest: vector_digest(&vector, 0),
        conditional: false,
        condition: None,
        exec,
    };
    Ok(AnalyticCertificate {
        certificate,
        vector,
        alpha: chain_alpha(cutoff),
    })
}
