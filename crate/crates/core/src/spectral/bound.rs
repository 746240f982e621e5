//! From a quotient kind and cutoff to a certified lower bound.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::oracle::EdgeRule;
use crate::quotient::{
    build_chain, build_quotient_a, build_quotient_b, build_quotient_c, Boundary, ClassKey,
    QuotientKind, RunOperator, ShortOperator,
};

use super::certify::{certify_exact, certify_interval, snap_dyadic, CertMode, Certified};
use super::operator::{ExactOperator, IntervalOperator, Operator, ScaledImage, SparseOperator};
use super::power::{power_iteration, PowerOptions, PowerResult};
use super::validate::{validate_pf, PfReport};

/// Largest cutoff at which the hypotheses of the implicit operators are also
/// checked on an explicit graph.
const EXPLICIT_CHECK_CUTOFF: usize = 40;

/// Arithmetic requested for certification.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Arith {
    #[default]
    Exact,
    Float,
}

impl fmt::Display for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arith::Exact => "exact",
            Arith::Float => "float",
        })
    }
}

impl FromStr for Arith {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Arith::Exact),
            "float" => Ok(Arith::Float),
            _ => Err(invalid(format!("unknown arithmetic {s:?}"))),
        }
    }
}

/// The operator whose spectral radius bounds the growth rate.
#[derive(Clone, Debug)]
pub enum BoundOperator {
    Sparse(SparseOperator),
    Short(ShortOperator),
    Run(RunOperator),
}

impl BoundOperator {
    fn interval(&self) -> Option<&dyn IntervalOperator> {
        match self {
            BoundOperator::Sparse(op) => Some(op),
            BoundOperator::Run(op) => Some(op),
            BoundOperator::Short(_) => None,
        }
    }

    /// Certification mode used for `arith`. The weighted short-count
    /// operator has no floating-point lower bound and is always exact.
    pub fn mode_for(&self, arith: Arith) -> CertMode {
        match arith {
            Arith::Float if self.interval().is_some() => CertMode::Interval,
            _ => CertMode::Exact,
        }
    }

    pub fn certify(
        &self,
        exec: Exec,
        v: &[BigUint],
        frac_bits: u32,
        mode: CertMode,
    ) -> Result<Certified> {
        match mode {
            CertMode::Exact => certify_exact(exec, self, v),
            CertMode::Interval => {
                let op = self
                    .interval()
                    .ok_or_else(|| invalid("this operator has no interval evaluation"))?;
                certify_interval(exec, op, v, frac_bits)
            }
        }
    }
}

impl Operator for BoundOperator {
    fn dim(&self) -> usize {
        match self {
            BoundOperator::Sparse(op) => Operator::dim(op),
            BoundOperator::Short(op) => Operator::dim(op),
            BoundOperator::Run(op) => Operator::dim(op),
        }
    }

    fn apply(&self, exec: Exec, x: &[f64], y: &mut [f64]) {
        match self {
            BoundOperator::Sparse(op) => op.apply(exec, x, y),
            BoundOperator::Short(op) => op.apply(exec, x, y),
            BoundOperator::Run(op) => op.apply(exec, x, y),
        }
    }
}

impl ExactOperator for BoundOperator {
    fn apply_scaled(&self, exec: Exec, v: &[BigUint]) -> ScaledImage {
        match self {
            BoundOperator::Sparse(op) => op.apply_scaled(exec, v),
            BoundOperator::Short(op) => op.apply_scaled(exec, v),
            BoundOperator::Run(op) => op.apply_scaled(exec, v),
        }
    }
}

/// Bound operator with its class keys and a hypothesis report.
#[derive(Clone, Debug)]
pub struct BoundSetup {
    pub kind: QuotientKind,
    pub cutoff: usize,
    pub operator: BoundOperator,
    pub keys: Vec<ClassKey>,
    /// Classes left out to make the graph strongly connected.
    pub dropped: Vec<ClassKey>,
    /// Report on an explicit graph, when one was built.
    pub pf: Option<PfReport>,
}

/// Operator for `kind` at `cutoff`.
///
/// The run and weighted short-count quotients are applied through their
/// recurrences; the descent and chain quotients are built explicitly and cut
/// down to one strongly connected component. The chain operator is
/// transposed, which keeps its spectral radius.
pub fn bound_operator(exec: Exec, kind: QuotientKind, cutoff: usize) -> Result<BoundSetup> {
    match kind {
        QuotientKind::Run => {
            let op = RunOperator::new(cutoff)?;
            let pf = (cutoff <= EXPLICIT_CHECK_CUTOFF)
                .then(|| build_quotient_b(cutoff))
                .transpose()?
                .map(|q| validate_pf(&q.structure(), q.start, None));
            Ok(BoundSetup {
                kind,
                cutoff,
                keys: op.keys(),
                dropped: vec![ClassKey::SizeRun(cutoff, cutoff - 1)],
                operator: BoundOperator::Run(op),
                pf,
            })
        }
        QuotientKind::Short => {
            let op = ShortOperator::new(cutoff)?;
            let pf = (cutoff <= EXPLICIT_CHECK_CUTOFF)
                .then(|| build_quotient_a(exec, cutoff, Boundary::Drop))
                .transpose()?
                .map(|q| validate_pf(&q.structure(), None, q.start));
            Ok(BoundSetup {
                kind,
                cutoff,
                keys: op.keys(),
                dropped: Vec::new(),
                operator: BoundOperator::Short(op),
                pf,
            })
        }
        QuotientKind::Descents | QuotientKind::Chain => {
            let q = if kind == QuotientKind::Descents {
                build_quotient_c(exec, cutoff)?
            } else {
                build_chain(exec, cutoff, EdgeRule::VersionTwo)?
            };
            let pf = validate_pf(&q.structure(), None, q.start);
            let (q, dropped) = q.pruned(None)?;
            let mut op = SparseOperator::from_quotient(&q);
            if kind == QuotientKind::Chain {
                op = op.transpose();
            }
            Ok(BoundSetup {
                kind,
                cutoff,
                keys: q.keys,
                dropped,
                operator: BoundOperator::Sparse(op),
                pf: Some(pf),
            })
        }
    }
}

/// Power iteration followed by certification of the snapped vector.
#[derive(Clone, Debug)]
pub struct BoundRun {
    pub setup: BoundSetup,
    pub power: PowerResult,
    pub tolerance: f64,
    pub vector: Vec<BigUint>,
    pub frac_bits: u32,
    pub certified: Certified,
    pub exec: Exec,
}

impl BoundRun {
    pub fn dimension(&self) -> usize {
        self.vector.len()
    }
}

pub fn compute_bound(
    kind: QuotientKind,
    cutoff: usize,
    arith: Arith,
    opts: &PowerOptions,
) -> Result<BoundRun> {
    let setup = bound_operator(opts.exec, kind, cutoff)?;
    if let Some(pf) = &setup.pf {
        if !pf.component_ok() {
            return Err(Error::DegenerateGraph(format!(
                "the {kind} quotient at cutoff {cutoff} has no aperiodic component"
            )));
        }
    }
    let power = power_iteration(&setup.operator, opts)?;
    let mode = setup.operator.mode_for(arith);
    let (vector, frac_bits) = snap_dyadic(&power.vector)?;
    let certified = setup
        .operator
        .certify(opts.exec, &vector, frac_bits, mode)?;
    Ok(BoundRun {
        setup,
        power,
        tolerance: opts.tolerance,
        vector,
        frac_bits,
        certified,
        exec: opts.exec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::build_quotient_b_with_dropped;

    #[test]
    fn run_setup_matches_explicit() {
        for n in [3, 5, 9, 17] {
            let (q, dropped) = build_quotient_b_with_dropped(n).unwrap();
            let setup = bound_operator(Exec::Sequential, QuotientKind::Run, n).unwrap();
            assert_eq!(setup.keys, q.keys);
            assert_eq!(setup.dropped, dropped);
            assert!(setup.pf.unwrap().strongly_connected);
        }
    }

    #[test]
    fn bounds_are_below_estimates() {
        let opts = PowerOptions::default();
        for (kind, n) in [
            (QuotientKind::Run, 12),
            (QuotientKind::Short, 12),
            (QuotientKind::Descents, 7),
            (QuotientKind::Chain, 10),
        ] {
            for arith in [Arith::Exact, Arith::Float] {
                let run = compute_bound(kind, n, arith, &opts).unwrap();
                let rho = crate::numeric::rational_f64(&run.certified.rho);
                assert!(rho <= run.power.lambda + opts.tolerance, "{kind} {n}");
                assert!(
                    rho > run.power.lambda - 1e-6,
                    "{kind} {n}: {rho} {}",
                    run.power.lambda
                );
            }
        }
    }
}
