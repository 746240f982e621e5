//! Certificate files.
//!
//! ```text
//! bcert v1
//! key=value                 one line per field
//! ```
//!
//! The test vector is stored next to the certificate in `<path>.vec`:
//!
//! ```text
//! bvec v1 <dimension> <fractional bits>
//! <numerator>               one line per entry
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::numeric::{decimal_string, rational_f64};
use crate::oracle::write_atomic;
use crate::quotient::QuotientKind;

use super::bound::{bound_operator, BoundRun};
use super::certify::{hex_digest, parse_vector_body, vector_body, CertMode, Certified};

/// Hypothesis under which the weighted short-count bound holds.
pub const WEIGHTED_CONDITION: &str =
    "weighted walk totals of the short-count quotient never exceed walk counts of the full graph";

/// A certified lower bound on a spectral radius, with what is needed to
/// recheck it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate {
    pub pattern: String,
    pub quotient: QuotientKind,
    pub cutoff: usize,
    pub dimension: usize,
    pub lambda_estimate: f64,
    pub rho: BigRational,
    pub argmin: usize,
    pub iterations: usize,
    pub converged: bool,
    pub tolerance: f64,
    pub mode: CertMode,
    pub vector_frac_bits: u32,
    pub vector_digest: String,
    /// The bound on the growth rate needs an unproven hypothesis.
    pub conditional: bool,
    pub condition: Option<String>,
    pub exec: Exec,
}

impl BoundCertificate {
    pub fn from_run(run: &BoundRun) -> BoundCertificate {
        let kind = run.setup.kind;
        let conditional = kind == QuotientKind::Short;
        BoundCertificate {
            pattern: kind.pattern().to_string(),
            quotient: kind,
            cutoff: run.setup.cutoff,
            dimension: run.dimension(),
            lambda_estimate: run.power.lambda,
            rho: run.certified.rho.clone(),
            argmin: run.certified.argmin,
            iterations: run.power.iterations,
            converged: run.power.converged,
            tolerance: run.tolerance,
            mode: run.certified.mode,
            vector_frac_bits: run.frac_bits,
            vector_digest: hex_digest(vector_body(&run.vector, run.frac_bits).as_bytes()),
            conditional,
            condition: conditional.then(|| WEIGHTED_CONDITION.to_string()),
            exec: run.exec,
        }
    }

    pub fn rho_f64(&self) -> f64 {
        rational_f64(&self.rho)
    }

    /// `rho <= lambda_estimate + tolerance`.
    pub fn consistent(&self) -> bool {
        self.rho_f64() <= self.lambda_estimate + self.tolerance
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("bcert v1\n");
        let mut field = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        field("pattern", self.pattern.clone());
        field("quotient", self.quotient.to_string());
        field("cutoff", self.cutoff.to_string());
        field("dimension", self.dimension.to_string());
        field("lambda_estimate", format!("{:?}", self.lambda_estimate));
        field("rho_num", self.rho.numer().to_string());
        field("rho_den", self.rho.denom().to_string());
        field("rho_approx", decimal_string(&self.rho, 12));
        field("argmin", self.argmin.to_string());
        field("iterations", self.iterations.to_string());
        field("converged", self.converged.to_string());
        field("tolerance", format!("{:?}", self.tolerance));
        field("mode", self.mode.to_string());
        field("vector_frac_bits", self.vector_frac_bits.to_string());
        field("vector_digest", self.vector_digest.clone());
        field("conditional", self.conditional.to_string());
        field(
            "condition",
            self.condition.clone().unwrap_or_else(|| "none".into()),
        );
        field(
            "exec",
            match self.exec {
                Exec::Sequential => "sequential".into(),
                Exec::Parallel => "parallel".into(),
            },
        );
        s
    }

    pub fn parse(text: &str) -> Result<BoundCertificate> {
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some("bcert v1") {
            return Err(parse_err(1, "expected header \"bcert v1\"".into()));
        }
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (no, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse_err(no + 2, format!("expected key=value, got {line:?}")))?;
            if fields.insert(k.trim(), (no + 2, v.trim())).is_some() {
                return Err(parse_err(no + 2, format!("duplicate field {k:?}")));
            }
        }
        let get = |k: &str| -> Result<(usize, &str)> {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| parse_err(1, format!("missing field {k:?}")))
        };
        fn value<T: std::str::FromStr>((line, s): (usize, &str), key: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad value {s:?} for {key}"),
            })
        }
        let rho_num: BigInt = value(get("rho_num")?, "rho_num")?;
        let rho_den: BigInt = value(get("rho_den")?, "rho_den")?;
        if rho_den <= BigInt::from(0) {
            return Err(parse_err(
                get("rho_den")?.0,
                "denominator must be positive".into(),
            ));
        }
        let condition = match get("condition")?.1 {
            "none" => None,
            c => Some(c.to_string()),
        };
        let exec = match get("exec")?.1 {
            "sequential" => Exec::Sequential,
            "parallel" => Exec::Parallel,
            other => return Err(parse_err(get("exec")?.0, format!("bad exec {other:?}"))),
        };
        Ok(BoundCertificate {
            pattern: get("pattern")?.1.to_string(),
            quotient: value(get("quotient")?, "quotient")?,
            cutoff: value(get("cutoff")?, "cutoff")?,
            dimension: value(get("dimension")?, "dimension")?,
            lambda_estimate: value(get("lambda_estimate")?, "lambda_estimate")?,
            rho: BigRational::new(rho_num, rho_den),
            argmin: value(get("argmin")?, "argmin")?,
            iterations: value(get("iterations")?, "iterations")?,
            converged: value(get("converged")?, "converged")?,
            tolerance: value(get("tolerance")?, "tolerance")?,
            mode: value(get("mode")?, "mode")?,
            vector_frac_bits: value(get("vector_frac_bits")?, "vector_frac_bits")?,
            vector_digest: get("vector_digest")?.1.to_string(),
            conditional: value(get("conditional")?, "conditional")?,
            condition,
            exec,
        })
    }
}

/// Path of the vector sidecar for a certificate at `path`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".vec");
    PathBuf::from(s)
}

/// Write the certificate and its vector sidecar.
pub fn write_certificate(cert: &BoundCertificate, vector: &[BigUint], path: &Path) -> Result<()> {
    let body = vector_body(vector, cert.vector_frac_bits);
    if hex_digest(body.as_bytes()) != cert.vector_digest {
        return Err(Error::Consistency(
            "vector does not match the certificate digest".into(),
        ));
    }
    write_atomic(&sidecar_path(path), |w| w.write_all(body.as_bytes()))?;
    write_atomic(path, |w| w.write_all(cert.to_text().as_bytes()))
}

/// Read the certificate at `path` and its vector sidecar.
pub fn read_certificate(path: &Path) -> Result<(BoundCertificate, Vec<BigUint>)> {
    let cert = BoundCertificate::parse(&fs::read_to_string(path)?)?;
    let body = fs::read_to_string(sidecar_path(path))?;
    let (vector, bits) = parse_vector_body(&body)?;
    if bits != cert.vector_frac_bits {
        return Err(Error::Consistency(format!(
            "sidecar has {bits} fractional bits, certificate says {}",
            cert.vector_frac_bits
        )));
    }
    if hex_digest(body.as_bytes()) != cert.vector_digest {
        return Err(Error::Consistency(
            "sidecar digest does not match the certificate".into(),
        ));
    }
    Ok((cert, vector))
}

/// Outcome of rechecking a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub recomputed: Certified,
    /// The recomputed bound equals the stored one exactly.
    pub rho_matches: bool,
    /// `rho <= lambda_estimate + tolerance`.
    pub consistent: bool,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.rho_matches && self.consistent
    }
}

/// Rebuild the operator, recertify the stored vector and compare.
pub fn verify_certificate(
    exec: Exec,
    cert: &BoundCertificate,
    vector: &[BigUint],
) -> Result<Verification> {
    if cert.quotient.pattern() != cert.pattern {
        return Err(invalid(format!(
            "the {} quotient belongs to pattern {}, not {}",
            cert.quotient,
            cert.quotient.pattern(),
            cert.pattern
        )));
    }
    if vector.len() != cert.dimension {
        return Err(Error::Consistency(format!(
            "vector has {} entries, certificate dimension is {}",
            vector.len(),
            cert.dimension
        )));
    }
    let setup = bound_operator(exec, cert.quotient, cert.cutoff)?;
    let recomputed = setup
        .operator
        .certify(exec, vector, cert.vector_frac_bits, cert.mode)?;
    Ok(Verification {
        rho_matches: recomputed.rho == cert.rho,
        consistent: cert.consistent(),
        recomputed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{compute_bound, Arith, PowerOptions};

    #[test]
    fn write_read_verify() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.cert");
        let run = compute_bound(
            QuotientKind::Short,
            10,
            Arith::Exact,
            &PowerOptions::default(),
        )
        .unwrap();
        let cert = BoundCertificate::from_run(&run);
        assert!(cert.conditional);
        write_certificate(&cert, &run.vector, &path).unwrap();
        let (back, vector) = read_certificate(&path).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(Exec::Parallel, &back, &vector)
            .unwrap()
            .ok());
    }

    #[test]
    fn tampered_vector_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.cert");
        let run =
            compute_bound(QuotientKind::Run, 8, Arith::Float, &PowerOptions::default()).unwrap();
        let cert = BoundCertificate::from_run(&run);
        assert_eq!(cert.mode, CertMode::Interval);
        write_certificate(&cert, &run.vector, &path).unwrap();
        let side = sidecar_path(&path);
        let body = fs::read_to_string(&side).unwrap().replacen('\n', "\n1", 2);
        fs::write(&side, body).unwrap();
        assert!(matches!(
            read_certificate(&path),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn parse_reports_missing_fields() {
        let err = BoundCertificate::parse("bcert v1\npattern=2134\n").unwrap_err();
        assert!(err.to_string().contains("missing field"), "{err}");
    }
}
