//! Bound sequences as CSV, and diagnostics over them.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

use super::certificate::BoundCertificate;

pub const BOUNDS_CSV_HEADER: &str = "pattern,quotient,N,lambda,rho,iterations";

/// One CSV line, without the newline.
pub fn bounds_csv_row(c: &BoundCertificate) -> String {
    format!(
        "{},{},{},{:.12},{:.12},{}",
        c.pattern,
        c.quotient,
        c.cutoff,
        c.lambda_estimate,
        c.rho_f64(),
        c.iterations
    )
}

/// Append rows to `path`, writing the header first if the file is new or
/// empty.
pub fn append_bounds_csv(path: &Path, certs: &[BoundCertificate]) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if f.metadata()?.len() == 0 {
        writeln!(f, "{BOUNDS_CSV_HEADER}")?;
    }
    for c in certs {
        writeln!(f, "{}", bounds_csv_row(c))?;
    }
    Ok(())
}

/// Least-squares fit of `y = c * x^p` on the points with positive
/// coordinates. Returns `(p, c)`, or `None` with fewer than two such points.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let (sx, sy) = logs
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let p = sxy / sxx;
    Some((p, (my - p * mx).exp()))
}

/// Warnings for every cutoff whose value drops below the previous one.
pub fn monotonicity_warnings(label: &str, values: &[(usize, f64)]) -> Vec<String> {
    values
        .windows(2)
        .filter(|w| w[1].1 < w[0].1)
        .map(|w| {
            format!(
                "warning: {label} decreases from {:.12} at N={} to {:.12} at N={}",
                w[0].1, w[0].0, w[1].1, w[1].0
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exponent() {
        let pts: Vec<(f64, f64)> = (1..20)
            .map(|n| (n as f64, 3.0 * (n as f64).powf(-1.5)))
            .collect();
        let (p, c) = fit_power_law(&pts).unwrap();
        assert!((p + 1.5).abs() < 1e-12);
        assert!((c - 3.0).abs() < 1e-12);
        assert!(fit_power_law(&pts[..1]).is_none());
    }

    #[test]
    fn flags_decreases() {
        let w = monotonicity_warnings("rho", &[(5, 1.0), (6, 2.0), (7, 1.5), (8, 3.0)]);
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("N=7"));
    }
}
