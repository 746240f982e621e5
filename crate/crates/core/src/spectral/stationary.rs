//! Stationary distributions of random walks on avoider graphs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::digraph::Digraph;
use crate::error::{invalid, Error, Result};
use crate::exec::fill_indexed;
use crate::oracle::{default_hub, prune_for_spectral, AvoiderGraph, PruneReport};

use super::power::PowerOptions;
use super::validate::validate_pf;

/// Probability of following an edge out of `u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepRule {
    /// Multiplicity over the out-degree: a proper random walk.
    OutDegree,
    /// Multiplicity over the length of `u`. Vertices of length `n` have
    /// `n + 1` out-edges, so rows sum to `(n + 1) / n` and the fixed point
    /// is an eigenvector with eigenvalue `mu` rather than one.
    InverseLength,
}

impl fmt::Display for StepRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepRule::OutDegree => "out-degree",
            StepRule::InverseLength => "inverse-length",
        })
    }
}

impl FromStr for StepRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "out-degree" => Ok(StepRule::OutDegree),
            "inverse-length" => Ok(StepRule::InverseLength),
            _ => Err(invalid(format!("unknown step rule {s:?}"))),
        }
    }
}

/// `sigma P = mu sigma` with `sigma >= 0` summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Stationary {
    pub sigma: Vec<f64>,
    pub mu: f64,
    /// `max_i |(sigma P)_i - mu sigma_i|`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Residual at which the iteration stops.
pub const STATIONARY_RESIDUAL: f64 = 1e-14;

/// Stationary vector of the walk on `g` whose vertex `u` has length
/// `lengths[u]`. `g` must be strongly connected with a loop.
pub fn stationary_distribution(
    g: &Digraph,
    lengths: &[usize],
    rule: StepRule,
    opts: &PowerOptions,
) -> Result<Stationary> {
    let n = g.num_vertices();
    if lengths.len() != n {
        return Err(invalid("one length per vertex is needed"));
    }
    let pf = validate_pf(g, None, None);
    if n == 0 || !pf.strongly_connected || !pf.has_loop {
        return Err(Error::DegenerateGraph(
            "a stationary distribution needs a strongly connected graph with a loop".into(),
        ));
    }
    // incoming transition weights, for sigma -> sigma P
    let incoming = g.transpose();
    let denom: Vec<f64> = (0..n)
        .map(|u| match rule {
            StepRule::OutDegree => g.out_multiplicity(u) as f64,
            StepRule::InverseLength => lengths[u].max(1) as f64,
        })
        .collect();
    let step = |x: &[f64], y: &mut [f64]| {
        fill_indexed(opts.exec, y, |v| {
            incoming
                .out_edges(v)
                .map(|(u, m)| x[u] * m as f64 / denom[u])
                .sum()
        })
    };
    let mut sigma = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iters {
        step(&sigma, &mut next);
        iterations += 1;
        let mu = next.iter().sum::<f64>();
        if !mu.is_finite() || mu == 0.0 {
            return Err(Error::NumericOverflow(
                "transition iterate degenerated".into(),
            ));
        }
        let residual = sigma
            .iter()
            .zip(&next)
            .map(|(s, t)| (t - mu * s).abs())
            .fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= mu);
        std::mem::swap(&mut sigma, &mut next);
        if residual <= STATIONARY_RESIDUAL {
            converged = true;
            break;
        }
    }
    // residual of the returned vector itself
    step(&sigma, &mut next);
    let total: f64 = sigma.iter().sum();
    sigma.iter_mut().for_each(|x| *x /= total);
    next.iter_mut().for_each(|x| *x /= total);
    let mu = next.iter().sum::<f64>();
    let residual = sigma
        .iter()
        .zip(&next)
        .map(|(s, t)| (t - mu * s).abs())
        .fold(0.0, f64::max);
    Ok(Stationary {
        converged,
        sigma,
        mu,
        residual,
        iterations,
    })
}

/// Stationary vector on the avoider graph after pruning it to one strongly
/// connected component.
pub fn stationary_for_graph(
    g: &AvoiderGraph,
    rule: StepRule,
    opts: &PowerOptions,
) -> Result<(AvoiderGraph, PruneReport, Stationary)> {
    let hub = default_hub(&g.spec);
    let (pruned, report) = prune_for_spectral(g, hub.as_ref())?;
    let lengths: Vec<usize> = pruned.vertices.iter().map(|p| p.len()).collect();
    let s = stationary_distribution(&pruned.graph, &lengths, rule, opts)?;
    Ok((pruned, report, s))
}

/// Per class `(length n, short count f)`: how `sigma * n!` compares with `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryRow {
    pub n: usize,
    pub f: usize,
    pub members: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

pub fn stationary_diagnostic(g: &AvoiderGraph, sigma: &[f64]) -> Vec<StationaryRow> {
    let mut classes: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for (p, &s) in g.vertices.iter().zip(sigma) {
        let n = p.len();
        let factorial: f64 = (1..=n).map(|i| i as f64).product();
        classes
            .entry((n, p.short_count()))
            .or_default()
            .push(s * factorial);
    }
    classes
        .into_iter()
        .map(|((n, f), xs)| StationaryRow {
            n,
            f,
            members: xs.len(),
            mean: xs.iter().sum::<f64>() / xs.len() as f64,
            min: xs.iter().cloned().fold(f64::INFINITY, f64::min),
            max: xs.iter().cloned().fold(0.0, f64::max),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Exec;
    use crate::oracle::{build_avoider_graph, EdgeRule};
    use crate::perm::PatternSpec;

    #[test]
    fn single_loop() {
        let g = Digraph::from_rows(vec![vec![(0, 1)]]);
        let s = stationary_distribution(&g, &[1], StepRule::OutDegree, &PowerOptions::default())
            .unwrap();
        assert_eq!(s.sigma, vec![1.0]);
        assert_eq!(s.mu, 1.0);
    }

    #[test]
    fn rejects_reducible_graphs() {
        let g = Digraph::from_rows(vec![vec![(0, 1), (1, 1)], vec![(1, 1)]]);
        assert!(stationary_distribution(
            &g,
            &[1, 2],
            StepRule::OutDegree,
            &PowerOptions::default()
        )
        .is_err());
    }

    #[test]
    fn both_rules_on_1324() {
        let spec = PatternSpec::parse("1324").unwrap();
        let g = build_avoider_graph(Exec::Sequential, &spec, 6, EdgeRule::VersionTwo).unwrap();
        for rule in [StepRule::OutDegree, StepRule::InverseLength] {
            let (pruned, _, s) = stationary_for_graph(&g, rule, &PowerOptions::default()).unwrap();
            assert!(s.residual <= 1e-12, "{rule}: {}", s.residual);
            assert!((s.sigma.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            if rule == StepRule::OutDegree {
                assert!((s.mu - 1.0).abs() < 1e-12);
            }
            let rows = stationary_diagnostic(&pruned, &s.sigma);
            assert_eq!(
                rows.iter().map(|r| r.members).sum::<usize>(),
                pruned.num_vertices()
            );
        }
    }
}
