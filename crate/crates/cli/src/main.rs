//! `walkbound`: enumerate avoiders, build graph caches, compute certified
//! growth-rate bounds and compare weighted walk totals.
//!
//! Exit codes: 0 success, 2 refusal (caps, validation, bad input), 3 a
//! weighted walk total exceeded the walk count, 4 internal inconsistency.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use walkbound::catalan::{reconstruct_from_multiset, RemovalMultiset};
use walkbound::numeric::{decimal_string, rational_f64};
use walkbound::oracle::{
    avoiders_by_length, build_avoider_graph, count_walks, default_length_cap, write_graph, EdgeRule,
};
use walkbound::quotient::{
    build_chain, build_quotient_a, build_quotient_b, build_quotient_c, conjecture_report, walk_csv,
    weighted_walks_exact, write_quotient, Boundary, QuotientKind, ShortOperator, EXACT_WALK_CAP,
    FULL_GRAPH_CUTOFF_CAP,
};
use walkbound::spectral::{
    analytic_213_certificate, append_bounds_csv, bounds_csv_row, compute_bound, fit_power_law,
    monotonicity_warnings, read_certificate, stationary_diagnostic, stationary_for_graph,
    verify_certificate, write_certificate, Arith, BoundCertificate, PowerOptions, StepRule,
};
use walkbound::{Exec, PatternSpec};

/// Largest length at which `enumerate --weighted` also counts avoiders.
const WEIGHTED_BRUTE_FORCE_CAP: usize = 9;

#[derive(Parser, Debug)]
#[command(
    name = "walkbound",
    version,
    about = "Avoider graphs and certified growth-rate bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Avoided pattern.
    #[arg(long, global = true, value_parser = ["213", "2134", "3124", "1324"])]
    pattern: Option<String>,
    /// Cutoff N; `bound` accepts a comma-separated sweep.
    #[arg(long, global = true, value_delimiter = ',')]
    cutoff: Vec<usize>,
    /// Largest walk index.
    #[arg(long, global = true)]
    kmax: Option<usize>,
    /// Quotient kind.
    #[arg(long, global = true)]
    quotient: Option<QuotientArg>,
    /// Boundary rule of the full graph.
    #[arg(long = "edge-rule", global = true, default_value = "v2")]
    edge_rule: EdgeRuleArg,
    /// Certification arithmetic.
    #[arg(long, global = true, default_value = "exact")]
    arith: ArithArg,
    /// Run every kernel sequentially.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Directory for graph and quotient caches.
    #[arg(long, global = true, env = "WALKBOUND_CACHE")]
    cache: Option<PathBuf>,
    /// Output file, or output directory for `bound`. Defaults to stdout, or
    /// the current directory for `bound`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Avoider counts per length, or weighted walk totals with `--weighted`.
    Enumerate {
        /// Emit weighted totals of the 1324 short-count quotient.
        #[arg(long)]
        weighted: bool,
    },
    /// Write the full graph, and the quotient if requested, to the cache.
    Graph,
    /// Certified lower bound on the growth rate, one certificate per cutoff.
    Bound {
        /// Use the closed-form vector on the 213 chain.
        #[arg(long)]
        analytic: bool,
    },
    /// Weighted walk totals against walk counts of the full 1324 graph.
    Conjecture,
    /// Stationary distribution of the walk on the pruned full graph.
    Stationary {
        #[arg(long, default_value = "out-degree")]
        step: StepArg,
    },
    /// Permutation with the given removal multiset, read from the argument
    /// or stdin.
    Reconstruct { multiset: Option<String> },
    /// Recheck a certificate against its vector sidecar.
    Verify { certificate: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuotientArg {
    Run,
    Descents,
    Short,
    Chain,
}

impl From<QuotientArg> for QuotientKind {
    fn from(q: QuotientArg) -> Self {
        match q {
            QuotientArg::Run => QuotientKind::Run,
            QuotientArg::Descents => QuotientKind::Descents,
            QuotientArg::Short => QuotientKind::Short,
            QuotientArg::Chain => QuotientKind::Chain,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EdgeRuleArg {
    V1,
    V2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ArithArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StepArg {
    OutDegree,
    InverseLength,
}

/// A request the tool declines to run.
#[derive(Debug)]
struct Refusal(String);

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Refusal {}

fn refuse(msg: impl Into<String>) -> anyhow::Error {
    Refusal(msg.into()).into()
}

impl RunConfig {
    fn exec(&self) -> Exec {
        if self.deterministic {
            Exec::Sequential
        } else {
            Exec::Parallel
        }
    }

    fn edge_rule(&self) -> EdgeRule {
        match self.edge_rule {
            EdgeRuleArg::V1 => EdgeRule::VersionOne,
            EdgeRuleArg::V2 => EdgeRule::VersionTwo,
        }
    }

    fn arith(&self) -> Arith {
        match self.arith {
            ArithArg::Exact => Arith::Exact,
            ArithArg::Float => Arith::Float,
        }
    }

    fn pattern(&self) -> Result<PatternSpec> {
        let p = self
            .pattern
            .as_deref()
            .ok_or_else(|| refuse("--pattern is required"))?;
        Ok(PatternSpec::parse(p)?)
    }

    fn single_cutoff(&self, default: Option<usize>) -> Result<usize> {
        match self.cutoff.as_slice() {
            [] => default.ok_or_else(|| refuse("--cutoff is required")),
            [n] => Ok(*n),
            _ => Err(refuse("this command takes a single --cutoff")),
        }
    }

    /// Quotient kind from `--quotient` and `--pattern`, which must agree.
    fn kind(&self) -> Result<QuotientKind> {
        let from_pattern = self
            .pattern
            .as_deref()
            .map(QuotientKind::for_pattern)
            .transpose()?;
        match (self.quotient.map(QuotientKind::from), from_pattern) {
            (Some(q), Some(p)) if q != p => Err(refuse(format!(
                "the {q} quotient belongs to pattern {}, not {}",
                q.pattern(),
                p.pattern()
            ))),
            (Some(q), _) | (None, Some(q)) => Ok(q),
            (None, None) => Err(refuse("--pattern or --quotient is required")),
        }
    }

    fn power(&self) -> PowerOptions {
        PowerOptions {
            exec: self.exec(),
            ..PowerOptions::default()
        }
    }

    /// Write `text` to `--out`, or to stdout.
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => io::stdout().write_all(text.as_bytes()).map_err(Into::into),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Counterexample>().is_some() {
        return 3;
    }
    if err.downcast_ref::<Refusal>().is_some() {
        return 2;
    }
    match err.downcast_ref::<walkbound::Error>() {
        Some(walkbound::Error::Consistency(_) | walkbound::Error::NumericOverflow(_)) => 4,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Enumerate { weighted: false } => cmd_enumerate(cfg),
        Command::Enumerate { weighted: true } => cmd_enumerate_weighted(cfg),
        Command::Graph => cmd_graph(cfg),
        Command::Bound { analytic: false } => cmd_bound(cfg),
        Command::Bound { analytic: true } => cmd_bound_analytic(cfg),
        Command::Conjecture => cmd_conjecture(cfg),
        Command::Stationary { step } => cmd_stationary(cfg, *step),
        Command::Reconstruct { multiset } => cmd_reconstruct(multiset.as_deref()),
        Command::Verify { certificate } => cmd_verify(cfg, certificate),
    }?;
    Ok(ExitCode::SUCCESS)
}

/// `n,avoiders,walks`: avoiders by enumeration and walk counts from the
/// start of the graph at the largest cutoff.
fn cmd_enumerate(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.pattern()?;
    let n_max = cfg.single_cutoff(Some(9))?;
    let cap = default_length_cap(spec.pattern().len()).min(FULL_GRAPH_CUTOFF_CAP);
    if n_max == 0 || n_max > cap {
        return Err(refuse(format!(
            "--cutoff must be in 1..={cap} for enumeration"
        )));
    }
    let levels = avoiders_by_length(cfg.exec(), spec.pattern(), n_max);
    let g = build_avoider_graph(cfg.exec(), &spec, n_max, cfg.edge_rule())?;
    let walks = count_walks(cfg.exec(), &g, n_max)?;
    let mut csv = String::from("n,avoiders,walks\n");
    for (n, level) in levels.iter().enumerate().skip(1) {
        let _ = writeln!(csv, "{n},{},{}", level.len(), walks.get(n).unwrap());
    }
    cfg.emit(&csv)
}

/// `n,Wtilde,avoiders` for `2 <= n <= N`; avoiders are counted where brute
/// force is cheap and left empty otherwise.
fn cmd_enumerate_weighted(cfg: &RunConfig) -> Result<()> {
    if let Some(p) = cfg.pattern.as_deref().filter(|p| *p != "1324") {
        return Err(refuse(format!(
            "weighted totals are defined for 1324, not {p}"
        )));
    }
    let n_max = cfg.single_cutoff(Some(EXACT_WALK_CAP))?;
    if !(2..=EXACT_WALK_CAP).contains(&n_max) {
        return Err(refuse(format!(
            "--cutoff must be in 2..={EXACT_WALK_CAP} for weighted totals"
        )));
    }
    let brute = avoiders_by_length(
        cfg.exec(),
        &"1324".parse()?,
        n_max.min(WEIGHTED_BRUTE_FORCE_CAP),
    );
    let mut csv = String::from("n,Wtilde,avoiders\n");
    for n in 2..=n_max {
        let op = ShortOperator::new(n)?;
        let start = op.index_of(1, 0).context("start class missing")?;
        let totals = weighted_walks_exact(cfg.exec(), &op, start, n)?;
        let count = brute.get(n).map_or(String::new(), |l| l.len().to_string());
        let _ = writeln!(csv, "{n},{},{count}", decimal_string(&totals[n - 1], 4));
    }
    cfg.emit(&csv)
}

fn cache_dir(cfg: &RunConfig) -> Result<&Path> {
    let dir = cfg
        .cache
        .as_deref()
        .ok_or_else(|| refuse("--cache or WALKBOUND_CACHE is required"))?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn cmd_graph(cfg: &RunConfig) -> Result<()> {
    let spec = cfg.pattern()?;
    let n = cfg.single_cutoff(None)?;
    if n > FULL_GRAPH_CUTOFF_CAP {
        return Err(refuse(format!(
            "full graphs are capped at N = {FULL_GRAPH_CUTOFF_CAP}"
        )));
    }
    let dir = cache_dir(cfg)?;
    let rule = cfg.edge_rule();
    let g = build_avoider_graph(cfg.exec(), &spec, n, rule)?;
    let path = dir.join(format!("{}-{rule}-{n}.graph", spec.pattern()));
    write_graph(&g, &path)?;
    println!("{}", path.display());
    if let Some(q) = cfg.quotient {
        let kind = cfg.kind()?;
        let exec = cfg.exec();
        let quotient = match q {
            QuotientArg::Run => build_quotient_b(n)?,
            QuotientArg::Descents => build_quotient_c(exec, n)?,
            QuotientArg::Short => {
                let boundary = match rule {
                    EdgeRule::VersionOne => Boundary::Drop,
                    EdgeRule::VersionTwo => Boundary::Redirect,
                };
                build_quotient_a(exec, n, boundary)?
            }
            QuotientArg::Chain => build_chain(exec, n, rule)?,
        };
        let path = dir.join(format!("{}-{kind}-{rule}-{n}.quot", spec.pattern()));
        write_quotient(&quotient, &path)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn bound_dir(cfg: &RunConfig) -> Result<PathBuf> {
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn save_certificate(dir: &Path, cert: &BoundCertificate, vector: &[BigUint]) -> Result<()> {
    let path = dir.join(format!(
        "{}-{}-{}.cert",
        cert.pattern, cert.quotient, cert.cutoff
    ));
    write_certificate(cert, vector, &path)?;
    append_bounds_csv(&dir.join("bounds.csv"), std::slice::from_ref(cert))?;
    println!("{}", bounds_csv_row(cert));
    Ok(())
}

fn cmd_bound(cfg: &RunConfig) -> Result<()> {
    let kind = cfg.kind()?;
    if cfg.cutoff.is_empty() {
        return Err(refuse("--cutoff is required"));
    }
    let dir = bound_dir(cfg)?;
    let mut rhos = Vec::new();
    for &n in &cfg.cutoff {
        let run = compute_bound(kind, n, cfg.arith(), &cfg.power())?;
        if !run.power.converged {
            eprintln!("warning: power iteration did not converge at N={n}");
        }
        let cert = BoundCertificate::from_run(&run);
        if !cert.consistent() {
            bail!(walkbound::Error::Consistency(format!(
                "certified bound exceeds the estimate at N={n}"
            )));
        }
        if let Some(condition) = &cert.condition {
            eprintln!("note: N={n} bound holds if {condition}");
        }
        save_certificate(&dir, &cert, &run.vector)?;
        rhos.push((n, cert.rho_f64()));
    }
    for w in monotonicity_warnings(&format!("{kind} bound"), &rhos) {
        eprintln!("{w}");
    }
    if let Some(&(_, last)) = rhos.last() {
        let gaps: Vec<(f64, f64)> = rhos[..rhos.len() - 1]
            .iter()
            .map(|&(n, r)| (n as f64, last - r))
            .collect();
        if let Some((p, _)) = fit_power_law(&gaps) {
            eprintln!("fitted convergence exponent: {p:.3}");
        }
    }
    Ok(())
}

fn cmd_bound_analytic(cfg: &RunConfig) -> Result<()> {
    if cfg.kind()? != QuotientKind::Chain {
        return Err(refuse(
            "the analytic certificate is defined for pattern 213 only",
        ));
    }
    if cfg.cutoff.is_empty() {
        return Err(refuse("--cutoff is required"));
    }
    let dir = bound_dir(cfg)?;
    for &n in &cfg.cutoff {
        let a = analytic_213_certificate(cfg.exec(), n)?;
        eprintln!(
            "N={n}: rho = {}, closed form 4 - 2^(N-1)/3^(N-2) = {}",
            decimal_string(&a.certificate.rho, 12),
            decimal_string(&a.alpha, 12)
        );
        save_certificate(&dir, &a.certificate, &a.vector)?;
    }
    Ok(())
}

fn cmd_conjecture(cfg: &RunConfig) -> Result<()> {
    let n_max = cfg.single_cutoff(Some(9))?;
    let k_max = cfg.kmax.unwrap_or(10);
    if k_max == 0 {
        return Err(refuse("--kmax must be positive"));
    }
    let rows = conjecture_report(cfg.exec(), n_max, k_max)?;
    cfg.emit(&walk_csv(&rows, 6))?;
    let exceeding: Vec<String> = rows
        .iter()
        .filter(|r| r.exceeds())
        .map(|r| format!("(n={}, k={})", r.n, r.k))
        .collect();
    if !exceeding.is_empty() {
        eprintln!(
            "weighted total exceeds the walk count at {}",
            exceeding.join(", ")
        );
        return Err(Counterexample.into());
    }
    Ok(())
}

#[derive(Debug)]
struct Counterexample;

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("counterexample found")
    }
}

impl std::error::Error for Counterexample {}

fn cmd_stationary(cfg: &RunConfig, step: StepArg) -> Result<()> {
    let spec = cfg.pattern()?;
    let n = cfg.single_cutoff(None)?;
    if n > FULL_GRAPH_CUTOFF_CAP {
        return Err(refuse(format!(
            "full graphs are capped at N = {FULL_GRAPH_CUTOFF_CAP}"
        )));
    }
    let rule = match step {
        StepArg::OutDegree => StepRule::OutDegree,
        StepArg::InverseLength => StepRule::InverseLength,
    };
    let g = build_avoider_graph(cfg.exec(), &spec, n, cfg.edge_rule())?;
    let (pruned, report, s) = stationary_for_graph(&g, rule, &cfg.power())?;
    eprintln!(
        "{rule}: mu = {:.15}, residual = {:.3e}, iterations = {}, dropped {} vertices",
        s.mu,
        s.residual,
        s.iterations,
        report.dropped.len()
    );
    let mut csv = String::from("n,f,members,mean,min,max\n");
    for r in stationary_diagnostic(&pruned, &s.sigma) {
        let _ = writeln!(
            csv,
            "{},{},{},{:.12e},{:.12e},{:.12e}",
            r.n, r.f, r.members, r.mean, r.min, r.max
        );
    }
    cfg.emit(&csv)
}

fn cmd_reconstruct(arg: Option<&str>) -> Result<()> {
    let text = match arg {
        Some(s) => s.to_string(),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let multiset: RemovalMultiset = text.parse()?;
    if multiset.is_empty() {
        return Err(refuse("the multiset is empty"));
    }
    println!("{}", reconstruct_from_multiset(&multiset)?);
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, path: &Path) -> Result<()> {
    let (cert, vector) = read_certificate(path)?;
    let v = verify_certificate(cfg.exec(), &cert, &vector)?;
    println!(
        "{} {} N={} rho={} mode={} conditional={}",
        cert.pattern,
        cert.quotient,
        cert.cutoff,
        decimal_string(&cert.rho, 12),
        cert.mode,
        cert.conditional
    );
    if !v.rho_matches {
        bail!(walkbound::Error::Consistency(format!(
            "recomputed bound {} differs from the stored one",
            rational_f64(&v.recomputed.rho)
        )));
    }
    if !v.consistent {
        bail!(walkbound::Error::Consistency(
            "bound exceeds the stored estimate".into()
        ));
    }
    println!("verified");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&refuse("x")), 2);
        assert_eq!(
            exit_code(&walkbound::Error::Consistency("x".into()).into()),
            4
        );
        assert_eq!(exit_code(&Counterexample.into()), 3);
        assert_eq!(
            exit_code(&anyhow::anyhow!(walkbound::Error::ResourceCap {
                what: "x",
                requested: 2,
                cap: 1
            })),
            2
        );
    }

    #[test]
    fn cli_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
