//! Spectral radii of nonnegative operators: power iteration,
//! Collatz-Wielandt certification, certificates and stationary
//! distributions.

mod analytic;
mod bound;
mod certificate;
mod certify;
mod csv;
mod operator;
mod power;
mod stationary;
mod validate;

pub use analytic::{analytic_213_certificate, chain_alpha, chain_vector, AnalyticCertificate};
pub use bound::{bound_operator, compute_bound, Arith, BoundOperator, BoundRun, BoundSetup};
pub use certificate::{
    read_certificate, sidecar_path, verify_certificate, write_certificate, BoundCertificate,
    Verification, WEIGHTED_CONDITION,
};
pub use certify::{
    certify_exact, certify_interval, parse_vector_body, rho_f64, snap_dyadic, vector_body,
    vector_digest, CertMode, Certified, MIN_FRAC_BITS,
};
pub use csv::{
    append_bounds_csv, bounds_csv_row, fit_power_law, monotonicity_warnings, BOUNDS_CSV_HEADER,
};
pub(crate) use operator::down_add;
pub use operator::{
    DenseOperator, ExactOperator, IntervalOperator, LeftOperator, Operator, ScaledImage,
    SparseOperator,
};
pub use power::{
    power_iteration, power_iteration_from, PowerOptions, PowerResult, DEFAULT_MAX_ITERS,
    DEFAULT_TOLERANCE,
};
pub use stationary::{
    stationary_diagnostic, stationary_distribution, stationary_for_graph, Stationary,
    StationaryRow, StepRule, STATIONARY_RESIDUAL,
};
pub use validate::{validate_pf, PfReport};
