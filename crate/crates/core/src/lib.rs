//! Avoider graphs of permutation classes, their quotients by permutation
//! statistics, and certified lower bounds on their growth rates.
//!
//! The crate is organised bottom-up:
//!
//! * [`perm`]: permutations, pattern containment, trimming and statistics.
//! * [`oracle`]: brute-force enumeration, explicit avoider graphs and walk
//!   counts. Everything else is checked against it.
//! * [`catalan`]: Catalan-triangle class sizes, the descent-set count and the
//!   tree bijection for 132-avoiders.
//! * [`quotient`]: quotient graphs keyed by initial run, descent set and number
//!   of short values, including implicit operators for large cutoffs.
//! * [`spectral`]: power iteration, Collatz–Wielandt certification,
//!   stationary distributions and certificate files.
//!
//! Hot loops take an [`Exec`] to choose between the rayon and the sequential
//! path; building without the `parallel` feature keeps only the latter.

pub mod catalan;
pub mod digraph;
pub mod error;
pub mod exec;
pub mod numeric;
pub mod oracle;
pub mod perm;
pub mod quotient;
pub mod spectral;

pub use error::{Error, Result};
pub use exec::Exec;
pub use perm::{DescentSet, PatternSpec, Permutation};
