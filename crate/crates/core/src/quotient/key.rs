use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::perm::{initial_run_length, short_count, DescentSet};

/// Class of a vertex: its length together with one statistic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    /// Length and length of the initial increasing run.
    SizeRun(usize, usize),
    /// Length and descent set.
    SizeDescents(usize, DescentSet),
    /// Length and number of values that are not right-to-left maxima.
    SizeShort(usize, usize),
}

impl ClassKey {
    pub fn size(&self) -> usize {
        match *self {
            ClassKey::SizeRun(n, _) | ClassKey::SizeDescents(n, _) | ClassKey::SizeShort(n, _) => n,
        }
    }
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::SizeRun(n, r) | ClassKey::SizeShort(n, r) => write!(f, "({n},{r})"),
            ClassKey::SizeDescents(n, s) => {
                let parts: Vec<String> = s.indices().iter().map(|i| i.to_string()).collect();
                write!(f, "({n},{{{}}})", parts.join(","))
            }
        }
    }
}

/// Statistic used to group vertices into classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyer {
    InitialRun,
    DescentSet,
    ShortCount,
}

impl Keyer {
    pub fn key(self, values: &[u8]) -> ClassKey {
        let n = values.len();
        match self {
            Keyer::InitialRun => ClassKey::SizeRun(n, initial_run_length(values)),
            Keyer::DescentSet => ClassKey::SizeDescents(n, DescentSet::of(values)),
            Keyer::ShortCount => ClassKey::SizeShort(n, short_count(values)),
        }
    }
}

/// Which quotient a graph is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuotientKind {
    /// Initial-run classes of the 2134 graph.
    Run,
    /// Descent-set classes of the 3124 graph.
    Descents,
    /// Short-count classes of the 1324 graph, weighted.
    Short,
    /// The 213 graph, whose vertices are already the increasing permutations.
    Chain,
}

impl QuotientKind {
    pub fn keyer(self) -> Keyer {
        match self {
            QuotientKind::Run | QuotientKind::Chain => Keyer::InitialRun,
            QuotientKind::Descents => Keyer::DescentSet,
            QuotientKind::Short => Keyer::ShortCount,
        }
    }

    /// The pattern this quotient is built for.
    pub fn pattern(self) -> &'static str {
        match self {
            QuotientKind::Run => "2134",
            QuotientKind::Descents => "3124",
            QuotientKind::Short => "1324",
            QuotientKind::Chain => "213",
        }
    }

    pub fn for_pattern(pattern: &str) -> Result<QuotientKind> {
        match pattern {
            "2134" => Ok(QuotientKind::Run),
            "3124" => Ok(QuotientKind::Descents),
            "1324" => Ok(QuotientKind::Short),
            "213" => Ok(QuotientKind::Chain),
            _ => Err(invalid(format!(
                "no quotient is defined for pattern {pattern}"
            ))),
        }
    }
}

impl fmt::Display for QuotientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuotientKind::Run => "run",
            QuotientKind::Descents => "descents",
            QuotientKind::Short => "short",
            QuotientKind::Chain => "chain",
        })
    }
}

impl FromStr for QuotientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "run" => Ok(QuotientKind::Run),
            "descents" => Ok(QuotientKind::Descents),
            "short" => Ok(QuotientKind::Short),
            "chain" => Ok(QuotientKind::Chain),
            _ => Err(invalid(format!("unknown quotient kind {s:?}"))),
        }
    }
}
