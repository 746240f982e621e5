//! Permutations in one-line notation and the pattern machinery built on them.
//!
//! Values are stored as `u8`, so permutations are limited to length 255. Every
//! graph in this crate stays far below that.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{invalid, Error, Result};

/// Longest permutation representable by [`Permutation`].
pub const MAX_LEN: usize = 255;

/// A permutation of `1..=n` in one-line notation.
///
/// The empty permutation exists only as a possible trim result; graph
/// builders reject it.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    /// Validate that `values` is a bijection onto `1..=n`.
    pub fn new(values: Vec<u8>) -> Result<Self> {
        let n = values.len();
        if n > MAX_LEN {
            return Err(invalid(format!(
                "permutation of length {n} exceeds {MAX_LEN}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(invalid(format!(
                    "{values:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub(crate) fn from_raw(values: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(values.clone()).is_ok());
        Permutation(values)
    }

    /// The trivial permutation `1`.
    pub fn trivial() -> Self {
        Permutation(vec![1])
    }

    /// `12…n`.
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_LEN);
        Permutation((1..=n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u8> {
        self.0
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn contains(&self, pattern: &Permutation) -> bool {
        contains(&self.0, &pattern.0)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains(pattern)
    }

    /// Insert a new maximum `n + 1` with `pos` elements to its left.
    pub fn insert_max(&self, pos: usize) -> Result<Permutation> {
        let n = self.len();
        if pos > n {
            return Err(invalid(format!("insertion position {pos} outside 0..={n}")));
        }
        if n + 1 > MAX_LEN {
            return Err(invalid("permutation would exceed the maximum length"));
        }
        Ok(Permutation(insert_max_raw(&self.0, pos)))
    }

    /// Longest prefix avoiding `target`, standardised.
    pub fn trim_to_avoid(&self, target: &Permutation) -> Permutation {
        let len = avoiding_prefix_len(&self.0, &target.0);
        Permutation(standardise_raw(&self.0[..len]))
    }

    /// Length of the initial increasing run `p₁ < … < p_r`.
    pub fn initial_run_length(&self) -> usize {
        initial_run_length(&self.0)
    }

    pub fn descent_set(&self) -> DescentSet {
        DescentSet::of(&self.0)
    }

    /// Number of values that are not right-to-left maxima.
    pub fn short_count(&self) -> usize {
        short_count(&self.0)
    }

    /// `n - k` entries complemented: `v -> n + 1 - v`.
    pub fn complement(&self) -> Permutation {
        let n = self.len() as u8;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }

    pub fn reverse(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// Ordering used for vertex indices: by length, then lexicographic.
    pub fn graded_cmp(&self, other: &Permutation) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.graded_cmp(other)
    }
}

impl fmt::Display for Permutation {
    /// Concatenated digits when every value is a single digit, otherwise
    /// comma-separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
        } else {
            for (i, v) in self.0.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `"132"` or `"1,3,2"` / `"1 3 2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<u8> = if s.contains(',') || s.contains(' ') {
            s.split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u8>()
                        .map_err(|_| invalid(format!("bad permutation entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| invalid(format!("bad permutation digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

/// Set of descent positions `i` (1-based) with `p_i > p_{i+1}`, as a bitmask.
///
/// Bit `i - 1` is set when `i` is a descent, so permutations up to length 65
/// are supported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescentSet(pub u64);

impl DescentSet {
    pub fn of(values: &[u8]) -> DescentSet {
        assert!(values.len() <= 65, "descent sets are limited to length 65");
        let mut mask = 0u64;
        for (i, w) in values.windows(2).enumerate() {
            if w[0] > w[1] {
                mask |= 1 << i;
            }
        }
        DescentSet(mask)
    }

    pub fn from_indices(indices: &[usize]) -> DescentSet {
        let mut mask = 0;
        for &i in indices {
            assert!((1..=64).contains(&i), "descent index {i} out of range");
            mask |= 1u64 << (i - 1);
        }
        DescentSet(mask)
    }

    pub fn contains(&self, i: usize) -> bool {
        (1..=64).contains(&i) && self.0 >> (i - 1) & 1 == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..=64).filter(|&i| self.contains(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }
}

/// The avoided pattern together with the shorter pattern that graph
/// vertices must avoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternSpec {
    pattern: Permutation,
    trim_target: Permutation,
}

impl PatternSpec {
    /// The pattern must end in its maximum; the trim target is the pattern
    /// with that maximum removed.
    pub fn new(pattern: Permutation) -> Result<Self> {
        let n = pattern.len();
        if n < 2 {
            return Err(invalid("pattern must have length at least 2"));
        }
        if pattern.values()[n - 1] as usize != n {
            return Err(invalid(format!(
                "pattern {pattern} does not end in its maximum"
            )));
        }
        let trim_target = Permutation(standardise_raw(&pattern.values()[..n - 1]));
        Ok(PatternSpec {
            pattern,
            trim_target,
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        PatternSpec::new(s.parse()?)
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn trim_target(&self) -> &Permutation {
        &self.trim_target
    }
}

/// Rename distinct values to `1..=n`, keeping their relative order.
pub fn standardise<T: Ord + Copy>(seq: &[T]) -> Result<Permutation> {
    if seq.len() > MAX_LEN {
        return Err(invalid("sequence too long to standardise"));
    }
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by_key(|&i| seq[i]);
    if order.windows(2).any(|w| seq[w[0]] == seq[w[1]]) {
        return Err(invalid("standardise requires distinct entries"));
    }
    let mut out = vec![0u8; seq.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank as u8 + 1;
    }
    Ok(Permutation(out))
}

/// Standardise a slice of distinct `u8` values.
pub(crate) fn standardise_raw(seq: &[u8]) -> Vec<u8> {
    // values are < 256, so a counting pass is enough
    let mut present = [false; 256];
    for &v in seq {
        present[v as usize] = true;
    }
    let mut rank = [0u8; 256];
    let mut r = 0u8;
    for v in 0..256 {
        if present[v] {
            r += 1;
            rank[v] = r;
        }
    }
    seq.iter().map(|&v| rank[v as usize]).collect()
}

pub(crate) fn insert_max_raw(values: &[u8], pos: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() + 1);
    out.extend_from_slice(&values[..pos]);
    out.push(values.len() as u8 + 1);
    out.extend_from_slice(&values[pos..]);
    out
}

pub(crate) fn initial_run_length(values: &[u8]) -> usize {
    if values.is_empty() {
        return 0;
    }
    1 + values.windows(2).take_while(|w| w[0] < w[1]).count()
}

pub(crate) fn short_count(values: &[u8]) -> usize {
    let mut best = 0u8;
    let mut maxima = 0;
    for &v in values.iter().rev() {
        if v > best {
            best = v;
            maxima += 1;
        }
    }
    values.len() - maxima
}

/// Length of the longest prefix of `values` avoiding `pattern`.
pub(crate) fn avoiding_prefix_len(values: &[u8], pattern: &[u8]) -> usize {
    if !contains(values, pattern) {
        return values.len();
    }
    // containment is monotone in the prefix length
    let (mut lo, mut hi) = (0, values.len());
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if contains(&values[..mid], pattern) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Pattern containment. Patterns of length at most three use linear scans,
/// longer ones the generic backtracking search.
pub fn contains(host: &[u8], pattern: &[u8]) -> bool {
    match pattern {
        [] => true,
        [_] => !host.is_empty(),
        [a, b] => {
            if a < b {
                host.windows(2).any(|w| w[0] < w[1])
            } else {
                host.windows(2).any(|w| w[0] > w[1])
            }
        }
        [1, 3, 2] => scan_132(host.iter().rev().map(|&v| v as i32)),
        [2, 3, 1] => scan_132(host.iter().map(|&v| v as i32)),
        [3, 1, 2] => scan_132(host.iter().rev().map(|&v| -(v as i32))),
        [2, 1, 3] => scan_132(host.iter().map(|&v| -(v as i32))),
        [1, 2, 3] => has_monotone_triple(host.iter().map(|&v| v as i32)),
        [3, 2, 1] => has_monotone_triple(host.iter().map(|&v| -(v as i32))),
        _ => contains_generic(host, pattern),
    }
}

/// Detect `a_i < a_k < a_j` (`i < j < k`) given the sequence read from right
/// to left.
fn scan_132<I: Iterator<Item = i32>>(right_to_left: I) -> bool {
    let mut middle = i32::MIN;
    let mut stack: SmallVec<[i32; 32]> = SmallVec::new();
    for a in right_to_left {
        if a < middle {
            return true;
        }
        while let Some(&top) = stack.last() {
            if top < a {
                middle = top;
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(a);
    }
    false
}

fn has_monotone_triple<I: Iterator<Item = i32>>(seq: I) -> bool {
    let (mut first, mut second) = (i32::MAX, i32::MAX);
    for a in seq {
        if a <= first {
            first = a;
        } else if a <= second {
            second = a;
        } else {
            return true;
        }
    }
    false
}

/// Backtracking embedding search, valid for any pattern.
pub fn contains_generic(host: &[u8], pattern: &[u8]) -> bool {
    fn extend(host: &[u8], pattern: &[u8], chosen: &mut Vec<usize>, from: usize) -> bool {
        let t = chosen.len();
        if t == pattern.len() {
            return true;
        }
        let remaining = pattern.len() - t;
        for i in from..=host.len().saturating_sub(remaining) {
            let consistent = chosen
                .iter()
                .enumerate()
                .all(|(s, &j)| (pattern[s] < pattern[t]) == (host[j] < host[i]));
            if consistent {
                chosen.push(i);
                if extend(host, pattern, chosen, i + 1) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if pattern.len() > host.len() {
        return false;
    }
    extend(host, pattern, &mut Vec::with_capacity(pattern.len()), 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn all_perms(n: usize) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        for k in 1..=n as u8 {
            let mut next = Vec::new();
            for q in &out {
                for pos in 0..=q.len() {
                    let mut r: Vec<u8> = q.clone();
                    r.insert(pos, k);
                    next.push(r);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn standardise_examples() {
        assert_eq!(standardise(&[5, 7, 6]).unwrap(), p("132"));
        assert_eq!(standardise(&[1, 2, 3]).unwrap(), p("123"));
        assert_eq!(standardise(&[3, 4, 2]).unwrap(), p("231"));
        assert!(matches!(
            standardise(&[3, 3, 1]),
            Err(Error::InvalidInput(_))
        ));
        assert_eq!(standardise_raw(&[9, 2, 200]), vec![2, 1, 3]);
    }

    #[test]
    fn containment_examples() {
        assert!(p("465213").contains(&p("132")));
        assert!(!p("564213").contains(&p("132")));
        assert!(p("564213").contains(&p("1")));
        assert!(p("1").contains(&p("1")));
    }

    #[test]
    fn insert_max_examples() {
        assert_eq!(p("1243").insert_max(0).unwrap(), p("51243"));
        assert_eq!(p("1234").insert_max(4).unwrap(), p("12345"));
        assert_eq!(p("321").insert_max(1).unwrap(), p("3421"));
        assert!(p("321").insert_max(4).is_err());
    }

    #[test]
    fn trim_examples() {
        let q = p("57681243");
        assert_eq!(q.trim_to_avoid(&p("213")), p("132"));
        assert_eq!(p("4123").trim_to_avoid(&p("21")), p("1"));
        assert_eq!(p("2413").trim_to_avoid(&p("4321")), p("2413"));
    }

    #[test]
    fn statistics_examples() {
        assert_eq!(p("1243").initial_run_length(), 3);
        assert_eq!(p("132").descent_set(), DescentSet::from_indices(&[2]));
        assert_eq!(p("321").descent_set().indices(), vec![1, 2]);
        assert_eq!(p("785649231").short_count(), 6);
        assert_eq!(p("1").short_count(), 0);
    }

    #[test]
    fn pattern_spec_rules() {
        let s = PatternSpec::parse("1324").unwrap();
        assert_eq!(s.trim_target(), &p("132"));
        assert_eq!(PatternSpec::parse("2134").unwrap().trim_target(), &p("213"));
        assert_eq!(PatternSpec::parse("3124").unwrap().trim_target(), &p("312"));
        assert_eq!(PatternSpec::parse("213").unwrap().trim_target(), &p("21"));
        assert!(PatternSpec::parse("1342").is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("1,3,2"), p("132"));
        assert_eq!(p("785649231").to_string(), "785649231");
        let long = Permutation::identity(11);
        assert_eq!(long.to_string(), "1,2,3,4,5,6,7,8,9,10,11");
        assert_eq!(long.to_string().parse::<Permutation>().unwrap(), long);
        assert!("1,1".parse::<Permutation>().is_err());
    }

    /// The fast scans agree with backtracking on every host of length <= 8.
    #[test]
    fn fast_paths_match_generic() {
        let patterns: Vec<Vec<u8>> = all_perms(2).into_iter().chain(all_perms(3)).collect();
        for n in 0..=8 {
            for host in all_perms(n) {
                for pat in &patterns {
                    assert_eq!(
                        contains(&host, pat),
                        contains_generic(&host, pat),
                        "host {host:?} pattern {pat:?}"
                    );
                }
            }
        }
    }

    /// Trimming is minimal: one more element of the host reintroduces the
    /// pattern.
    #[test]
    fn trim_is_minimal() {
        let targets = [p("21"), p("132"), p("213"), p("312")];
        for n in 1..=9 {
            for host in all_perms(n) {
                let host = Permutation(host);
                for t in &targets {
                    let trimmed = host.trim_to_avoid(t);
                    assert!(trimmed.avoids(t));
                    let k = trimmed.len();
                    assert_eq!(trimmed, standardise(&host.values()[..k]).unwrap());
                    if k < n {
                        assert!(contains(&host.values()[..k + 1], t.values()));
                    }
                }
            }
        }
    }

    #[test]
    fn new_max_never_creates_rl_maximum() {
        for n in 1..=7 {
            for host in all_perms(n) {
                let host = Permutation(host);
                for pos in 0..=n {
                    let q = host.insert_max(pos).unwrap();
                    assert_eq!(&q.values()[..pos], &host.values()[..pos]);
                    assert!(q.short_count() >= host.short_count());
                }
            }
        }
    }
}
