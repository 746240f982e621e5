use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::perm::{contains, insert_max_raw, Permutation};

/// Largest length enumerated by default for a pattern of the given length.
pub fn default_length_cap(pattern_len: usize) -> usize {
    match pattern_len {
        0..=2 => crate::perm::MAX_LEN,
        3 => 14,
        _ => 12,
    }
}

/// Avoiders of `pattern` of every length `0..=n_max`, each level sorted
/// lexicographically.
///
/// Deleting the maximum of an avoider leaves an avoider, so level `n` is
/// obtained by inserting `n` into every position of each member of level
/// `n - 1` and keeping the results that still avoid the pattern. Every
/// permutation arises exactly once.
pub fn avoiders_by_length(exec: Exec, pattern: &Permutation, n_max: usize) -> Vec<Vec<Vec<u8>>> {
    avoiders_by_length_limited(exec, pattern, n_max, usize::MAX).unwrap()
}

/// As [`avoiders_by_length`], failing once the levels `1..` together exceed
/// `total_cap` permutations.
pub(crate) fn avoiders_by_length_limited(
    exec: Exec,
    pattern: &Permutation,
    n_max: usize,
    total_cap: usize,
) -> Result<Vec<Vec<Vec<u8>>>> {
    let pat = pattern.values();
    let mut levels: Vec<Vec<Vec<u8>>> = vec![vec![Vec::new()]];
    if pat.is_empty() {
        // everything contains the empty pattern
        levels[0].clear();
    }
    let mut total = 0usize;
    for n in 1..=n_max {
        let prev = &levels[n - 1];
        let chunks = map_range(exec, prev.len().div_ceil(CHUNK), |c| {
            let mut out = Vec::new();
            for p in &prev[c * CHUNK..((c + 1) * CHUNK).min(prev.len())] {
                for pos in 0..=p.len() {
                    let q = insert_max_raw(p, pos);
                    if !contains(&q, pat) {
                        out.push(q);
                    }
                }
            }
            out
        });
        let mut level: Vec<Vec<u8>> = chunks.into_iter().flatten().collect();
        total += level.len();
        if total > total_cap {
            return Err(Error::ResourceCap {
                what: "avoider graph vertices",
                requested: total,
                cap: total_cap,
            });
        }
        level.sort_unstable();
        levels.push(level);
    }
    Ok(levels)
}

const CHUNK: usize = 4096;

/// `Av_n(pattern)` in lexicographic order, refusing lengths above the default
/// cap for the pattern.
pub fn enumerate_avoiders(pattern: &Permutation, n: usize) -> Result<Vec<Permutation>> {
    enumerate_avoiders_capped(
        Exec::default(),
        pattern,
        n,
        default_length_cap(pattern.len()),
    )
}

pub fn enumerate_avoiders_capped(
    exec: Exec,
    pattern: &Permutation,
    n: usize,
    cap: usize,
) -> Result<Vec<Permutation>> {
    if n > cap {
        return Err(Error::ResourceCap {
            what: "enumeration length",
            requested: n,
            cap,
        });
    }
    let mut levels = avoiders_by_length(exec, pattern, n);
    Ok(levels
        .pop()
        .unwrap_or_default()
        .into_iter()
        .map(Permutation::from_raw)
        .collect())
}

/// `|Av_n(pattern)|` by enumeration.
pub fn count_avoiders(pattern: &Permutation, n: usize) -> Result<usize> {
    Ok(enumerate_avoiders(pattern, n)?.len())
}
