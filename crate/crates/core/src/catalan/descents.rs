use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::perm::DescentSet;

/// `|C(n, S)|`: 312-avoiders of length `n` with descent set exactly `S`.
///
/// Builds the permutation left to right, tracking the number `k` of gaps in
/// which the next value may be placed without creating a 312. After the first
/// entry there are two such gaps. An ascent puts the next value in the top gap
/// and opens one more (`k + 1`). A descent puts it in one of the `k - 1` lower
/// gaps; choosing the `j`-th from the top leaves `j + 1` gaps, so `k'` ranges
/// over `2..=k`.
pub fn class_size_c(n: usize, descents: DescentSet) -> BigUint {
    if n == 0 {
        return if descents.is_empty() {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    if descents.indices().iter().any(|&i| i >= n) {
        return BigUint::zero();
    }
    let mut states: BTreeMap<usize, BigUint> = BTreeMap::new();
    states.insert(2, BigUint::one());
    for i in 1..n {
        let mut next: BTreeMap<usize, BigUint> = BTreeMap::new();
        for (&k, count) in &states {
            if descents.contains(i) {
                for k2 in 2..=k {
                    *next.entry(k2).or_insert_with(BigUint::zero) += count;
                }
            } else {
                *next.entry(k + 1).or_insert_with(BigUint::zero) += count;
            }
        }
        states = next;
    }
    states.into_values().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan::catalan;

    #[test]
    fn small_examples() {
        assert_eq!(
            class_size_c(3, DescentSet::from_indices(&[])),
            BigUint::one()
        );
        assert_eq!(
            class_size_c(3, DescentSet::from_indices(&[1])),
            BigUint::one()
        );
        assert_eq!(
            class_size_c(3, DescentSet::from_indices(&[2])),
            BigUint::from(2u32)
        );
        assert_eq!(
            class_size_c(3, DescentSet::from_indices(&[3])),
            BigUint::zero()
        );
    }

    #[test]
    fn sums_to_catalan() {
        for n in 1..=14usize {
            let total: BigUint = (0..1u64 << (n - 1))
                .map(|mask| class_size_c(n, DescentSet(mask)))
                .sum();
            assert_eq!(total, catalan(n as u64));
        }
    }
}
