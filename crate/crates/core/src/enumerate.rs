//! Tuple-space enumeration in canonical lexicographic order.

use itertools::Itertools;

/// All tuples of `len` entries drawn from `elems` with repetition, in
/// lexicographic order of positions (assuming `elems` sorted ascending).
pub(crate) fn all_tuples(elems: &[usize], len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    (0..len)
        .map(|_| elems.iter().copied())
        .multi_cartesian_product()
        .collect()
}

/// Repetition-free tuples of `len` entries drawn from `elems`, lexicographic.
pub(crate) fn repfree_tuples(elems: &[usize], len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    elems.iter().copied().permutations(len).collect()
}

/// `n^len`, saturating at `u128::MAX`.
pub(crate) fn power_count(n: usize, len: usize) -> u128 {
    (n as u128).saturating_pow(len as u32)
}

/// Falling factorial `n * (n-1) * ... * (n-len+1)`, zero when `len > n`.
pub(crate) fn falling_count(n: usize, len: usize) -> u128 {
    if len > n {
        return 0;
    }
    (0..len).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128))
}
