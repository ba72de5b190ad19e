//! Subset enumeration helpers shared by the brute-force oracles.

use crate::error::{Error, Result};

/// Hard ceiling for bitmask enumeration, independent of user limits.
pub const MAX_ENUMERATION_BITS: usize = 40;

pub(crate) fn check_limit(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_ENUMERATION_BITS);
    if actual > limit {
        Err(Error::LimitExceeded {
            what,
            actual,
            limit,
        })
    } else {
        Ok(())
    }
}

/// A change made while walking the reflected Gray code.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Flip {
    pub index: usize,
    pub added: bool,
}

/// Visits all `2^n` subsets of `0..n` as bitmasks in Gray-code order, starting
/// from the empty set. Every visit after the first changes exactly one element,
/// reported through `Flip`.
pub(crate) fn gray_walk(n: usize, mut visit: impl FnMut(u64, Option<Flip>)) {
    debug_assert!(n <= MAX_ENUMERATION_BITS);
    let mut mask = 0u64;
    visit(mask, None);
    for g in 1u64..(1u64 << n) {
        let index = g.trailing_zeros() as usize;
        mask ^= 1 << index;
        let added = mask & (1 << index) != 0;
        visit(mask, Some(Flip { index, added }));
    }
}

pub(crate) fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask & (1u64 << i) != 0).collect()
}

/// Lexicographic order on the ascending index lists of two masks.
pub(crate) fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let low = diff.trailing_zeros();
    let above = if low >= 63 { 0 } else { !0u64 << (low + 1) };
    if a & (1 << low) != 0 {
        // a continues with `low`; b continues with something larger, or stops.
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Validates a voter-index set against `n` and returns it as a bitmask-free
/// membership vector.
pub(crate) fn membership(n: usize, set: &[usize], what: &str) -> Result<Vec<bool>> {
    let mut member = vec![false; n];
    for &i in set {
        if i >= n {
            return Err(Error::invalid(format!(
                "{what}: voter index {i} out of range (n = {n})"
            )));
        }
        if member[i] {
            return Err(Error::invalid(format!("{what}: voter index {i} repeated")));
        }
        member[i] = true;
    }
    Ok(member)
}
