//! Enumeration helpers for exhaustive sweeps.

use crate::position::Pile;

/// Advances `x` to the next tuple in `{0..=max}^n` (last index fastest).
/// Returns `false` after the last tuple, leaving `x` all zeros.
pub fn next_tuple(x: &mut [Pile], max: Pile) -> bool {
    for slot in x.iter_mut().rev() {
        if *slot < max {
            *slot += 1;
            return true;
        }
        *slot = 0;
    }
    false
}

/// Advances a nondecreasing `x` to the next nondecreasing tuple with entries
/// in `0..=max`. Returns `false` after the last one.
pub fn next_multiset(x: &mut [Pile], max: Pile) -> bool {
    let n = x.len();
    for i in (0..n).rev() {
        if x[i] < max {
            let v = x[i] + 1;
            for slot in &mut x[i..] {
                *slot = v;
            }
            return true;
        }
    }
    false
}

/// Every tuple in `{0..=max}^n`.
pub fn all_tuples(n: usize, max: Pile) -> impl Iterator<Item = Vec<Pile>> {
    let mut cur = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if next_tuple(&mut next, max) {
            cur = Some(next);
        }
        Some(out)
    })
}

/// Every nondecreasing tuple in `{0..=max}^n`.
pub fn all_multisets(n: usize, max: Pile) -> impl Iterator<Item = Vec<Pile>> {
    let mut cur = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if next_multiset(&mut next, max) {
            cur = Some(next);
        }
        Some(out)
    })
}

/// `C(y + 1, 2) = y (y + 1) / 2`, checked.
pub fn triangular(y: u64) -> Option<u128> {
    let y = y as u128;
    y.checked_mul(y + 1).map(|p| p / 2)
}
