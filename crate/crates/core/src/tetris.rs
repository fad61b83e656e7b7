//! The Tetris function `T(x)`: the largest number of consecutive Exact-k
//! moves that can be made from `x`.
//!
//! `T` is computed from the shifted position `x̄`: the `n-k` smallest piles
//! are emptied and their tokens stacked, one at a time, onto the smallest of
//! the `k` largest piles (ties go to the larger index). Then `T(x)` is the
//! smallest of those `k` piles. [`tetris_profile_sorted`] builds `x̄` in
//! `O(n)` on sorted input.

use crate::error::{Error, Result};
use crate::position::{normalize, GameSpec, Move, Pile, Position, Ruleset};

/// The shifted position `x̄` and the data used to build it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TetrisProfile {
    /// `x̄`, in sorted coordinates (zeros in the first `n-k` entries).
    pub xbar: Position,
    /// Number of low columns levelled together, minus one.
    pub ell: usize,
    /// Uniform raise applied to the levelled columns.
    pub alpha: u64,
    /// How many of the levelled columns get one extra token.
    pub beta: u64,
    /// `T(x)`, equal to `xbar[n-k]`.
    pub tvalue: u64,
}

fn require_exact(spec: &GameSpec) -> Result<()> {
    match spec.ruleset {
        Ruleset::ExactK => Ok(()),
        Ruleset::MooreAtMostK => Err(Error::InvalidSpec(
            "the Tetris function is defined for the Exact-k ruleset only".into(),
        )),
    }
}

/// Greedy reference: repeatedly take one token from each of the `k` largest
/// piles until fewer than `k` piles are nonempty. Runs in time proportional
/// to `T(x)`, so only use it on small positions.
pub fn tetris_oracle(spec: &GameSpec, pos: &Position) -> Result<u64> {
    require_exact(spec)?;
    spec.validate(pos)?;
    Ok(greedy_slow_moves(spec.k, pos))
}

pub(crate) fn greedy_slow_moves(k: usize, piles: &[Pile]) -> u64 {
    let mut x = piles.to_vec();
    let mut count = 0;
    loop {
        x.sort_unstable();
        let n = x.len();
        if k == 0 || k > n || x[n - k] == 0 {
            return count;
        }
        for p in &mut x[n - k..] {
            *p -= 1;
        }
        count += 1;
    }
}

/// Largest `ell` with `s_ell <= s`, where `s_ell` tokens raise the first
/// `ell + 1` of the sorted `top` columns to the level of `top[ell]`.
fn levelled_columns(top: &[Pile], s: u128) -> (usize, u128) {
    let mut ell = 0;
    let mut s_ell: u128 = 0;
    for i in 1..top.len() {
        let next = s_ell + i as u128 * (top[i] - top[i - 1]) as u128;
        if next > s {
            break;
        }
        ell = i;
        s_ell = next;
    }
    (ell, s_ell)
}

/// Builds `x̄` for a nondecreasing `sorted` slice in `O(n)`.
pub fn tetris_profile_sorted(k: usize, sorted: &[Pile]) -> Result<TetrisProfile> {
    let n = sorted.len();
    if k == 0 || k > n {
        return Err(Error::InvalidSpec(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let off = n - k;
    let top = &sorted[off..];
    let s: u128 = sorted[..off].iter().map(|&p| p as u128).sum();

    let (ell, s_ell) = levelled_columns(top, s);
    let a = s - s_ell;
    let width = ell as u128 + 1;
    let alpha = a / width;
    let beta = (a % width) as u64;
    let alpha: u64 = alpha.try_into().map_err(|_| Error::Overflow("tetris shift"))?;
    let level = top[ell]
        .checked_add(alpha)
        .ok_or(Error::Overflow("tetris shift"))?;

    let mut xbar = vec![0; n];
    let raised_from = off + ell + 1 - beta as usize;
    for (i, slot) in xbar.iter_mut().enumerate().skip(off) {
        *slot = if i < raised_from {
            level
        } else if i <= off + ell {
            level.checked_add(1).ok_or(Error::Overflow("tetris shift"))?
        } else {
            sorted[i]
        };
    }
    Ok(TetrisProfile {
        tvalue: xbar[off],
        xbar: Position::new(xbar),
        ell,
        alpha,
        beta,
    })
}

/// `T(x)` with its profile. Sorts internally unless `pos` is already sorted.
pub fn tetris_fast(spec: &GameSpec, pos: &Position) -> Result<TetrisProfile> {
    require_exact(spec)?;
    spec.validate(pos)?;
    if pos.is_sorted() {
        tetris_profile_sorted(spec.k, pos)
    } else {
        tetris_profile_sorted(spec.k, &normalize(pos).sorted)
    }
}

/// `T(x)` for arbitrary pile order. Uses a selection for the `k` largest
/// piles, so only those are sorted.
pub fn tetris_value(k: usize, piles: &[Pile]) -> Result<u64> {
    let n = piles.len();
    if k == 0 || k > n {
        return Err(Error::InvalidSpec(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    if piles.windows(2).all(|w| w[0] <= w[1]) {
        return tetris_profile_sorted(k, piles).map(|p| p.tvalue);
    }
    let mut buf = piles.to_vec();
    let off = n - k;
    if off > 0 {
        buf.select_nth_unstable(off - 1);
    }
    buf[off..].sort_unstable();
    // only the total of the low part matters
    let s: u128 = buf[..off].iter().map(|&p| p as u128).sum();
    tetris_from_parts(s, &buf[off..])
}

/// Same construction as [`tetris_profile_sorted`] given only the low total
/// `s` and the sorted top `k` piles.
fn tetris_from_parts(s: u128, top: &[Pile]) -> Result<u64> {
    let (ell, s_ell) = levelled_columns(top, s);
    let alpha = (s - s_ell) / (ell as u128 + 1);
    let t = top[ell] as u128 + alpha;
    t.try_into().map_err(|_| Error::Overflow("tetris value"))
}

/// Whether `g` satisfies `k g <= Σ min(x_i, g)` and
/// `Σ min(x_i, g+1) < k (g+1)`. This holds for exactly one `g`, namely `T(x)`.
pub fn tetris_certificate(spec: &GameSpec, pos: &Position, g: u64) -> bool {
    certificate_holds(spec.k, pos, g)
}

pub(crate) fn certificate_holds(k: usize, piles: &[Pile], g: u64) -> bool {
    let k = k as u128;
    let g = g as u128;
    let capped = |cap: u128| -> u128 { piles.iter().map(|&p| (p as u128).min(cap)).sum() };
    k * g <= capped(g) && capped(g + 1) < k * (g + 1)
}

/// Point `total` on the chain of top-`k` vectors from all zeros up to `caps`
/// (sorted ascending): water-fill to a common level, with leftover tokens
/// going to the largest indices. Consecutive totals differ by one token.
pub(crate) fn water_fill(caps: &[Pile], total: u128) -> Vec<Pile> {
    let k = caps.len();
    let mut out = caps.to_vec();
    let mut prefix: u128 = 0;
    for (j, &cap) in caps.iter().enumerate() {
        let rest = (k - j) as u128;
        let full = prefix + rest * cap as u128;
        if total < full {
            let level = (total - prefix) / rest;
            let rem = ((total - prefix) % rest) as usize;
            for (i, slot) in out.iter_mut().enumerate().skip(j) {
                let bump = if i >= k - rem { 1 } else { 0 };
                *slot = level as Pile + bump;
            }
            return out;
        }
        prefix += cap as u128;
    }
    out
}

/// A legal Exact-k move from `pos` to a position with Tetris value `g`,
/// touching only the `k` largest piles.
///
/// Valid targets are `T(x^l) <= g < T(x)`, where `x^l` empties the `k`
/// largest piles; when `2k > n`, `T(x^l) = 0`.
///
/// The new top piles lie on the [`water_fill`] chain below `x - 1`, where
/// `T` grows by at most one per token. With `A = Σ_low min(x_i, g)` the
/// first point reaching `T >= g` keeps exactly `max(0, k g - A)` tokens,
/// since below level `g` every kept token counts towards the certificate.
pub fn move_to_tetris(spec: &GameSpec, pos: &Position, g: u64) -> Result<Move> {
    require_exact(spec)?;
    spec.validate(pos)?;
    let view = normalize(pos);
    let x = &view.sorted;
    let (n, k) = (spec.n, spec.k);
    let off = n - k;
    let low_total: u128 = x[..off].iter().map(|&p| p as u128).sum();
    let t = tetris_from_parts(low_total, &x[off..])?;
    if t == 0 {
        return Err(Error::TargetOutOfRange {
            target: g,
            reason: "position has Tetris value 0".into(),
        });
    }
    // x^l keeps the low part; its k largest piles are the top of that part
    let t_low = if off < k {
        0
    } else {
        let rest: u128 = x[..off - k].iter().map(|&p| p as u128).sum();
        tetris_from_parts(rest, &x[off - k..off])?
    };
    if g < t_low || g >= t {
        return Err(Error::TargetOutOfRange {
            target: g,
            reason: format!("reachable Tetris values here are [{t_low}, {t})"),
        });
    }
    // T >= 1, so every one of the k largest piles is nonempty.
    let caps: Vec<Pile> = x[off..].iter().map(|&p| p - 1).collect();
    let counted: u128 = x[..off].iter().map(|&p| p.min(g) as u128).sum();
    let keep = (k as u128 * g as u128).saturating_sub(counted);
    let top = water_fill(&caps, keep);
    let below = |h: u64| -> u128 {
        x[..off].iter().chain(&top).map(|&p| p.min(h) as u128).sum()
    };
    let (kg, kg1) = (k as u128 * g as u128, k as u128 * (g as u128 + 1));
    if below(g) < kg || below(g + 1) >= kg1 {
        return Err(Error::ConstructionFailed(format!(
            "Tetris target {g} from {pos} missed"
        )));
    }
    Ok(Move::from_pairs(
        top.iter().enumerate().map(|(i, &v)| (view.perm[off + i], v)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::apply_move;
    use proptest::prelude::*;

    fn exact(n: usize, k: usize) -> GameSpec {
        GameSpec::exact(n, k).unwrap()
    }

    fn p(v: &[u64]) -> Position {
        Position::from(v)
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(tetris_oracle(&exact(7, 4), &p(&[1, 2, 2, 3, 4, 4, 7])).unwrap(), 5);
        assert_eq!(tetris_oracle(&exact(4, 2), &p(&[0, 0, 0, 0])).unwrap(), 0);
        assert_eq!(tetris_oracle(&exact(4, 2), &p(&[0, 1, 2, 3])).unwrap(), 3);
        let moore = GameSpec::moore(4, 2).unwrap();
        assert!(matches!(tetris_oracle(&moore, &p(&[1, 1, 1, 1])), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn worked_profile() {
        let prof = tetris_fast(&exact(7, 4), &p(&[1, 2, 2, 3, 4, 4, 7])).unwrap();
        assert_eq!(prof.xbar, p(&[0, 0, 0, 5, 5, 6, 7]));
        assert_eq!((prof.ell, prof.alpha, prof.beta, prof.tvalue), (2, 1, 1, 5));
    }

    #[test]
    fn profile_small_cases() {
        let prof = tetris_fast(&exact(4, 2), &p(&[0, 0, 5, 5])).unwrap();
        assert_eq!(prof.tvalue, 5);
        assert_eq!(prof.xbar, p(&[0, 0, 5, 5]));

        let prof = tetris_fast(&exact(4, 2), &p(&[1, 1, 1, 1])).unwrap();
        assert_eq!(prof.tvalue, 2);
        assert_eq!(prof.xbar, p(&[0, 0, 2, 2]));

        // unsorted input goes through normalize
        let prof = tetris_fast(&exact(4, 2), &p(&[4, 1, 3, 2])).unwrap();
        assert_eq!(prof.tvalue, 5);
    }

    #[test]
    fn k_equals_n_is_the_minimum() {
        assert_eq!(tetris_value(3, &[4, 2, 9]).unwrap(), 2);
        assert_eq!(tetris_fast(&exact(3, 3), &p(&[2, 4, 9])).unwrap().tvalue, 2);
    }

    #[test]
    fn overflow_is_reported() {
        let big = u64::MAX;
        assert!(matches!(tetris_value(1, &[big, big]), Err(Error::Overflow(_))));
        assert!(matches!(
            tetris_profile_sorted(1, &[big, big]),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn certificate_examples() {
        let spec = exact(4, 2);
        assert!(tetris_certificate(&spec, &p(&[1, 2, 3, 4]), 5));
        assert!(!tetris_certificate(&spec, &p(&[1, 2, 3, 4]), 4));
        assert!(tetris_certificate(&spec, &p(&[0, 0, 0, 0]), 0));
    }

    #[test]
    fn water_fill_is_a_unit_step_chain() {
        let caps = [0, 2, 2, 5];
        let total: u128 = caps.iter().map(|&c| c as u128).sum();
        let mut prev = water_fill(&caps, 0);
        assert_eq!(prev, vec![0, 0, 0, 0]);
        for m in 1..=total {
            let cur = water_fill(&caps, m);
            assert_eq!(cur.iter().map(|&c| c as u128).sum::<u128>(), m);
            let diff: u64 = cur.iter().zip(&prev).map(|(a, b)| a - b).sum();
            assert_eq!(diff, 1);
            assert!(cur.iter().zip(&caps).all(|(a, c)| a <= c));
            prev = cur;
        }
        assert_eq!(prev, caps.to_vec());
    }

    #[test]
    fn move_to_tetris_examples() {
        let spec = exact(3, 2);
        let x = p(&[2, 2, 2]);
        let mv = move_to_tetris(&spec, &x, 0).unwrap();
        let succ = apply_move(&x, &mv).unwrap();
        assert_eq!(succ, p(&[2, 0, 0]));

        let mv = move_to_tetris(&spec, &x, 1).unwrap();
        assert!(crate::position::is_legal_move(&spec, &x, &mv));
        let succ = apply_move(&x, &mv).unwrap();
        assert_eq!(tetris_oracle(&spec, &succ).unwrap(), 1);

        let spec = exact(7, 4);
        let x = p(&[1, 2, 2, 3, 4, 4, 7]);
        let mv = move_to_tetris(&spec, &x, 4).unwrap();
        assert!(crate::position::is_legal_move(&spec, &x, &mv));
        let succ = apply_move(&x, &mv).unwrap();
        assert_eq!(tetris_fast(&spec, &succ).unwrap().tvalue, 4);
    }

    #[test]
    fn move_to_tetris_rejects_out_of_range() {
        let spec = exact(3, 2);
        assert!(matches!(
            move_to_tetris(&spec, &p(&[2, 2, 2]), 3),
            Err(Error::TargetOutOfRange { .. })
        ));
        assert!(matches!(
            move_to_tetris(&spec, &p(&[0, 0, 7]), 0),
            Err(Error::TargetOutOfRange { .. })
        ));
        // 2k <= n: emptying the two largest still leaves T = 1.
        let spec = exact(4, 2);
        assert!(matches!(
            move_to_tetris(&spec, &p(&[1, 1, 5, 5]), 0),
            Err(Error::TargetOutOfRange { .. })
        ));
        let mv = move_to_tetris(&spec, &p(&[1, 1, 5, 5]), 1).unwrap();
        let succ = apply_move(&p(&[1, 1, 5, 5]), &mv).unwrap();
        assert_eq!(tetris_value(2, &succ).unwrap(), 1);
    }

    #[test]
    fn exhaustive_against_oracle_small() {
        for n in 1..=4usize {
            for k in 1..=n {
                let mut x = vec![0u64; n];
                loop {
                    let o = greedy_slow_moves(k, &x);
                    assert_eq!(tetris_value(k, &x).unwrap(), o, "n={n} k={k} x={x:?}");
                    let mut sorted = x.clone();
                    sorted.sort_unstable();
                    assert_eq!(tetris_profile_sorted(k, &sorted).unwrap().tvalue, o);
                    if !crate::util::next_tuple(&mut x, 4) {
                        break;
                    }
                }
            }
        }
    }

    fn spec_and_pos() -> impl Strategy<Value = (usize, Vec<u64>)> {
        (1usize..=7).prop_flat_map(|n| (1..=n, proptest::collection::vec(0u64..12, n)))
    }

    proptest! {
        #[test]
        fn profile_invariants((k, x) in spec_and_pos()) {
            let n = x.len();
            let spec = exact(n, k);
            let prof = tetris_fast(&spec, &Position::new(x.clone())).unwrap();
            prop_assert!(prof.xbar[..n - k].iter().all(|&v| v == 0));
            prop_assert_eq!(prof.xbar.total(), Position::new(x.clone()).total());
            prop_assert_eq!(prof.tvalue, prof.xbar[n - k]);
            prop_assert!(prof.beta as usize <= prof.ell && prof.ell < k);
            prop_assert!((k as u128) * (prof.tvalue as u128) <= prof.xbar.total());
            prop_assert_eq!(prof.tvalue, greedy_slow_moves(k, &x));
        }

        #[test]
        fn certificate_is_unique((k, x) in spec_and_pos()) {
            let t = tetris_value(k, &x).unwrap();
            let total: u64 = x.iter().sum();
            for g in 0..=total + 1 {
                prop_assert_eq!(certificate_holds(k, &x, g), g == t);
            }
        }

        #[test]
        fn monotone_and_unit_step((k, x) in spec_and_pos(), pick in any::<proptest::sample::Index>()) {
            let i = pick.index(x.len());
            prop_assume!(x[i] > 0);
            let mut y = x.clone();
            y[i] -= 1;
            let (tx, ty) = (tetris_value(k, &x).unwrap(), tetris_value(k, &y).unwrap());
            prop_assert!(ty <= tx && tx - ty <= 1);
        }

        #[test]
        fn rebalancing_never_decreases((k, x) in spec_and_pos(),
                                       a in any::<proptest::sample::Index>(),
                                       b in any::<proptest::sample::Index>()) {
            let (i, j) = (a.index(x.len()), b.index(x.len()));
            prop_assume!(x[i] < x[j]);
            let mut y = x.clone();
            y[i] += 1;
            y[j] -= 1;
            prop_assert!(tetris_value(k, &x).unwrap() <= tetris_value(k, &y).unwrap());
        }

        #[test]
        fn slow_move_on_largest_drops_by_one((k, x) in spec_and_pos()) {
            let t = tetris_value(k, &x).unwrap();
            prop_assume!(t >= 1);
            let mut y = x.clone();
            y.sort_unstable();
            let n = y.len();
            for p in &mut y[n - k..] {
                *p -= 1;
            }
            prop_assert_eq!(tetris_value(k, &y).unwrap(), t - 1);
        }

        #[test]
        fn move_to_tetris_hits_every_target(x in proptest::collection::vec(0u64..1000, 5)) {
            let spec = exact(5, 3);
            let pos = Position::new(x);
            let t = tetris_value(3, &pos).unwrap();
            for g in 0..t.min(40) {
                let mv = move_to_tetris(&spec, &pos, g).unwrap();
                prop_assert!(crate::position::is_legal_move(&spec, &pos, &mv));
                let succ = apply_move(&pos, &mv).unwrap();
                prop_assert_eq!(tetris_value(3, &succ).unwrap(), g);
            }
        }
    }
}
