//! Sprague-Grundy values of Exact k-Nim for `2k >= n`, and moves to any
//! smaller value.
//!
//! * `k = 1` is ordinary Nim: the XOR of the piles.
//! * `n < 2k`: the SG value equals the Tetris value.
//! * `n = 2k`, `k >= 2`: with `u = T(x)`, `m = min x`, `y = T(x - m)`,
//!   `z = 1 + C(y+1, 2)` and `v = (z-1) + ((m-z) mod (y+1))`, the value is
//!   `u` when `m < z` (type I) and `v` otherwise (type II).
//!
//! The move constructions all work on the sorted position. Most of them pin
//! the minimum, pick two reachable positions `upper >= lower` that decrease
//! the same `k` piles, and walk between them until `y` hits the wanted
//! value (see [`interpolate_y`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::position::{apply_move, is_legal_move, normalize, GameSpec, Move, Pile, Position, Ruleset};
use crate::tetris::{move_to_tetris, tetris_value};
use crate::util::triangular;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PositionType {
    /// `m < z`, value is `u`.
    TypeI,
    /// `m >= z`, value is `v`.
    TypeII,
}

/// The quantities behind the `n = 2k` formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgParams {
    pub u: u64,
    pub m: u64,
    pub y: u64,
    pub z: u128,
    /// Only the SG value for type II positions, where it is below `m`.
    pub v: u128,
    pub kind: PositionType,
    pub g: u64,
}

/// `g = C(nu + 1, 2) + eps` with `0 <= eps <= nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NuEps {
    pub nu: u64,
    pub eps: u64,
}

pub fn nu_eps(g: u64) -> NuEps {
    // largest nu with nu (nu + 1) / 2 <= g
    let g128 = g as u128;
    let mut nu = (((8 * g128 + 1).isqrt() - 1) / 2) as u64;
    while triangular(nu + 1).unwrap() <= g128 {
        nu += 1;
    }
    while triangular(nu).unwrap() > g128 {
        nu -= 1;
    }
    let eps = (g128 - triangular(nu).unwrap()) as u64;
    NuEps { nu, eps }
}

/// `v(m, y) = C(y+1, 2) + ((m - 1 - C(y+1, 2)) mod (y+1))`, the type II value
/// of any position with minimum `m` and `y`-value `y`.
pub fn v_of(m: u64, y: u64) -> u128 {
    let tri = triangular(y).unwrap();
    let modulus = y as i128 + 1;
    let r = (m as i128 - 1 - tri as i128).rem_euclid(modulus);
    tri + r as u128
}

fn require_exact(spec: &GameSpec) -> Result<()> {
    if spec.ruleset != Ruleset::ExactK {
        return Err(Error::InvalidSpec("expected the Exact-k ruleset".into()));
    }
    Ok(())
}

fn require_balanced(spec: &GameSpec) -> Result<()> {
    require_exact(spec)?;
    if spec.n != 2 * spec.k || spec.k < 2 {
        return Err(Error::UnsupportedCase(format!(
            "formula needs n = 2k with k >= 2, got n = {}, k = {}",
            spec.n, spec.k
        )));
    }
    Ok(())
}

/// `y(x) = T(x - min(x))`.
pub(crate) fn y_value(k: usize, x: &[Pile]) -> Result<u64> {
    let m = x.iter().copied().min().unwrap_or(0);
    let shifted: Vec<Pile> = x.iter().map(|&p| p - m).collect();
    tetris_value(k, &shifted)
}

fn params_of(k: usize, x: &[Pile]) -> Result<SgParams> {
    let u = tetris_value(k, x)?;
    let m = x.iter().copied().min().unwrap_or(0);
    let y = y_value(k, x)?;
    let z = triangular(y).and_then(|t| t.checked_add(1)).ok_or(Error::Overflow("z"))?;
    let modulus = y as i128 + 1;
    let v = (z - 1) + (m as i128 - z as i128).rem_euclid(modulus) as u128;
    let (kind, g) = if (m as u128) < z {
        (PositionType::TypeI, u)
    } else {
        // v <= m - 1 here
        (PositionType::TypeII, v as u64)
    };
    Ok(SgParams { u, m, y, z, v, kind, g })
}

/// All formula quantities for `n = 2k`, `k >= 2`.
pub fn sg_params(spec: &GameSpec, pos: &Position) -> Result<SgParams> {
    require_balanced(spec)?;
    spec.validate(pos)?;
    params_of(spec.k, pos)
}

/// SG value of an Exact k-Nim position, for `k = 1` or `2k >= n`.
pub fn sg_value(spec: &GameSpec, pos: &Position) -> Result<u64> {
    require_exact(spec)?;
    spec.validate(pos)?;
    let (n, k) = (spec.n, spec.k);
    if k == 1 {
        Ok(pos.iter().fold(0, |acc, &p| acc ^ p))
    } else if n < 2 * k {
        tetris_value(k, pos)
    } else if n == 2 * k {
        Ok(params_of(k, pos)?.g)
    } else {
        Err(Error::UnsupportedCase(format!(
            "no known formula for 1 < k < n/2 (n = {n}, k = {k})"
        )))
    }
}

/// Whether the formula covers `spec`.
pub fn formula_supported(spec: &GameSpec) -> bool {
    spec.ruleset == Ruleset::ExactK && (spec.k == 1 || spec.n <= 2 * spec.k)
}

/// `n = 2k`: a P-position iff the `k + 1` smallest piles are equal.
pub fn is_p_position(spec: &GameSpec, pos: &Position) -> Result<bool> {
    require_balanced(spec)?;
    spec.validate(pos)?;
    let x = normalize(pos).sorted;
    Ok(x[0] == x[spec.k])
}

/// `n = 2k`: a 1-position iff the sorted piles start with `k - l` copies of
/// an even `2c` followed by `2l + 1` copies of `2c + 1`, for some
/// `0 <= l < k`.
pub fn is_one_position(spec: &GameSpec, pos: &Position) -> Result<bool> {
    require_balanced(spec)?;
    spec.validate(pos)?;
    let x = normalize(pos).sorted;
    let k = spec.k;
    let low = x[0];
    if !low.is_multiple_of(2) {
        return Ok(false);
    }
    let run = x.iter().take_while(|&&p| p == low).count();
    if run > k {
        return Ok(false);
    }
    let ell = k - run;
    Ok(x[run..=k + ell].iter().all(|&p| p == low + 1))
}

/// Position in between `upper` and `lower` (same decreased piles, pinned
/// minimum) whose `y` value is `target`.
///
/// Walks the path that removes tokens from `upper` towards `lower`, lowest
/// index first. Along it `y` only drops, one step at a time, so bisection
/// finds the first point at or below `target`. The result is rechecked and a
/// short linear scan around the probe backs it up.
pub fn interpolate_y(
    spec: &GameSpec,
    upper: &Position,
    lower: &Position,
    target: u64,
) -> Result<Position> {
    spec.validate(upper)?;
    spec.validate(lower)?;
    if !lower.dominated_by(upper) {
        return Err(Error::InvalidSpec("interpolate_y needs lower <= upper".into()));
    }
    let k = spec.k;
    let (y_hi, y_lo) = (y_value(k, upper)?, y_value(k, lower)?);
    if target < y_lo || target > y_hi {
        return Err(Error::RangeViolation { target, low: y_lo, high: y_hi });
    }
    let gaps: Vec<u128> = upper
        .iter()
        .zip(lower.iter())
        .map(|(&a, &b)| (a - b) as u128)
        .collect();
    let total: u128 = gaps.iter().sum();
    let point = |steps: u128| -> Position {
        let mut left = steps;
        let mut out = upper.to_vec();
        for (slot, &gap) in out.iter_mut().zip(&gaps) {
            let take = gap.min(left);
            *slot -= take as Pile;
            left -= take;
            if left == 0 {
                break;
            }
        }
        Position::new(out)
    };
    let (mut lo, mut hi) = (0u128, total);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if y_value(k, &point(mid))? <= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let probe = point(lo);
    if y_value(k, &probe)? == target {
        return Ok(probe);
    }
    const SCAN: u128 = 64;
    for steps in lo.saturating_sub(SCAN)..=(lo + SCAN).min(total) {
        let cand = point(steps);
        if y_value(k, &cand)? == target {
            return Ok(cand);
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no point between {lower} and {upper} has y = {target}"
    )))
}

/// A legal move to a position of SG value `delta < sg_value(pos)`.
pub fn winning_move(spec: &GameSpec, pos: &Position, delta: u64) -> Result<Move> {
    let g = sg_value(spec, pos)?;
    if delta >= g {
        return Err(Error::TargetOutOfRange {
            target: delta,
            reason: format!("SG value is {g}"),
        });
    }
    let (n, k) = (spec.n, spec.k);
    let mv = if k == 1 {
        nim_move(pos, g, delta)
    } else if n < 2 * k {
        move_to_tetris(spec, pos, delta)?
    } else {
        let view = normalize(pos);
        let succ = balanced_move(spec, &view.sorted, delta)?;
        view.unsort_move(&Move::between(&view.sorted, &succ))
    };
    if !is_legal_move(spec, pos, &mv) {
        return Err(Error::ConstructionFailed(format!("{mv} is not legal from {pos}")));
    }
    let reached = sg_value(spec, &apply_move(pos, &mv)?)?;
    if reached != delta {
        return Err(Error::ConstructionFailed(format!(
            "{mv} from {pos} reaches SG {reached}, wanted {delta}"
        )));
    }
    Ok(mv)
}

fn nim_move(pos: &Position, g: u64, delta: u64) -> Move {
    let t = g ^ delta;
    let bit = 63 - t.leading_zeros();
    let i = pos
        .iter()
        .position(|&p| p >> bit & 1 == 1)
        .expect("the top bit of g ^ delta is set in some pile");
    Move::from_pairs([(i, pos[i] ^ t)])
}

/// `n = 2k` constructions on a sorted position. Returns the successor.
fn balanced_move(spec: &GameSpec, x: &Position, delta: u64) -> Result<Position> {
    let k = spec.k;
    let n = spec.n;
    let p = params_of(k, x)?;
    let m = p.m;
    match p.kind {
        PositionType::TypeI if m == 0 => {
            // at most 2k-1 nonempty piles: emptying the k largest gives T = 0
            let mv = move_to_tetris(spec, x, delta)?;
            apply_move(x, &mv)
        }
        PositionType::TypeI => {
            if delta < m {
                let gamma = nu_eps(delta).nu;
                let mu = m - (m - delta - 1) % (gamma + 1);
                reach_pair_below_min(spec, x, mu, gamma)
            } else if delta < x[1] {
                let mut out = x.to_vec();
                for slot in &mut out[k..n - 1] {
                    *slot = 0;
                }
                out[n - 1] = delta - x[0];
                Ok(Position::new(out))
            } else if delta < p.u.saturating_sub(m) {
                redistribute(k, x, delta)
            } else {
                trim_to(k, x, p.u, delta)
            }
        }
        PositionType::TypeII => {
            let z_minus_1 = (p.z - 1) as u64; // z - 1 <= v < m here
            let (target_m, target_y) = if delta < z_minus_1 {
                let y2 = nu_eps(delta).nu;
                (m - (m - 1 - delta) % (y2 + 1), y2)
            } else {
                let r = p.v as u64 - z_minus_1;
                (m - r + (delta - z_minus_1), p.y)
            };
            reach_in_d(spec, x, &p, target_m, target_y)
        }
    }
}

/// Type I, `delta < m`: a type II successor with minimum `mu` and `y = gamma`.
fn reach_pair_below_min(spec: &GameSpec, x: &Position, mu: u64, gamma: u64) -> Result<Position> {
    let k = spec.k;
    let mut upper = x.to_vec();
    let mut lower = x.to_vec();
    if mu == x[0] {
        for i in k..spec.n {
            upper[i] = x[i] - 1;
            lower[i] = mu;
        }
    } else if gamma <= x[k] - mu {
        // pin pile 2 at mu, lower piles 3..=k+1
        upper[1] = mu;
        lower[1] = mu;
        for i in 2..=k {
            upper[i] = x[i] - 1;
            lower[i] = mu;
        }
    } else {
        // pin pile 1 at mu, lower piles 2..=k
        upper[0] = mu;
        lower[0] = mu;
        for i in 1..k {
            upper[i] = x[i] - 1;
            lower[i] = mu;
        }
    }
    interpolate_y(spec, &Position::new(upper), &Position::new(lower), gamma)
}

/// Type I, `x_2 <= delta < u - m`: empty pile 1, keep piles 2..=k+1 and cut
/// the rest so the Tetris value becomes `delta`.
fn redistribute(k: usize, x: &Position, delta: u64) -> Result<Position> {
    let n = x.len();
    let deficit: u128 = x[1..=k]
        .iter()
        .map(|&p| delta.saturating_sub(p) as u128)
        .sum();
    let mut out = x.to_vec();
    out[0] = 0;
    let mut left = deficit;
    for i in (k + 1..n).rev() {
        let a = ((x[i] - 1).min(delta) as u128).min(left);
        out[i] = a as Pile;
        left -= a;
    }
    if left > 0 {
        return Err(Error::ConstructionFailed(format!(
            "cannot spread {deficit} tokens over the top piles of {x}"
        )));
    }
    Ok(Position::new(out))
}

/// Type I, `u - m <= delta < u`: lower one pile of each pair `(i, i + k)`
/// by `u - delta`, capping piles above `u` at `delta`.
fn trim_to(k: usize, x: &Position, u: u64, delta: u64) -> Result<Position> {
    let cut = u - delta;
    let mut out = x.to_vec();
    for i in 0..k {
        if x[i + k] <= delta {
            out[i] = x[i]
                .checked_sub(cut)
                .ok_or_else(|| Error::ConstructionFailed("negative pile".into()))?;
        }
    }
    for i in k..x.len() {
        if x[i] > u {
            out[i] = delta;
        } else if x[i] > delta {
            out[i] = x[i] - cut;
        }
    }
    Ok(Position::new(out))
}

/// Type II: a successor with minimum `target_m` and `y = target_y`.
fn reach_in_d(
    spec: &GameSpec,
    x: &Position,
    p: &SgParams,
    target_m: u64,
    target_y: u64,
) -> Result<Position> {
    let (k, n) = (spec.k, spec.n);
    let mut upper = x.to_vec();
    let mut lower = x.to_vec();
    if target_m == p.m {
        for i in k..n {
            upper[i] = x[i] - 1;
            lower[i] = p.m;
        }
    } else {
        // pin pile 1 when the target y is high enough, else pile 2
        let pinned = if target_y >= x[1] - target_m { 0 } else { 1 };
        upper[pinned] = target_m;
        lower[pinned] = target_m;
        let ceiling = p.m.saturating_add(p.y);
        for i in k + 1..n {
            upper[i] = x[i].min(ceiling) - 1;
            lower[i] = target_m;
        }
    }
    interpolate_y(spec, &Position::new(upper), &Position::new(lower), target_y)
}
