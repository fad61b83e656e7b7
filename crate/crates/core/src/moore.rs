//! Moore's Nim: `M(x) = Σ_j y_j (k+1)^j` where `y_j` is the number of piles
//! with bit `j` set, reduced mod `k + 1`.
//!
//! `M(x) = 0` exactly at P-positions and `M(x) = 1` exactly at 1-positions.
//! Beyond that `M` is not the SG value.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::position::{apply_move, is_legal_move, GameSpec, Move, Pile, Position};

/// Binary digits of every pile and the column residues mod `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MooreDigits {
    /// `bits[i][j]` is bit `j` of pile `i`.
    pub bits: Vec<Vec<u8>>,
    /// `ydigits[j]` in `0..=k`.
    pub ydigits: Vec<u64>,
    pub mvalue: BigUint,
}

impl MooreDigits {
    pub fn is_zero(&self) -> bool {
        self.ydigits.iter().all(|&y| y == 0)
    }

    pub fn is_one(&self) -> bool {
        self.ydigits.first() == Some(&1) && self.ydigits[1..].iter().all(|&y| y == 0)
    }

    /// `M` if it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.mvalue).ok()
    }
}

fn width(piles: &[Pile]) -> usize {
    piles
        .iter()
        .map(|&p| 64 - p.leading_zeros() as usize)
        .max()
        .unwrap_or(0)
}

fn column_residues(k: usize, piles: &[Pile]) -> Vec<u64> {
    (0..width(piles))
        .map(|j| piles.iter().filter(|&&p| p >> j & 1 == 1).count() as u64 % (k as u64 + 1))
        .collect()
}

pub fn moore_m(spec: &GameSpec, pos: &Position) -> Result<MooreDigits> {
    spec.validate(pos)?;
    let w = width(pos);
    let bits = pos
        .iter()
        .map(|&p| (0..w).map(|j| (p >> j & 1) as u8).collect())
        .collect();
    let ydigits = column_residues(spec.k, pos);
    let base = BigUint::from(spec.k as u64 + 1);
    let mvalue = ydigits
        .iter()
        .rev()
        .fold(BigUint::from(0u32), |acc, &y| acc * &base + y);
    Ok(MooreDigits { bits, ydigits, mvalue })
}

/// A move to a position with `M = 0`. Fails with `PrePosition` when `M` is
/// already 0.
pub fn moore_move_to_zero(spec: &GameSpec, pos: &Position) -> Result<Move> {
    spec.validate(pos)?;
    let y = column_residues(spec.k, pos);
    if y.iter().all(|&d| d == 0) {
        return Err(Error::PrePosition(0));
    }
    let bits: Vec<usize> = (0..y.len()).rev().filter(|&j| y[j] != 0).collect();
    let mut st = IndexSets::new(pos);
    for t in bits {
        st.clear_column(spec.k, t, y[t])?;
    }
    finish(spec, pos, st, 0)
}

/// A move to a position with `M = 1`. Fails with `PrePosition` when
/// `M <= 1`.
pub fn moore_move_to_one(spec: &GameSpec, pos: &Position) -> Result<Move> {
    spec.validate(pos)?;
    let y = column_residues(spec.k, pos);
    let high_zero = y.iter().skip(1).all(|&d| d == 0);
    let y0 = y.first().copied().unwrap_or(0);
    if high_zero && y0 <= 1 {
        return Err(Error::PrePosition(y0));
    }
    let bits: Vec<usize> = (1..y.len()).rev().filter(|&j| y[j] != 0).collect();
    let mut st = IndexSets::new(pos);
    for t in bits {
        st.clear_column(spec.k, t, y[t])?;
    }
    st.last_column_to_one(spec.k, y0)?;
    finish(spec, pos, st, 1)
}

fn finish(spec: &GameSpec, pos: &Position, st: IndexSets, target: u64) -> Result<Move> {
    let succ = Position::new(st.work);
    let mv = Move::between(pos, &succ);
    if !is_legal_move(spec, pos, &mv) {
        return Err(Error::ConstructionFailed(format!("{mv} is not legal from {pos}")));
    }
    let reached = moore_m(spec, &apply_move(pos, &mv)?)?;
    if reached.mvalue != BigUint::from(target) {
        return Err(Error::ConstructionFailed(format!(
            "{mv} from {pos} reaches M = {}, wanted {target}",
            reached.mvalue
        )));
    }
    Ok(mv)
}

/// The growing index set `I` and the working position.
struct IndexSets {
    orig: Vec<Pile>,
    work: Vec<Pile>,
    chosen: Vec<bool>,
}

impl IndexSets {
    fn new(pos: &Position) -> Self {
        IndexSets {
            orig: pos.to_vec(),
            work: pos.to_vec(),
            chosen: vec![false; pos.len()],
        }
    }

    fn bit(&self, i: usize, t: usize) -> bool {
        self.work[i] >> t & 1 == 1
    }

    fn set_bit(&mut self, i: usize, t: usize, on: bool) {
        if on {
            self.work[i] |= 1 << t;
        } else {
            self.work[i] &= !(1 << t);
        }
    }

    fn alpha(&self) -> usize {
        self.chosen.iter().filter(|&&c| c).count()
    }

    /// Members of `I` with bit `t` set (`O`) and unset (`I \ O`).
    fn split(&self, t: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.work.len())
            .filter(|&i| self.chosen[i])
            .partition(|&i| self.bit(i, t))
    }

    /// The first `count` indices outside `I` whose original bit `t` is set.
    fn fresh(&self, t: usize, count: usize) -> Result<Vec<usize>> {
        let picked: Vec<usize> = (0..self.orig.len())
            .filter(|&i| !self.chosen[i] && self.orig[i] >> t & 1 == 1)
            .take(count)
            .collect();
        if picked.len() < count {
            return Err(Error::ConstructionFailed(format!(
                "bit {t}: needed {count} fresh piles, found {}",
                picked.len()
            )));
        }
        Ok(picked)
    }

    fn adopt(&mut self, idx: &[usize]) {
        for &i in idx {
            self.chosen[i] = true;
        }
    }

    /// Makes column `t` sum to 0 mod `k + 1` given its residue `y`.
    fn clear_column(&mut self, k: usize, t: usize, y: u64) -> Result<()> {
        let y = y as usize;
        let alpha = self.alpha();
        let (ones, zeros) = self.split(t);
        let beta = ones.len();
        let case1 = y <= beta;
        let case2 = y > beta && k + 1 - y <= alpha - beta;
        let case3 = y > beta && y - beta <= k - alpha;
        if [case1, case2, case3].iter().filter(|&&c| c).count() != 1 {
            return Err(Error::ConstructionFailed(format!(
                "bit {t}: cases not exclusive (y = {y}, alpha = {alpha}, beta = {beta})"
            )));
        }
        if case1 {
            for &i in &ones[..y] {
                self.set_bit(i, t, false);
            }
        } else if case2 {
            for &i in &zeros[..k + 1 - y] {
                self.set_bit(i, t, true);
            }
        } else {
            let fresh = self.fresh(t, y - beta)?;
            self.adopt(&fresh);
            for &i in fresh.iter().chain(&ones) {
                self.set_bit(i, t, false);
            }
        }
        Ok(())
    }

    /// Makes column 0 sum to 1 mod `k + 1` given its residue `y0`.
    fn last_column_to_one(&mut self, k: usize, y0: u64) -> Result<()> {
        let y0 = y0 as usize;
        let alpha = self.alpha();
        let (ones, zeros) = self.split(0);
        let beta = ones.len();
        let cases = [
            y0 > 1 && y0 - 1 <= beta,
            y0 > 1 && k + 2 - y0 <= alpha - beta,
            y0 > 1 && y0 - 1 > beta && y0 - 1 - beta <= k - alpha,
            y0 == 0 && alpha > beta,
            y0 == 0 && alpha == beta && beta == k,
            y0 == 0 && alpha == beta && beta < k,
            y0 == 1,
        ];
        let hits: Vec<usize> = (0..cases.len()).filter(|&c| cases[c]).collect();
        if hits.len() != 1 {
            return Err(Error::ConstructionFailed(format!(
                "bit 0: matched cases {hits:?} (y0 = {y0}, alpha = {alpha}, beta = {beta})"
            )));
        }
        match hits[0] {
            0 => {
                for &i in &ones[..y0 - 1] {
                    self.set_bit(i, 0, false);
                }
            }
            1 => {
                for &i in &zeros[..k + 2 - y0] {
                    self.set_bit(i, 0, true);
                }
            }
            2 => {
                let fresh = self.fresh(0, y0 - 1 - beta)?;
                self.adopt(&fresh);
                for &i in fresh.iter().chain(&ones) {
                    self.set_bit(i, 0, false);
                }
            }
            3 => self.set_bit(zeros[0], 0, true),
            4 => {
                for &i in &ones {
                    self.set_bit(i, 0, false);
                }
            }
            5 => {
                let fresh = self.fresh(0, k - alpha)?;
                self.adopt(&fresh);
                for &i in fresh.iter().chain(&ones) {
                    self.set_bit(i, 0, false);
                }
            }
            _ => {}
        }
        Ok(())
    }
}
