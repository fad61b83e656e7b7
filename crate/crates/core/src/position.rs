//! Positions, game rules and move semantics shared by both rulesets.
//!
//! Pile indices are 0-based in this API. Text formats (`Display`, the CLI,
//! the C ABI) use 1-based indices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of tokens in one pile.
pub type Pile = u64;

/// A game position: one token count per pile.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<Pile>);

impl Position {
    pub fn new(piles: Vec<Pile>) -> Self {
        Position(piles)
    }

    pub fn zeros(n: usize) -> Self {
        Position(vec![0; n])
    }

    pub fn piles(&self) -> &[Pile] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Pile> {
        self.0
    }

    /// Total number of tokens, widened so it cannot overflow for realistic `n`.
    pub fn total(&self) -> u128 {
        self.0.iter().map(|&p| p as u128).sum()
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|&&p| p > 0).count()
    }

    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &Position) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a <= b)
    }

    /// Sorted copy, used as the canonical key for symmetric games.
    pub fn canonical(&self) -> Position {
        let mut v = self.0.clone();
        v.sort_unstable();
        Position(v)
    }

    /// Comma separated text form, e.g. `1,2,2,3`.
    pub fn to_csv(&self) -> String {
        self.join(",")
    }

    pub fn join(&self, sep: &str) -> String {
        self.0
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl Deref for Position {
    type Target = [Pile];

    fn deref(&self) -> &[Pile] {
        &self.0
    }
}

impl From<Vec<Pile>> for Position {
    fn from(v: Vec<Pile>) -> Self {
        Position(v)
    }
}

impl From<&[Pile]> for Position {
    fn from(v: &[Pile]) -> Self {
        Position(v.to_vec())
    }
}

impl<const N: usize> From<[Pile; N]> for Position {
    fn from(v: [Pile; N]) -> Self {
        Position(v.to_vec())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.join(","))
    }
}

impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty position".into()));
        }
        cleaned
            .split(',')
            .map(|tok| {
                tok.parse::<Pile>()
                    .map_err(|e| Error::Parse(format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

/// Which piles a move may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ruleset {
    /// Exactly `k` piles are reduced per move.
    ExactK,
    /// Between 1 and `k` piles are reduced per move (Moore's Nim).
    MooreAtMostK,
}

impl fmt::Display for Ruleset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ruleset::ExactK => f.write_str("exact"),
            Ruleset::MooreAtMostK => f.write_str("moore"),
        }
    }
}

/// `n` piles, `k` piles per move, and the ruleset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameSpec {
    pub n: usize,
    pub k: usize,
    pub ruleset: Ruleset,
}

impl GameSpec {
    /// Checked constructor, requires `1 <= k <= n`.
    pub fn new(n: usize, k: usize, ruleset: Ruleset) -> Result<Self> {
        let spec = GameSpec { n, k, ruleset };
        spec.check()?;
        Ok(spec)
    }

    pub fn exact(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, Ruleset::ExactK)
    }

    pub fn moore(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, Ruleset::MooreAtMostK)
    }

    fn check(&self) -> Result<()> {
        if self.k < 1 || self.k > self.n {
            return Err(Error::InvalidSpec(format!(
                "need 1 <= k <= n, got n = {}, k = {}",
                self.n, self.k
            )));
        }
        Ok(())
    }

    /// Checks the spec itself and that `pos` has `n` piles.
    pub fn validate(&self, pos: &Position) -> Result<()> {
        self.check()?;
        if pos.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: pos.len(),
            });
        }
        Ok(())
    }
}

/// Free function form of [`GameSpec::validate`].
pub fn validate(spec: &GameSpec, pos: &Position) -> Result<()> {
    spec.validate(pos)
}

/// A move: new values for the piles it touches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Move {
    changes: BTreeMap<usize, Pile>,
}

impl Move {
    pub fn new() -> Self {
        Move::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Pile)>>(pairs: I) -> Self {
        Move {
            changes: pairs.into_iter().collect(),
        }
    }

    /// The move turning `from` into `to`: every index where they differ.
    pub fn between(from: &Position, to: &Position) -> Self {
        Move::from_pairs(
            from.iter()
                .zip(to.iter())
                .enumerate()
                .filter(|(_, (a, b))| a != b)
                .map(|(i, (_, &b))| (i, b)),
        )
    }

    pub fn set(&mut self, index: usize, value: Pile) {
        self.changes.insert(index, value);
    }

    pub fn changes(&self) -> &BTreeMap<usize, Pile> {
        &self.changes
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }

    /// Parses the 1-based `i=v` text form, e.g. `3=1 4=0`.
    pub fn parse_one_based(s: &str) -> Result<Self> {
        let mut mv = Move::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (i, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected i=v, got {tok:?}")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad pile index {i:?}")))?;
            let v: Pile = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad pile value {v:?}")))?;
            if i == 0 {
                return Err(Error::Parse("pile indices start at 1".into()));
            }
            if mv.changes.insert(i - 1, v).is_some() {
                return Err(Error::Parse(format!("pile {i} given twice")));
            }
        }
        if mv.is_empty() {
            return Err(Error::Parse("empty move".into()));
        }
        Ok(mv)
    }
}

impl fmt::Display for Move {
    /// 1-based `i=v` pairs separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .changes
            .iter()
            .map(|(i, v)| format!("{}={}", i + 1, v))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// A position sorted nondecreasingly, with `perm[i]` the original index of
/// sorted entry `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedView {
    pub sorted: Position,
    pub perm: Vec<usize>,
}

impl SortedView {
    /// Maps a position in sorted coordinates back to the original order.
    pub fn unsort(&self, sorted_like: &Position) -> Position {
        let mut out = vec![0; sorted_like.len()];
        for (si, &oi) in self.perm.iter().enumerate() {
            out[oi] = sorted_like[si];
        }
        Position(out)
    }

    /// Maps a move expressed on sorted indices back to original indices.
    pub fn unsort_move(&self, mv: &Move) -> Move {
        Move::from_pairs(mv.changes.iter().map(|(&i, &v)| (self.perm[i], v)))
    }
}

/// Stable sort with index tracking; equal piles keep their original order.
pub fn normalize(pos: &Position) -> SortedView {
    let mut perm: Vec<usize> = (0..pos.len()).collect();
    perm.sort_by_key(|&i| pos[i]);
    let sorted = Position(perm.iter().map(|&i| pos[i]).collect());
    SortedView { sorted, perm }
}

/// Whether `mv` is legal from `from` under `spec`.
pub fn is_legal_move(spec: &GameSpec, from: &Position, mv: &Move) -> bool {
    if spec.validate(from).is_err() {
        return false;
    }
    let touched = mv.len();
    let arity_ok = match spec.ruleset {
        Ruleset::ExactK => touched == spec.k,
        Ruleset::MooreAtMostK => (1..=spec.k).contains(&touched),
    };
    arity_ok
        && mv
            .changes
            .iter()
            .all(|(&i, &v)| i < from.len() && v < from[i])
}

/// Applies `mv` without checking arity; every new value must be a strict
/// reduction of an existing pile.
pub fn apply_move(from: &Position, mv: &Move) -> Result<Position> {
    let mut out = from.clone();
    for (&i, &v) in &mv.changes {
        if i >= from.len() {
            return Err(Error::IllegalMove(format!(
                "pile {} does not exist (n = {})",
                i + 1,
                from.len()
            )));
        }
        if v >= from[i] {
            return Err(Error::IllegalMove(format!(
                "pile {} would go from {} to {}",
                i + 1,
                from[i],
                v
            )));
        }
        out.0[i] = v;
    }
    if mv.is_empty() {
        return Err(Error::IllegalMove("move touches no pile".into()));
    }
    Ok(out)
}

/// Applies `mv` after checking it against the ruleset.
pub fn apply_legal_move(spec: &GameSpec, from: &Position, mv: &Move) -> Result<Position> {
    spec.validate(from)?;
    if !is_legal_move(spec, from, mv) {
        return Err(Error::IllegalMove(format!(
            "{mv} is not a legal {} move from {from} with k = {}",
            spec.ruleset, spec.k
        )));
    }
    apply_move(from, mv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u64]) -> Position {
        Position::from(v)
    }

    #[test]
    fn validate_examples() {
        let spec = GameSpec { n: 4, k: 2, ruleset: Ruleset::ExactK };
        assert!(spec.validate(&p(&[1, 2, 3, 4])).is_ok());

        let bad = GameSpec { n: 4, k: 5, ruleset: Ruleset::ExactK };
        assert!(matches!(bad.validate(&p(&[1, 2, 3, 4])), Err(Error::InvalidSpec(_))));

        let spec = GameSpec::exact(3, 2).unwrap();
        assert_eq!(
            spec.validate(&p(&[1, 2])),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        );
        assert!(GameSpec::exact(3, 0).is_err());
    }

    #[test]
    fn normalize_examples() {
        let v = normalize(&p(&[3, 1, 2]));
        assert_eq!(v.sorted, p(&[1, 2, 3]));
        // 1-based [2,3,1]
        assert_eq!(v.perm, vec![1, 2, 0]);

        let v = normalize(&p(&[0, 0, 0]));
        assert_eq!(v.perm, vec![0, 1, 2]);

        let x = p(&[1, 2, 2, 3, 4, 4, 7]);
        let v = normalize(&x);
        assert_eq!(v.sorted, x);
        assert_eq!(v.perm, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn normalize_is_stable() {
        let v = normalize(&p(&[5, 1, 5, 1]));
        assert_eq!(v.perm, vec![1, 3, 0, 2]);
    }

    #[test]
    fn legality_examples() {
        let spec = GameSpec::exact(4, 2).unwrap();
        let from = p(&[1, 1, 2, 2]);
        assert!(is_legal_move(&spec, &from, &Move::from_pairs([(2, 1), (3, 0)])));
        assert!(!is_legal_move(&spec, &from, &Move::from_pairs([(2, 1)])));
        assert!(!is_legal_move(&spec, &from, &Move::from_pairs([(2, 2), (3, 0)])));
        assert!(!is_legal_move(&spec, &from, &Move::from_pairs([(2, 1), (7, 0)])));

        let moore = GameSpec::moore(3, 2).unwrap();
        let mv = Move::from_pairs([(1, 2), (2, 2)]);
        assert!(is_legal_move(&moore, &p(&[2, 3, 6]), &mv));
        assert!(is_legal_move(&moore, &p(&[2, 3, 6]), &Move::from_pairs([(0, 0)])));
        assert!(!is_legal_move(&moore, &p(&[2, 3, 6]), &Move::new()));
    }

    #[test]
    fn apply_examples() {
        let mv = Move::from_pairs([(2, 0), (3, 0)]);
        assert_eq!(apply_move(&p(&[1, 1, 2, 2]), &mv).unwrap(), p(&[1, 1, 0, 0]));
        assert_eq!(apply_move(&p(&[0, 0, 1, 1]), &mv).unwrap(), p(&[0, 0, 0, 0]));
        let mv = Move::from_pairs([(1, 2), (2, 2)]);
        assert_eq!(apply_move(&p(&[2, 3, 6]), &mv).unwrap(), p(&[2, 2, 2]));
        assert!(matches!(
            apply_move(&p(&[2, 2, 6]), &mv),
            Err(Error::IllegalMove(_))
        ));
    }

    #[test]
    fn terminal_exact_positions_have_no_legal_move() {
        let spec = GameSpec::exact(4, 3).unwrap();
        let from = p(&[0, 0, 5, 5]);
        // any 3-subset contains an empty pile
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    let mv = Move::from_pairs([(a, 0), (b, 0), (c, 0)]);
                    assert!(!is_legal_move(&spec, &from, &mv));
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let x: Position = "1,2, 2,3".parse().unwrap();
        assert_eq!(x, p(&[1, 2, 2, 3]));
        assert_eq!(x.to_csv(), "1,2,2,3");
        assert!("1,,2".parse::<Position>().is_err());
        assert!("".parse::<Position>().is_err());
        assert!("1,-2".parse::<Position>().is_err());

        let mv = Move::parse_one_based("3=1 4=0").unwrap();
        assert_eq!(mv, Move::from_pairs([(2, 1), (3, 0)]));
        assert_eq!(mv.to_string(), "3=1 4=0");
        assert!(Move::parse_one_based("0=1").is_err());
        assert!(Move::parse_one_based("1=1 1=0").is_err());
    }

    #[test]
    fn move_between() {
        let mv = Move::between(&p(&[2, 3, 6]), &p(&[2, 2, 2]));
        assert_eq!(mv, Move::from_pairs([(1, 2), (2, 2)]));
    }
}
