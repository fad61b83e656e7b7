//! Degree sequences of k-uniform multi-hypergraphs.
//!
//! `x` is realizable iff `k T(x) = Σ x_i`: a maximal run of slow moves
//! removes one token from `k` distinct piles per step, and each step is a
//! hyperedge.

use std::collections::BinaryHeap;
use std::fmt;

use crate::error::{Error, Result};
use crate::position::{Pile, Position};
use crate::tetris::tetris_value;

/// Cap on the number of edges [`realize`] will materialize.
pub const DEFAULT_EDGE_BUDGET: u128 = 10_000_000;

/// A multiset of `k`-subsets of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    pub n: usize,
    /// Each edge is sorted ascending.
    pub edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn degrees(&self) -> Vec<Pile> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                d[v] += 1;
            }
        }
        d
    }

    /// Every edge has `k` distinct in-range vertices.
    pub fn is_uniform(&self, k: usize) -> bool {
        self.edges.iter().all(|e| {
            e.len() == k && e.iter().all(|&v| v < self.n) && e.windows(2).all(|w| w[0] < w[1])
        })
    }
}

impl fmt::Display for Hypergraph {
    /// One edge per line, 1-based vertices separated by spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Whether some k-uniform multi-hypergraph has degree sequence `x`.
pub fn is_realizable(x: &Position, k: usize) -> bool {
    if k == 0 || k > x.len() {
        return x.iter().all(|&d| d == 0);
    }
    let total = x.total();
    if !total.is_multiple_of(k as u128) {
        return false;
    }
    match tetris_value(k, x) {
        Ok(t) => t as u128 * k as u128 == total,
        Err(_) => false,
    }
}

pub fn realize(x: &Position, k: usize) -> Result<Hypergraph> {
    realize_with_budget(x, k, DEFAULT_EDGE_BUDGET)
}

/// Builds a realization by repeatedly taking the `k` largest residual
/// degrees as an edge (ties go to the larger vertex index).
pub fn realize_with_budget(x: &Position, k: usize, budget: u128) -> Result<Hypergraph> {
    if !is_realizable(x, k) {
        return Err(Error::NotRealizable);
    }
    let n = x.len();
    let total = x.total();
    if total == 0 {
        return Ok(Hypergraph { n, edges: Vec::new() });
    }
    let m = total / k as u128;
    if m > budget {
        return Err(Error::BudgetExceeded(format!(
            "{m} edges exceed the budget of {budget}"
        )));
    }
    let mut heap: BinaryHeap<(Pile, usize)> =
        x.iter().enumerate().filter(|(_, &d)| d > 0).map(|(i, &d)| (d, i)).collect();
    let mut edges = Vec::with_capacity(m as usize);
    let mut taken = Vec::with_capacity(k);
    for _ in 0..m {
        taken.clear();
        for _ in 0..k {
            let top = heap.pop().ok_or(Error::NotRealizable)?;
            taken.push(top);
        }
        let mut edge: Vec<usize> = taken.iter().map(|&(_, i)| i).collect();
        edge.sort_unstable();
        edges.push(edge);
        for &(d, i) in &taken {
            if d > 1 {
                heap.push((d - 1, i));
            }
        }
    }
    Ok(Hypergraph { n, edges })
}

/// The largest realizable `x'' <= x`: it has `k T(x)` tokens, each pile
/// capped at `T(x)`, with any excess shaved off the largest piles.
/// Realizable inputs come back unchanged.
pub fn minimal_correction(x: &Position, k: usize) -> Position {
    if is_realizable(x, k) {
        return x.clone();
    }
    if k == 0 || k > x.len() {
        return Position::zeros(x.len());
    }
    let t = match tetris_value(k, x) {
        Ok(t) => t,
        Err(_) => return Position::zeros(x.len()),
    };
    let want = t as u128 * k as u128;
    let capped: Vec<Pile> = x.iter().map(|&p| p.min(t)).collect();
    // lower a ceiling from the top until exactly `want` tokens remain
    let at_level = |level: Pile| -> u128 { capped.iter().map(|&p| p.min(level) as u128).sum() };
    let (mut lo, mut hi) = (0, t);
    // smallest level with at_level(level) >= want
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if at_level(mid) >= want {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let level = lo;
    let mut out: Vec<Pile> = capped.iter().map(|&p| p.min(level.saturating_sub(1))).collect();
    let mut missing = want - out.iter().map(|&p| p as u128).sum::<u128>();
    for i in (0..out.len()).rev() {
        if missing == 0 {
            break;
        }
        if capped[i] >= level && level > 0 {
            out[i] = level;
            missing -= 1;
        }
    }
    Position::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u64]) -> Position {
        Position::from(v)
    }

    #[test]
    fn realizable_examples() {
        assert!(is_realizable(&p(&[1, 1, 1, 1]), 2));
        assert!(!is_realizable(&p(&[3, 1, 0, 0]), 2));
        assert!(is_realizable(&p(&[0, 0, 0]), 2));
        assert!(!is_realizable(&p(&[1, 0]), 3));
        assert!(is_realizable(&p(&[0, 0]), 3));
    }

    #[test]
    fn realize_examples() {
        let h = realize(&p(&[1, 1, 1, 1]), 2).unwrap();
        assert_eq!(h.edges, vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(h.to_string(), "3 4\n1 2\n");

        let h = realize(&p(&[2, 2, 2]), 3).unwrap();
        assert_eq!(h.edges, vec![vec![0, 1, 2], vec![0, 1, 2]]);

        let h = realize(&p(&[0, 0, 0, 0]), 2).unwrap();
        assert!(h.edges.is_empty());

        assert_eq!(realize(&p(&[3, 1, 0, 0]), 2), Err(Error::NotRealizable));
        assert!(matches!(
            realize_with_budget(&p(&[4, 4]), 2, 3),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn correction_examples() {
        assert_eq!(minimal_correction(&p(&[1, 1, 1, 1]), 2), p(&[1, 1, 1, 1]));
        assert_eq!(minimal_correction(&p(&[3, 1, 0, 0]), 2), p(&[1, 1, 0, 0]));
        assert_eq!(minimal_correction(&p(&[1, 0, 0]), 2), p(&[0, 0, 0]));
    }

    #[test]
    fn corrections_are_realizable_and_maximal() {
        for n in 1..=5usize {
            for k in 1..=n {
                for x in crate::util::all_tuples(n, 4) {
                    let x = Position::new(x);
                    let c = minimal_correction(&x, k);
                    assert!(c.dominated_by(&x), "{x} k={k} -> {c}");
                    assert!(is_realizable(&c, k), "{x} k={k} -> {c}");
                    let t = tetris_value(k, &x).unwrap() as u128;
                    assert_eq!(c.total(), t * k as u128, "{x} k={k} -> {c}");
                }
            }
        }
    }
}
