//! Brute-force Sprague-Grundy values by memoized mex over the game DAG.
//!
//! Both rulesets are symmetric under permuting piles, so positions are
//! stored and compared in sorted (canonical) form. This is a desk-scale tool:
//! every computation runs under a budget on the number of stored positions.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use crate::error::{Error, Result};
use crate::position::{GameSpec, Pile, Position, Ruleset};
use crate::util::all_multisets;

/// Default cap on memoized positions.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// Smallest nonnegative integer not in `values`.
pub fn mex<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    let mut seen: Vec<u64> = values.into_iter().collect();
    seen.sort_unstable();
    seen.dedup();
    seen.iter()
        .enumerate()
        .find(|&(i, &v)| v != i as u64)
        .map_or(seen.len() as u64, |(i, _)| i as u64)
}

/// All distinct successors of `pos`, canonicalized and sorted.
pub fn successors(spec: &GameSpec, pos: &Position) -> Vec<Position> {
    let mut out: HashSet<Vec<Pile>> = HashSet::new();
    let nonzero: Vec<usize> = (0..pos.len()).filter(|&i| pos[i] > 0).collect();
    let sizes = match spec.ruleset {
        Ruleset::ExactK => spec.k..=spec.k,
        Ruleset::MooreAtMostK => 1..=spec.k,
    };
    let mut work = pos.to_vec();
    for size in sizes {
        for_each_subset(&nonzero, size, &mut |chosen| {
            reduce_all(pos, chosen, 0, &mut work, &mut out);
        });
    }
    let mut v: Vec<Position> = out.into_iter().map(Position::new).collect();
    v.sort_unstable();
    v
}

fn for_each_subset(items: &[usize], size: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], size: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == size {
            f(acc);
            return;
        }
        let need = size - acc.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            acc.push(items[i]);
            go(items, size, i + 1, acc, f);
            acc.pop();
        }
    }
    if size <= items.len() {
        go(items, size, 0, &mut Vec::with_capacity(size), f);
    }
}

fn reduce_all(
    pos: &Position,
    chosen: &[usize],
    depth: usize,
    work: &mut Vec<Pile>,
    out: &mut HashSet<Vec<Pile>>,
) {
    if depth == chosen.len() {
        let mut key = work.clone();
        key.sort_unstable();
        out.insert(key);
        return;
    }
    let i = chosen[depth];
    for v in 0..pos[i] {
        work[i] = v;
        reduce_all(pos, chosen, depth + 1, work, out);
    }
    work[i] = pos[i];
}

/// Memoized SG evaluator for one game.
#[derive(Debug, Clone)]
pub struct Oracle {
    spec: GameSpec,
    budget: usize,
    memo: HashMap<Position, u64>,
}

impl Oracle {
    pub fn new(spec: GameSpec) -> Self {
        Self::with_budget(spec, DEFAULT_BUDGET)
    }

    pub fn with_budget(spec: GameSpec, budget: usize) -> Self {
        Oracle {
            spec,
            budget,
            memo: HashMap::new(),
        }
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// SG value of `pos`, computing and caching everything below it.
    pub fn sg(&mut self, pos: &Position) -> Result<u64> {
        self.spec.validate(pos)?;
        let root = pos.canonical();
        if let Some(&g) = self.memo.get(&root) {
            return Ok(g);
        }
        struct Frame {
            pos: Position,
            succ: Vec<Position>,
            next: usize,
        }
        let frame = |p: Position, spec: &GameSpec| Frame {
            succ: successors(spec, &p),
            pos: p,
            next: 0,
        };
        let mut stack = vec![frame(root.clone(), &self.spec)];
        while let Some(top) = stack.last_mut() {
            if top.next < top.succ.len() {
                let s = &top.succ[top.next];
                top.next += 1;
                if !self.memo.contains_key(s) {
                    let s = s.clone();
                    if self.memo.len() + stack.len() >= self.budget {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {} positions below {pos}",
                            self.budget
                        )));
                    }
                    stack.push(frame(s, &self.spec));
                }
            } else {
                let done = stack.pop().expect("nonempty stack");
                let g = mex(done.succ.iter().map(|s| self.memo[s]));
                self.memo.insert(done.pos, g);
            }
        }
        Ok(self.memo[&root])
    }

    /// SG value recomputed from successors' cached values, bypassing the
    /// entry for `pos` itself.
    pub fn recheck(&mut self, pos: &Position) -> Result<u64> {
        let succ = successors(&self.spec, &pos.canonical());
        let mut vals = Vec::with_capacity(succ.len());
        for s in &succ {
            vals.push(self.sg(s)?);
        }
        Ok(mex(vals))
    }
}

/// Length of the longest play from `pos`, by exhaustive search over all
/// successors. For Exact k-Nim this is the Tetris value.
pub fn longest_play(spec: &GameSpec, pos: &Position) -> Result<u64> {
    longest_play_with(spec, pos, &mut HashMap::new())
}

/// [`longest_play`] sharing a cache of canonical positions across calls.
pub fn longest_play_with(
    spec: &GameSpec,
    pos: &Position,
    memo: &mut HashMap<Position, u64>,
) -> Result<u64> {
    spec.validate(pos)?;
    longest_from(spec, pos.canonical(), memo)
}

fn longest_from(spec: &GameSpec, pos: Position, memo: &mut HashMap<Position, u64>) -> Result<u64> {
    if let Some(&d) = memo.get(&pos) {
        return Ok(d);
    }
    if memo.len() >= DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "more than {DEFAULT_BUDGET} positions"
        )));
    }
    let mut best = 0;
    for s in successors(spec, &pos) {
        best = best.max(1 + longest_from(spec, s, memo)?);
    }
    memo.insert(pos, best);
    Ok(best)
}

/// SG value of a single position with a fresh cache.
pub fn sg_brute(spec: &GameSpec, pos: &Position) -> Result<u64> {
    Oracle::new(*spec).sg(pos)
}

/// SG values of every canonical position with all piles `<= bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgTable {
    pub spec: GameSpec,
    pub bound: Pile,
    pub values: BTreeMap<Position, u64>,
}

impl SgTable {
    /// Value at `pos` in any pile order, if it is inside the table.
    pub fn get(&self, pos: &Position) -> Option<u64> {
        self.values.get(&pos.canonical()).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Position, u64)> {
        self.values.iter().map(|(p, &g)| (p, g))
    }

    /// CSV with header `pos,sg`, piles joined by `;`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["pos", "sg"])?;
        for (p, g) in self.iter() {
            w.write_record([p.join(";"), g.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Number of nondecreasing `n`-tuples over `0..=cap`, i.e. `C(cap + n, n)`.
pub fn canonical_count(n: usize, cap: Pile) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 1..=n as u128 {
        acc = acc.checked_mul(cap as u128 + i)? / i;
    }
    Some(acc)
}

pub fn build_table(spec: &GameSpec, cap: Pile) -> Result<SgTable> {
    build_table_with_budget(spec, cap, DEFAULT_BUDGET)
}

pub fn build_table_with_budget(spec: &GameSpec, cap: Pile, budget: usize) -> Result<SgTable> {
    spec.validate(&Position::zeros(spec.n))?;
    let count = canonical_count(spec.n, cap).unwrap_or(u128::MAX);
    if count > budget as u128 {
        return Err(Error::BudgetExceeded(format!(
            "{count} canonical positions exceed the budget of {budget}"
        )));
    }
    let mut oracle = Oracle::with_budget(*spec, budget);
    let mut values = BTreeMap::new();
    for x in all_multisets(spec.n, cap) {
        let x = Position::new(x);
        let g = oracle.sg(&x)?;
        values.insert(x, g);
    }
    Ok(SgTable {
        spec: *spec,
        bound: cap,
        values,
    })
}
