//! Exhaustive minimal-description search, used as ground truth for the
//! analyzer on short sequences.
//!
//! Iterative deepening over program length; each pass is a depth-first
//! enumeration of the whole op alphabet, bounded by the best cost found so far
//! (initially the naive program's). Ops whose output leaves the target prefix
//! are cut immediately.

use std::collections::BTreeSet;

use crate::cost::{Bits, CostModel};
use crate::error::{Error, Result};
use crate::machine::{evaluate, Lexicon, Machine};
use crate::program::{DescriptionProgram, OpKind, Targets};

/// Sequences longer than this are refused by the CLI.
pub const ORACLE_SOFT_LIMIT: usize = 8;

const TIE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperatorKind {
    SegmentStart,
    Instantiate,
    Copy,
    Increment,
    SplitDigits,
    Mirror,
}

impl OperatorKind {
    fn of(kind: &OpKind) -> OperatorKind {
        match kind {
            OpKind::SegmentStart => OperatorKind::SegmentStart,
            OpKind::Instantiate(_) => OperatorKind::Instantiate,
            OpKind::Copy => OperatorKind::Copy,
            OpKind::Increment(_) => OperatorKind::Increment,
            OpKind::SplitDigits(_) => OperatorKind::SplitDigits,
            OpKind::Mirror => OperatorKind::Mirror,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBudget {
    pub max_program_length: usize,
    pub max_cost: f64,
    pub operators: BTreeSet<OperatorKind>,
}

impl SearchBudget {
    /// Every operator except mirror, long enough for any split program over
    /// `len` tokens.
    pub fn default_for(len: usize) -> Self {
        SearchBudget {
            max_program_length: (4 * len).saturating_sub(1).max(1),
            max_cost: f64::INFINITY,
            operators: BTreeSet::from([
                OperatorKind::SegmentStart,
                OperatorKind::Instantiate,
                OperatorKind::Copy,
                OperatorKind::Increment,
                OperatorKind::SplitDigits,
            ]),
        }
    }

    pub fn with(mut self, op: OperatorKind) -> Self {
        self.operators.insert(op);
        self
    }

    pub fn without(mut self, op: OperatorKind) -> Self {
        self.operators.remove(&op);
        self
    }
}

fn naive_program(seq: &[u64]) -> Vec<OpKind> {
    let mut ops = Vec::with_capacity(2 * seq.len());
    for (i, &t) in seq.iter().enumerate() {
        if i > 0 {
            ops.push(OpKind::SegmentStart);
        }
        ops.push(OpKind::Instantiate(t));
    }
    ops
}

struct Search<'a> {
    seq: &'a [u64],
    alphabet: Vec<OpKind>,
    max_cost: f64,
    best_cost: f64,
    best: Vec<OpKind>,
    stack: Vec<OpKind>,
}

impl Search<'_> {
    fn offer(&mut self, cost: f64) {
        let better = cost < self.best_cost - TIE_EPS
            || (cost <= self.best_cost + TIE_EPS && self.stack < self.best);
        if better {
            self.best_cost = cost;
            self.best = self.stack.clone();
        }
    }

    fn dfs(&mut self, machine: &Machine<'_>, remaining: usize) {
        for i in 0..self.alphabet.len() {
            let kind = self.alphabet[i];
            let mut next = machine.clone();
            if next.apply(kind).is_err() {
                continue;
            }
            let c = next.cost();
            if c > self.best_cost + TIE_EPS || c > self.max_cost {
                continue;
            }
            self.stack.push(kind);
            if next.covers(self.seq.len()) {
                if next.finish().is_ok() {
                    self.offer(c);
                }
            } else if remaining > 1 {
                self.dfs(&next, remaining - 1);
            }
            self.stack.pop();
        }
    }
}

/// Minimum cost over all programs within `budget` that regenerate `seq`,
/// with the lexicographically smallest minimal op stream as witness.
pub fn oracle_min_cost(seq: &[u64], model: &CostModel, budget: &SearchBudget) -> Result<(Bits, DescriptionProgram)> {
    oracle_with_lexicon(seq, model, budget, Lexicon::Numbers)
}

pub fn oracle_with_lexicon(
    seq: &[u64],
    model: &CostModel,
    budget: &SearchBudget,
    lexicon: Lexicon,
) -> Result<(Bits, DescriptionProgram)> {
    if seq.is_empty() {
        return Err(Error::Domain("cannot search for an empty sequence".into()));
    }
    model.validate()?;

    let naive = naive_program(seq);
    let needs_segments = seq.len() > 1;
    if !budget.operators.contains(&OperatorKind::Instantiate)
        || (needs_segments && !budget.operators.contains(&OperatorKind::SegmentStart))
    {
        return Err(Error::Budget("operator subset cannot express the naive program".into()));
    }
    if budget.max_program_length < naive.len() {
        return Err(Error::Budget(format!(
            "max_program_length {} is below the naive program's {} ops",
            budget.max_program_length,
            naive.len()
        )));
    }
    let naive_cost = evaluate(&naive, model, lexicon)?.total_cost;
    if naive_cost > budget.max_cost {
        return Err(Error::Budget(format!("max_cost {} is below the naive cost {naive_cost}", budget.max_cost)));
    }

    let vmax = seq.iter().copied().max().unwrap_or(0).max(9);
    let mut alphabet: Vec<OpKind> = Vec::new();
    alphabet.push(OpKind::SegmentStart);
    alphabet.extend((0..=vmax).map(OpKind::Instantiate));
    alphabet.push(OpKind::Copy);
    alphabet.extend(model.allowed_increments.iter().map(|&k| OpKind::Increment(k)));
    alphabet.push(OpKind::SplitDigits(seq.len()));
    alphabet.push(OpKind::Mirror);
    alphabet.retain(|k| budget.operators.contains(&OperatorKind::of(k)));

    let targets = Targets::new(seq);
    let root = Machine::new(model, lexicon, Some(&targets));
    let mut search = Search {
        seq,
        alphabet,
        max_cost: budget.max_cost,
        best_cost: naive_cost,
        best: naive,
        stack: Vec::new(),
    };
    for depth in 1..=budget.max_program_length {
        search.dfs(&root, depth);
    }

    let program = evaluate(&search.best, model, lexicon)?;
    Ok((Bits::new(program.total_cost)?, program))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::replay;

    fn min_cost(seq: &[u64]) -> f64 {
        oracle_min_cost(seq, &CostModel::default(), &SearchBudget::default_for(seq.len())).unwrap().0.value()
    }

    #[test]
    fn repeated_digit() {
        assert_eq!(min_cost(&[3, 3, 3, 3, 3]), 4f64.log2() + 1.0);
        assert_eq!(min_cost(&[7, 7, 7, 7, 7]), 4.0);
    }

    #[test]
    fn single_token() {
        let (c, p) = oracle_min_cost(&[5], &CostModel::default(), &SearchBudget::default_for(1)).unwrap();
        assert_eq!(c.value(), 6f64.log2());
        assert_eq!(p.kinds(), vec![OpKind::Instantiate(5)]);
    }

    #[test]
    fn witness_replays() {
        for seq in [vec![1, 2, 3, 4, 5, 6], vec![12, 32, 42, 22], vec![9, 40, 9, 40]] {
            let (_, p) = oracle_min_cost(&seq, &CostModel::default(), &SearchBudget::default_for(seq.len())).unwrap();
            assert_eq!(replay(&p).unwrap(), seq);
        }
    }

    #[test]
    fn mirror_beats_no_mirror() {
        let seq = [2, 14, 29, 35, 35, 29, 14, 2];
        let m = CostModel::default();
        let budget = SearchBudget::default_for(seq.len());
        let without = oracle_min_cost(&seq, &m, &budget).unwrap().0.value();
        let with = oracle_min_cost(&seq, &m, &budget.clone().with(OperatorKind::Mirror)).unwrap().0.value();
        assert!(with < without);

        // in whole numbers alone: the prefix, then one reflection
        let whole_only = SearchBudget::default_for(4).without(OperatorKind::SplitDigits);
        let prefix = oracle_min_cost(&seq[..4], &m, &whole_only).unwrap().0.value();
        let whole_mirror = budget.with(OperatorKind::Mirror).without(OperatorKind::SplitDigits);
        let (c, p) = oracle_min_cost(&seq, &m, &whole_mirror).unwrap();
        assert!((c.value() - (prefix + m.mirror_cost)).abs() < 1e-9);
        assert_eq!(*p.kinds().last().unwrap(), OpKind::Mirror);
        assert!(with <= c.value());
    }

    #[test]
    fn budget_errors() {
        let m = CostModel::default();
        let short = SearchBudget { max_program_length: 2, ..SearchBudget::default_for(3) };
        assert!(matches!(oracle_min_cost(&[1, 5, 9], &m, &short), Err(Error::Budget(_))));
        let cheap = SearchBudget { max_cost: 0.5, ..SearchBudget::default_for(2) };
        assert!(matches!(oracle_min_cost(&[8, 30], &m, &cheap), Err(Error::Budget(_))));
        let no_seg = SearchBudget::default_for(2).without(OperatorKind::SegmentStart);
        assert!(matches!(oracle_min_cost(&[8, 30], &m, &no_seg), Err(Error::Budget(_))));
        assert!(matches!(oracle_min_cost(&[], &m, &SearchBudget::default_for(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn fewer_operators_never_help() {
        let m = CostModel::default();
        for seq in [vec![4, 5, 6, 6], vec![10, 30, 50], vec![1, 3, 5, 7]] {
            let full = oracle_min_cost(&seq, &m, &SearchBudget::default_for(seq.len())).unwrap().0.value();
            for drop in [OperatorKind::Copy, OperatorKind::Increment, OperatorKind::SplitDigits] {
                let reduced = SearchBudget::default_for(seq.len()).without(drop);
                let c = oracle_min_cost(&seq, &m, &reduced).unwrap().0.value();
                assert!(full <= c + 1e-12, "{seq:?} without {drop:?}");
            }
        }
    }
}
