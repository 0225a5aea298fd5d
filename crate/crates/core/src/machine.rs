//! Costed evaluation of sequential op streams.
//!
//! The analyzer and the oracle both run candidate programs through
//! [`Machine`], so their costs agree bit for bit on identical programs.

use crate::cost::{digit_complexity, numeral_cost, CostModel};
use crate::error::{Error, Result};
use crate::program::{DescriptionProgram, OpKind, Operation, ProgramForm, Role, Tape, Targets};
use crate::stm::{OpTag, StmItem, StmState};

/// How fresh whole-stream values are priced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Lexicon {
    /// Any nonnegative integer, at the summed intrinsic cost of its digits.
    #[default]
    Numbers,
    /// Digits only, each picked among ten equally likely values.
    UniformDigits,
}

#[derive(Debug, Clone)]
pub(crate) struct Machine<'a> {
    model: &'a CostModel,
    lexicon: Lexicon,
    target: Option<&'a Targets>,
    tape: Tape,
    stm: StmState,
    cost: f64,
}

impl<'a> Machine<'a> {
    pub fn new(model: &'a CostModel, lexicon: Lexicon, target: Option<&'a Targets>) -> Self {
        Machine { model, lexicon, target, tape: Tape::new(), stm: StmState::new(model.stm_capacity), cost: 0.0 }
    }

    pub fn cost(&self) -> f64 {
        self.cost
    }

    pub fn role(&self) -> Role {
        self.tape.role()
    }

    pub fn stream(&self) -> &[u64] {
        self.tape.stream()
    }

    pub fn stm(&self) -> &StmState {
        &self.stm
    }

    /// True once the emitted tokens cover `len` tokens.
    pub fn covers(&self, len: usize) -> bool {
        if self.tape.in_split() {
            self.tape.is_done()
        } else {
            self.tape.stream().len() == len
        }
    }

    fn charge(&self, kind: OpKind) -> std::result::Result<(f64, bool), String> {
        let m = self.model;
        let op_charge = |tag: OpTag, cost: f64| {
            if self.stm.contains(&StmItem::Op(tag)) {
                (0.0, true)
            } else {
                (cost, false)
            }
        };
        Ok(match kind {
            OpKind::SplitDigits(_) => {
                if self.lexicon != Lexicon::Numbers {
                    return Err("digit split is only defined over whole numbers".into());
                }
                (m.dup_cost, false)
            }
            OpKind::SegmentStart => (m.segment_start_cost, false),
            OpKind::Instantiate(v) => {
                if self.stm.contains(&StmItem::Number(v)) {
                    (0.0, true)
                } else {
                    match (self.tape.role(), self.lexicon) {
                        (Role::Whole, Lexicon::Numbers) => (numeral_cost(v), false),
                        (Role::Whole, Lexicon::UniformDigits) => {
                            if v > 9 {
                                return Err(format!("{v} is not a digit"));
                            }
                            (10f64.log2(), false)
                        }
                        (Role::Tens | Role::Units, _) => {
                            if v > 9 {
                                return Err(format!("{v} is not a digit"));
                            }
                            let prev = self.tape.last().map(|d| d as u8);
                            let c = digit_complexity(v as u8, prev, m).map_err(|e| e.to_string())?;
                            (c.value(), false)
                        }
                    }
                }
            }
            OpKind::Copy => op_charge(OpTag::Copy, m.copy_cost),
            OpKind::Increment(k) => {
                if !m.allowed_increments.contains(&k) {
                    return Err(format!("increment +{k} is not an allowed operator"));
                }
                op_charge(OpTag::Increment(k), m.increment_cost(k))
            }
            OpKind::Mirror => op_charge(OpTag::Mirror, m.mirror_cost),
        })
    }

    /// Apply one op. After an error the machine must be discarded.
    pub fn apply(&mut self, kind: OpKind) -> std::result::Result<Operation, String> {
        if self.lexicon == Lexicon::UniformDigits && matches!(kind, OpKind::Increment(k) if self.tape.last().is_some_and(|l| l + k > 9)) {
            return Err("digit increment leaves 0..=9".into());
        }
        let (charged_cost, free) = self.charge(kind)?;
        let role = self.tape.role();
        let step = self.tape.apply_checked(kind, self.target)?;
        match kind {
            OpKind::Instantiate(v) => self.stm.touch(StmItem::Number(v)),
            OpKind::Copy => self.touch_op(OpTag::Copy),
            OpKind::Increment(k) => self.touch_op(OpTag::Increment(k)),
            OpKind::Mirror => self.touch_op(OpTag::Mirror),
            OpKind::SegmentStart | OpKind::SplitDigits(_) => {}
        }
        if step.stream_reset {
            self.stm.clear();
        }
        self.cost += charged_cost;
        Ok(Operation { kind, role, charged_cost, free })
    }

    fn touch_op(&mut self, tag: OpTag) {
        self.stm.touch(StmItem::Op(tag));
        // the op's output is now the most recent number
        let last = match self.tape.stream().last() {
            Some(&l) => l,
            None => return,
        };
        self.stm.touch(StmItem::Number(last));
    }

    /// Regenerated tokens, enforcing the rule that a digit split only
    /// describes blocks with no whole-number increment between neighbours.
    pub fn finish(&self) -> std::result::Result<Vec<u64>, String> {
        let tokens = self.tape.finish()?;
        if self.tape.in_split() && has_whole_increment(&tokens, self.model) {
            return Err("digit split over a block that already has a whole-number increment".into());
        }
        Ok(tokens)
    }
}

/// Whether some neighbouring pair differs by an allowed increment.
pub(crate) fn has_whole_increment(seq: &[u64], model: &CostModel) -> bool {
    seq.windows(2)
        .any(|w| w[1] > w[0] && model.allowed_increments.contains(&(w[1] - w[0])))
}

/// Cost an explicit op stream under `model`.
pub fn evaluate(kinds: &[OpKind], model: &CostModel, lexicon: Lexicon) -> Result<DescriptionProgram> {
    if kinds.is_empty() {
        return Err(Error::InvalidProgram("empty op list".into()));
    }
    let mut machine = Machine::new(model, lexicon, None);
    let mut ops = Vec::with_capacity(kinds.len());
    for (index, &kind) in kinds.iter().enumerate() {
        ops.push(machine.apply(kind).map_err(|reason| Error::InvalidOp { index, reason })?);
    }
    let reconstructs = machine.finish().map_err(Error::InvalidProgram)?;
    Ok(DescriptionProgram { form: ProgramForm::Sequential, ops, total_cost: machine.cost(), reconstructs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cost_of(kinds: &[OpKind]) -> f64 {
        evaluate(kinds, &CostModel::default(), Lexicon::Numbers).unwrap().total_cost
    }

    #[test]
    fn copies_after_the_first_are_free() {
        use OpKind::*;
        let p = evaluate(&[Instantiate(7), Copy, Copy, Copy, Copy], &CostModel::default(), Lexicon::Numbers).unwrap();
        assert_eq!(p.total_cost, 4.0);
        assert!(!p.ops[1].free);
        assert!(p.ops[2..].iter().all(|o| o.free && o.charged_cost == 0.0));
        assert_eq!(p.reconstructs, vec![7; 5]);
    }

    #[test]
    fn instantiation_prices_digits() {
        use OpKind::*;
        assert!((cost_of(&[Instantiate(44)]) - 2.0 * 5f64.log2()).abs() < 1e-12);
        assert_eq!(cost_of(&[Instantiate(10)]), 1.0);
    }

    #[test]
    fn recall_from_memory_is_free_but_segment_is_not() {
        use OpKind::*;
        let p = evaluate(&[Instantiate(5), SegmentStart, Instantiate(8), SegmentStart, Instantiate(5)], &CostModel::default(), Lexicon::Numbers)
            .unwrap();
        assert!(p.ops[4].free);
        assert_eq!(p.ops[3].charged_cost, 3.0);
    }

    #[test]
    fn disallowed_increment_is_rejected() {
        use OpKind::*;
        let err = evaluate(&[Instantiate(1), Increment(3)], &CostModel::default(), Lexicon::Numbers).unwrap_err();
        assert!(matches!(err, Error::InvalidOp { index: 1, .. }));
    }

    #[test]
    fn zero_after_nine_in_digit_stream() {
        use OpKind::*;
        // 19 30: tens 1 -> +2 = 3, units 9 then a fresh 0
        let p = evaluate(
            &[SplitDigits(2), Instantiate(1), Increment(2), Instantiate(9), SegmentStart, Instantiate(0)],
            &CostModel::default(),
            Lexicon::Numbers,
        )
        .unwrap();
        assert_eq!(p.reconstructs, vec![19, 30]);
        assert_eq!(p.ops[5].charged_cost, 3.5);
    }

    #[test]
    fn split_gate_rejects_blocks_with_increments() {
        use OpKind::*;
        let err = evaluate(
            &[SplitDigits(2), Instantiate(1), Copy, Instantiate(0), Increment(1)],
            &CostModel::default(),
            Lexicon::Numbers,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidProgram(_)));
    }

    #[test]
    fn digit_streams_have_separate_memories() {
        use OpKind::*;
        let p = evaluate(
            &[SplitDigits(2), Instantiate(1), Copy, Instantiate(5), Copy],
            &CostModel::default(),
            Lexicon::Numbers,
        )
        .unwrap();
        assert_eq!(p.reconstructs, vec![15, 15]);
        assert!(!p.ops[4].free);
    }

    #[test]
    fn uniform_digits_cost_log_ten() {
        use OpKind::*;
        let p = evaluate(&[Instantiate(3), Copy, Copy, Copy, Copy], &CostModel::default(), Lexicon::UniformDigits).unwrap();
        assert_eq!(p.total_cost, 10f64.log2() + 1.0);
        assert!(evaluate(&[Instantiate(12)], &CostModel::default(), Lexicon::UniformDigits).is_err());
        assert!(evaluate(&[SplitDigits(1), Instantiate(1), Instantiate(2)], &CostModel::default(), Lexicon::UniformDigits).is_err());
    }
}
