//! Single left-to-right pass that finds the cheapest description of a
//! sequence in the operator language.
//!
//! At every position the pass keeps, for each distinct short-term memory
//! content, the cheapest way of having produced the prefix. Memory content is
//! the only state that influences future costs, so the result is the exact
//! minimum over all programs, while the number of live states stays tiny.

use std::collections::BTreeMap;

use crate::cost::{digit_complexity, CostModel};
use crate::error::{Error, Result};
use crate::machine::{has_whole_increment, Lexicon, Machine};
use crate::program::{DescriptionProgram, OpKind, Operation, ProgramForm, Role, Targets};
use crate::stm::StmState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub mirror: bool,
    pub split_digits: bool,
    pub lexicon: Lexicon,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { mirror: false, split_digits: true, lexicon: Lexicon::Numbers }
    }
}

/// Cheapest description of `seq` under `model`.
pub fn analyze(seq: &[u64], model: &CostModel, enable_mirror: bool) -> Result<DescriptionProgram> {
    analyze_with(seq, model, AnalyzeOptions { mirror: enable_mirror, ..AnalyzeOptions::default() })
}

pub fn analyze_with(seq: &[u64], model: &CostModel, opts: AnalyzeOptions) -> Result<DescriptionProgram> {
    if seq.is_empty() {
        return Err(Error::Domain("cannot analyze an empty sequence".into()));
    }
    model.validate()?;
    if opts.lexicon == Lexicon::UniformDigits {
        if let Some(bad) = seq.iter().find(|&&t| t > 9) {
            return Err(Error::Domain(format!("{bad} is not a digit")));
        }
    }
    let targets = Targets::new(seq);

    let whole = cheapest(Machine::new(model, opts.lexicon, Some(&targets)), Vec::new(), seq.len(), &targets, model, opts);
    let split = if split_admissible(seq, model, opts) {
        let mut m = Machine::new(model, opts.lexicon, Some(&targets));
        let open = m.apply(OpKind::SplitDigits(seq.len())).map_err(Error::InvalidProgram)?;
        cheapest(m, vec![open], seq.len(), &targets, model, opts)
    } else {
        None
    };

    let (total_cost, ops) = match (whole, split) {
        (Some(w), Some(s)) if s.0 < w.0 => s,
        (Some(w), _) => w,
        (None, Some(s)) => s,
        (None, None) => return Err(Error::InvalidProgram("no description found".into())),
    };
    Ok(DescriptionProgram { form: ProgramForm::Sequential, ops, total_cost, reconstructs: seq.to_vec() })
}

fn split_admissible(seq: &[u64], model: &CostModel, opts: AnalyzeOptions) -> bool {
    opts.split_digits
        && opts.lexicon == Lexicon::Numbers
        && seq.iter().all(|&t| t <= 99)
        && !has_whole_increment(seq, model)
}

struct Node<'a> {
    machine: Machine<'a>,
    ops: Vec<Operation>,
}

type Agenda<'a> = BTreeMap<(Role, usize), BTreeMap<StmState, Node<'a>>>;

fn cheapest<'a>(
    start: Machine<'a>,
    prefix: Vec<Operation>,
    len: usize,
    targets: &Targets,
    model: &CostModel,
    opts: AnalyzeOptions,
) -> Option<(f64, Vec<Operation>)> {
    let mut agenda: Agenda<'a> = BTreeMap::new();
    let mut best: Option<(f64, Vec<Operation>)> = None;
    insert(&mut agenda, Node { machine: start, ops: prefix });

    while let Some(((role, pos), bucket)) = agenda.pop_first() {
        let target = targets.for_role(role);
        for node in bucket.into_values() {
            for moves in candidate_moves(target, pos, model, opts) {
                let mut machine = node.machine.clone();
                let mut ops = node.ops.clone();
                let ok = moves.iter().all(|&kind| match machine.apply(kind) {
                    Ok(op) => {
                        ops.push(op);
                        true
                    }
                    Err(_) => false,
                });
                if !ok {
                    continue;
                }
                if machine.covers(len) {
                    if machine.finish().is_ok() && best.as_ref().is_none_or(|b| machine.cost() < b.0) {
                        best = Some((machine.cost(), ops));
                    }
                } else {
                    insert(&mut agenda, Node { machine, ops });
                }
            }
        }
    }
    best
}

fn insert<'a>(agenda: &mut Agenda<'a>, node: Node<'a>) {
    let key = (node.machine.role(), node.machine.stream().len());
    let bucket = agenda.entry(key).or_default();
    match bucket.get(node.machine.stm()) {
        Some(existing) if existing.machine.cost() <= node.machine.cost() => {}
        _ => {
            bucket.insert(node.machine.stm().clone(), node);
        }
    }
}

/// Moves that could explain the token at `pos`, in tie-break order: copy,
/// increments by ascending step, mirror, then a fresh instantiation.
fn candidate_moves(target: &[u64], pos: usize, model: &CostModel, opts: AnalyzeOptions) -> Vec<Vec<OpKind>> {
    let next = target[pos];
    let mut moves = Vec::new();
    if pos > 0 {
        let last = target[pos - 1];
        if next == last {
            moves.push(vec![OpKind::Copy]);
        }
        for &k in &model.allowed_increments {
            if last + k == next {
                moves.push(vec![OpKind::Increment(k)]);
            }
        }
        if opts.mirror && target.len() >= 2 * pos && target[pos..2 * pos].iter().eq(target[..pos].iter().rev()) {
            moves.push(vec![OpKind::Mirror]);
        }
        moves.push(vec![OpKind::SegmentStart, OpKind::Instantiate(next)]);
    } else {
        moves.push(vec![OpKind::Instantiate(next)]);
    }
    moves
}

/// The transfer-based story of `10 20 30 40 50 60 70`: an uninstantiated
/// number is copied along the sequence, split into two digits, the units digit
/// is fixed to 0, the tens digit's transfer is dissociated into `+1`, and the
/// tens digit is fixed to 1. Total `C_cop + 2 C_dup + C_{+1} + C_1`, i.e.
/// `3 C_cop + 2` when `C_dup = C_cop`. The bound of seven terms is not charged.
pub fn derive_10_to_70(model: &CostModel) -> DescriptionProgram {
    let op = |kind, role, charged_cost: f64| Operation { kind, role, charged_cost, free: false };
    let one = digit_complexity(1, None, model).map(|b| b.value()).unwrap_or(1.0);
    let ops = vec![
        op(OpKind::SegmentStart, Role::Whole, 0.0),
        op(OpKind::Copy, Role::Whole, model.copy_cost),
        op(OpKind::SplitDigits(7), Role::Whole, model.dup_cost),
        op(OpKind::Instantiate(0), Role::Units, 0.0),
        op(OpKind::Increment(1), Role::Tens, model.dup_cost + model.increment_cost(1)),
        op(OpKind::Instantiate(1), Role::Tens, one),
    ];
    let total_cost = ops.iter().map(|o| o.charged_cost).sum();
    DescriptionProgram {
        form: ProgramForm::Generative { length: 7 },
        ops,
        total_cost,
        reconstructs: vec![10, 20, 30, 40, 50, 60, 70],
    }
}
