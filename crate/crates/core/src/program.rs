//! Description programs: costed op streams that regenerate a sequence, their
//! textual trace, and model-free replay.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};

/// Which stream an op acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Role {
    /// Whole numbers.
    Whole,
    /// Tens digits of a split block.
    Tens,
    /// Units digits of a split block.
    Units,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::Whole => "whole",
            Role::Tens => "tens",
            Role::Units => "units",
        }
    }
}

/// Generative operations. The derived order is the lexicographic order used to
/// break ties between equally cheap programs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OpKind {
    /// Open a new segment; the next op must instantiate.
    SegmentStart,
    /// Emit a fresh value.
    Instantiate(u64),
    /// Emit the previous value again.
    Copy,
    /// Emit the previous value plus `k`.
    Increment(u64),
    /// Describe the next `n` tokens as two independent digit streams, tens
    /// first, then units.
    SplitDigits(usize),
    /// Emit everything produced so far in this stream, reversed.
    Mirror,
}

impl OpKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpKind::SegmentStart => "SEGMENT_START",
            OpKind::Instantiate(_) => "INSTANTIATE",
            OpKind::Copy => "COPY",
            OpKind::Increment(_) => "INCREMENT",
            OpKind::SplitDigits(_) => "SPLIT_DIGITS",
            OpKind::Mirror => "MIRROR",
        }
    }

    fn arg(&self) -> Option<u64> {
        match *self {
            OpKind::Instantiate(v) | OpKind::Increment(v) => Some(v),
            OpKind::SplitDigits(n) => Some(n as u64),
            _ => None,
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.arg() {
            Some(a) => write!(f, "{}({a})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Operation {
    pub kind: OpKind,
    pub role: Role,
    pub charged_cost: f64,
    /// Discharged by short-term memory.
    pub free: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProgramForm {
    /// Ops emit tokens left to right.
    Sequential,
    /// Ops shape a template of `length` slots (a fiber transferred along the
    /// sequence); the length itself is not charged.
    Generative { length: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescriptionProgram {
    pub form: ProgramForm,
    pub ops: Vec<Operation>,
    pub total_cost: f64,
    pub reconstructs: Vec<u64>,
}

impl DescriptionProgram {
    pub fn kinds(&self) -> Vec<OpKind> {
        self.ops.iter().map(|op| op.kind).collect()
    }

    /// Line-oriented trace: `#` header lines, then one op per line with index,
    /// role, kind, argument, charged cost, free flag and running total.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        match self.form {
            ProgramForm::Sequential => out.push_str("# form: sequential\n"),
            ProgramForm::Generative { length } => {
                let _ = writeln!(out, "# form: generative length={length}");
            }
        }
        let seq: Vec<String> = self.reconstructs.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "# sequence: {}", seq.join(" "));
        let _ = writeln!(out, "# idx role  kind          arg       cost flag        total");
        let mut running = 0.0;
        for (i, op) in self.ops.iter().enumerate() {
            running += op.charged_cost;
            let arg = op.kind.arg().map_or_else(|| "-".to_string(), |a| a.to_string());
            let _ = writeln!(
                out,
                "{:>5} {:<5} {:<13} {:>5} {:>10.6} {:<7} {:>10.6}",
                i,
                op.role.label(),
                op.kind.name(),
                arg,
                op.charged_cost,
                if op.free { "free" } else { "charged" },
                running
            );
        }
        let _ = writeln!(out, "# total: {:.6}", self.total_cost);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Phase {
    Whole,
    Tens { len: usize },
    Units { len: usize, tens: Vec<u64> },
    Done { tokens: Vec<u64> },
}

/// Per-stream targets for guided evaluation.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Targets {
    pub whole: Vec<u64>,
    pub tens: Vec<u64>,
    pub units: Vec<u64>,
}

impl Targets {
    pub fn new(seq: &[u64]) -> Self {
        Targets {
            whole: seq.to_vec(),
            tens: seq.iter().map(|t| t / 10).collect(),
            units: seq.iter().map(|t| t % 10).collect(),
        }
    }

    pub fn for_role(&self, role: Role) -> &[u64] {
        match role {
            Role::Whole => &self.whole,
            Role::Tens => &self.tens,
            Role::Units => &self.units,
        }
    }
}

/// Structural state of a sequential op stream, independent of any cost model.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tape {
    phase: Phase,
    stream: Vec<u64>,
    pending_segment: bool,
    applied: usize,
}

/// Outcome of one structural step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    /// A new digit stream started after this op; memory must be reset.
    pub stream_reset: bool,
}

impl Tape {
    pub fn new() -> Self {
        Tape { phase: Phase::Whole, stream: Vec::new(), pending_segment: false, applied: 0 }
    }

    pub fn role(&self) -> Role {
        match self.phase {
            Phase::Whole => Role::Whole,
            Phase::Tens { .. } => Role::Tens,
            Phase::Units { .. } | Phase::Done { .. } => Role::Units,
        }
    }

    /// Tokens emitted so far in the current stream.
    pub fn stream(&self) -> &[u64] {
        &self.stream
    }

    pub fn last(&self) -> Option<u64> {
        self.stream.last().copied()
    }

    pub fn in_split(&self) -> bool {
        !matches!(self.phase, Phase::Whole)
    }

    pub fn is_done(&self) -> bool {
        matches!(self.phase, Phase::Done { .. })
    }

    fn digit_stream(&self) -> bool {
        matches!(self.phase, Phase::Tens { .. } | Phase::Units { .. })
    }

    pub fn apply(&mut self, kind: OpKind) -> std::result::Result<Step, String> {
        self.apply_checked(kind, None)
    }

    /// Apply `kind`; with `target`, also require the active stream to remain a
    /// prefix of its target.
    pub fn apply_checked(&mut self, kind: OpKind, target: Option<&Targets>) -> std::result::Result<Step, String> {
        if self.is_done() {
            return Err("op after the split block is complete".into());
        }
        if self.pending_segment && !matches!(kind, OpKind::Instantiate(_)) {
            return Err("a segment start must be followed by an instantiation".into());
        }
        let digit_limit = |v: u64, this: &Tape| {
            if this.digit_stream() && v > 9 {
                Err(format!("digit stream value {v} exceeds 9"))
            } else {
                Ok(())
            }
        };
        match kind {
            OpKind::SplitDigits(n) => {
                if self.applied > 0 {
                    return Err("a split must open the program".into());
                }
                if n == 0 {
                    return Err("a split block must cover at least one token".into());
                }
                self.phase = Phase::Tens { len: n };
                self.applied += 1;
                return Ok(Step { stream_reset: true });
            }
            OpKind::SegmentStart => {
                if self.stream.is_empty() {
                    return Err("segment start with nothing before it".into());
                }
                self.pending_segment = true;
            }
            OpKind::Instantiate(v) => {
                if !self.stream.is_empty() && !self.pending_segment {
                    return Err("instantiation inside a segment needs a segment start".into());
                }
                digit_limit(v, self)?;
                self.stream.push(v);
                self.pending_segment = false;
            }
            OpKind::Copy => {
                let last = self.last().ok_or("copy with nothing to copy")?;
                self.stream.push(last);
            }
            OpKind::Increment(k) => {
                if k == 0 {
                    return Err("increment step must be >= 1".into());
                }
                let last = self.last().ok_or("increment with nothing to increment")?;
                let v = last.checked_add(k).ok_or("increment overflows")?;
                digit_limit(v, self)?;
                self.stream.push(v);
            }
            OpKind::Mirror => {
                if self.stream.is_empty() {
                    return Err("mirror with nothing to reflect".into());
                }
                let reflected: Vec<u64> = self.stream.iter().rev().copied().collect();
                self.stream.extend(reflected);
            }
        }
        if let Some(t) = target {
            let want = t.for_role(self.role());
            if self.stream.len() > want.len() || self.stream[..] != want[..self.stream.len()] {
                return Err("emission diverges from the target sequence".into());
            }
        }
        self.applied += 1;
        self.advance_phase()
    }

    fn advance_phase(&mut self) -> std::result::Result<Step, String> {
        let mut step = Step { stream_reset: false };
        match &self.phase {
            Phase::Tens { len } => {
                let len = *len;
                if self.stream.len() > len {
                    return Err(format!("tens stream overruns the {len}-token block"));
                }
                if self.stream.len() == len {
                    let tens = std::mem::take(&mut self.stream);
                    self.phase = Phase::Units { len, tens };
                    step.stream_reset = true;
                }
            }
            Phase::Units { len, tens } => {
                if self.stream.len() > *len {
                    return Err(format!("units stream overruns the {len}-token block"));
                }
                if self.stream.len() == *len {
                    let tokens = tens.iter().zip(&self.stream).map(|(t, u)| t * 10 + u).collect();
                    self.stream.clear();
                    self.phase = Phase::Done { tokens };
                }
            }
            Phase::Whole | Phase::Done { .. } => {}
        }
        Ok(step)
    }

    /// The regenerated sequence, if the tape is in a terminal state.
    pub fn finish(&self) -> std::result::Result<Vec<u64>, String> {
        if self.pending_segment {
            return Err("program ends on a dangling segment start".into());
        }
        match &self.phase {
            Phase::Whole if self.stream.is_empty() => Err("program emits nothing".into()),
            Phase::Whole => Ok(self.stream.clone()),
            Phase::Done { tokens } => Ok(tokens.clone()),
            Phase::Tens { .. } => Err("split block ends inside the tens stream".into()),
            Phase::Units { .. } => Err("split block ends inside the units stream".into()),
        }
    }
}

/// Regenerate the sequence a program describes. Costs are not consulted.
pub fn replay(program: &DescriptionProgram) -> Result<Vec<u64>> {
    if program.ops.is_empty() {
        return Err(Error::InvalidProgram("empty op list".into()));
    }
    let tokens = match program.form {
        ProgramForm::Sequential => replay_sequential(&program.ops)?,
        ProgramForm::Generative { length } => replay_generative(&program.ops, length)?,
    };
    if tokens != program.reconstructs {
        return Err(Error::InvalidProgram(format!(
            "ops regenerate {:?}, program records {:?}",
            tokens, program.reconstructs
        )));
    }
    Ok(tokens)
}

fn replay_sequential(ops: &[Operation]) -> Result<Vec<u64>> {
    let mut tape = Tape::new();
    for (index, op) in ops.iter().enumerate() {
        if op.role != tape.role() {
            return Err(Error::InvalidOp {
                index,
                reason: format!("op labelled {} while the {} stream is active", op.role.label(), tape.role().label()),
            });
        }
        tape.apply(op.kind).map_err(|reason| Error::InvalidOp { index, reason })?;
    }
    tape.finish().map_err(Error::InvalidProgram)
}

#[derive(Debug, Clone, Copy, Default)]
struct Slot {
    value: Option<u64>,
    step: u64,
}

enum Template {
    Single(Slot),
    Split { tens: Slot, units: Slot },
}

fn replay_generative(ops: &[Operation], length: usize) -> Result<Vec<u64>> {
    if length == 0 {
        return Err(Error::InvalidProgram("generative program of length 0".into()));
    }
    let mut template: Option<Template> = None;
    let mut transferred = false;
    for (index, op) in ops.iter().enumerate() {
        let bad = |reason: &str| Error::InvalidOp { index, reason: reason.to_string() };
        match (op.kind, template.as_mut()) {
            (OpKind::SegmentStart, None) => template = Some(Template::Single(Slot::default())),
            (OpKind::SegmentStart, Some(_)) => return Err(bad("template already started")),
            (_, None) => return Err(bad("no template started")),
            (OpKind::Copy, Some(_)) => {
                if transferred {
                    return Err(bad("template already transferred"));
                }
                transferred = true;
            }
            (OpKind::SplitDigits(_), Some(Template::Single(slot))) => {
                let slot = *slot;
                template = Some(Template::Split { tens: slot, units: slot });
            }
            (OpKind::SplitDigits(_), Some(_)) => return Err(bad("template already split")),
            (OpKind::Instantiate(v), Some(t)) => {
                let slot = role_slot(t, op.role).ok_or_else(|| bad("role not present in template"))?;
                if op.role != Role::Whole && v > 9 {
                    return Err(bad("digit role instantiated above 9"));
                }
                slot.value = Some(v);
            }
            (OpKind::Increment(k), Some(t)) => {
                if !transferred {
                    return Err(bad("increment before any transfer"));
                }
                if k == 0 {
                    return Err(bad("increment step must be >= 1"));
                }
                let slot = role_slot(t, op.role).ok_or_else(|| bad("role not present in template"))?;
                slot.step = k;
            }
            (OpKind::Mirror, Some(_)) => return Err(bad("mirror is not a template operation")),
        }
    }
    let template = template.ok_or_else(|| Error::InvalidProgram("no template started".into()))?;
    if length > 1 && !transferred {
        return Err(Error::InvalidProgram("template never transferred along the sequence".into()));
    }
    let value = |slot: &Slot, i: usize| -> Result<u64> {
        let base = slot.value.ok_or_else(|| Error::InvalidProgram("uninstantiated slot".into()))?;
        Ok(base + slot.step * i as u64)
    };
    (0..length)
        .map(|i| match &template {
            Template::Single(s) => value(s, i),
            Template::Split { tens, units } => {
                let u = value(units, i)?;
                if u > 9 {
                    return Err(Error::InvalidProgram(format!("units digit {u} at position {i}")));
                }
                Ok(value(tens, i)? * 10 + u)
            }
        })
        .collect()
}

fn role_slot(t: &mut Template, role: Role) -> Option<&mut Slot> {
    match (t, role) {
        (Template::Single(s), Role::Whole) => Some(s),
        (Template::Split { tens, .. }, Role::Tens) => Some(tens),
        (Template::Split { units, .. }, Role::Units) => Some(units),
        _ => None,
    }
}
