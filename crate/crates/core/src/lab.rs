//! Truth tables, tabulation of sequences and exhaustive shortest-sequence search.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instr::{BasicInstruction, Focus, Instruction, InstructionSequence, Method};
use crate::services::{run, tf};
use crate::splitting::run_splitting;

/// Largest arity a table may have.
pub const MAX_ARITY: usize = 24;

/// An n-ary Boolean function; entry `i` is the value on the input vector
/// whose bits, read with `b1` most significant, spell `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    values: Vec<bool>,
}

pub fn input_vector(arity: usize, index: usize) -> Vec<bool> {
    (0..arity).map(|i| index >> (arity - 1 - i) & 1 == 1).collect()
}

pub fn vector_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_ARITY {
        return Err(Error::ResourceLimit(format!("arity {arity} exceeds {MAX_ARITY}")));
    }
    Ok(())
}

impl TruthTable {
    pub fn new(arity: usize, values: Vec<bool>) -> Result<Self> {
        check_arity(arity)?;
        if values.len() != 1 << arity {
            return Err(Error::ArityMismatch { expected: 1 << arity, found: values.len() });
        }
        Ok(TruthTable { arity, values })
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        TruthTable { arity, values: vec![value; 1 << arity] }
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(&[bool]) -> bool) -> Self {
        let values = (0..1usize << arity).map(|i| f(&input_vector(arity, i))).collect();
        TruthTable { arity, values }
    }

    pub fn try_from_fn(arity: usize, mut f: impl FnMut(&[bool]) -> Result<bool>) -> Result<Self> {
        check_arity(arity)?;
        let values = (0..1usize << arity).map(|i| f(&input_vector(arity, i))).collect::<Result<_>>()?;
        Ok(TruthTable { arity, values })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn value(&self, index: usize) -> bool {
        self.values[index]
    }

    pub fn eval(&self, bits: &[bool]) -> bool {
        self.values[vector_index(bits)]
    }

    /// Input vectors in table order.
    pub fn inputs(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        (0..self.values.len()).map(move |i| input_vector(self.arity, i))
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.values.iter().try_for_each(|&b| write!(f, "{}", tf(b)))
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = parse_bits(s)?;
        let arity = values.len().trailing_zeros() as usize;
        if !values.len().is_power_of_two() {
            return Err(Error::Precondition(format!("table length {} is not a power of two", values.len())));
        }
        TruthTable::new(arity, values)
    }
}

/// Parse a string over `T/F` or `1/0`.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .char_indices()
        .map(|(i, c)| match c {
            'T' | '1' => Ok(true),
            'F' | '0' => Ok(false),
            _ => Err(Error::Syntax { position: i, message: format!("expected T, F, 1 or 0, found {c:?}") }),
        })
        .collect()
}

pub fn render_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| tf(b)).collect()
}

pub fn tables_equal(a: &TruthTable, b: &TruthTable) -> bool {
    a == b
}

/// The outputs of a sequence on every input vector; `None` where the run
/// does not terminate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tabulation {
    pub arity: usize,
    pub entries: Vec<Option<bool>>,
}

impl Tabulation {
    pub fn total(&self) -> Option<TruthTable> {
        let values = self.entries.iter().copied().collect::<Option<Vec<_>>>()?;
        Some(TruthTable { arity: self.arity, values })
    }
}

impl fmt::Display for Tabulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries.iter().try_for_each(|e| write!(f, "{}", e.map_or('-', tf)))
    }
}

pub fn truth_table(x: &InstructionSequence, n: usize, splitting: bool) -> Result<Tabulation> {
    check_arity(n)?;
    let profile = x.classify();
    if splitting && !profile.is_sisbr {
        return Err(Error::Precondition("splitting tabulation requires a sequence in SISbr".into()));
    }
    if !splitting && !profile.is_isbr {
        return Err(Error::Precondition("tabulation requires a sequence in ISbr".into()));
    }
    let entries = (0..1usize << n)
        .map(|i| {
            let input = input_vector(n, i);
            let outcome = if splitting { run_splitting(x, &input)? } else { run(x, &input)? };
            Ok(outcome.output())
        })
        .collect::<Result<_>>()?;
    Ok(Tabulation { arity: n, entries })
}

/// Restrictions for [`shortest_sequence_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub target: TruthTable,
    pub max_length: usize,
    pub allow_jumps: bool,
    pub max_jump: u32,
    pub allow_aux: bool,
    pub allow_out_set_false: bool,
    pub allow_multiple_term: bool,
    pub splitting_mode: bool,
}

pub const SEARCH_MAX_LENGTH: usize = 12;
pub const SEARCH_MAX_ARITY: usize = 3;
pub const SEARCH_AUX_REGISTERS: u32 = 2;
pub const SEARCH_PARAMETERS: u32 = 2;
pub const SEARCH_MAX_STATES: usize = 20_000_000;

impl SearchSpec {
    /// ISbrna with jumps up to `max_jump`, several `!` and `out.set:F`.
    pub fn unrestricted(target: TruthTable, max_length: usize, max_jump: u32) -> Self {
        SearchSpec {
            target,
            max_length,
            allow_jumps: true,
            max_jump,
            allow_aux: false,
            allow_out_set_false: true,
            allow_multiple_term: true,
            splitting_mode: false,
        }
    }

    /// No jumps, at most one `!`, no `out.set:F`, no aux registers.
    pub fn jump_free_single_exit(target: TruthTable, max_length: usize) -> Self {
        SearchSpec {
            target,
            max_length,
            allow_jumps: false,
            max_jump: 0,
            allow_aux: false,
            allow_out_set_false: false,
            allow_multiple_term: false,
            splitting_mode: false,
        }
    }
}

/// The instructions the search may use, in enumeration order.
pub fn search_alphabet(spec: &SearchSpec) -> Vec<Instruction> {
    let mut alphabet = vec![Instruction::Term];
    if spec.allow_jumps {
        alphabet.extend((1..=spec.max_jump).map(Instruction::Jump));
    }
    let mut basics = Vec::new();
    for j in 1..=spec.target.arity() as u32 {
        basics.push(BasicInstruction::get(Focus::In(j)));
    }
    if spec.splitting_mode {
        basics.push(BasicInstruction::set(Focus::Out, true));
        for p in 1..=SEARCH_PARAMETERS {
            basics.push(BasicInstruction::Split(p));
            basics.push(BasicInstruction::Reply(p));
        }
    } else {
        if spec.allow_aux {
            for j in 1..=SEARCH_AUX_REGISTERS {
                for m in [Method::Get, Method::SetTrue, Method::SetFalse] {
                    basics.push(BasicInstruction::reg(Focus::Aux(j), m));
                }
            }
        }
        basics.push(BasicInstruction::set(Focus::Out, true));
        if spec.allow_out_set_false {
            basics.push(BasicInstruction::set(Focus::Out, false));
        }
    }
    for b in basics {
        alphabet.extend([Instruction::Plain(b), Instruction::PosTest(b), Instruction::NegTest(b)]);
    }
    alphabet
}

/// Per-input progress of a prefix. `offset` counts positions past the end
/// of the prefix at which execution resumes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Slot {
    Done(bool),
    Pending { offset: u32, out: bool, aux: u8 },
    Split { out: bool, branches: BTreeSet<(u32, u8, u8)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    slots: Vec<Slot>,
    term_used: bool,
}

fn successor(u: Instruction, reply: bool) -> u32 {
    let skip = match u {
        Instruction::PosTest(_) => !reply,
        Instruction::NegTest(_) => reply,
        _ => false,
    };
    skip as u32
}

/// Execute `u` for one input; `None` prunes the prefix.
fn step_slot(slot: &Slot, u: Instruction, input: &[bool], target: bool, horizon: u32) -> Option<Slot> {
    match slot {
        Slot::Done(out) => Some(Slot::Done(*out)),
        Slot::Pending { offset, out, aux } if *offset > 0 => {
            Some(Slot::Pending { offset: offset - 1, out: *out, aux: *aux })
        }
        Slot::Pending { out, aux, .. } => {
            let (mut out, mut aux) = (*out, *aux);
            let offset = match u {
                Instruction::Term => return (out == target).then_some(Slot::Done(out)),
                Instruction::Jump(0) => return None,
                Instruction::Jump(l) => l - 1,
                _ => {
                    let BasicInstruction::RegisterOp { focus, method } = u.basic()? else { return None };
                    let reply = match (focus, method) {
                        (Focus::In(j), Method::Get) => input[j as usize - 1],
                        (Focus::Aux(j), m) => {
                            let bit = 1u8 << (j - 1);
                            match m {
                                Method::Get => {}
                                Method::SetTrue => aux |= bit,
                                Method::SetFalse => aux &= !bit,
                            }
                            aux & bit != 0
                        }
                        (Focus::Out, Method::SetTrue) => {
                            out = true;
                            true
                        }
                        (Focus::Out, Method::SetFalse) => {
                            out = false;
                            false
                        }
                        _ => return None,
                    };
                    successor(u, reply)
                }
            };
            (offset < horizon).then_some(Slot::Pending { offset, out, aux })
        }
        Slot::Split { out, branches } => {
            let mut out = *out;
            let mut next = BTreeSet::new();
            for &(offset, defined, values) in branches {
                if offset > 0 {
                    next.insert((offset - 1, defined, values));
                    continue;
                }
                let mut push = |offset: u32, defined: u8, values: u8| {
                    if offset < horizon {
                        next.insert((offset, defined, values));
                        true
                    } else {
                        false
                    }
                };
                let ok = match u {
                    Instruction::Term => true,
                    Instruction::Jump(0) => false,
                    Instruction::Jump(l) => push(l - 1, defined, values),
                    _ => match u.basic()? {
                        BasicInstruction::RegisterOp { focus: Focus::In(j), method: Method::Get } => {
                            push(successor(u, input[j as usize - 1]), defined, values)
                        }
                        BasicInstruction::RegisterOp { focus: Focus::Out, method: Method::SetTrue } => {
                            out = true;
                            push(successor(u, true), defined, values)
                        }
                        BasicInstruction::Split(p) => {
                            let bit = 1u8 << (p - 1);
                            defined & bit == 0
                                && push(successor(u, true), defined | bit, values | bit)
                                && push(successor(u, false), defined | bit, values)
                        }
                        BasicInstruction::Reply(p) => {
                            let bit = 1u8 << (p - 1);
                            defined & bit != 0 && push(successor(u, values & bit != 0), defined, values)
                        }
                        _ => false,
                    },
                };
                if !ok {
                    return None;
                }
            }
            if out && !target {
                return None;
            }
            if next.is_empty() {
                return (out == target).then_some(Slot::Done(out));
            }
            Some(Slot::Split { out, branches: next })
        }
    }
}

/// Find a shortest sequence over [`search_alphabet`] computing the target,
/// least in enumeration order among those of that length.
///
/// Prefixes are explored breadth first and identified when every input
/// is in the same state; since control only moves forward, the states of a
/// prefix determine all of its completions.
pub fn shortest_sequence_search(spec: &SearchSpec) -> Result<Option<InstructionSequence>> {
    let arity = spec.target.arity();
    if spec.max_length == 0 {
        return Err(Error::Precondition("max_length must be at least 1".into()));
    }
    if spec.max_length > SEARCH_MAX_LENGTH {
        return Err(Error::ResourceLimit(format!("max_length {} exceeds {SEARCH_MAX_LENGTH}", spec.max_length)));
    }
    if arity > SEARCH_MAX_ARITY {
        return Err(Error::ResourceLimit(format!("arity {arity} exceeds {SEARCH_MAX_ARITY}")));
    }
    let alphabet = search_alphabet(spec);
    let inputs: Vec<Vec<bool>> = spec.target.inputs().collect();
    let start = if spec.splitting_mode {
        Slot::Split { out: false, branches: BTreeSet::from([(0, 0, 0)]) }
    } else {
        Slot::Pending { offset: 0, out: false, aux: 0 }
    };
    let mut frontier = vec![State { slots: vec![start; inputs.len()], term_used: false }];
    // levels[m][i] = (parent index in level m-1, instruction)
    let mut levels: Vec<Vec<(usize, Instruction)>> = Vec::new();
    let mut seen: HashSet<State> = HashSet::new();
    for m in 0..spec.max_length {
        let horizon = (spec.max_length - m - 1) as u32;
        let mut next_states = Vec::new();
        let mut next_level = Vec::new();
        for (parent, state) in frontier.iter().enumerate() {
            for &u in &alphabet {
                let is_term = u == Instruction::Term;
                if is_term && state.term_used && !spec.allow_multiple_term {
                    continue;
                }
                let slots = state
                    .slots
                    .iter()
                    .enumerate()
                    .map(|(i, s)| step_slot(s, u, &inputs[i], spec.target.value(i), horizon))
                    .collect::<Option<Vec<_>>>();
                let Some(slots) = slots else { continue };
                let done = slots.iter().all(|s| matches!(s, Slot::Done(_)));
                let term_used = !spec.allow_multiple_term && (state.term_used || is_term);
                let next = State { slots, term_used };
                if done {
                    let mut items = vec![u];
                    let mut index = parent;
                    for level in levels.iter().rev() {
                        let (p, instr) = level[index];
                        items.push(instr);
                        index = p;
                    }
                    items.reverse();
                    return InstructionSequence::new(items).map(Some);
                }
                if seen.insert(next.clone()) {
                    if seen.len() > SEARCH_MAX_STATES {
                        return Err(Error::ResourceLimit(format!(
                            "search visited more than {SEARCH_MAX_STATES} states"
                        )));
                    }
                    next_states.push(next);
                    next_level.push((parent, u));
                }
            }
        }
        if next_states.is_empty() {
            return Ok(None);
        }
        frontier = next_states;
        levels.push(next_level);
    }
    Ok(None)
}
