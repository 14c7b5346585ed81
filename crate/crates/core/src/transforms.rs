//! Rewrites on instruction sequences: output-false elimination, the
//! aux-to-split translation, and the jump-chain and register congruences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::instr::{BasicInstruction, Focus, Instruction, InstructionSequence, Method};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteReport {
    pub input: InstructionSequence,
    pub output: InstructionSequence,
    pub steps: usize,
    /// Rule name and 1-based position of each rewrite.
    pub rule_trace: Vec<(String, usize)>,
}

impl RewriteReport {
    fn new(input: &InstructionSequence, output: Vec<Instruction>, rule_trace: Vec<(String, usize)>) -> Self {
        RewriteReport {
            input: input.clone(),
            output: InstructionSequence::new(output).expect("rewrites never empty a sequence"),
            steps: rule_trace.len(),
            rule_trace,
        }
    }
}

impl fmt::Display for RewriteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input: {}", self.input)?;
        writeln!(f, "output: {}", self.output)?;
        writeln!(f, "steps: {}", self.steps)?;
        for (rule, position) in &self.rule_trace {
            writeln!(f, "  {rule} @ {position}")?;
        }
        Ok(())
    }
}

fn require_isbr(x: &InstructionSequence, what: &str) -> Result<()> {
    if x.classify().is_isbr {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} requires a sequence in ISbr")))
    }
}

/// Replace `items[at]` by `block`, keeping every jump pointed at the same
/// instruction; a jump aimed at `at` lands on the start of the block.
///
/// A test just before `at` that can skip would land inside the block. It is
/// negated and followed by a jump over the block, unless a test two places
/// back also skips onto `at`; then `#2 ; #(len+1)` goes in front of the block.
fn splice(items: &[Instruction], at: usize, block: &[Instruction]) -> Vec<Instruction> {
    let skipped_into = |i: Option<usize>| i.is_some_and(|i| items[i].can_skip());
    let guard = skipped_into(at.checked_sub(1));
    let double = guard && skipped_into(at.checked_sub(2));
    let flip = guard && !double;
    let extra = block.len() - 1 + flip as usize + 2 * double as usize;
    let map = |i: usize| {
        if i < at {
            i
        } else if i == at {
            at + flip as usize
        } else {
            i + extra
        }
    };
    let mut out = Vec::with_capacity(items.len() + extra);
    for (i, &u) in items.iter().enumerate() {
        if i == at {
            if double {
                out.extend([Instruction::Jump(2), Instruction::Jump(block.len() as u32 + 1)]);
            }
            out.extend_from_slice(block);
            continue;
        }
        let u = match u {
            Instruction::Jump(l) if l > 0 => Instruction::Jump((map(i + l as usize) - map(i)) as u32),
            other => other,
        };
        if flip && i + 1 == at {
            out.push(u.flipped());
            out.push(Instruction::Jump(block.len() as u32 + 1));
        } else {
            out.push(u);
        }
    }
    out
}

fn rename_focus(items: &[Instruction], from: Focus, to: Focus) -> Vec<Instruction> {
    items.iter().map(|u| u.map_basic(|b| if b.focus() == Some(from) { b.with_focus(to) } else { b })).collect()
}

pub fn eliminate_output_false_report(x: &InstructionSequence) -> Result<RewriteReport> {
    require_isbr(x, "eliminate_output_false")?;
    let o = Focus::Aux(x.classify().max_aux_index + 1);
    let mut items = rename_focus(x.items(), Focus::Out, o);
    let mut trace = Vec::new();
    let out_true = Instruction::Plain(BasicInstruction::set(Focus::Out, true));
    let block = [Instruction::PosTest(BasicInstruction::get(o)), out_true, Instruction::Term];
    if items[0] != Instruction::Term {
        while let Some(j) = (1..items.len()).find(|&j| items[j] == Instruction::Term && items[j - 1] != out_true) {
            items = splice(&items, j, &block);
            trace.push(("exit-via-out".to_string(), j + 1));
        }
    }
    Ok(RewriteReport::new(x, items, trace))
}

/// An equivalent sequence in which `out.set:F` does not occur.
pub fn eliminate_output_false(x: &InstructionSequence) -> Result<InstructionSequence> {
    eliminate_output_false_report(x).map(|r| r.output)
}

fn is_aux_set(u: Instruction, negative: bool, value: bool) -> bool {
    let target = BasicInstruction::RegisterOp { focus: Focus::Aux(0), method: Method::set(value) };
    let same = |b: BasicInstruction| matches!(b.focus(), Some(Focus::Aux(_))) && b.with_focus(Focus::Aux(0)) == target;
    match u {
        Instruction::NegTest(b) => negative && same(b),
        Instruction::PosTest(b) => !negative && same(b),
        _ => false,
    }
}

/// `-aux:j.set:T` or `+aux:j.set:F`, which always skip.
fn is_skipping_aux_set(u: Instruction) -> bool {
    is_aux_set(u, true, true) || is_aux_set(u, false, false)
}

pub fn normalize_set_tests_report(x: &InstructionSequence) -> Result<RewriteReport> {
    require_isbr(x, "normalize_set_tests")?;
    let mut items = x.items().to_vec();
    let mut trace = Vec::new();
    while let Some(i) = items.iter().position(|&u| is_skipping_aux_set(u)) {
        let replacement = items[i].flipped();
        trace.push((format!("{} -> {replacement} ; #2", items[i]), i + 1));
        items = splice(&items, i, &[replacement, Instruction::Jump(2)]);
    }
    Ok(RewriteReport::new(x, items, trace))
}

pub fn normalize_set_tests(x: &InstructionSequence) -> Result<InstructionSequence> {
    normalize_set_tests_report(x).map(|r| r.output)
}

/// Positions that may follow position `i`; beyond-end positions included.
fn successors(u: Instruction, i: usize) -> Vec<usize> {
    match u {
        Instruction::Term | Instruction::Jump(0) => vec![],
        Instruction::Jump(l) => vec![i + l as usize],
        Instruction::Plain(_) => vec![i + 1],
        Instruction::PosTest(b) | Instruction::NegTest(b) => match b.fixed_reply() {
            Some(reply) if reply == matches!(u, Instruction::PosTest(_)) => vec![i + 1],
            Some(_) => vec![i + 2],
            None => vec![i + 1, i + 2],
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    Ins(Instruction),
    /// Jump to the translation of an original position.
    JumpTo(usize),
}

/// Translate aux registers into split/reply parameters.
///
/// Every write that some later read depends on gets its own parameter; a
/// write of `T` becomes `-split:p ; !` and a write of `F` becomes
/// `+split:p ; !`, so the surviving branch carries the written value. A
/// read uses the parameter of the last write before it. Control transfers
/// that skip such writes first instantiate the skipped parameter with the
/// current register value, so every read finds its parameter set.
pub fn to_splitting_report(x: &InstructionSequence) -> Result<RewriteReport> {
    require_isbr(x, "to_splitting")?;
    let profile = x.classify();
    if profile.has_out_set_false {
        return Err(Error::Precondition("to_splitting requires a sequence without out.set:F".into()));
    }
    let items = x.items();
    if let Some(u) = items.iter().find(|&&u| is_skipping_aux_set(u)) {
        return Err(Error::Precondition(format!("{u} must be normalized first")));
    }
    let k = items.len();
    let aux_of = |u: Instruction| match u.basic()? {
        BasicInstruction::RegisterOp { focus: Focus::Aux(j), method } => Some((j, method)),
        _ => None,
    };
    // Registers that may be read before being written again, per position;
    // control only moves forward, so one backward pass suffices.
    let mut live: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); k + 1];
    for i in (0..k).rev() {
        let u = items[i];
        let mut here: BTreeSet<u32> =
            successors(u, i).into_iter().filter(|&t| t < k).flat_map(|t| live[t].iter().copied()).collect();
        match aux_of(u) {
            Some((j, Method::Get)) => {
                here.insert(j);
            }
            Some((j, _)) => {
                here.remove(&j);
            }
            None => {}
        }
        live[i] = here;
    }
    let live_at = |j: u32, t: usize| live.get(t).is_some_and(|l| l.contains(&j));
    // Writes whose value may be read, per register, in position order.
    let mut writes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &u) in items.iter().enumerate() {
        if let Some((j, m)) = aux_of(u) {
            if m != Method::Get && live_at(j, i + 1) {
                writes.entry(j).or_default().push(i);
            }
        }
    }
    let mut param: BTreeMap<usize, u32> = BTreeMap::new();
    let mut all: Vec<usize> = writes.values().flatten().copied().collect();
    all.sort_unstable_by(|a, b| b.cmp(a));
    for (rank, &i) in all.iter().enumerate() {
        param.insert(i, rank as u32 + 1);
    }
    let last_before = |j: u32, t: usize| writes.get(&j).and_then(|w| w.iter().rev().find(|&&i| i < t).copied());
    let split = |p: u32, negative: bool| {
        let b = BasicInstruction::Split(p);
        Item::Ins(if negative { Instruction::NegTest(b) } else { Instruction::PosTest(b) })
    };
    // Instantiate the parameters of skipped writes to registers live at t.
    let bypass = |q: usize, t: usize| -> Vec<Item> {
        let mut chain = Vec::new();
        for (&j, w) in &writes {
            if !live_at(j, t) {
                continue;
            }
            let Some(&skipped) = w.iter().rev().find(|&&i| q < i && i < t) else { continue };
            let p = param[&skipped];
            match last_before(j, q + 1) {
                None => chain.extend([split(p, false), Item::Ins(Instruction::Term)]),
                Some(prev) => {
                    let r = BasicInstruction::Reply(param[&prev]);
                    chain.extend([
                        split(p, true),
                        Item::Ins(Instruction::Jump(4)),
                        Item::Ins(Instruction::NegTest(r)),
                        Item::Ins(Instruction::Term),
                        Item::Ins(Instruction::Jump(3)),
                        Item::Ins(Instruction::PosTest(r)),
                        Item::Ins(Instruction::Term),
                    ]);
                }
            }
        }
        chain
    };
    let mut blocks: Vec<Vec<Item>> = vec![Vec::new(); k];
    let mut trace = Vec::new();
    for q in (0..k).rev() {
        let u = items[q];
        let (rule, block): (&str, Vec<Item>) = match (u, aux_of(u)) {
            (_, Some((j, Method::Get))) => match last_before(j, q) {
                Some(w) => {
                    let translated = u.map_basic(|_| BasicInstruction::Reply(param[&w]));
                    ("read", vec![Item::Ins(translated)])
                }
                None => match u {
                    Instruction::PosTest(_) => {
                        let mut block = bypass(q, q + 2);
                        block.push(Item::JumpTo(q + 2));
                        ("read-unwritten", block)
                    }
                    _ => ("read-unwritten", vec![Item::Ins(Instruction::Jump(1))]),
                },
            },
            (_, Some((_, m))) => match param.get(&q) {
                Some(&p) => ("write", vec![split(p, m == Method::SetTrue), Item::Ins(Instruction::Term)]),
                None => ("write-unread", vec![Item::Ins(Instruction::Jump(1))]),
            },
            (Instruction::Jump(l), _) if l > 0 => {
                let t = q + l as usize;
                if t >= k {
                    ("jump-out", vec![Item::Ins(Instruction::Jump(0))])
                } else {
                    let mut block = bypass(q, t);
                    block.push(Item::JumpTo(t));
                    (if block.len() > 1 { "jump-bypass" } else { "jump" }, block)
                }
            }
            _ => ("keep", vec![Item::Ins(u)]),
        };
        let mut block = block;
        // A test whose skip would not land on the translation of q + 2.
        if let [Item::Ins(test)] = block[..] {
            if test.is_test() {
                let chain = bypass(q, q + 2);
                let next_len = blocks.get(q + 1).map_or(1, Vec::len);
                if !chain.is_empty() {
                    block = vec![Item::Ins(test), Item::JumpTo(q + 1)];
                    block.extend(chain);
                    block.push(Item::JumpTo(q + 2));
                } else if next_len != 1 {
                    // Negated, the skip lands on the translation of q + 1.
                    block = vec![Item::Ins(test.flipped()), Item::JumpTo(q + 2)];
                }
            }
        }
        if rule != "keep" || block.len() > 1 {
            trace.push((rule.to_string(), q + 1));
        }
        blocks[q] = block;
    }
    trace.reverse();
    let mut start = Vec::with_capacity(k);
    let mut total = 0;
    for b in &blocks {
        start.push(total);
        total += b.len();
    }
    let mut output = Vec::with_capacity(total);
    for item in blocks.iter().flatten() {
        let here = output.len();
        output.push(match *item {
            Item::Ins(u) => u,
            Item::JumpTo(t) if t >= k => Instruction::Jump(0),
            Item::JumpTo(t) => Instruction::Jump((start[t] - here) as u32),
        });
    }
    Ok(RewriteReport::new(x, output, trace))
}

pub fn to_splitting(x: &InstructionSequence) -> Result<InstructionSequence> {
    to_splitting_report(x).map(|r| r.output)
}

pub fn collapse_jump_chains_report(x: &InstructionSequence) -> RewriteReport {
    let mut items = x.items().to_vec();
    let mut trace = Vec::new();
    let landing = |items: &[Instruction], i: usize| match items[i] {
        Instruction::Jump(l) if l > 0 => match items.get(i + l as usize) {
            Some(&Instruction::Jump(m)) => Some((l, m)),
            _ => None,
        },
        _ => None,
    };
    // Rightmost first: each jump then needs at most one widening.
    while let Some(i) = (0..items.len()).rev().find(|&i| landing(&items, i).is_some()) {
        let (l, m) = landing(&items, i).unwrap();
        if m == 0 {
            items[i] = Instruction::Jump(0);
            trace.push(("jump-to-deadlock".to_string(), i + 1));
        } else {
            items[i] = Instruction::Jump(l + m);
            trace.push(("jump-chain".to_string(), i + 1));
        }
    }
    RewriteReport::new(x, items, trace)
}

pub fn collapse_jump_chains(x: &InstructionSequence) -> InstructionSequence {
    collapse_jump_chains_report(x).output
}

fn writable(f: Option<Focus>) -> bool {
    matches!(f, Some(Focus::Aux(_) | Focus::Out))
}

fn behavioural_rule(items: &[Instruction], i: usize) -> Option<(&'static str, Instruction)> {
    let (b, negative) = match items[i] {
        Instruction::PosTest(b) => (b, false),
        Instruction::NegTest(b) => (b, true),
        _ => return None,
    };
    if !writable(b.focus()) {
        return None;
    }
    let value = b.fixed_reply()?;
    // +f.set:T and -f.set:F never skip.
    if negative != value {
        return Some(("test-to-plain", Instruction::Plain(b)));
    }
    let plain = Instruction::Plain(b);
    if items.get(i + 1) == Some(&plain) {
        return Some(("skip-to-repeat", Instruction::Jump(1)));
    }
    if let (Some(&Instruction::Jump(l)), Some(&Instruction::Jump(l2))) = (items.get(i + 1), items.get(i + 2)) {
        if l >= 2 && l == l2 && items.get(i + 1 + l as usize) == Some(&plain) {
            return Some(("skip-to-repeat-window", Instruction::Jump(1)));
        }
    }
    None
}

pub fn behavioural_normalize_report(x: &InstructionSequence) -> Result<RewriteReport> {
    require_isbr(x, "behavioural_normalize")?;
    let mut items = x.items().to_vec();
    let mut trace = Vec::new();
    while let Some((i, (rule, u))) = (0..items.len()).find_map(|i| behavioural_rule(&items, i).map(|r| (i, r))) {
        items[i] = u;
        trace.push((rule.to_string(), i + 1));
    }
    Ok(RewriteReport::new(x, items, trace))
}

pub fn behavioural_normalize(x: &InstructionSequence) -> Result<InstructionSequence> {
    behavioural_normalize_report(x).map(|r| r.output)
}
