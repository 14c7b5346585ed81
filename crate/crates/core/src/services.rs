//! Boolean register services, the use/apply operators and the
//! program-counter executor for sequences without split/reply.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instr::{BasicInstruction, Focus, Instruction, InstructionSequence, Method};
use crate::lab::TruthTable;
use crate::threads::{extract, Thread};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterState {
    True,
    False,
    Blocked,
}

/// A service as seen by a thread. A register in state `Blocked` rejects
/// every request, so it is identified with `Divergent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ServiceValue {
    Register(RegisterState),
    Divergent,
}

impl RegisterState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            RegisterState::True
        } else {
            RegisterState::False
        }
    }
}

impl ServiceValue {
    pub fn register(b: bool) -> Self {
        ServiceValue::Register(RegisterState::from_bool(b))
    }

    fn normalized(self) -> Self {
        match self {
            ServiceValue::Register(RegisterState::Blocked) => ServiceValue::Divergent,
            other => other,
        }
    }

    /// Reply and derived service for method `m`; `None` means the reply is blocked.
    pub fn process(self, m: Method) -> Option<(bool, ServiceValue)> {
        match self.normalized() {
            ServiceValue::Divergent => None,
            ServiceValue::Register(s) => match register_step(s, m) {
                (next, RegisterState::True) => Some((true, ServiceValue::Register(next))),
                (next, RegisterState::False) => Some((false, ServiceValue::Register(next))),
                (_, RegisterState::Blocked) => None,
            },
        }
    }
}

impl fmt::Display for ServiceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServiceValue::Register(RegisterState::True) => f.write_str("BR_T"),
            ServiceValue::Register(RegisterState::False) => f.write_str("BR_F"),
            ServiceValue::Register(RegisterState::Blocked) => f.write_str("BR_B"),
            ServiceValue::Divergent => f.write_str("DIV"),
        }
    }
}

/// Effect and yield of a Boolean register; both components coincide.
pub fn register_step(s: RegisterState, m: Method) -> (RegisterState, RegisterState) {
    let next = match (s, m) {
        (RegisterState::Blocked, _) => RegisterState::Blocked,
        (_, Method::SetTrue) => RegisterState::True,
        (_, Method::SetFalse) => RegisterState::False,
        (s, Method::Get) => s,
    };
    (next, next)
}

/// The use operator `t /_f H`.
pub fn use_service(t: &Arc<Thread>, f: Focus, h: ServiceValue) -> Arc<Thread> {
    fn go(
        t: &Arc<Thread>,
        f: Focus,
        h: ServiceValue,
        memo: &mut HashMap<(usize, ServiceValue), Arc<Thread>>,
    ) -> Arc<Thread> {
        let key = (Arc::as_ptr(t) as usize, h);
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let r = match &**t {
            Thread::Stop | Thread::Dead => t.clone(),
            Thread::Tau(x) => Thread::tau(go(x, f, h, memo)),
            Thread::PostCond(a, x, y) if a.focus() != Some(f) => Thread::post(*a, go(x, f, h, memo), go(y, f, h, memo)),
            Thread::PostCond(a, x, y) => {
                let BasicInstruction::RegisterOp { method, .. } = *a else { unreachable!() };
                match h.process(method) {
                    Some((true, next)) => Thread::tau(go(x, f, next, memo)),
                    Some((false, next)) => Thread::tau(go(y, f, next, memo)),
                    None => Thread::dead(),
                }
            }
        };
        memo.insert(key, r.clone());
        r
    }
    go(t, f, h.normalized(), &mut HashMap::new())
}

/// The apply operator `t •_f H`.
pub fn apply(t: &Arc<Thread>, f: Focus, h: ServiceValue) -> ServiceValue {
    let mut t = t.clone();
    let mut h = h.normalized();
    loop {
        let next = match &*t {
            Thread::Stop => return h,
            Thread::Dead => return ServiceValue::Divergent,
            Thread::Tau(x) => x.clone(),
            Thread::PostCond(a, x, y) => {
                let (Some(g), BasicInstruction::RegisterOp { method, .. }) = (a.focus(), *a) else {
                    return ServiceValue::Divergent;
                };
                if g != f {
                    return ServiceValue::Divergent;
                }
                match h.process(method) {
                    Some((reply, derived)) => {
                        h = derived;
                        if reply {
                            x.clone()
                        } else {
                            y.clone()
                        }
                    }
                    None => return ServiceValue::Divergent,
                }
            }
        };
        t = next;
    }
}

/// Register contents of a single run.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegisterFile {
    pub inputs: Vec<bool>,
    pub aux: BTreeMap<u32, bool>,
    pub out: bool,
}

impl RegisterFile {
    pub fn new(inputs: &[bool]) -> Self {
        RegisterFile { inputs: inputs.to_vec(), aux: BTreeMap::new(), out: false }
    }

    fn slot(&mut self, f: Focus) -> Option<&mut bool> {
        match f {
            Focus::In(i) => (i as usize).checked_sub(1).and_then(|j| self.inputs.get_mut(j)),
            Focus::Aux(i) => Some(self.aux.entry(i).or_insert(false)),
            Focus::Out => Some(&mut self.out),
        }
    }

    /// Perform `f.m`; `None` if no register is named `f`.
    pub fn perform(&mut self, f: Focus, m: Method) -> Option<bool> {
        let slot = self.slot(f)?;
        let (next, _) = register_step(RegisterState::from_bool(*slot), m);
        *slot = next == RegisterState::True;
        Some(*slot)
    }
}

impl fmt::Display for RegisterFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "out={}", tf(self.out))?;
        for (i, b) in &self.aux {
            write!(f, " aux:{i}={}", tf(*b))?;
        }
        for (i, b) in self.inputs.iter().enumerate() {
            write!(f, " in:{}={}", i + 1, tf(*b))?;
        }
        Ok(())
    }
}

pub(crate) fn tf(b: bool) -> char {
    if b {
        'T'
    } else {
        'F'
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Terminated(RegisterFile),
    Deadlocked,
    Divergent(String),
}

impl RunOutcome {
    pub fn output(&self) -> Option<bool> {
        match self {
            RunOutcome::Terminated(r) => Some(r.out),
            _ => None,
        }
    }

    /// The service left on `out`, as the apply operator would report it.
    pub fn as_service(&self) -> ServiceValue {
        match self {
            RunOutcome::Terminated(r) => ServiceValue::register(r.out),
            _ => ServiceValue::Divergent,
        }
    }
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Terminated(r) => write!(f, "TERMINATED out={}", tf(r.out)),
            RunOutcome::Deadlocked => f.write_str("DEADLOCK"),
            RunOutcome::Divergent(why) => write!(f, "DIVERGENT {why}"),
        }
    }
}

/// Run `x` and also report the number of instructions executed.
pub fn execute(x: &InstructionSequence, inputs: &[bool]) -> Result<(RunOutcome, usize)> {
    if let Some(u) =
        x.iter().find(|u| matches!(u.basic(), Some(BasicInstruction::Split(_) | BasicInstruction::Reply(_))))
    {
        return Err(Error::Precondition(format!("{u} needs the splitting executor")));
    }
    let items = x.items();
    let mut regs = RegisterFile::new(inputs);
    let mut pc = 0usize;
    let mut steps = 0usize;
    loop {
        let Some(&u) = items.get(pc) else { return Ok((RunOutcome::Deadlocked, steps)) };
        steps += 1;
        pc = match u {
            Instruction::Term => return Ok((RunOutcome::Terminated(regs), steps)),
            Instruction::Jump(0) => return Ok((RunOutcome::Deadlocked, steps)),
            Instruction::Jump(l) => pc.saturating_add(l as usize),
            Instruction::Plain(b) | Instruction::PosTest(b) | Instruction::NegTest(b) => {
                let BasicInstruction::RegisterOp { focus, method } = b else { unreachable!() };
                let Some(reply) = regs.perform(focus, method) else {
                    return Ok((RunOutcome::Divergent(format!("unserved focus {focus}")), steps));
                };
                let skip = match u {
                    Instruction::PosTest(_) => !reply,
                    Instruction::NegTest(_) => reply,
                    _ => false,
                };
                pc + if skip { 2 } else { 1 }
            }
        };
    }
}

pub fn run(x: &InstructionSequence, inputs: &[bool]) -> Result<RunOutcome> {
    execute(x, inputs).map(|(outcome, _)| outcome)
}

/// The compute pipeline evaluated literally on the extracted thread:
/// aux registers first, then inputs, then apply on `out`.
pub fn algebraic_run(x: &InstructionSequence, inputs: &[bool]) -> ServiceValue {
    let mut t = extract(x);
    for i in 1..=x.classify().max_aux_index {
        t = use_service(&t, Focus::Aux(i), ServiceValue::register(false));
    }
    for (i, &b) in inputs.iter().enumerate() {
        t = use_service(&t, Focus::In(i as u32 + 1), ServiceValue::register(b));
    }
    apply(&t, Focus::Out, ServiceValue::register(false))
}

pub fn check_computes(x: &InstructionSequence, f: &TruthTable) -> Result<bool> {
    if !x.classify().is_isbr {
        return Err(Error::Precondition("check_computes requires a sequence in ISbr".into()));
    }
    for (index, input) in f.inputs().enumerate() {
        if run(x, &input)?.output() != Some(f.value(index)) {
            return Ok(false);
        }
    }
    Ok(true)
}
