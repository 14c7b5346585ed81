//! Split/reply semantics: parameter instantiation, cyclic interleaving with
//! thread splitting, and a queue-based executor for sequences in SISbr.
//!
//! The interleaving of even a few branches is far too large to build
//! eagerly, so [`Term`] represents `csi`, `std` and `use` lazily and
//! [`Term::head`] unfolds one axiom step at a time.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instr::{BasicInstruction, Focus, Instruction, InstructionSequence};
use crate::lab::TruthTable;
use crate::services::{RegisterFile, RunOutcome, ServiceValue};
use crate::threads::{extract, Thread};

pub type ThreadVector = Vec<Arc<Thread>>;

/// Parameter instantiation `inst(p, b, t)`.
pub fn instantiate(p: u32, b: bool, t: &Arc<Thread>) -> Arc<Thread> {
    fn go(p: u32, b: bool, t: &Arc<Thread>, memo: &mut HashMap<usize, Arc<Thread>>) -> Arc<Thread> {
        if let Some(r) = memo.get(&(Arc::as_ptr(t) as usize)) {
            return r.clone();
        }
        let r = match &**t {
            Thread::Stop | Thread::Dead => t.clone(),
            Thread::Tau(x) => Thread::tau(go(p, b, x, memo)),
            Thread::PostCond(BasicInstruction::Split(q), _, _) if *q == p => Thread::dead(),
            Thread::PostCond(BasicInstruction::Reply(q), x, y) if *q == p => {
                Thread::tau(go(p, b, if b { x } else { y }, memo))
            }
            Thread::PostCond(a, x, y) => Thread::post(*a, go(p, b, x, memo), go(p, b, y, memo)),
        };
        memo.insert(Arc::as_ptr(t) as usize, r.clone());
        r
    }
    go(p, b, t, &mut HashMap::new())
}

/// A lazily unfolded thread term.
#[derive(Debug, Clone)]
pub enum Term {
    Leaf(Arc<Thread>),
    Csi(ThreadVector),
    Std(Box<Term>),
    Use(Box<Term>, Focus, ServiceValue),
}

/// The outermost constructor of a term.
#[derive(Debug, Clone)]
pub enum Head {
    Stop,
    Dead,
    Tau(Term),
    PostCond(BasicInstruction, Term, Term),
}

fn appended(rest: &[Arc<Thread>], extra: &[Arc<Thread>]) -> Term {
    let mut v = rest.to_vec();
    v.extend_from_slice(extra);
    Term::Csi(v)
}

impl Term {
    pub fn csi(v: ThreadVector) -> Term {
        Term::Csi(v)
    }

    pub fn std(t: Term) -> Term {
        Term::Std(Box::new(t))
    }

    pub fn use_service(self, f: Focus, h: ServiceValue) -> Term {
        Term::Use(Box::new(self), f, h)
    }

    pub fn head(&self) -> Head {
        match self {
            Term::Leaf(t) => match &**t {
                Thread::Stop => Head::Stop,
                Thread::Dead => Head::Dead,
                Thread::Tau(x) => Head::Tau(Term::Leaf(x.clone())),
                Thread::PostCond(a, x, y) => Head::PostCond(*a, Term::Leaf(x.clone()), Term::Leaf(y.clone())),
            },
            Term::Csi(v) => csi_head(v),
            Term::Std(t) => std_head(t),
            Term::Use(t, f, h) => use_head(t, *f, *h),
        }
    }

    /// Build the whole thread. Exponential in general; meant for small terms.
    pub fn materialize(&self) -> Arc<Thread> {
        match self.head() {
            Head::Stop => Thread::stop(),
            Head::Dead => Thread::dead(),
            Head::Tau(x) => Thread::tau(x.materialize()),
            Head::PostCond(a, x, y) => Thread::post(a, x.materialize(), y.materialize()),
        }
    }
}

fn csi_head(v: &[Arc<Thread>]) -> Head {
    let mut v = v;
    loop {
        let Some((first, rest)) = v.split_first() else { return Head::Stop };
        return match &**first {
            Thread::Stop => {
                v = rest;
                continue;
            }
            Thread::Dead => std_head(&Term::Csi(rest.to_vec())),
            Thread::Tau(x) => Head::Tau(appended(rest, std::slice::from_ref(x))),
            Thread::PostCond(BasicInstruction::Split(p), x, y) => {
                Head::Tau(appended(rest, &[instantiate(*p, true, x), instantiate(*p, false, y)]))
            }
            Thread::PostCond(BasicInstruction::Reply(_), _, _) => std_head(&Term::Csi(rest.to_vec())),
            Thread::PostCond(a, x, y) => {
                Head::PostCond(*a, appended(rest, std::slice::from_ref(x)), appended(rest, std::slice::from_ref(y)))
            }
        };
    }
}

fn std_head(t: &Term) -> Head {
    match t.head() {
        Head::Stop | Head::Dead => Head::Dead,
        Head::Tau(x) => Head::Tau(Term::std(x)),
        Head::PostCond(a, x, y) => Head::PostCond(a, Term::std(x), Term::std(y)),
    }
}

fn use_head(t: &Term, f: Focus, h: ServiceValue) -> Head {
    match t.head() {
        Head::Stop => Head::Stop,
        Head::Dead => Head::Dead,
        Head::Tau(x) => Head::Tau(x.use_service(f, h)),
        Head::PostCond(a, x, y) if a.focus() != Some(f) => Head::PostCond(a, x.use_service(f, h), y.use_service(f, h)),
        Head::PostCond(a, x, y) => {
            let BasicInstruction::RegisterOp { method, .. } = a else { unreachable!() };
            match h.process(method) {
                Some((true, next)) => Head::Tau(x.use_service(f, next)),
                Some((false, next)) => Head::Tau(y.use_service(f, next)),
                None => Head::Dead,
            }
        }
    }
}

/// The apply operator on a lazy term.
pub fn apply_term(t: Term, f: Focus, h: ServiceValue) -> ServiceValue {
    let mut t = t;
    let mut h = h;
    loop {
        t = match t.head() {
            Head::Stop => return h,
            Head::Dead => return ServiceValue::Divergent,
            Head::Tau(x) => x,
            Head::PostCond(a, x, y) => {
                let (Some(g), BasicInstruction::RegisterOp { method, .. }) = (a.focus(), a) else {
                    return ServiceValue::Divergent;
                };
                if g != f {
                    return ServiceValue::Divergent;
                }
                match h.process(method) {
                    Some((reply, derived)) => {
                        h = derived;
                        if reply {
                            x
                        } else {
                            y
                        }
                    }
                    None => return ServiceValue::Divergent,
                }
            }
        };
    }
}

/// Cyclic interleaving with thread splitting, built eagerly.
pub fn csi(v: ThreadVector) -> Arc<Thread> {
    Term::Csi(v).materialize()
}

/// The splitting-compute pipeline evaluated on the axioms.
pub fn algebraic_run_splitting(x: &InstructionSequence, inputs: &[bool]) -> ServiceValue {
    let mut t = Term::Csi(vec![extract(x)]);
    for i in 1..=x.classify().max_aux_index {
        t = t.use_service(Focus::Aux(i), ServiceValue::register(false));
    }
    for (i, &b) in inputs.iter().enumerate() {
        t = t.use_service(Focus::In(i as u32 + 1), ServiceValue::register(b));
    }
    apply_term(t, Focus::Out, ServiceValue::register(false))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchState {
    /// 0-based position of the next instruction.
    pub pc: usize,
    pub valuation: BTreeMap<u32, bool>,
}

/// Queue executor without a class check; aux registers are shared by all
/// branches. Returns the outcome and the number of instructions processed.
pub fn execute_splitting(x: &InstructionSequence, inputs: &[bool]) -> Result<(RunOutcome, usize)> {
    let items = x.items();
    let splits = items.iter().filter(|u| matches!(u.basic(), Some(BasicInstruction::Split(_)))).count() as u32;
    let budget =
        1usize.checked_shl(splits).unwrap_or(usize::MAX).saturating_mul(items.len()).saturating_add(items.len());
    let mut regs = RegisterFile::new(inputs);
    let mut queue = VecDeque::from([BranchState { pc: 0, valuation: BTreeMap::new() }]);
    let mut dead = false;
    let mut steps = 0usize;
    while let Some(mut branch) = queue.pop_front() {
        loop {
            steps += 1;
            if steps > budget {
                return Err(Error::ResourceLimit(format!("splitting executor exceeded {budget} steps")));
            }
            match items.get(branch.pc) {
                Some(Instruction::Jump(l)) if *l > 0 => branch.pc = branch.pc.saturating_add(*l as usize),
                _ => break,
            }
        }
        let u = match items.get(branch.pc) {
            None | Some(Instruction::Jump(_)) => {
                dead = true;
                continue;
            }
            Some(Instruction::Term) => continue,
            Some(&u) => u,
        };
        let b = u.basic().expect("basic instruction");
        // Successor positions after a true or false reply.
        let (on_true, on_false) = match u {
            Instruction::PosTest(_) => (branch.pc + 1, branch.pc + 2),
            Instruction::NegTest(_) => (branch.pc + 2, branch.pc + 1),
            _ => (branch.pc + 1, branch.pc + 1),
        };
        match b {
            BasicInstruction::RegisterOp { focus, method } => {
                let Some(reply) = regs.perform(focus, method) else {
                    return Ok((RunOutcome::Divergent(format!("unserved focus {focus}")), steps));
                };
                branch.pc = if reply { on_true } else { on_false };
                queue.push_back(branch);
            }
            BasicInstruction::Split(p) => {
                if branch.valuation.contains_key(&p) {
                    dead = true;
                    continue;
                }
                for (value, pc) in [(true, on_true), (false, on_false)] {
                    let mut valuation = branch.valuation.clone();
                    valuation.insert(p, value);
                    queue.push_back(BranchState { pc, valuation });
                }
            }
            BasicInstruction::Reply(p) => match branch.valuation.get(&p) {
                Some(&value) => {
                    branch.pc = if value { on_true } else { on_false };
                    queue.push_back(branch);
                }
                None => dead = true,
            },
        }
    }
    let outcome = if dead { RunOutcome::Deadlocked } else { RunOutcome::Terminated(regs) };
    Ok((outcome, steps))
}

pub fn run_splitting(x: &InstructionSequence, inputs: &[bool]) -> Result<RunOutcome> {
    if !x.classify().is_sisbr {
        return Err(Error::Precondition("run_splitting requires a sequence in SISbr".into()));
    }
    execute_splitting(x, inputs).map(|(outcome, _)| outcome)
}

pub fn check_splitting_computes(x: &InstructionSequence, f: &TruthTable) -> Result<bool> {
    if !x.classify().is_sisbr {
        return Err(Error::Precondition("check_splitting_computes requires a sequence in SISbr".into()));
    }
    for (index, input) in f.inputs().enumerate() {
        if run_splitting(x, &input)?.output() != Some(f.value(index)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instr::parse;

    fn seq(s: &str) -> InstructionSequence {
        parse(s).unwrap()
    }

    fn act(focus: Focus) -> BasicInstruction {
        BasicInstruction::set(focus, true)
    }

    #[test]
    fn instantiate_examples() {
        let p = Thread::stop();
        let q = Thread::dead();
        let reply = Thread::post(BasicInstruction::Reply(1), p.clone(), q.clone());
        assert_eq!(*instantiate(1, true, &reply), *Thread::tau(p.clone()));
        assert_eq!(*instantiate(1, false, &reply), *Thread::tau(q.clone()));
        assert_eq!(*instantiate(2, true, &reply), *reply);
        let split = Thread::post(BasicInstruction::Split(1), p.clone(), q.clone());
        assert_eq!(*instantiate(1, true, &split), Thread::Dead);
        assert_eq!(*instantiate(1, true, &Thread::stop()), Thread::Stop);
    }

    #[test]
    fn csi_examples() {
        assert_eq!(*csi(vec![]), Thread::Stop);
        let a = act(Focus::Aux(1));
        let b = act(Focus::Aux(2));
        let ta = Thread::prefix(a, Thread::stop());
        let tb = Thread::prefix(b, Thread::stop());
        assert_eq!(*csi(vec![Thread::stop(), ta.clone()]), *csi(vec![ta.clone()]));
        let expected = Thread::prefix(a, Thread::prefix(b, Thread::stop()));
        assert_eq!(*csi(vec![ta.clone(), tb]), *expected);
        assert_eq!(*csi(vec![Thread::dead(), ta.clone()]), *Thread::prefix(a, Thread::dead()));
    }

    #[test]
    fn csi_split_and_reply() {
        let t = extract(&seq("+split:1 ; ! ; out.set:T ; !"));
        let expected = Thread::tau(Thread::prefix(act(Focus::Out), Thread::stop()));
        assert_eq!(*csi(vec![t]), *expected);
        let t = extract(&seq("reply:1 ; !"));
        assert_eq!(*csi(vec![t]), Thread::Dead);
    }

    #[test]
    fn run_splitting_examples() {
        let r = run_splitting(&seq("+split:1 ; ! ; out.set:T ; !"), &[]).unwrap();
        assert_eq!(r.output(), Some(true));
        assert_eq!(run_splitting(&seq("reply:1 ; !"), &[]).unwrap(), RunOutcome::Deadlocked);
        assert_eq!(run_splitting(&seq("out.set:T ; !"), &[]).unwrap().output(), Some(true));
        assert_eq!(run_splitting(&seq("split:1 ; split:1 ; !"), &[]).unwrap(), RunOutcome::Deadlocked);
        assert!(run_splitting(&seq("aux:1.set:T ; !"), &[]).is_err());
        assert!(matches!(run_splitting(&seq("in:1.get ; !"), &[]).unwrap(), RunOutcome::Divergent(_)));
    }

    #[test]
    fn replies_follow_the_valuation() {
        let x = seq("split:1 ; +reply:1 ; out.set:T ; !");
        assert_eq!(run_splitting(&x, &[]).unwrap().output(), Some(true));
        let x = seq("split:1 ; -split:2 ; ! ; -reply:1 ; #2 ; +reply:2 ; out.set:T ; !");
        assert_eq!(run_splitting(&x, &[]).unwrap().output(), Some(true));
    }

    #[test]
    fn algebra_matches_executor_on_examples() {
        for text in [
            "+split:1 ; ! ; out.set:T ; !",
            "reply:1 ; !",
            "split:1 ; +reply:1 ; out.set:T ; !",
            "split:1 ; -reply:1 ; +in:1.get ; out.set:T ; !",
            "split:1 ; split:1 ; out.set:T ; !",
            "-split:2 ; #0 ; out.set:T ; !",
        ] {
            let x = seq(text);
            for inputs in [[false], [true]] {
                let ours = run_splitting(&x, &inputs).unwrap().as_service();
                assert_eq!(ours, algebraic_run_splitting(&x, &inputs), "{text}");
            }
        }
    }

    #[test]
    fn check_splitting_computes_examples() {
        let x = seq("+split:1 ; ! ; out.set:T ; !");
        assert!(check_splitting_computes(&x, &TruthTable::constant(0, true)).unwrap());
        assert!(check_splitting_computes(&seq("!"), &TruthTable::constant(2, false)).unwrap());
        assert!(!check_splitting_computes(&seq("reply:1 ; !"), &TruthTable::constant(0, false)).unwrap());
    }
}
