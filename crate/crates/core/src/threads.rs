//! Finite threads, thread extraction and the explicit-substitution variant.
//!
//! Threads are stored as DAGs behind `Arc`, so extraction is linear in the
//! length of the sequence even when the unfolded tree is exponential.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::instr::{BasicInstruction, Instruction, InstructionSequence};

#[derive(Debug, Clone)]
pub enum Thread {
    Stop,
    Dead,
    Tau(Arc<Thread>),
    PostCond(BasicInstruction, Arc<Thread>, Arc<Thread>),
}

#[derive(Debug, Clone)]
pub enum XThread {
    Stop,
    Dead,
    Tau(Arc<XThread>),
    PostCond(BasicInstruction, Arc<XThread>, Arc<XThread>),
    Var(u32),
    /// `Subst(v, p, q)` is `[p/x_v] q`.
    Subst(u32, Arc<XThread>, Arc<XThread>),
}

fn key<T>(t: &Arc<T>) -> usize {
    Arc::as_ptr(t) as usize
}

impl Thread {
    pub fn stop() -> Arc<Thread> {
        Arc::new(Thread::Stop)
    }

    pub fn dead() -> Arc<Thread> {
        Arc::new(Thread::Dead)
    }

    pub fn tau(next: Arc<Thread>) -> Arc<Thread> {
        Arc::new(Thread::Tau(next))
    }

    pub fn post(a: BasicInstruction, on_true: Arc<Thread>, on_false: Arc<Thread>) -> Arc<Thread> {
        Arc::new(Thread::PostCond(a, on_true, on_false))
    }

    /// `a ∘ t`, i.e. `t ◁ a ▷ t`.
    pub fn prefix(a: BasicInstruction, next: Arc<Thread>) -> Arc<Thread> {
        Thread::post(a, next.clone(), next)
    }

    /// Number of nodes of the unfolded tree (Tau counted as a node with one child).
    pub fn tree_size(self: &Arc<Self>) -> u128 {
        fn go(t: &Arc<Thread>, memo: &mut HashMap<usize, u128>) -> u128 {
            if let Some(&n) = memo.get(&key(t)) {
                return n;
            }
            let n = match &**t {
                Thread::Stop | Thread::Dead => 1,
                Thread::Tau(x) => 1 + go(x, memo),
                Thread::PostCond(_, x, y) => (1 + go(x, memo)).saturating_add(go(y, memo)),
            };
            memo.insert(key(t), n);
            n
        }
        go(self, &mut HashMap::new())
    }

    /// Number of distinct shared nodes.
    pub fn dag_size(self: &Arc<Self>) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            if !seen.insert(key(&t)) {
                continue;
            }
            match &*t {
                Thread::Tau(x) => stack.push(x.clone()),
                Thread::PostCond(_, x, y) => {
                    stack.push(x.clone());
                    stack.push(y.clone());
                }
                _ => {}
            }
        }
        seen.len()
    }

    pub fn to_xthread(self: &Arc<Self>) -> Arc<XThread> {
        fn go(t: &Arc<Thread>, memo: &mut HashMap<usize, Arc<XThread>>) -> Arc<XThread> {
            if let Some(x) = memo.get(&key(t)) {
                return x.clone();
            }
            let x = Arc::new(match &**t {
                Thread::Stop => XThread::Stop,
                Thread::Dead => XThread::Dead,
                Thread::Tau(n) => XThread::Tau(go(n, memo)),
                Thread::PostCond(a, p, q) => XThread::PostCond(*a, go(p, memo), go(q, memo)),
            });
            memo.insert(key(t), x.clone());
            x
        }
        go(self, &mut HashMap::new())
    }
}

fn thread_eq(a: &Arc<Thread>, b: &Arc<Thread>, memo: &mut HashSet<(usize, usize)>) -> bool {
    if Arc::ptr_eq(a, b) || memo.contains(&(key(a), key(b))) {
        return true;
    }
    let equal = match (&**a, &**b) {
        (Thread::Stop, Thread::Stop) | (Thread::Dead, Thread::Dead) => true,
        (Thread::Tau(x), Thread::Tau(y)) => thread_eq(x, y, memo),
        (Thread::PostCond(a1, x1, y1), Thread::PostCond(a2, x2, y2)) => {
            a1 == a2 && thread_eq(x1, x2, memo) && thread_eq(y1, y2, memo)
        }
        _ => false,
    };
    if equal {
        memo.insert((key(a), key(b)));
    }
    equal
}

impl PartialEq for Thread {
    fn eq(&self, other: &Thread) -> bool {
        let mut memo = HashSet::new();
        match (self, other) {
            (Thread::Stop, Thread::Stop) | (Thread::Dead, Thread::Dead) => true,
            (Thread::Tau(x), Thread::Tau(y)) => thread_eq(x, y, &mut memo),
            (Thread::PostCond(a1, x1, y1), Thread::PostCond(a2, x2, y2)) => {
                a1 == a2 && thread_eq(x1, x2, &mut memo) && thread_eq(y1, y2, &mut memo)
            }
            _ => false,
        }
    }
}

impl Eq for Thread {}

impl fmt::Display for Thread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Thread::Stop => f.write_str("S"),
            Thread::Dead => f.write_str("D"),
            Thread::Tau(x) => write!(f, "tau . {x}"),
            Thread::PostCond(a, x, y) => write!(f, "({a} ? {x} : {y})"),
        }
    }
}

impl fmt::Display for XThread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XThread::Stop => f.write_str("S"),
            XThread::Dead => f.write_str("D"),
            XThread::Tau(x) => write!(f, "tau . {x}"),
            XThread::PostCond(a, x, y) => write!(f, "({a} ? {x} : {y})"),
            XThread::Var(i) => write!(f, "x{i}"),
            XThread::Subst(v, p, q) => write!(f, "[{p}/x{v}] {q}"),
        }
    }
}

/// Thread extraction.
pub fn extract(x: &InstructionSequence) -> Arc<Thread> {
    let items = x.items();
    let k = items.len();
    // thr[i] is the thread of the suffix starting at 0-based position i;
    // positions at or past the end deadlock.
    let dead = Thread::dead();
    let mut thr: Vec<Arc<Thread>> = vec![dead.clone(); k + 1];
    let at = |thr: &Vec<Arc<Thread>>, i: usize| if i <= k { thr[i].clone() } else { dead.clone() };
    for i in (0..k).rev() {
        thr[i] = match items[i] {
            Instruction::Term => Thread::stop(),
            Instruction::Jump(0) => dead.clone(),
            Instruction::Jump(l) => at(&thr, i.saturating_add(l as usize)),
            Instruction::Plain(a) => Thread::prefix(a, at(&thr, i + 1)),
            Instruction::PosTest(a) => Thread::post(a, at(&thr, i + 1), at(&thr, i + 2)),
            Instruction::NegTest(a) => Thread::post(a, at(&thr, i + 2), at(&thr, i + 1)),
        };
    }
    thr[0].clone()
}

impl XThread {
    pub fn var(i: u32) -> Arc<XThread> {
        Arc::new(XThread::Var(i))
    }

    pub fn subst(v: u32, bound: Arc<XThread>, body: Arc<XThread>) -> Arc<XThread> {
        Arc::new(XThread::Subst(v, bound, body))
    }

    pub fn post(a: BasicInstruction, on_true: Arc<XThread>, on_false: Arc<XThread>) -> Arc<XThread> {
        Arc::new(XThread::PostCond(a, on_true, on_false))
    }
}

fn rho_prime(i: u32, u: Instruction) -> Arc<XThread> {
    match u {
        Instruction::Term => Arc::new(XThread::Stop),
        Instruction::Jump(0) => Arc::new(XThread::Dead),
        Instruction::Jump(l) => XThread::var(i.saturating_add(l)),
        Instruction::Plain(a) => {
            let next = XThread::var(i + 1);
            XThread::post(a, next.clone(), next)
        }
        Instruction::PosTest(a) => XThread::post(a, XThread::var(i + 1), XThread::var(i + 2)),
        Instruction::NegTest(a) => XThread::post(a, XThread::var(i + 2), XThread::var(i + 1)),
    }
}

fn single(u: Instruction) -> Arc<XThread> {
    let seq = InstructionSequence::new(vec![u]).expect("one instruction");
    extract(&seq).to_xthread()
}

/// Linear-size extraction with explicit substitution.
pub fn extract_compact(x: &InstructionSequence) -> Arc<XThread> {
    let items = x.items();
    let last = items.len() as u32;
    if last == 1 {
        return single(items[0]);
    }
    let mut body = XThread::var(1);
    for (i, &u) in items[..items.len() - 1].iter().enumerate() {
        let i = i as u32 + 1;
        body = XThread::subst(i, rho_prime(i, u), body);
    }
    XThread::subst(last, single(items[items.len() - 1]), body)
}

pub fn tsize(t: &Arc<XThread>) -> u128 {
    fn go(t: &Arc<XThread>, memo: &mut HashMap<usize, u128>) -> u128 {
        if let Some(&n) = memo.get(&key(t)) {
            return n;
        }
        let n = match &**t {
            XThread::Stop | XThread::Dead | XThread::Var(_) => 1,
            XThread::Tau(x) => 2u128.saturating_mul(go(x, memo)).saturating_add(1),
            XThread::PostCond(_, x, y) | XThread::Subst(_, x, y) => {
                go(x, memo).saturating_add(go(y, memo)).saturating_add(1)
            }
        };
        memo.insert(key(t), n);
        n
    }
    go(t, &mut HashMap::new())
}

/// `[p/x_v] q` for a substitution-free `q`.
fn substitute(q: &Arc<XThread>, v: u32, p: &Arc<XThread>, memo: &mut HashMap<usize, Arc<XThread>>) -> Arc<XThread> {
    if let Some(r) = memo.get(&key(q)) {
        return r.clone();
    }
    let r = match &**q {
        XThread::Var(w) if *w == v => p.clone(),
        XThread::Var(_) | XThread::Stop | XThread::Dead => q.clone(),
        XThread::Tau(x) => Arc::new(XThread::Tau(substitute(x, v, p, memo))),
        XThread::PostCond(a, x, y) => XThread::post(*a, substitute(x, v, p, memo), substitute(y, v, p, memo)),
        XThread::Subst(..) => unreachable!("substitute expects a binder-free term"),
    };
    memo.insert(key(q), r.clone());
    r
}

/// Eliminate all binders, leaving free variables in place.
fn eliminate_binders(t: &Arc<XThread>, memo: &mut HashMap<usize, Arc<XThread>>) -> Arc<XThread> {
    if let Some(r) = memo.get(&key(t)) {
        return r.clone();
    }
    let r = match &**t {
        XThread::Stop | XThread::Dead | XThread::Var(_) => t.clone(),
        XThread::Tau(x) => Arc::new(XThread::Tau(eliminate_binders(x, memo))),
        XThread::PostCond(a, x, y) => XThread::post(*a, eliminate_binders(x, memo), eliminate_binders(y, memo)),
        XThread::Subst(v, p, q) => {
            let body = eliminate_binders(q, memo);
            let bound = eliminate_binders(p, memo);
            substitute(&body, *v, &bound, &mut HashMap::new())
        }
    };
    memo.insert(key(t), r.clone());
    r
}

/// Apply the substitution axioms exhaustively; free variables become `Dead`.
pub fn eval_xthread(t: &Arc<XThread>) -> Arc<Thread> {
    fn close(t: &Arc<XThread>, memo: &mut HashMap<usize, Arc<Thread>>) -> Arc<Thread> {
        if let Some(r) = memo.get(&key(t)) {
            return r.clone();
        }
        let r = match &**t {
            XThread::Stop => Thread::stop(),
            XThread::Dead | XThread::Var(_) => Thread::dead(),
            XThread::Tau(x) => Thread::tau(close(x, memo)),
            XThread::PostCond(a, x, y) => Thread::post(*a, close(x, memo), close(y, memo)),
            XThread::Subst(..) => unreachable!("binders eliminated before closing"),
        };
        memo.insert(key(t), r.clone());
        r
    }
    let open = eliminate_binders(t, &mut HashMap::new());
    close(&open, &mut HashMap::new())
}
