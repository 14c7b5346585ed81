//! The 3SATC encoding of 3-CNF instances as bit vectors, its reductions,
//! the splitting sequences computing it, and the reachability reduction.

use std::collections::BTreeSet;
use std::fmt;

use crate::compilers::{compile_formula, BoolFormula, Cnf, Literal};
use crate::error::{Error, Result};
use crate::instr::{BasicInstruction, Focus, Instruction, InstructionSequence};
use crate::lab::{truth_table, TruthTable};

/// Largest variable count `satc_eval` will brute-force.
pub const SATC_MAX_VARS: u32 = 20;

/// Number of nonempty literal sets of size at most 3 over `k` variables.
pub fn ndisj(k: u64) -> u64 {
    let m = 2 * k;
    m + m * m.saturating_sub(1) / 2 + m * m.saturating_sub(1) * m.saturating_sub(2) / 6
}

/// Largest `k` with `ndisj(k) <= n`.
pub fn satc_k(n: usize) -> u32 {
    let mut k = 0;
    while ndisj(k + 1) <= n as u64 {
        k += 1;
    }
    k as u32
}

fn code(l: Literal) -> u32 {
    2 * l.var - 1 + l.negated as u32
}

fn from_code(c: u32) -> Literal {
    Literal { var: c.div_ceil(2), negated: c.is_multiple_of(2) }
}

/// A nonempty set of at most three distinct literals, kept in code order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LiteralSet(Vec<Literal>);

impl LiteralSet {
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut v: Vec<Literal> = literals.into_iter().collect();
        if v.iter().any(|l| l.var == 0) {
            return Err(Error::InvalidClause { index: 0, reason: "variable indices start at 1".into() });
        }
        v.sort_by_key(|&l| code(l));
        let before = v.len();
        v.dedup();
        if v.len() != before {
            return Err(Error::InvalidClause { index: 0, reason: "repeated literal".into() });
        }
        if v.is_empty() || v.len() > 3 {
            return Err(Error::InvalidClause { index: 0, reason: format!("{} literals, expected 1 to 3", v.len()) });
        }
        Ok(LiteralSet(v))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().map(|l| l.var).max().unwrap_or(0)
    }

    fn codes(&self) -> Vec<u32> {
        self.0.iter().map(|&l| code(l)).collect()
    }
}

impl fmt::Display for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

/// The literal sets whose largest variable is `m`, in block order.
fn block(m: u32) -> Vec<Vec<u32>> {
    let (lo, hi) = (2 * m - 1, 2 * m);
    let mut out: Vec<Vec<u32>> = (lo..=hi).map(|c| vec![c]).collect();
    for a in 1..hi {
        for b in lo.max(a + 1)..=hi {
            out.push(vec![a, b]);
        }
    }
    for a in 1..hi {
        for b in a + 1..hi {
            for c in lo.max(b + 1)..=hi {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

/// The `i`-th literal set, 1-based.
pub fn alpha(i: u64) -> Result<LiteralSet> {
    if i == 0 {
        return Err(Error::Precondition("alpha is indexed from 1".into()));
    }
    let mut m = 1;
    while ndisj(m) < i {
        m += 1;
    }
    let codes = &block(m as u32)[(i - ndisj(m - 1) - 1) as usize];
    Ok(LiteralSet(codes.iter().map(|&c| from_code(c)).collect()))
}

pub fn alpha_rank(l: &LiteralSet) -> u64 {
    let m = l.max_var();
    let codes = l.codes();
    let offset = block(m).iter().position(|c| *c == codes).expect("every literal set occurs in its block");
    ndisj(m as u64 - 1) + offset as u64 + 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatcInstance {
    pub bits: Vec<bool>,
}

impl SatcInstance {
    pub fn new(bits: Vec<bool>) -> Self {
        SatcInstance { bits }
    }

    pub fn k(&self) -> u32 {
        satc_k(self.bits.len())
    }

    pub fn eval(&self) -> Result<bool> {
        satc_eval(&self.bits)
    }
}

/// The CNF selected by the bits; bits past `ndisj(k)` are ignored.
pub fn decode_to_cnf(bits: &[bool]) -> Cnf {
    let k = satc_k(bits.len());
    let clauses =
        (1..=ndisj(k as u64)).filter(|&i| bits[i as usize - 1]).map(|i| alpha(i).expect("i >= 1").0).collect();
    Cnf::new(k, clauses).expect("alpha stays within v1..vk")
}

pub fn satc_eval(bits: &[bool]) -> Result<bool> {
    let k = satc_k(bits.len());
    if k > SATC_MAX_VARS {
        return Err(Error::ResourceLimit(format!("{k} variables exceed the limit of {SATC_MAX_VARS}")));
    }
    let cnf = decode_to_cnf(bits);
    let mut assignment = vec![false; k as usize];
    for index in 0u64..1 << k {
        for (j, b) in assignment.iter_mut().enumerate() {
            *b = index >> (k as usize - 1 - j) & 1 == 1;
        }
        if cnf.eval(&assignment)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The shortest bit string decoding to the clauses of `phi`.
pub fn encode_cnf(phi: &Cnf) -> Result<Vec<bool>> {
    let mut ranks = BTreeSet::new();
    let mut k = 0;
    for (index, clause) in phi.clauses.iter().enumerate() {
        let set = LiteralSet::new(clause.iter().copied()).map_err(|e| match e {
            Error::InvalidClause { reason, .. } => Error::InvalidClause { index, reason },
            other => other,
        })?;
        k = k.max(set.max_var());
        if !ranks.insert(alpha_rank(&set)) {
            return Err(Error::InvalidClause { index, reason: "duplicates an earlier clause".into() });
        }
    }
    let mut bits = vec![false; ndisj(k as u64) as usize];
    for r in ranks {
        bits[r as usize - 1] = true;
    }
    Ok(bits)
}

fn clause_formula(set: &LiteralSet) -> BoolFormula {
    let lit = |l: &Literal| if l.negated { BoolFormula::not(BoolFormula::var(l.var)) } else { BoolFormula::var(l.var) };
    let mut it = set.literals().iter();
    let first = lit(it.next().expect("literal sets are nonempty"));
    it.fold(first, |acc, l| BoolFormula::or(acc, lit(l)))
}

/// The selector formula over `v1..vk` (guessed assignment) and
/// `v(k+1)..v(k+ndisj(k))` (clause selectors).
pub fn satc_selector_formula(k: u32) -> Option<BoolFormula> {
    (1..=ndisj(k as u64))
        .map(|i| {
            let selector = BoolFormula::not(BoolFormula::var(k + i as u32));
            BoolFormula::or(selector, clause_formula(&alpha(i).expect("i >= 1")))
        })
        .reduce(BoolFormula::and)
}

/// A splitting sequence computing 3SATC on `n` inputs: split on every
/// variable, then check the selected clauses against the replies.
pub fn build_satc_splitter(n: usize) -> Result<InstructionSequence> {
    let k = satc_k(n);
    if k > SATC_MAX_VARS {
        return Err(Error::ResourceLimit(format!("{k} variables exceed the limit of {SATC_MAX_VARS}")));
    }
    let Some(psi) = satc_selector_formula(k) else {
        return InstructionSequence::parse("+out.set:T ; !");
    };
    let remap = |b: BasicInstruction| match b {
        BasicInstruction::RegisterOp { focus: Focus::In(j), .. } if j <= k => BasicInstruction::Reply(j),
        BasicInstruction::RegisterOp { focus: Focus::In(j), method } => {
            BasicInstruction::RegisterOp { focus: Focus::In(j - k), method }
        }
        other => other,
    };
    let mut items: Vec<Instruction> = (1..=k).map(|p| Instruction::Plain(BasicInstruction::Split(p))).collect();
    items.extend(compile_formula(&psi).into_iter().map(|u| u.map_basic(remap)));
    InstructionSequence::new(items)
}

/// Positions (1-based) that may run right after position `i`.
fn successors(x: &InstructionSequence, inputs: &[bool], i: usize) -> Vec<usize> {
    let u = x.items()[i - 1];
    let reply = |b: BasicInstruction| -> Vec<bool> {
        match b {
            BasicInstruction::RegisterOp { focus: Focus::In(j), .. } => {
                match (j as usize).checked_sub(1).and_then(|j| inputs.get(j)) {
                    Some(&v) => vec![v],
                    None => vec![],
                }
            }
            BasicInstruction::Split(_) | BasicInstruction::Reply(_) => vec![true, false],
            other => other.fixed_reply().map_or(vec![true, false], |v| vec![v]),
        }
    };
    let targets: Vec<usize> = match u {
        Instruction::Term | Instruction::Jump(0) => vec![],
        Instruction::Jump(l) => vec![i + l as usize],
        Instruction::Plain(b) => reply(b).into_iter().map(|_| i + 1).collect(),
        Instruction::PosTest(b) => reply(b).into_iter().map(|v| if v { i + 1 } else { i + 2 }).collect(),
        Instruction::NegTest(b) => reply(b).into_iter().map(|v| if v { i + 2 } else { i + 1 }).collect(),
    };
    let mut targets: Vec<usize> = targets.into_iter().filter(|&t| t <= x.psize()).collect();
    targets.dedup();
    targets
}

/// `v1 ∧ vl ∧ ⋀ (v_i ⟺ ⋁ B(i))`, where `l` is the position of
/// `out.set:T` and `B(i)` the positions that may continue at `i`.
pub fn reachability_formula(x: &InstructionSequence, inputs: &[bool]) -> Result<BoolFormula> {
    if !x.classify().is_sisbr {
        return Err(Error::Precondition("reachability_formula requires a sequence in SISbr".into()));
    }
    let out_true = BasicInstruction::set(Focus::Out, true);
    let exits: Vec<usize> = (1..=x.psize()).filter(|&i| x.items()[i - 1].basic() == Some(out_true)).collect();
    let [l] = exits[..] else {
        return Err(Error::Precondition(format!("out.set:T must occur exactly once, found {}", exits.len())));
    };
    let k = x.psize();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); k + 1];
    for j in 1..=k {
        for t in successors(x, inputs, j) {
            preds[t].push(j);
        }
    }
    let v = |i: usize| BoolFormula::var(i as u32);
    let mut phi = BoolFormula::and(v(1), v(l));
    for (i, b) in preds.iter().enumerate().skip(2) {
        let reach = b.iter().map(|&j| v(j)).reduce(BoolFormula::or);
        let conjunct = match reach {
            Some(r) => BoolFormula::iff(v(i), r),
            None => BoolFormula::not(v(i)),
        };
        phi = BoolFormula::and(phi, conjunct);
    }
    Ok(phi)
}

/// Whether `f(b) = g(h1(b), ..., hm(b))` with each `hi` computed by a
/// helper of length at most `l`.
pub fn check_length_reduction(
    f: &TruthTable,
    g: &TruthTable,
    helpers: &[InstructionSequence],
    l: usize,
) -> Result<bool> {
    if helpers.len() != g.arity() {
        return Err(Error::ArityMismatch { expected: g.arity(), found: helpers.len() });
    }
    let mut tables = Vec::with_capacity(helpers.len());
    for x in helpers {
        if x.psize() > l || !x.classify().is_isbr {
            return Ok(false);
        }
        match truth_table(x, f.arity(), false)?.total() {
            Some(t) => tables.push(t),
            None => return Ok(false),
        }
    }
    Ok(f.inputs().enumerate().all(|(index, _)| {
        let h: Vec<bool> = tables.iter().map(|t| t.value(index)).collect();
        f.value(index) == g.eval(&h)
    }))
}
