//! Seeded generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use inseq::compilers::{BoolFormula, Circuit, Cnf, Gate, Literal, Node};
use inseq::{BasicInstruction, Focus, Instruction, InstructionSequence, Method};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn wrap(rng: &mut StdRng, b: BasicInstruction) -> Instruction {
    match rng.gen_range(0..3) {
        0 => Instruction::Plain(b),
        1 => Instruction::PosTest(b),
        _ => Instruction::NegTest(b),
    }
}

fn control(rng: &mut StdRng, max_jump: u32) -> Instruction {
    if rng.gen_bool(0.5) {
        Instruction::Term
    } else {
        Instruction::Jump(rng.gen_range(0..=max_jump))
    }
}

/// A sequence in ISbr over `in:1..inputs` and `aux:1..aux`.
pub fn random_isbr(rng: &mut StdRng, max_len: usize, inputs: u32, aux: u32) -> InstructionSequence {
    let len = rng.gen_range(1..=max_len);
    let mut items = Vec::with_capacity(len);
    for _ in 0..len {
        let u = if rng.gen_bool(0.3) {
            control(rng, 4)
        } else {
            let b = match rng.gen_range(0..3) {
                0 if inputs > 0 => BasicInstruction::get(Focus::In(rng.gen_range(1..=inputs))),
                1 if aux > 0 => {
                    let method = [Method::Get, Method::SetTrue, Method::SetFalse][rng.gen_range(0..3)];
                    BasicInstruction::reg(Focus::Aux(rng.gen_range(1..=aux)), method)
                }
                _ => BasicInstruction::set(Focus::Out, rng.gen_bool(0.5)),
            };
            wrap(rng, b)
        };
        items.push(u);
    }
    InstructionSequence::new(items).unwrap()
}

/// A sequence in SISbr over `in:1..inputs` and parameters `1..params`.
pub fn random_sisbr(rng: &mut StdRng, max_len: usize, inputs: u32, params: u32) -> InstructionSequence {
    let len = rng.gen_range(1..=max_len);
    let mut items = Vec::with_capacity(len);
    for _ in 0..len {
        let u = if rng.gen_bool(0.3) {
            control(rng, 4)
        } else {
            let b = match rng.gen_range(0..4) {
                0 if inputs > 0 => BasicInstruction::get(Focus::In(rng.gen_range(1..=inputs))),
                1 => BasicInstruction::Split(rng.gen_range(1..=params)),
                2 => BasicInstruction::Reply(rng.gen_range(1..=params)),
                _ => BasicInstruction::set(Focus::Out, true),
            };
            wrap(rng, b)
        };
        items.push(u);
    }
    InstructionSequence::new(items).unwrap()
}

pub fn random_literal(rng: &mut StdRng, vars: u32) -> Literal {
    Literal { var: rng.gen_range(1..=vars), negated: rng.gen_bool(0.5) }
}

pub fn random_cnf(rng: &mut StdRng, vars: u32, max_clauses: usize) -> Cnf {
    let clauses = (0..rng.gen_range(0..=max_clauses))
        .map(|_| (0..rng.gen_range(1..=3)).map(|_| random_literal(rng, vars)).collect())
        .collect();
    Cnf::new(vars, clauses).unwrap()
}

/// A CNF whose clauses are distinct sets of 1 to 3 distinct literals.
pub fn random_3cnf(rng: &mut StdRng, vars: u32, max_clauses: usize) -> Cnf {
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    for _ in 0..rng.gen_range(0..=max_clauses) {
        let mut pool: Vec<Literal> = (1..=vars).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
        pool.shuffle(rng);
        let mut clause: Vec<Literal> = pool[..rng.gen_range(1..=3.min(pool.len()))].to_vec();
        clause.sort();
        if !clauses.contains(&clause) {
            clauses.push(clause);
        }
    }
    Cnf::new(vars, clauses).unwrap()
}

pub fn random_formula(rng: &mut StdRng, vars: u32, connectives: usize) -> BoolFormula {
    if connectives == 0 {
        return BoolFormula::var(rng.gen_range(1..=vars));
    }
    match rng.gen_range(0..3) {
        0 => BoolFormula::not(random_formula(rng, vars, connectives - 1)),
        op => {
            let left = rng.gen_range(0..connectives);
            let p = random_formula(rng, vars, left);
            let q = random_formula(rng, vars, connectives - 1 - left);
            if op == 1 {
                BoolFormula::or(p, q)
            } else {
                BoolFormula::and(p, q)
            }
        }
    }
}

/// An acyclic circuit with its gates numbered in a shuffled order.
pub fn random_circuit(rng: &mut StdRng, inputs: u32, gates: usize) -> Circuit {
    let mut label: Vec<usize> = (1..=gates).collect();
    label.shuffle(rng);
    let mut built: Vec<Gate> = Vec::with_capacity(gates);
    for g in 0..gates {
        let node = |rng: &mut StdRng| {
            let choice = rng.gen_range(0..inputs as usize + g);
            if choice < inputs as usize {
                Node::Input(choice as u32 + 1)
            } else {
                Node::Gate(label[choice - inputs as usize])
            }
        };
        built.push(match rng.gen_range(0..3) {
            0 => Gate::Not(node(rng)),
            1 => Gate::Or(node(rng), node(rng)),
            _ => Gate::And(node(rng), node(rng)),
        });
    }
    let mut numbered = built.clone();
    for (g, gate) in built.into_iter().enumerate() {
        numbered[label[g] - 1] = gate;
    }
    Circuit::new(inputs, numbered, label[gates - 1]).unwrap()
}

pub fn all_inputs(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << n).map(move |i| (0..n).map(|j| i >> (n - 1 - j) & 1 == 1).collect())
}

pub fn random_bits(rng: &mut StdRng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.gen_bool(0.5)).collect()
}

fn literal_code(l: &Literal) -> u32 {
    2 * l.var - 1 + l.negated as u32
}

/// All literal sets over `v1..vk` sorted by largest variable, size, then codes.
pub fn literal_sets_oracle(k: u32) -> Vec<Vec<Literal>> {
    let lits: Vec<Literal> = (1..=k).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
    let mut sets = Vec::new();
    for mask in 1u64..1 << lits.len() {
        if mask.count_ones() <= 3 {
            sets.push(lits.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| *l).collect::<Vec<_>>());
        }
    }
    sets.sort_by_key(|s: &Vec<Literal>| {
        let codes: Vec<u32> = s.iter().map(literal_code).collect();
        (s.iter().map(|l| l.var).max().unwrap(), s.len(), codes)
    });
    sets
}

/// 3SATC by direct enumeration of literal sets and assignments.
pub fn satc_oracle(bits: &[bool]) -> bool {
    let mut k = 0u32;
    while literal_sets_oracle(k + 1).len() <= bits.len() {
        k += 1;
    }
    let sets = literal_sets_oracle(k);
    let chosen: Vec<&Vec<Literal>> = sets.iter().zip(bits).filter(|(_, &b)| b).map(|(s, _)| s).collect();
    all_inputs(k as usize).any(|a| chosen.iter().all(|c| c.iter().any(|l| a[l.var as usize - 1] != l.negated)))
}

/// Direct interpreter for sequences in ISbr; `None` on deadlock.
pub fn interpret_oracle(x: &InstructionSequence, inputs: &[bool]) -> Option<bool> {
    use std::collections::HashMap;
    let mut aux: HashMap<u32, bool> = HashMap::new();
    let mut out = false;
    let mut pc = 0usize;
    loop {
        let u = *x.items().get(pc)?;
        let b = match u {
            Instruction::Term => return Some(out),
            Instruction::Jump(0) => return None,
            Instruction::Jump(l) => {
                pc += l as usize;
                continue;
            }
            Instruction::Plain(b) | Instruction::PosTest(b) | Instruction::NegTest(b) => b,
        };
        let reply = match b {
            BasicInstruction::RegisterOp { focus: Focus::In(j), method: Method::Get } => *inputs.get(j as usize - 1)?,
            BasicInstruction::RegisterOp { focus: Focus::Aux(j), method } => match method {
                Method::Get => *aux.get(&j).unwrap_or(&false),
                Method::SetTrue => *aux.entry(j).insert_entry(true).get(),
                Method::SetFalse => *aux.entry(j).insert_entry(false).get(),
            },
            BasicInstruction::RegisterOp { focus: Focus::Out, method } => match method {
                Method::Get => out,
                Method::SetTrue => {
                    out = true;
                    true
                }
                Method::SetFalse => {
                    out = false;
                    false
                }
            },
            _ => return None,
        };
        pc += match u {
            Instruction::PosTest(_) if !reply => 2,
            Instruction::NegTest(_) if reply => 2,
            _ => 1,
        };
    }
}

/// Thread extraction by literal recursion on the instruction positions.
pub fn extract_oracle(x: &InstructionSequence) -> std::sync::Arc<inseq::Thread> {
    use inseq::Thread;
    fn go(items: &[Instruction], i: usize) -> std::sync::Arc<Thread> {
        match items.get(i) {
            None => Thread::dead(),
            Some(Instruction::Term) => Thread::stop(),
            Some(Instruction::Jump(0)) => Thread::dead(),
            Some(Instruction::Jump(l)) => go(items, i + *l as usize),
            Some(Instruction::Plain(a)) => Thread::post(*a, go(items, i + 1), go(items, i + 1)),
            Some(Instruction::PosTest(a)) => Thread::post(*a, go(items, i + 1), go(items, i + 2)),
            Some(Instruction::NegTest(a)) => Thread::post(*a, go(items, i + 2), go(items, i + 1)),
        }
    }
    go(x.items(), 0)
}

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}
