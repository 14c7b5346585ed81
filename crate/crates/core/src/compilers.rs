//! CNF formulas, basic Boolean formulas and circuits, with their
//! evaluators, text formats and compilers to instruction sequences.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::instr::{BasicInstruction, Focus, Instruction, InstructionSequence};
use crate::lab::TruthTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, negated: true }
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        lookup(assignment, self.var).map(|b| b != self.negated)
    }

    /// Signed DIMACS form.
    pub fn to_dimacs(&self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬v{}", self.var)
        } else {
            write!(f, "v{}", self.var)
        }
    }
}

fn lookup(assignment: &[bool], var: u32) -> Result<bool> {
    match (var as usize).checked_sub(1).and_then(|i| assignment.get(i)) {
        Some(&b) => Ok(b),
        None => Err(Error::UnboundVariable(var)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for (index, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::EmptyClause(index));
            }
            if let Some(l) = clause.iter().find(|l| l.var == 0 || l.var > num_vars) {
                return Err(Error::InvalidClause { index, reason: format!("variable {} out of range", l.var) });
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        for clause in &self.clauses {
            let mut sat = false;
            for l in clause {
                sat |= l.eval(assignment)?;
            }
            if !sat {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::try_from_fn(self.num_vars as usize, |b| self.eval(b))
    }

    pub fn is_satisfiable(&self) -> Result<bool> {
        Ok(self.truth_table()?.values().iter().any(|&b| b))
    }

    /// Parse the DIMACS `p cnf` format; `c` lines are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            if trimmed.starts_with('p') {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                let parsed = match fields.as_slice() {
                    ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or_else(|| Error::Syntax {
                    position: start,
                    message: "expected 'p cnf <vars> <clauses>'".into(),
                })?);
                continue;
            }
            if header.is_none() {
                return Err(Error::Syntax { position: start, message: "clause before the problem line".into() });
            }
            for token in trimmed.split_whitespace() {
                let n: i64 = token.parse().map_err(|_| Error::Syntax {
                    position: start,
                    message: format!("expected an integer literal, found {token:?}"),
                })?;
                if n == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    let var = u32::try_from(n.unsigned_abs()).map_err(|_| Error::Syntax {
                        position: start,
                        message: format!("variable {n} out of range"),
                    })?;
                    current.push(Literal { var, negated: n < 0 });
                }
            }
        }
        let (num_vars, count) = header.ok_or(Error::Syntax { position: 0, message: "missing problem line".into() })?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(Error::Precondition(format!("header declares {count} clauses, found {}", clauses.len())));
        }
        Cnf::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for l in clause {
                s.push_str(&format!("{} ", l.to_dimacs()));
            }
            s.push_str("0\n");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolFormula {
    Var(u32),
    Not(Box<BoolFormula>),
    Or(Box<BoolFormula>, Box<BoolFormula>),
    And(Box<BoolFormula>, Box<BoolFormula>),
}

impl BoolFormula {
    pub fn var(k: u32) -> Self {
        BoolFormula::Var(k)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: BoolFormula) -> Self {
        BoolFormula::Not(Box::new(p))
    }

    pub fn or(p: BoolFormula, q: BoolFormula) -> Self {
        BoolFormula::Or(Box::new(p), Box::new(q))
    }

    pub fn and(p: BoolFormula, q: BoolFormula) -> Self {
        BoolFormula::And(Box::new(p), Box::new(q))
    }

    /// `(a ∨ ¬b) ∧ (¬a ∨ b)`.
    pub fn iff(a: BoolFormula, b: BoolFormula) -> Self {
        BoolFormula::and(
            BoolFormula::or(a.clone(), BoolFormula::not(b.clone())),
            BoolFormula::or(BoolFormula::not(a), b),
        )
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        Ok(match self {
            BoolFormula::Var(k) => lookup(assignment, *k)?,
            BoolFormula::Not(p) => !p.eval(assignment)?,
            BoolFormula::Or(p, q) => p.eval(assignment)? | q.eval(assignment)?,
            BoolFormula::And(p, q) => p.eval(assignment)? & q.eval(assignment)?,
        })
    }

    pub fn max_var(&self) -> u32 {
        match self {
            BoolFormula::Var(k) => *k,
            BoolFormula::Not(p) => p.max_var(),
            BoolFormula::Or(p, q) | BoolFormula::And(p, q) => p.max_var().max(q.max_var()),
        }
    }

    /// Number of connectives.
    pub fn connectives(&self) -> usize {
        match self {
            BoolFormula::Var(_) => 0,
            BoolFormula::Not(p) => 1 + p.connectives(),
            BoolFormula::Or(p, q) | BoolFormula::And(p, q) => 1 + p.connectives() + q.connectives(),
        }
    }

    pub fn truth_table(&self, arity: usize) -> Result<TruthTable> {
        TruthTable::try_from_fn(arity, |b| self.eval(b))
    }

    /// Satisfiability over `v1..v_max`, by exhaustive search.
    pub fn is_satisfiable(&self) -> Result<bool> {
        Ok(self.truth_table(self.max_var() as usize)?.values().iter().any(|&b| b))
    }

    /// Parse an s-expression such as `(and (or v1 (not v2)) v2)`.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let f = parse_sexp(&tokens, &mut pos)?;
        if let Some((at, tok)) = tokens.get(pos) {
            return Err(Error::Syntax { position: *at, message: format!("unexpected {tok:?}") });
        }
        Ok(f)
    }
}

impl fmt::Display for BoolFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolFormula::Var(k) => write!(f, "v{k}"),
            BoolFormula::Not(p) => write!(f, "(not {p})"),
            BoolFormula::Or(p, q) => write!(f, "(or {p} {q})"),
            BoolFormula::And(p, q) => write!(f, "(and {p} {q})"),
        }
    }
}

fn tokenize(text: &str) -> Vec<(usize, String)> {
    let mut tokens = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            tokens.extend(current.take());
            if !c.is_whitespace() {
                tokens.push((i, c.to_string()));
            }
        } else {
            current.get_or_insert_with(|| (i, String::new())).1.push(c);
        }
    }
    tokens.extend(current);
    tokens
}

fn parse_sexp(tokens: &[(usize, String)], pos: &mut usize) -> Result<BoolFormula> {
    let end = tokens.last().map_or(0, |(i, t)| i + t.len());
    let Some((at, tok)) = tokens.get(*pos) else {
        return Err(Error::Syntax { position: end, message: "unexpected end of formula".into() });
    };
    *pos += 1;
    if tok != "(" {
        let k = tok.strip_prefix('v').and_then(|d| d.parse::<u32>().ok()).filter(|&k| k >= 1).ok_or_else(|| {
            Error::Syntax { position: *at, message: format!("expected a variable v<k>, found {tok:?}") }
        })?;
        return Ok(BoolFormula::Var(k));
    }
    let Some((op_at, op)) = tokens.get(*pos) else {
        return Err(Error::Syntax { position: end, message: "missing operator".into() });
    };
    *pos += 1;
    let arity = match op.as_str() {
        "not" => 1,
        "or" | "and" => 2,
        _ => return Err(Error::Syntax { position: *op_at, message: format!("unknown operator {op:?}") }),
    };
    let mut args = Vec::new();
    for _ in 0..arity {
        args.push(parse_sexp(tokens, pos)?);
    }
    match tokens.get(*pos) {
        Some((_, t)) if t == ")" => *pos += 1,
        Some((i, t)) => return Err(Error::Syntax { position: *i, message: format!("expected ')', found {t:?}") }),
        None => return Err(Error::Syntax { position: end, message: "missing ')'".into() }),
    }
    let mut args = args.into_iter();
    let p = args.next().unwrap();
    Ok(match op.as_str() {
        "not" => BoolFormula::not(p),
        "or" => BoolFormula::or(p, args.next().unwrap()),
        _ => BoolFormula::and(p, args.next().unwrap()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Input(u32),
    /// 1-based gate index.
    Gate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Not(Node),
    Or(Node, Node),
    And(Node, Node),
}

impl Gate {
    pub fn preds(&self) -> Vec<Node> {
        match *self {
            Gate::Not(p) => vec![p],
            Gate::Or(p, q) | Gate::And(p, q) => vec![p, q],
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Input(j) => write!(f, "in{j}"),
            Node::Gate(k) => write!(f, "g{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub num_inputs: u32,
    pub gates: Vec<Gate>,
    /// 1-based gate index.
    pub output_gate: usize,
}

impl Circuit {
    pub fn new(num_inputs: u32, gates: Vec<Gate>, output_gate: usize) -> Result<Self> {
        let c = Circuit { num_inputs, gates, output_gate };
        c.topological_order()?;
        Ok(c)
    }

    fn check_nodes(&self) -> Result<()> {
        if self.output_gate == 0 || self.output_gate > self.gates.len() {
            return Err(Error::Precondition(format!("output gate g{} does not exist", self.output_gate)));
        }
        for (k, g) in self.gates.iter().enumerate() {
            for p in g.preds() {
                let ok = match p {
                    Node::Input(j) => j >= 1 && j <= self.num_inputs,
                    Node::Gate(j) => j >= 1 && j <= self.gates.len(),
                };
                if !ok {
                    return Err(Error::DanglingPredecessor { gate: k + 1, node: p.to_string() });
                }
            }
        }
        Ok(())
    }

    /// Gate indices in a topological order, least index first among ready gates.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        self.check_nodes()?;
        let m = self.gates.len();
        let mut pending: Vec<usize> =
            self.gates.iter().map(|g| g.preds().iter().filter(|p| matches!(p, Node::Gate(_))).count()).collect();
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); m + 1];
        for (k, g) in self.gates.iter().enumerate() {
            for p in g.preds() {
                if let Node::Gate(j) = p {
                    users[j].push(k + 1);
                }
            }
        }
        let mut ready: std::collections::BTreeSet<usize> = (1..=m).filter(|&k| pending[k - 1] == 0).collect();
        let mut order = Vec::with_capacity(m);
        while let Some(k) = ready.pop_first() {
            order.push(k);
            for &u in &users[k] {
                pending[u - 1] -= 1;
                if pending[u - 1] == 0 {
                    ready.insert(u);
                }
            }
        }
        if order.len() < m {
            let stuck = (1..=m).find(|&k| pending[k - 1] > 0).unwrap_or(1);
            return Err(Error::CyclicCircuit(stuck));
        }
        Ok(order)
    }

    pub fn eval(&self, assignment: &[bool]) -> Result<bool> {
        let order = self.topological_order()?;
        let mut value = vec![false; self.gates.len() + 1];
        let node = |n: Node, value: &[bool]| match n {
            Node::Input(j) => lookup(assignment, j),
            Node::Gate(k) => Ok(value[k]),
        };
        for k in order {
            value[k] = match self.gates[k - 1] {
                Gate::Not(p) => !node(p, &value)?,
                Gate::Or(p, q) => node(p, &value)? | node(q, &value)?,
                Gate::And(p, q) => node(p, &value)? & node(q, &value)?,
            };
        }
        Ok(value[self.output_gate])
    }

    pub fn truth_table(&self) -> Result<TruthTable> {
        TruthTable::try_from_fn(self.num_inputs as usize, |b| self.eval(b))
    }

    /// Parse netlist lines `g<k> = NOT|OR|AND <node> [<node>]` and a final
    /// `output g<m>`; `#` starts a comment. The input count is the largest
    /// input index mentioned, or an optional `inputs <n>` line if larger.
    pub fn parse(text: &str) -> Result<Self> {
        let mut gates: BTreeMap<usize, Gate> = BTreeMap::new();
        let mut output = None;
        let mut num_inputs = 0;
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let at = offset;
            offset += line.len();
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| Error::Syntax { position: at, message };
            let node = |s: &str| -> Result<Node> {
                let parsed = if let Some(d) = s.strip_prefix("in") {
                    d.parse().ok().filter(|&j| j >= 1).map(Node::Input)
                } else if let Some(d) = s.strip_prefix('g') {
                    d.parse().ok().filter(|&k| k >= 1).map(Node::Gate)
                } else {
                    None
                };
                parsed.ok_or_else(|| err(format!("expected in<j> or g<k>, found {s:?}")))
            };
            let words: Vec<&str> = content.split_whitespace().collect();
            if words[0] == "inputs" {
                match words.as_slice() {
                    [_, n] => {
                        num_inputs = num_inputs.max(n.parse().map_err(|_| err(format!("bad input count {n:?}")))?)
                    }
                    _ => return Err(err("expected 'inputs <n>'".into())),
                }
                continue;
            }
            if words[0] == "output" {
                match words.as_slice() {
                    [_, g] => match node(g)? {
                        Node::Gate(k) => output = Some(k),
                        Node::Input(_) => return Err(err("output must name a gate".into())),
                    },
                    _ => return Err(err("expected 'output g<m>'".into())),
                }
                continue;
            }
            let Some(Node::Gate(k)) = node(words[0]).ok() else {
                return Err(err(format!("expected a gate name, found {:?}", words[0])));
            };
            let gate = match words.as_slice() {
                [_, "=", "NOT", p] => Gate::Not(node(p)?),
                [_, "=", "OR", p, q] => Gate::Or(node(p)?, node(q)?),
                [_, "=", "AND", p, q] => Gate::And(node(p)?, node(q)?),
                _ => return Err(err(format!("malformed gate line {content:?}"))),
            };
            for p in gate.preds() {
                if let Node::Input(j) = p {
                    num_inputs = num_inputs.max(j);
                }
            }
            if gates.insert(k, gate).is_some() {
                return Err(err(format!("gate g{k} defined twice")));
            }
        }
        let output = output.ok_or(Error::Syntax { position: offset, message: "missing 'output' line".into() })?;
        let m = gates.len();
        if let Some(&k) = gates.keys().find(|&&k| k > m) {
            return Err(Error::Precondition(format!("gates must be numbered g1..g{m}, found g{k}")));
        }
        Circuit::new(num_inputs, gates.into_values().collect(), output)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mentioned = self
            .gates
            .iter()
            .flat_map(Gate::preds)
            .filter_map(|p| match p {
                Node::Input(j) => Some(j),
                Node::Gate(_) => None,
            })
            .max()
            .unwrap_or(0);
        if self.num_inputs > mentioned {
            writeln!(f, "inputs {}", self.num_inputs)?;
        }
        for (k, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Not(p) => writeln!(f, "g{} = NOT {p}", k + 1)?,
                Gate::Or(p, q) => writeln!(f, "g{} = OR {p} {q}", k + 1)?,
                Gate::And(p, q) => writeln!(f, "g{} = AND {p} {q}", k + 1)?,
            }
        }
        write!(f, "output g{}", self.output_gate)
    }
}

fn pos(b: BasicInstruction) -> Instruction {
    Instruction::PosTest(b)
}

fn get(f: Focus) -> Instruction {
    pos(BasicInstruction::get(f))
}

fn set_true(f: Focus) -> Instruction {
    pos(BasicInstruction::set(f, true))
}

fn true_tail() -> [Instruction; 2] {
    [set_true(Focus::Out), Instruction::Term]
}

fn build(items: Vec<Instruction>) -> InstructionSequence {
    InstructionSequence::new(items).expect("compiled sequences end with a termination instruction")
}

/// Each literal tests its input and jumps on success; a clause whose tests
/// all fail writes `F` and stops.
pub fn compile_cnf(phi: &Cnf) -> Result<InstructionSequence> {
    let mut items = Vec::new();
    for (index, clause) in phi.clauses.iter().enumerate() {
        if clause.is_empty() {
            return Err(Error::EmptyClause(index));
        }
        for l in clause {
            let b = BasicInstruction::get(Focus::In(l.var));
            items.push(if l.negated { Instruction::NegTest(b) } else { pos(b) });
            items.push(Instruction::Jump(2));
        }
        items.extend([pos(BasicInstruction::set(Focus::Out, false)), Instruction::Jump(2), Instruction::Term]);
    }
    items.extend(true_tail());
    Ok(build(items))
}

pub fn compile_cnf_jumpfree(phi: &Cnf) -> Result<InstructionSequence> {
    let items = compile_cnf(phi)?.into_items();
    let set_false = pos(BasicInstruction::set(Focus::Out, false));
    let mut out = Vec::with_capacity(items.len());
    let mut i = 0;
    while i < items.len() {
        if items[i..].starts_with(&[set_false, Instruction::Jump(2), Instruction::Term]) {
            out.push(Instruction::Term);
            i += 3;
            continue;
        }
        out.push(if items[i] == Instruction::Jump(2) { set_false } else { items[i] });
        i += 1;
    }
    Ok(build(out))
}

fn compile_formula_body(phi: &BoolFormula, items: &mut Vec<Instruction>) {
    match phi {
        BoolFormula::Var(k) => items.push(get(Focus::In(*k))),
        BoolFormula::Not(p) => {
            compile_formula_body(p, items);
            items.push(Instruction::Jump(2));
        }
        BoolFormula::Or(p, q) => {
            compile_formula_body(p, items);
            let mut rest = Vec::new();
            compile_formula_body(q, &mut rest);
            items.push(Instruction::Jump(rest.len() as u32 + 1));
            items.extend(rest);
        }
        BoolFormula::And(p, q) => {
            compile_formula_body(p, items);
            let mut rest = Vec::new();
            compile_formula_body(q, &mut rest);
            items.push(Instruction::Jump(2));
            items.push(Instruction::Jump(rest.len() as u32 + 2));
            items.extend(rest);
        }
    }
}

/// The body length `L(φ)`; the compiled sequence has length `L(φ) + 2`.
pub fn formula_body_length(phi: &BoolFormula) -> usize {
    match phi {
        BoolFormula::Var(_) => 1,
        BoolFormula::Not(p) => formula_body_length(p) + 1,
        BoolFormula::Or(p, q) => formula_body_length(p) + formula_body_length(q) + 1,
        BoolFormula::And(p, q) => formula_body_length(p) + formula_body_length(q) + 2,
    }
}

pub fn compile_formula(phi: &BoolFormula) -> InstructionSequence {
    let mut items = Vec::new();
    compile_formula_body(phi, &mut items);
    items.extend(true_tail());
    build(items)
}

/// Gate `k` of the sorted circuit leaves its value in `aux:k`.
pub fn compile_circuit(c: &Circuit) -> Result<InstructionSequence> {
    let order = c.topological_order()?;
    let mut slot = vec![0u32; c.gates.len() + 1];
    for (position, &k) in order.iter().enumerate() {
        slot[k] = position as u32 + 1;
    }
    let test = |n: Node| match n {
        Node::Input(j) => get(Focus::In(j)),
        Node::Gate(k) => get(Focus::Aux(slot[k])),
    };
    let mut items = Vec::new();
    for &k in &order {
        match c.gates[k - 1] {
            Gate::Not(p) => items.extend([test(p), Instruction::Jump(2)]),
            Gate::Or(p, q) => items.extend([test(p), Instruction::Jump(2), test(q)]),
            Gate::And(p, q) => items.extend([test(p), Instruction::Jump(2), Instruction::Jump(3), test(q)]),
        }
        items.push(set_true(Focus::Aux(slot[k])));
    }
    items.push(get(Focus::Aux(slot[c.output_gate])));
    items.extend(true_tail());
    Ok(build(items))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::services::check_computes;

    fn example_cnf() -> Cnf {
        Cnf::new(2, vec![vec![Literal::pos(1), Literal::neg(2)], vec![Literal::pos(2)]]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert!(BoolFormula::var(1).eval(&[true]).unwrap());
        let contradiction = BoolFormula::and(BoolFormula::var(1), BoolFormula::not(BoolFormula::var(1)));
        assert!(!contradiction.eval(&[true]).unwrap());
        assert!(!contradiction.eval(&[false]).unwrap());
        assert!(Cnf::new(3, vec![]).unwrap().eval(&[false, true, false]).unwrap());
        assert_eq!(BoolFormula::var(3).eval(&[true]), Err(Error::UnboundVariable(3)));
    }

    #[test]
    fn cnf_compiles_as_unfolded() {
        let x = compile_cnf(&example_cnf()).unwrap();
        assert_eq!(
            x.render(),
            "+in:1.get ; #2 ; -in:2.get ; #2 ; +out.set:F ; #2 ; ! ; +in:2.get ; #2 ; +out.set:F ; #2 ; ! ; +out.set:T ; !"
        );
        assert_eq!(x.psize(), 14);
        assert!(check_computes(&x, &example_cnf().truth_table().unwrap()).unwrap());
        assert_eq!(compile_cnf(&Cnf::new(0, vec![]).unwrap()).unwrap().render(), "+out.set:T ; !");
        assert_eq!(compile_cnf(&Cnf { num_vars: 1, clauses: vec![vec![]] }), Err(Error::EmptyClause(0)));
    }

    #[test]
    fn jumpfree_cnf() {
        let single = Cnf::new(1, vec![vec![Literal::pos(1)]]).unwrap();
        assert_eq!(compile_cnf_jumpfree(&single).unwrap().render(), "+in:1.get ; +out.set:F ; ! ; +out.set:T ; !");
        let x = compile_cnf_jumpfree(&example_cnf()).unwrap();
        assert_eq!(x.jump_count(), 0);
        assert!(check_computes(&x, &example_cnf().truth_table().unwrap()).unwrap());
    }

    #[test]
    fn formula_examples() {
        let v = BoolFormula::var;
        assert_eq!(compile_formula(&BoolFormula::not(v(1))).render(), "+in:1.get ; #2 ; +out.set:T ; !");
        assert_eq!(
            compile_formula(&BoolFormula::or(v(1), v(2))).render(),
            "+in:1.get ; #2 ; +in:2.get ; +out.set:T ; !"
        );
        assert_eq!(
            compile_formula(&BoolFormula::and(v(1), v(2))).render(),
            "+in:1.get ; #2 ; #3 ; +in:2.get ; +out.set:T ; !"
        );
    }

    #[test]
    fn circuit_examples() {
        let not = Circuit::new(1, vec![Gate::Not(Node::Input(1))], 1).unwrap();
        assert_eq!(
            compile_circuit(&not).unwrap().render(),
            "+in:1.get ; #2 ; +aux:1.set:T ; +aux:1.get ; +out.set:T ; !"
        );
        let and = Circuit::new(2, vec![Gate::And(Node::Input(1), Node::Input(2))], 1).unwrap();
        assert_eq!(
            compile_circuit(&and).unwrap().render(),
            "+in:1.get ; #2 ; #3 ; +in:2.get ; +aux:1.set:T ; +aux:1.get ; +out.set:T ; !"
        );
        let shared =
            Circuit::new(2, vec![Gate::Not(Node::Input(1)), Gate::Or(Node::Gate(1), Node::Gate(1))], 2).unwrap();
        let x = compile_circuit(&shared).unwrap();
        assert_eq!(x.psize(), 3 + 4 + 3);
        assert!(check_computes(&x, &TruthTable::from_fn(2, |b| !b[0])).unwrap());
    }

    #[test]
    fn circuit_errors() {
        let cyclic =
            Circuit { num_inputs: 1, gates: vec![Gate::Not(Node::Gate(2)), Gate::Not(Node::Gate(1))], output_gate: 1 };
        assert!(matches!(cyclic.topological_order(), Err(Error::CyclicCircuit(_))));
        let dangling = Circuit { num_inputs: 1, gates: vec![Gate::Not(Node::Input(2))], output_gate: 1 };
        assert!(matches!(compile_circuit(&dangling), Err(Error::DanglingPredecessor { gate: 1, .. })));
    }

    #[test]
    fn unsorted_circuit_is_sorted() {
        let c = Circuit::new(2, vec![Gate::And(Node::Gate(2), Node::Input(2)), Gate::Not(Node::Input(1))], 1).unwrap();
        assert_eq!(c.topological_order().unwrap(), vec![2, 1]);
        let x = compile_circuit(&c).unwrap();
        assert!(check_computes(&x, &c.truth_table().unwrap()).unwrap());
    }

    #[test]
    fn text_formats_round_trip() {
        let cnf = Cnf::parse_dimacs("c example\np cnf 2 2\n1 -2 0\n2 0\n").unwrap();
        assert_eq!(cnf, example_cnf());
        assert_eq!(Cnf::parse_dimacs(&cnf.to_dimacs()).unwrap(), cnf);
        let f = BoolFormula::parse("(and (or v1 (not v2)) v2)").unwrap();
        assert_eq!(f.to_string(), "(and (or v1 (not v2)) v2)");
        assert!(BoolFormula::parse("(xor v1 v2)").is_err());
        assert!(BoolFormula::parse("(not v1").is_err());
        let c = Circuit::parse("g1 = NOT in1\ng2 = OR g1 in2\noutput g2\n").unwrap();
        assert_eq!(Circuit::parse(&c.to_string()).unwrap(), c);
        assert_eq!(c.num_inputs, 2);
    }
}
