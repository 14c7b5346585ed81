//! Primitive instructions, finite instruction sequences and their text format.
//!
//! Text grammar (whitespace-insensitive, items separated by `;`):
//!
//! ```text
//! instr  := '!' | '#' NAT | [ '+' | '-' ] basic
//! basic  := focus '.' method | 'split:' NAT | 'reply:' NAT
//! focus  := 'in:' NAT | 'aux:' NAT | 'out'
//! method := 'get' | 'set:T' | 'set:F'
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Name of a Boolean register service.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Focus {
    In(u32),
    Aux(u32),
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Get,
    SetTrue,
    SetFalse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicInstruction {
    RegisterOp { focus: Focus, method: Method },
    Split(u32),
    Reply(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instruction {
    Plain(BasicInstruction),
    PosTest(BasicInstruction),
    NegTest(BasicInstruction),
    Jump(u32),
    Term,
}

/// A nonempty finite sequence of primitive instructions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InstructionSequence(Vec<Instruction>);

impl Method {
    pub fn set(value: bool) -> Method {
        if value {
            Method::SetTrue
        } else {
            Method::SetFalse
        }
    }
}

impl BasicInstruction {
    pub fn reg(focus: Focus, method: Method) -> Self {
        BasicInstruction::RegisterOp { focus, method }
    }

    pub fn get(focus: Focus) -> Self {
        Self::reg(focus, Method::Get)
    }

    pub fn set(focus: Focus, value: bool) -> Self {
        Self::reg(focus, Method::set(value))
    }

    pub fn focus(&self) -> Option<Focus> {
        match *self {
            BasicInstruction::RegisterOp { focus, .. } => Some(focus),
            _ => None,
        }
    }

    /// The reply this instruction produces regardless of register contents,
    /// if there is one (`set:T` always answers true, `set:F` false).
    pub fn fixed_reply(&self) -> Option<bool> {
        match *self {
            BasicInstruction::RegisterOp { method: Method::SetTrue, .. } => Some(true),
            BasicInstruction::RegisterOp { method: Method::SetFalse, .. } => Some(false),
            _ => None,
        }
    }

    pub fn with_focus(self, focus: Focus) -> Self {
        match self {
            BasicInstruction::RegisterOp { method, .. } => BasicInstruction::RegisterOp { focus, method },
            other => other,
        }
    }
}

impl Instruction {
    pub fn basic(&self) -> Option<BasicInstruction> {
        match *self {
            Instruction::Plain(b) | Instruction::PosTest(b) | Instruction::NegTest(b) => Some(b),
            _ => None,
        }
    }

    pub fn is_test(&self) -> bool {
        matches!(self, Instruction::PosTest(_) | Instruction::NegTest(_))
    }

    /// Replace the basic instruction, keeping the plain/test form.
    pub fn map_basic(self, f: impl FnOnce(BasicInstruction) -> BasicInstruction) -> Self {
        match self {
            Instruction::Plain(b) => Instruction::Plain(f(b)),
            Instruction::PosTest(b) => Instruction::PosTest(f(b)),
            Instruction::NegTest(b) => Instruction::NegTest(f(b)),
            other => other,
        }
    }

    /// Swap `+a` and `-a`; other instructions are returned unchanged.
    pub fn flipped(self) -> Self {
        match self {
            Instruction::PosTest(b) => Instruction::NegTest(b),
            Instruction::NegTest(b) => Instruction::PosTest(b),
            other => other,
        }
    }

    /// Whether execution can skip the following instruction.
    pub fn can_skip(&self) -> bool {
        match *self {
            Instruction::PosTest(b) => b.fixed_reply() != Some(true),
            Instruction::NegTest(b) => b.fixed_reply() != Some(false),
            _ => false,
        }
    }
}

impl InstructionSequence {
    pub fn new(items: Vec<Instruction>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(InstructionSequence(items))
    }

    /// Length of the sequence.
    pub fn psize(&self) -> usize {
        self.0.len()
    }

    pub fn items(&self) -> &[Instruction] {
        &self.0
    }

    pub fn into_items(self) -> Vec<Instruction> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Instruction> {
        self.0.iter()
    }

    pub fn concat(&self, other: &InstructionSequence) -> InstructionSequence {
        let mut items = self.0.clone();
        items.extend_from_slice(&other.0);
        InstructionSequence(items)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse(text)
    }

    pub fn jump_count(&self) -> usize {
        self.0.iter().filter(|u| matches!(u, Instruction::Jump(_))).count()
    }

    pub fn classify(&self) -> ClassProfile {
        classify(self)
    }
}

impl<'a> IntoIterator for &'a InstructionSequence {
    type Item = &'a Instruction;
    type IntoIter = std::slice::Iter<'a, Instruction>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Focus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Focus::In(i) => write!(f, "in:{i}"),
            Focus::Aux(i) => write!(f, "aux:{i}"),
            Focus::Out => write!(f, "out"),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Get => "get",
            Method::SetTrue => "set:T",
            Method::SetFalse => "set:F",
        })
    }
}

impl fmt::Display for BasicInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicInstruction::RegisterOp { focus, method } => write!(f, "{focus}.{method}"),
            BasicInstruction::Split(p) => write!(f, "split:{p}"),
            BasicInstruction::Reply(p) => write!(f, "reply:{p}"),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Plain(b) => write!(f, "{b}"),
            Instruction::PosTest(b) => write!(f, "+{b}"),
            Instruction::NegTest(b) => write!(f, "-{b}"),
            Instruction::Jump(l) => write!(f, "#{l}"),
            Instruction::Term => f.write_str("!"),
        }
    }
}

impl fmt::Display for InstructionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            write!(f, "{u}")?;
        }
        Ok(())
    }
}

impl FromStr for InstructionSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl FromStr for Instruction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        parse_instruction(&compact, 0)
    }
}

/// Parse the textual form of an instruction sequence.
pub fn parse(text: &str) -> Result<InstructionSequence> {
    if text.trim().is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut items = Vec::new();
    let mut offset = 0;
    for chunk in text.split(';') {
        let start = offset + (chunk.len() - chunk.trim_start().len());
        let compact: String = chunk.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Syntax { position: start, message: "missing instruction".into() });
        }
        items.push(parse_instruction(&compact, start)?);
        offset += chunk.len() + 1;
    }
    InstructionSequence::new(items)
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax { position, message: message.into() }
}

fn parse_nat(text: &str, position: usize) -> Result<u32> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(position, format!("expected a natural number, found {text:?}")));
    }
    text.parse().map_err(|_| syntax(position, format!("number {text} is too large")))
}

fn parse_index(text: &str, position: usize) -> Result<u32> {
    match parse_nat(text, position)? {
        0 => Err(syntax(position, "index must be at least 1")),
        n => Ok(n),
    }
}

fn parse_instruction(item: &str, position: usize) -> Result<Instruction> {
    if item == "!" {
        return Ok(Instruction::Term);
    }
    if let Some(rest) = item.strip_prefix('#') {
        return Ok(Instruction::Jump(parse_nat(rest, position + 1)?));
    }
    if let Some(rest) = item.strip_prefix('+') {
        return Ok(Instruction::PosTest(parse_basic(rest, position + 1)?));
    }
    if let Some(rest) = item.strip_prefix('-') {
        return Ok(Instruction::NegTest(parse_basic(rest, position + 1)?));
    }
    Ok(Instruction::Plain(parse_basic(item, position)?))
}

fn parse_basic(text: &str, position: usize) -> Result<BasicInstruction> {
    if let Some(rest) = text.strip_prefix("split:") {
        return Ok(BasicInstruction::Split(parse_index(rest, position + 6)?));
    }
    if let Some(rest) = text.strip_prefix("reply:") {
        return Ok(BasicInstruction::Reply(parse_index(rest, position + 6)?));
    }
    let (focus_text, method_text) =
        text.split_once('.').ok_or_else(|| syntax(position, format!("expected focus.method, found {text:?}")))?;
    let focus = if focus_text == "out" {
        Focus::Out
    } else if let Some(rest) = focus_text.strip_prefix("in:") {
        Focus::In(parse_index(rest, position + 3)?)
    } else if let Some(rest) = focus_text.strip_prefix("aux:") {
        Focus::Aux(parse_index(rest, position + 4)?)
    } else {
        return Err(syntax(position, format!("unknown focus {focus_text:?}")));
    };
    let method_pos = position + focus_text.len() + 1;
    let method = match method_text {
        "get" => Method::Get,
        "set:T" => Method::SetTrue,
        "set:F" => Method::SetFalse,
        other => return Err(syntax(method_pos, format!("unknown method {other:?}"))),
    };
    Ok(BasicInstruction::RegisterOp { focus, method })
}

/// Syntactic membership of a sequence in the instruction-sequence classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassProfile {
    pub is_isbr: bool,
    pub is_isbrna: bool,
    pub is_sisbr: bool,
    pub max_jump: u32,
    pub max_aux_index: u32,
    pub max_input_index: u32,
    pub max_param_index: u32,
    pub term_count: usize,
    pub has_out_set_false: bool,
}

pub fn classify(seq: &InstructionSequence) -> ClassProfile {
    let mut p = ClassProfile { is_isbr: true, is_isbrna: true, is_sisbr: true, ..Default::default() };
    for u in seq {
        match *u {
            Instruction::Term => p.term_count += 1,
            Instruction::Jump(l) => p.max_jump = p.max_jump.max(l),
            _ => {}
        }
        let Some(b) = u.basic() else { continue };
        let (isbr, isbrna, sisbr) = match b {
            BasicInstruction::Split(q) | BasicInstruction::Reply(q) => {
                p.max_param_index = p.max_param_index.max(q);
                (false, false, true)
            }
            BasicInstruction::RegisterOp { focus, method } => {
                match focus {
                    Focus::In(i) => p.max_input_index = p.max_input_index.max(i),
                    Focus::Aux(i) => p.max_aux_index = p.max_aux_index.max(i),
                    Focus::Out => {}
                }
                if focus == Focus::Out && method == Method::SetFalse {
                    p.has_out_set_false = true;
                }
                match (focus, method) {
                    (Focus::In(_), Method::Get) => (true, true, true),
                    (Focus::Aux(_), _) => (true, false, false),
                    (Focus::Out, Method::SetTrue) => (true, true, true),
                    (Focus::Out, Method::SetFalse) => (true, true, false),
                    _ => (false, false, false),
                }
            }
        };
        p.is_isbr &= isbr;
        p.is_isbrna &= isbrna;
        p.is_sisbr &= sisbr;
    }
    p
}
