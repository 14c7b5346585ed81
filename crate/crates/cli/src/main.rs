//! Command-line driver for the inseq library.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use inseq::compilers::{
    compile_circuit, compile_cnf, compile_cnf_jumpfree, compile_formula, BoolFormula, Circuit, Cnf,
};
use inseq::lab::{parse_bits, render_bits, shortest_sequence_search, SearchSpec};
use inseq::satc::{build_satc_splitter, decode_to_cnf, encode_cnf, reachability_formula, satc_eval};
use inseq::services::{execute, RegisterFile};
use inseq::splitting::execute_splitting;
use inseq::transforms::{self, RewriteReport};
use inseq::{extract, extract_compact, truth_table, Error, InstructionSequence, RunOutcome, TruthTable};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "inseq", version, about = "Instruction sequences over Boolean registers")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Arguments taking text accept `@path` to read the file instead.
#[derive(Subcommand)]
enum Command {
    /// Parse a sequence and print it in canonical form.
    Parse {
        #[arg(allow_hyphen_values = true)]
        seq: String,
    },
    /// Run a sequence on the given inputs.
    Run {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value = "")]
        inputs: String,
        /// Use the split/reply executor.
        #[arg(long)]
        split: bool,
    },
    /// Run a sequence with split/reply on the given inputs.
    RunSplit {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value = "")]
        inputs: String,
    },
    /// Print the extracted thread.
    Extract {
        #[arg(allow_hyphen_values = true)]
        seq: String,
    },
    /// Print the linear-size extracted term.
    ExtractCompact {
        #[arg(allow_hyphen_values = true)]
        seq: String,
    },
    /// Tabulate outputs over all inputs of arity n; `-` marks non-termination.
    Truthtable {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        split: bool,
    },
    /// Compile a DIMACS CNF.
    CompileCnf { cnf: String },
    /// Compile a DIMACS CNF without jumps.
    CompileCnfJumpfree { cnf: String },
    /// Compile an s-expression formula.
    CompileFormula { formula: String },
    /// Compile a circuit netlist.
    CompileCircuit { circuit: String },
    /// Remove out.set:F.
    ElimSetfalse {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        trace: bool,
    },
    /// Rewrite aux set tests that always skip.
    NormalizeSetTests {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        trace: bool,
    },
    /// Replace aux registers by split/reply.
    ToSplit {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        trace: bool,
    },
    /// Collapse jumps that land on jumps.
    CollapseJumps {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        trace: bool,
    },
    /// Simplify register tests with known replies.
    BehavNormalize {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long)]
        trace: bool,
    },
    /// Report class membership and syntactic statistics.
    Classify {
        #[arg(allow_hyphen_values = true)]
        seq: String,
    },
    /// Evaluate 3SATC on a T/F string.
    SatcEval { bits: String },
    /// Decode a T/F string into the CNF it selects.
    SatcDecode { bits: String },
    /// Encode a DIMACS 3-CNF as the shortest T/F string.
    SatcEncode { cnf: String },
    /// Build the splitting sequence computing 3SATC on n inputs.
    SatcBuild { n: usize },
    /// Print the reachability formula of a splitting sequence at given inputs.
    ReducePlsis {
        #[arg(allow_hyphen_values = true)]
        seq: String,
        #[arg(long, default_value = "")]
        inputs: String,
    },
    /// Search for a shortest sequence computing a truth table.
    Search {
        /// Target table as a T/F string of length 2^n.
        target: String,
        #[arg(long, default_value_t = 8)]
        max_length: usize,
        #[arg(long, default_value_t = 3)]
        max_jump: u32,
        /// No jumps, a single `!`, no out.set:F.
        #[arg(long)]
        restricted: bool,
        /// Allow two aux registers.
        #[arg(long)]
        aux: bool,
        /// Search split/reply sequences.
        #[arg(long)]
        split: bool,
    },
}

fn text(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Error::Precondition(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn seq(arg: &str) -> Result<InstructionSequence, Error> {
    InstructionSequence::parse(&text(arg)?)
}

fn cnf(arg: &str) -> Result<Cnf, Error> {
    Cnf::parse_dimacs(&text(arg)?)
}

fn bits(arg: &str) -> Result<Vec<bool>, Error> {
    parse_bits(text(arg)?.trim())
}

fn registers(r: &RegisterFile) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("out".into(), json!(r.out));
    for (i, b) in &r.aux {
        map.insert(format!("aux:{i}"), json!(b));
    }
    for (i, b) in r.inputs.iter().enumerate() {
        map.insert(format!("in:{}", i + 1), json!(b));
    }
    Value::Object(map)
}

fn outcome(o: &RunOutcome, steps: usize, format: Format) -> String {
    match format {
        Format::Json => {
            let (name, out, regs, reason) = match o {
                RunOutcome::Terminated(r) => ("TERMINATED", json!(r.out), registers(r), Value::Null),
                RunOutcome::Deadlocked => ("DEADLOCK", Value::Null, Value::Null, Value::Null),
                RunOutcome::Divergent(why) => ("DIVERGENT", Value::Null, Value::Null, json!(why)),
            };
            let mut record = json!({ "outcome": name, "out": out, "registers": regs, "steps": steps });
            if !reason.is_null() {
                record["reason"] = reason;
            }
            record.to_string()
        }
        Format::Text => match o {
            RunOutcome::Terminated(r) if !r.aux.is_empty() || !r.inputs.is_empty() => format!("{o}\n{r}"),
            _ => o.to_string(),
        },
    }
}

fn rewrite(report: RewriteReport, trace: bool, format: Format) -> String {
    match (format, trace) {
        (Format::Json, _) => json!({
            "input": report.input.render(),
            "output": report.output.render(),
            "steps": report.steps,
            "trace": report.rule_trace.iter().map(|(r, p)| json!({ "rule": r, "position": p })).collect::<Vec<_>>(),
        })
        .to_string(),
        (Format::Text, true) => report.to_string().trim_end().to_string(),
        (Format::Text, false) => report.output.render(),
    }
}

fn plain(result: String, format: Format) -> String {
    match format {
        Format::Text => result,
        Format::Json => json!({ "result": result }).to_string(),
    }
}

fn tf(b: bool) -> String {
    render_bits(&[b])
}

fn dispatch(cli: Cli) -> Result<String, Error> {
    let f = cli.format;
    Ok(match cli.command {
        Command::Parse { seq: s } => plain(seq(&s)?.render(), f),
        Command::Run { seq: s, inputs, split } => run(&s, &inputs, split, f)?,
        Command::RunSplit { seq: s, inputs } => run(&s, &inputs, true, f)?,
        Command::Extract { seq: s } => plain(extract(&seq(&s)?).to_string(), f),
        Command::ExtractCompact { seq: s } => plain(extract_compact(&seq(&s)?).to_string(), f),
        Command::Truthtable { seq: s, n, split } => plain(truth_table(&seq(&s)?, n, split)?.to_string(), f),
        Command::CompileCnf { cnf: c } => plain(compile_cnf(&cnf(&c)?)?.render(), f),
        Command::CompileCnfJumpfree { cnf: c } => plain(compile_cnf_jumpfree(&cnf(&c)?)?.render(), f),
        Command::CompileFormula { formula } => {
            plain(compile_formula(&BoolFormula::parse(&text(&formula)?)?).render(), f)
        }
        Command::CompileCircuit { circuit } => plain(compile_circuit(&Circuit::parse(&text(&circuit)?)?)?.render(), f),
        Command::ElimSetfalse { seq: s, trace } => {
            rewrite(transforms::eliminate_output_false_report(&seq(&s)?)?, trace, f)
        }
        Command::NormalizeSetTests { seq: s, trace } => {
            rewrite(transforms::normalize_set_tests_report(&seq(&s)?)?, trace, f)
        }
        Command::ToSplit { seq: s, trace } => rewrite(transforms::to_splitting_report(&seq(&s)?)?, trace, f),
        Command::CollapseJumps { seq: s, trace } => {
            rewrite(transforms::collapse_jump_chains_report(&seq(&s)?), trace, f)
        }
        Command::BehavNormalize { seq: s, trace } => {
            rewrite(transforms::behavioural_normalize_report(&seq(&s)?)?, trace, f)
        }
        Command::Classify { seq: s } => classify(&seq(&s)?, f),
        Command::SatcEval { bits: b } => plain(tf(satc_eval(&bits(&b)?)?), f),
        Command::SatcDecode { bits: b } => plain(decode_to_cnf(&bits(&b)?).to_dimacs().trim_end().to_string(), f),
        Command::SatcEncode { cnf: c } => plain(render_bits(&encode_cnf(&cnf(&c)?)?), f),
        Command::SatcBuild { n } => plain(build_satc_splitter(n)?.render(), f),
        Command::ReducePlsis { seq: s, inputs } => {
            let phi = reachability_formula(&seq(&s)?, &bits(&inputs)?)?;
            let sat = phi.is_satisfiable()?;
            match f {
                Format::Text => format!("{phi}\nsatisfiable: {}", tf(sat)),
                Format::Json => json!({ "formula": phi.to_string(), "satisfiable": sat }).to_string(),
            }
        }
        Command::Search { target, max_length, max_jump, restricted, aux, split } => {
            let target: TruthTable = text(&target)?.trim().parse()?;
            let mut spec = if restricted {
                SearchSpec::jump_free_single_exit(target, max_length)
            } else {
                SearchSpec::unrestricted(target, max_length, max_jump)
            };
            spec.allow_aux = aux;
            if split {
                spec.splitting_mode = true;
                spec.allow_out_set_false = false;
            }
            let found = shortest_sequence_search(&spec)?;
            match f {
                Format::Text => found.map_or("none".to_string(), |x| x.render()),
                Format::Json => json!({ "result": found.map(|x| x.render()) }).to_string(),
            }
        }
    })
}

fn run(s: &str, inputs: &str, split: bool, f: Format) -> Result<String, Error> {
    let x = seq(s)?;
    let input = bits(inputs)?;
    let (o, steps) = if split {
        if !x.classify().is_sisbr {
            return Err(Error::Precondition("the splitting executor requires a sequence in SISbr".into()));
        }
        execute_splitting(&x, &input)?
    } else {
        execute(&x, &input)?
    };
    Ok(outcome(&o, steps, f))
}

fn classify(x: &InstructionSequence, f: Format) -> String {
    let p = x.classify();
    match f {
        Format::Json => json!({
            "isbr": p.is_isbr,
            "isbrna": p.is_isbrna,
            "sisbr": p.is_sisbr,
            "psize": x.psize(),
            "max_jump": p.max_jump,
            "max_aux": p.max_aux_index,
            "max_input": p.max_input_index,
            "max_param": p.max_param_index,
            "terms": p.term_count,
            "out_set_false": p.has_out_set_false,
        })
        .to_string(),
        Format::Text => [
            format!("ISbr: {}", tf(p.is_isbr)),
            format!("ISbrna: {}", tf(p.is_isbrna)),
            format!("SISbr: {}", tf(p.is_sisbr)),
            format!("psize: {}", x.psize()),
            format!("max jump: {}", p.max_jump),
            format!("max aux: {}", p.max_aux_index),
            format!("max input: {}", p.max_input_index),
            format!("max param: {}", p.max_param_index),
            format!("terminations: {}", p.term_count),
            format!("out.set:F: {}", tf(p.has_out_set_false)),
        ]
        .join("\n"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
