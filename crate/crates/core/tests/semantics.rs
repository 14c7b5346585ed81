mod common;

use common::*;
use inseq::services::{algebraic_run, execute};
use inseq::splitting::{algebraic_run_splitting, execute_splitting, run_splitting};
use inseq::threads::{eval_xthread, tsize};
use inseq::{extract, extract_compact, parse, run, InstructionSequence};
use proptest::prelude::*;

fn isbr(seed: u64) -> InstructionSequence {
    random_isbr(&mut rng(seed), 12, 3, 2)
}

fn sisbr(seed: u64) -> InstructionSequence {
    random_sisbr(&mut rng(seed), 10, 3, 3)
}

proptest! {
    #![proptest_config(config(300))]

    #[test]
    fn render_parse_round_trip(seed in any::<u64>()) {
        for x in [isbr(seed), sisbr(seed)] {
            prop_assert_eq!(parse(&x.render()).unwrap(), x.clone());
            let spaced = x.render().replace(' ', "").replace(';', " ;\n ");
            prop_assert_eq!(parse(&spaced).unwrap(), x);
        }
    }

    #[test]
    fn generated_sequences_are_classified(seed in any::<u64>()) {
        prop_assert!(isbr(seed).classify().is_isbr);
        prop_assert!(sisbr(seed).classify().is_sisbr);
    }

    #[test]
    fn extraction_matches_recursive_definition(seed in any::<u64>()) {
        for x in [isbr(seed), sisbr(seed)] {
            prop_assert_eq!(&*extract(&x), &*extract_oracle(&x));
        }
    }

    #[test]
    fn compact_extraction_evaluates_to_extraction(seed in any::<u64>()) {
        for x in [isbr(seed), sisbr(seed)] {
            let compact = extract_compact(&x);
            prop_assert!(tsize(&compact) <= 4 * x.psize() as u128 + 1);
            prop_assert_eq!(&*eval_xthread(&compact), &*extract(&x));
        }
    }

    #[test]
    fn executor_matches_interpreter(seed in any::<u64>()) {
        let x = isbr(seed);
        for input in all_inputs(3) {
            prop_assert_eq!(run(&x, &input).unwrap().output(), interpret_oracle(&x, &input), "{}", x);
        }
    }

    #[test]
    fn executor_matches_algebra(seed in any::<u64>()) {
        let x = isbr(seed);
        for input in all_inputs(3) {
            prop_assert_eq!(execute(&x, &input).unwrap().0.as_service(), algebraic_run(&x, &input));
        }
    }

    #[test]
    fn splitting_executor_matches_algebra(seed in any::<u64>()) {
        let x = sisbr(seed);
        for input in all_inputs(3) {
            let (outcome, _) = execute_splitting(&x, &input).unwrap();
            prop_assert_eq!(outcome.as_service(), algebraic_run_splitting(&x, &input), "{}", x);
        }
    }

    #[test]
    fn splitting_without_parameters_is_plain_execution(seed in any::<u64>()) {
        let x = random_isbr(&mut rng(seed), 12, 3, 0);
        if !x.classify().has_out_set_false {
            for input in all_inputs(3) {
                prop_assert_eq!(run_splitting(&x, &input).unwrap().output(), interpret_oracle(&x, &input));
            }
        }
    }
}

#[test]
fn linear_extraction_of_a_long_test_chain() {
    let text: Vec<String> = (0..40).map(|i| format!("+in:{}.get", 1 + i % 2)).chain(["!".to_string()]).collect();
    let x = parse(&text.join(" ; ")).unwrap();
    assert!(extract(&x).tree_size() > 1 << 20);
    assert!(extract(&x).dag_size() <= 2 * x.psize() + 2);
    assert!(tsize(&extract_compact(&x)) <= 4 * x.psize() as u128 + 1);
}

#[test]
fn outcome_formats() {
    let x = parse("aux:2.set:T ; out.set:T ; !").unwrap();
    let outcome = run(&x, &[true, false]).unwrap();
    assert_eq!(outcome.to_string(), "TERMINATED out=T");
    assert_eq!(run(&parse("#0").unwrap(), &[]).unwrap().to_string(), "DEADLOCK");
}
