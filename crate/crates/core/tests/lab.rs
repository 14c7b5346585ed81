mod common;

use common::*;
use inseq::compilers::{compile_cnf, Cnf, Literal};
use inseq::lab::{search_alphabet, shortest_sequence_search, tables_equal, SearchSpec};
use inseq::transforms::collapse_jump_chains;
use inseq::{truth_table, Instruction, InstructionSequence, TruthTable};
use proptest::prelude::*;

/// Least sequence in length-then-alphabet order computing the target.
fn brute_force(spec: &SearchSpec) -> Option<InstructionSequence> {
    let alphabet = search_alphabet(spec);
    let n = spec.target.arity();
    for len in 1..=spec.max_length {
        let mut digits = vec![0usize; len];
        loop {
            let items: Vec<Instruction> = digits.iter().map(|&d| alphabet[d]).collect();
            let terms = items.iter().filter(|u| **u == Instruction::Term).count();
            if spec.allow_multiple_term || terms <= 1 {
                let x = InstructionSequence::new(items).unwrap();
                let t = truth_table(&x, n, spec.splitting_mode).unwrap().total();
                if t.as_ref() == Some(&spec.target) {
                    return Some(x);
                }
            }
            let Some(pos) = digits.iter().rposition(|&d| d + 1 < alphabet.len()) else { break };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    None
}

fn targets(arity: usize) -> impl Iterator<Item = TruthTable> {
    (0..1usize << (1 << arity)).map(move |m| {
        TruthTable::from_fn(arity, |b| {
            let index = b.iter().fold(0, |acc, &v| 2 * acc + v as usize);
            m >> index & 1 == 1
        })
    })
}

#[test]
fn search_matches_brute_force_enumeration() {
    for arity in 0..=2 {
        for target in targets(arity) {
            for spec in
                [SearchSpec::unrestricted(target.clone(), 4, 2), SearchSpec::jump_free_single_exit(target.clone(), 4)]
            {
                assert_eq!(shortest_sequence_search(&spec).unwrap(), brute_force(&spec), "{target}");
            }
        }
    }
}

#[test]
fn search_matches_brute_force_with_aux_and_splits() {
    for target in targets(1) {
        let mut spec = SearchSpec::unrestricted(target.clone(), 3, 1);
        spec.allow_aux = true;
        assert_eq!(shortest_sequence_search(&spec).unwrap(), brute_force(&spec), "{target}");
        spec.allow_aux = false;
        spec.splitting_mode = true;
        spec.allow_out_set_false = false;
        assert_eq!(shortest_sequence_search(&spec).unwrap(), brute_force(&spec), "{target}");
    }
}

/// One clause per false row.
fn canonical_cnf(t: &TruthTable) -> Cnf {
    let clauses = t
        .inputs()
        .enumerate()
        .filter(|&(i, _)| !t.value(i))
        .map(|(_, b)| b.iter().enumerate().map(|(j, &v)| Literal { var: j as u32 + 1, negated: v }).collect())
        .collect();
    Cnf::new(t.arity() as u32, clauses).unwrap()
}

#[test]
fn search_never_beats_the_cnf_bound_from_above() {
    for arity in 1..=2 {
        for target in targets(arity) {
            let bound = compile_cnf(&canonical_cnf(&target)).unwrap().psize();
            let spec = SearchSpec::unrestricted(target.clone(), bound.min(8), 3);
            let found = shortest_sequence_search(&spec).unwrap().expect("a sequence within the bound");
            assert!(found.psize() <= bound);
            assert_eq!(truth_table(&found, arity, false).unwrap().total(), Some(target));
        }
    }
}

#[test]
fn search_examples() {
    let f = TruthTable::constant(1, false);
    assert_eq!(shortest_sequence_search(&SearchSpec::unrestricted(f, 3, 2)).unwrap().unwrap().render(), "!");
    let t = TruthTable::constant(0, true);
    let found = shortest_sequence_search(&SearchSpec::unrestricted(t, 3, 2)).unwrap().unwrap();
    assert_eq!(found.psize(), 2);
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn collapse_keeps_tables_equal(seed in any::<u64>()) {
        let x = random_isbr(&mut rng(seed), 12, 3, 2);
        let a = truth_table(&x, 3, false).unwrap();
        let b = truth_table(&collapse_jump_chains(&x), 3, false).unwrap();
        prop_assert_eq!(&a, &b);
        if let (Some(a), Some(b)) = (a.total(), b.total()) {
            prop_assert!(tables_equal(&a, &b));
        }
    }

    #[test]
    fn tables_with_different_arity_differ(seed in any::<u64>()) {
        let bits = random_bits(&mut rng(seed), 4);
        let a = TruthTable::new(2, bits.clone()).unwrap();
        let mut wider = bits.clone();
        wider.extend(bits);
        prop_assert!(!tables_equal(&a, &TruthTable::new(3, wider).unwrap()));
        prop_assert!(tables_equal(&a, &a.clone()));
    }
}
