use arith_core::codec::{decode_formula, decode_sequence, encode_formula, encode_sequence, SymbolTable};
use arith_core::formula::gen::{depth, FormulaGen};
use arith_core::formula::{numeral, parse_in, print, Env, Evaluator, Formula, TruthVerdict};
use arith_core::kernel::{check, check_formulas, is_tautology, judgment, witness_proof, System};
use arith_core::representation::{beta, beta_code};
use num_bigint::BigUint;
use proptest::prelude::*;

fn table() -> SymbolTable {
    let mut t = SymbolTable::new();
    t.register("P").unwrap();
    t
}

fn generated(seed: u64, d: usize) -> Formula {
    FormulaGen::new(seed).with_predicate("P", 2).formula(d)
}

fn closed(seed: u64, d: usize) -> Formula {
    let mut g = FormulaGen::new(seed);
    g.max_numeral = 3;
    g.term_depth = 2;
    let f = g.formula(d);
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let pairs: Vec<(&str, _)> = free.iter().map(|v| (v.as_str(), numeral(2u32))).collect();
    f.substitute_all(&pairs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let t = table();
        let f = generated(seed, 6);
        prop_assert!(depth(&f) <= 6);
        prop_assert_eq!(parse_in(&print(&f), &t).unwrap(), f);
    }

    #[test]
    fn codec_round_trip(seed in any::<u64>()) {
        let t = table();
        let f = generated(seed, 6);
        let n = encode_formula(&f, &t).unwrap();
        prop_assert_eq!(decode_formula(&n, &t).unwrap(), f);
    }

    #[test]
    fn sequence_round_trip(codes in prop::collection::vec(1u64..40, 0..12)) {
        let n = encode_sequence(&codes).unwrap();
        prop_assert_eq!(decode_sequence(&n).unwrap(), codes);
    }

    #[test]
    fn substitution_removes_the_variable(seed in any::<u64>(), k in 0u64..5) {
        let f = generated(seed, 5);
        for v in f.free_vars() {
            let g = f.substitute(&v, &numeral(k));
            prop_assert!(!g.free_vars().contains(&v));
            prop_assert!(g.free_vars().is_subset(&f.free_vars()));
        }
        prop_assert_eq!(f.substitute("unused", &numeral(k)), f.clone());
    }

    #[test]
    fn raising_the_bound_never_flips(seed in any::<u64>()) {
        let f = closed(seed, 4).strip_turnstiles();
        let at = |b: u64| Evaluator::new(b).eval(&f, &mut Env::new());
        match (at(4), at(9)) {
            (TruthVerdict::True, TruthVerdict::False) | (TruthVerdict::False, TruthVerdict::True) => {
                prop_assert!(false, "verdict flipped for {}", print(&f));
            }
            _ => {}
        }
    }

    #[test]
    fn self_implication_is_tautologous(seed in any::<u64>()) {
        let f = generated(seed, 5);
        prop_assert!(is_tautology(&Formula::implies(f.clone(), f)));
    }

    #[test]
    fn beta_codes_recover(values in prop::collection::vec(0u64..60, 1..7)) {
        let (c, d) = beta_code(&values).unwrap();
        for (i, v) in values.iter().enumerate() {
            prop_assert_eq!(beta(&c, &d, &BigUint::from(i)), BigUint::from(*v));
        }
    }

    #[test]
    fn witness_proofs_check(seed in any::<u64>(), pa in any::<bool>()) {
        let mut g = FormulaGen::new(seed);
        g.max_numeral = 3;
        g.term_depth = 2;
        let eq = g.closed_equation();
        let truth = Evaluator::new(10).eval(&eq, &mut Env::new());
        let goal = if truth.is_true() { eq } else { Formula::not(eq) };
        let system = if pa { System::Pa } else { System::Pp };
        if let Ok(proof) = witness_proof(&goal, system) {
            prop_assert!(check(&proof).accepted);
            prop_assert!(check_formulas(system, &proof.formulas()).accepted);
            prop_assert_eq!(proof.conclusion(), Some(&judgment(system, goal.clone())));
        }
    }
}
