use arith_core::codec::{decode_sequence, encode_formula, encode_proof, encode_sequence, CodecError, SymbolTable};
use arith_core::formula::{eval_closed, numeral, parse, parse_in, print, Formula, Term};
use arith_core::kernel::{axiom_instance, check, witness_proof, Proof, Schema, System};
use arith_core::primrec::{library, PrfFn, ProvabilityLimits, ProvabilityOracle};
use arith_core::representation::{beta, beta_formula, represent, verify_representation, Condition};
use arith_core::self_reference::{diagonalize, register_q};
use num_bigint::BigUint;

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn parse_and_print() {
    let x = || Term::var("x");
    assert_eq!(f("((x+0)=x)"), Formula::eq(Term::Add(Box::new(x()), Box::new(Term::Zero)), x()));
    assert_eq!(f("~(0=(0+1))"), Formula::not(Formula::eq(Term::Zero, numeral(1u32))));
    assert_eq!(
        f("(Ax)|=PP((x+0)=x)"),
        Formula::forall("x", Formula::turnstile(Formula::eq(Term::add(x(), Term::Zero), x())))
    );
    assert_eq!(print(&Formula::eq(Term::Zero, Term::Zero)), "(0=0)");
    let g = Formula::forall("y", Formula::turnstile(Formula::not(Formula::eq(Term::var("y"), Term::Zero))));
    assert_eq!(print(&g), "(Ay)|=PP(~(y=0))");
    assert_eq!(print(&Formula::eq(numeral(2u32), Term::Zero)), "(((0+1)+1)=0)");
    assert_eq!(print(&Formula::eq(numeral(0u32), numeral(1u32))), "(0=(0+1))");
    assert_eq!(print(&Formula::eq(numeral(3u32), Term::Zero)), "((((0+1)+1)+1)=0)");
}

#[test]
fn substitution_and_free_variables() {
    let one = numeral(1u32);
    assert_eq!(print(&f("((x+0)=x)").substitute("x", &one)), "(((0+1)+0)=(0+1))");
    assert_eq!(f("(Ax)|=PP((x+0)=x)").substitute("x", &one), f("(Ax)|=PP((x+0)=x)"));
    assert_eq!(print(&f("(Ey)(y=x)").substitute("x", &Term::var("y"))), "(Ey1)(y1=y)");
    assert_eq!(f("((x+0)=x)").free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
    assert!(f("(Ax)|=PP((x+0)=x)").free_vars().is_empty());
    assert!(f("(0=0)").is_proposition());
    assert!(!f("((x+0)=x)").is_proposition());
}

#[test]
fn pp_well_formedness() {
    assert!(f("(Ax)|=PP((x+0)=x)").is_pp_wff());
    assert!(!f("(Ax)((x+0)=x)").is_pp_wff());
    assert!(f("~(0=(0+1))").is_pp_wff());
}

#[test]
fn closed_evaluation() {
    assert!(eval_closed(&f("(0=0)"), 10).unwrap().is_true());
    assert!(eval_closed(&f("((0+1)=0)"), 10).unwrap().is_false());
    assert!(eval_closed(&f("(Ey)((y+1)=((0+1)+1))"), 10).unwrap().is_true());
}

#[test]
fn sequence_codes() {
    assert_eq!(encode_sequence(&[]).unwrap(), big(1));
    assert_eq!(encode_sequence(&[3]).unwrap(), big(8));
    assert_eq!(encode_sequence(&[1, 2]).unwrap(), big(18));
    assert_eq!(decode_sequence(&big(1)).unwrap(), Vec::<u64>::new());
    assert_eq!(decode_sequence(&big(18)).unwrap(), vec![1, 2]);
    assert!(matches!(decode_sequence(&big(10)), Err(CodecError::NotACode)));
}

#[test]
fn frozen_formula_codes() {
    let t = SymbolTable::new();
    // 2^1 * 3^12 * 5^6 * 7^12 * 11^2
    let golden: BigUint = "27814222777430736281250".parse().unwrap();
    assert_eq!(encode_formula(&f("(0=0)"), &t).unwrap(), golden);
    let independent = big(2) * big(3).pow(12) * big(5).pow(6) * big(7).pow(12) * big(11).pow(2);
    assert_eq!(golden, independent);

    let mut table = SymbolTable::new();
    register_q(System::Pp, &mut table, ProvabilityLimits::default()).unwrap();
    let pre = parse_in("(Ay)|=PP(~Q(x,y))", &table).unwrap();
    assert_eq!(pre.free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
    let p = encode_formula(&pre, &table).unwrap();
    assert_eq!(diagonalize(System::Pp, &table).unwrap().p, p);
    assert!(diagonalize(System::Pp, &table).unwrap().gus.is_proposition());
}

#[test]
fn proof_codes() {
    let t = SymbolTable::new();
    let ax = Schema::PP3.formula();
    // a proof is the token stream of its lines joined by separators, so a
    // one-line proof has the code of its formula
    let one = encode_proof(std::slice::from_ref(&ax), &t).unwrap();
    assert_eq!(one, encode_formula(&ax, &t).unwrap());
    let text = "\
1 | ~(0=(0+1)) | AX GP1 [0]
2 | (~(0=(0+1))=>((0=0)|~(0=(0+1)))) | LOG TAUT
3 | ((0=0)|~(0=(0+1))) | RULE GPR1 1 2
";
    let mp = Proof::parse(text, System::Pa, None).unwrap();
    assert!(check(&mp).accepted);
    let lines = mp.formulas();
    let k = encode_proof(&lines, &t).unwrap();
    assert!(k > encode_formula(&lines[2], &t).unwrap());
}

#[test]
fn library_values() {
    let lib = library();
    assert_eq!(lib.factorial.eval(&[0]).unwrap(), 1);
    assert_eq!(lib.factorial.eval(&[4]).unwrap(), 24);
    assert_eq!(lib.exp.eval(&[2, 10]).unwrap(), 1024);
    assert_eq!(lib.is_prime.eval(&[2]).unwrap(), 1);
    assert_eq!(lib.is_prime.eval(&[1]).unwrap(), 0);
    assert_eq!(lib.quotient.eval(&[7, 2]).unwrap(), 3);
    assert_eq!(lib.is_prime.eval(&[91]).unwrap(), 0);
}

#[test]
fn proof_predicates() {
    let t = SymbolTable::new();
    let o = ProvabilityOracle::new(System::Pp, t.clone(), ProvabilityLimits::default());
    let ax = Schema::PP3.formula();
    let k = encode_proof(std::slice::from_ref(&ax), &t).unwrap();
    let m = encode_formula(&ax, &t).unwrap();
    assert_eq!(o.prf(&big(0), &m), 0);
    assert_eq!(o.prf(&k, &m), 1);
    assert_eq!(o.prf(&k, &(m + 2u32)), 0);

    let h = f("|=PP((z+0)=z)");
    let x = encode_formula(&h, &t).unwrap();
    let witness = witness_proof(&f("(0=0)"), System::Pp).unwrap();
    let y = encode_proof(&witness.formulas(), &t).unwrap();
    assert_eq!(o.q(&encode_formula(&f("(0=0)"), &t).unwrap(), &y), 0);
    assert_eq!(o.q(&encode_formula(&f("(x=y)"), &t).unwrap(), &y), 0);
    assert_eq!(o.q(&big(10), &y), 0);
    // the true instance: PP3 specialised at numeral(x), checked on lines
    let text = format!("1 | {} | AX PP3\n", print(&ax));
    assert!(check(&Proof::parse(&text, System::Pp, None).unwrap()).accepted);
    let instance = h.substitute("z", &Term::Numeral(x.clone()));
    let inst = Formula::turnstile(Formula::eq(Term::add(Term::Numeral(x.clone()), Term::Zero), Term::Numeral(x.clone())));
    assert_eq!(instance, inst);
    assert_eq!(o.q_for_lines(&x, &[ax.clone(), instance]), Ok(()));
    let corrupted = [ax, Formula::turnstile(Formula::eq(Term::Numeral(x.clone()), Term::Zero))];
    assert!(o.q_for_lines(&x, &corrupted).is_err());
}

#[test]
fn axiom_instances() {
    let x = Term::var("x");
    assert_eq!(print(&axiom_instance(System::Pa, Schema::GP1, &[x]).unwrap()), "~(0=(x+1))");
    assert_eq!(print(&axiom_instance(System::Pp, Schema::PP5, &[]).unwrap()), "(Ax)|=PP((x*0)=0)");
    let ab = [Term::var("a"), Term::var("b")];
    assert_eq!(print(&axiom_instance(System::Pa, Schema::GP6, &ab).unwrap()), "((a*(b+1))=((a*b)+a))");
}

#[test]
fn kernel_examples() {
    let pp = |s: &str| Proof::parse(s, System::Pp, None).unwrap();
    assert!(check(&pp("1 | (Ax)|=PP((x+0)=x) | AX PP3")).accepted);
    let gen = "1 | ((x+0)=x) | AX GP3 [x]\n2 | (Ax)((x+0)=x) | RULE GPR3 1\n";
    assert!(check(&Proof::parse(gen, System::Pa, None).unwrap()).accepted);
    for goal in ["(((0+1)+0)=(0+1))", "~(0=(0+1))", "((((0+1)+1)*(0+1))=((0+1)+1))"] {
        let g = f(goal);
        assert!(eval_closed(&g.strip_turnstiles(), 100).unwrap().is_true());
        let proof = witness_proof(&g, System::Pp).unwrap();
        assert!(check(&proof).accepted, "{goal}");
    }
}

#[test]
fn beta_values() {
    assert_eq!(beta(&big(5), &big(0), &big(3)), big(0));
    assert_eq!(beta(&big(7), &big(2), &big(1)), big(2));
    let b = beta_formula();
    let at = |v: u64| b.substitute_all(&[("c", numeral(7u32)), ("d", numeral(2u32)), ("i", numeral(1u32)), ("v", numeral(v))]);
    assert!(eval_closed(&at(2), 100).unwrap().is_true());
    assert!(eval_closed(&at(3), 100).unwrap().is_false());
}

#[test]
fn representation_examples() {
    let succ = represent(&PrfFn::succ()).unwrap();
    assert_eq!(print(&succ.formula), "(y=(x1+1))");
    assert!(eval_closed(&succ.instance(&[3], 4), 10).unwrap().is_true());
    assert!(eval_closed(&succ.instance(&[3], 5), 10).unwrap().is_false());
    let v = verify_representation(&succ, &[0], 1, 10).unwrap();
    assert_eq!(v.condition, Condition::ConditionI);
    assert!(v.semantic.passed() && v.syntactic.passed());

    let lib = library();
    let add = represent(&lib.add).unwrap();
    assert_eq!(verify_representation(&add, &[2, 3], 5, 1000).unwrap().condition, Condition::ConditionI);
    assert_eq!(verify_representation(&add, &[2, 3], 6, 1000).unwrap().condition, Condition::ConditionII);
    let fact = represent(&lib.factorial).unwrap();
    let v = verify_representation(&fact, &[3], 6, 10_000).unwrap();
    assert_eq!(v.condition, Condition::ConditionI);
    assert!(v.semantic.passed());
    let v = verify_representation(&fact, &[3], 7, 10_000).unwrap();
    assert_eq!(v.condition, Condition::ConditionII);
    assert!(v.semantic.passed());
}
