//! Arithmetic formulas for primitive recursive functions, built with the
//! β-function `beta(c, d, i) = c mod (1 + (i+1)d)`, and instance checks of
//! the two representation conditions.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::formula::{numeral, Env, Evaluator, Formula, Term, TruthVerdict, WitnessHints};
use crate::kernel::{witness_proof, System};
use crate::primrec::{Machine, PrfError, PrfFn, PrfNode};

const DEFAULT_NODE_LIMIT: usize = 1_000_000;
const D_SEARCH: u64 = 10_000;
const CODE_CACHE_LIMIT: usize = 1 << 14;
/// Machine steps per evaluation before an instance counts as undetermined.
const MACHINE_BUDGET: u64 = 50_000_000;

pub fn beta(c: &BigUint, d: &BigUint, i: &BigUint) -> BigUint {
    c % (BigUint::from(1u32) + (i + 1u32) * d)
}

fn modulus(d: &Term, i: &Term) -> Term {
    Term::add(Term::One, Term::mul(Term::add(i.clone(), Term::One), d.clone()))
}

/// `v = beta(c, d, i)` with the quotient `w` and slack `u` bound inside.
fn beta_at(c: &Term, d: &Term, i: &Term, v: &Term, w: &str, u: &str) -> Formula {
    let m = modulus(d, i);
    let quotient = Formula::eq(c.clone(), Term::add(Term::mul(Term::var(w), m.clone()), v.clone()));
    let below = Formula::eq(Term::add(Term::add(v.clone(), Term::var(u)), Term::One), m);
    Formula::exists(w, Formula::exists(u, Formula::and(quotient, below)))
}

/// `B(c, d, i, v)`, true exactly when `v = beta(c, d, i)`.
pub fn beta_formula() -> Formula {
    let [c, d, i, v] = ["c", "d", "i", "v"].map(Term::var);
    beta_at(&c, &d, &i, &v, "w", "u")
}

/// Smallest `(c, d)` search: the least `d >= max(values)` for which the
/// congruences `c = values[i] mod 1+(i+1)d` are solvable, with the least
/// such `c`.
pub fn beta_code(values: &[u64]) -> Option<(BigUint, BigUint)> {
    let start = values.iter().copied().max().unwrap_or(0).max(1);
    (start..start + D_SEARCH).find_map(|d| crt(values, d).map(|c| (c, BigUint::from(d))))
}

fn crt(values: &[u64], d: u64) -> Option<BigUint> {
    let mut c = BigUint::zero();
    let mut modulus_acc = BigUint::from(1u32);
    for (i, &a) in values.iter().enumerate() {
        let m = u128::from(d).checked_mul(i as u128 + 1)? + 1;
        let m = u64::try_from(m).ok()?;
        let r = (&modulus_acc % m).to_u64()?;
        let cm = (&c % m).to_u64()?;
        let g = r.gcd(&m);
        let diff = ((u128::from(a) + u128::from(m) - u128::from(cm)) % u128::from(m)) as u64;
        if diff % g != 0 {
            return None;
        }
        let m2 = m / g;
        if m2 == 1 {
            continue;
        }
        let inv = mod_inverse((r / g) % m2, m2)?;
        let t = (u128::from(diff / g) * u128::from(inv)) % u128::from(m2);
        c += &modulus_acc * BigUint::from(t);
        modulus_acc *= m2;
    }
    Some(c)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = i128::from(a).extended_gcd(&i128::from(m));
    (e.gcd == 1).then(|| e.x.rem_euclid(i128::from(m)) as u64)
}

#[derive(Debug, Error)]
pub enum RepresentError {
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("only functions of arity at least 1 are represented")]
    Nullary,
    #[error("formula has {nodes} nodes, over the limit of {limit}")]
    SizeExceeded { nodes: usize, limit: usize },
    #[error(transparent)]
    Prf(#[from] PrfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CodePart {
    C,
    D,
}

/// How to compute a witness for one existential variable from the values
/// already bound.
#[derive(Clone, Debug)]
enum Recipe {
    Value { f: PrfFn, args: Vec<Term> },
    Code { f: PrfFn, args: Vec<Term>, part: CodePart, root: bool },
    Beta { c: String, d: String, index: Term },
}

#[derive(Clone, Debug)]
pub struct RepresentedFn {
    pub source: PrfFn,
    /// Free variables are exactly `inputs` and `output`.
    pub formula: Formula,
    pub arity: usize,
    pub inputs: Vec<String>,
    pub output: String,
    recipes: HashMap<String, Recipe>,
}

impl RepresentedFn {
    /// The formula with numerals for the inputs and the output.
    pub fn instance(&self, args: &[u64], m: u64) -> Formula {
        let mut pairs: Vec<(&str, Term)> = self.inputs.iter().map(String::as_str).zip(args.iter().map(|a| numeral(*a))).collect();
        pairs.push((self.output.as_str(), numeral(m)));
        self.formula.substitute_all(&pairs)
    }
}

struct Builder {
    counter: usize,
    recipes: HashMap<String, Recipe>,
}

/// A term for `f(args)` when `f` needs no recursion.
fn direct(f: &PrfFn, args: &[Term]) -> Option<Term> {
    match f.node() {
        PrfNode::Zero => Some(Term::Zero),
        PrfNode::Succ => Some(Term::succ(args[0].clone())),
        PrfNode::Proj { index } => Some(args[index - 1].clone()),
        PrfNode::Comp { outer, inners } => {
            let mid: Option<Vec<Term>> = inners.iter().map(|g| direct(g, args)).collect();
            direct(outer, &mid?)
        }
        PrfNode::PrimRec { .. } => None,
    }
}

impl Builder {
    fn fresh(&mut self, letter: char) -> String {
        self.counter += 1;
        format!("{letter}{}", self.counter)
    }

    fn beta(&mut self, c: &str, d: &str, i: &Term, v: &Term) -> Formula {
        let (w, u) = (self.fresh('w'), self.fresh('u'));
        beta_at(&Term::var(c), &Term::var(d), i, v, &w, &u)
    }

    fn build(&mut self, f: &PrfFn, args: &[Term], y: Term, root: bool) -> Formula {
        if let Some(t) = direct(f, args) {
            return Formula::eq(y, t);
        }
        match f.node() {
            PrfNode::Comp { outer, inners } => {
                let mut parts = Vec::new();
                let mut mids = Vec::new();
                let mut bound = Vec::new();
                for g in inners {
                    if let Some(t) = direct(g, args) {
                        mids.push(t);
                        continue;
                    }
                    let z = self.fresh('z');
                    self.recipes.insert(z.clone(), Recipe::Value { f: g.clone(), args: args.to_vec() });
                    parts.push(self.build(g, args, Term::var(&z), false));
                    mids.push(Term::var(&z));
                    bound.push(z);
                }
                parts.push(self.build(outer, &mids, y, false));
                bound.into_iter().rev().fold(Formula::and_all(parts), |acc, z| Formula::exists(z, acc))
            }
            PrfNode::PrimRec { base, step } => self.recursion(f, base, step, args, y, root),
            _ => unreachable!("non-recursive nodes are direct"),
        }
    }

    /// `(Ec)(Ed)(B(c,d,0) = base & (Ai)(i<n => B(c,d,i+1) = step(B(c,d,i))) & B(c,d,n) = y)`.
    fn recursion(&mut self, f: &PrfFn, base: &PrfFn, step: &PrfFn, args: &[Term], y: Term, root: bool) -> Formula {
        let (xs, n) = args.split_at(args.len() - 1);
        let n = &n[0];
        let (c, d, i, w) = (self.fresh('c'), self.fresh('d'), self.fresh('i'), self.fresh('w'));
        for (name, part) in [(&c, CodePart::C), (&d, CodePart::D)] {
            self.recipes
                .insert(name.clone(), Recipe::Code { f: f.clone(), args: args.to_vec(), part, root });
        }
        let beta_recipe = |index: Term| Recipe::Beta { c: c.clone(), d: d.clone(), index };

        let base_part = match direct(base, xs) {
            Some(t) => self.beta(&c, &d, &Term::Zero, &t),
            None => {
                let u0 = self.fresh('u');
                self.recipes.insert(u0.clone(), beta_recipe(Term::Zero));
                let at_zero = self.beta(&c, &d, &Term::Zero, &Term::var(&u0));
                let value = self.build(base, xs, Term::var(&u0), false);
                Formula::exists(u0, Formula::and(at_zero, value))
            }
        };

        let (u, v) = (self.fresh('u'), self.fresh('v'));
        let (iv, next) = (Term::var(&i), Term::succ(Term::var(&i)));
        self.recipes.insert(u.clone(), beta_recipe(iv.clone()));
        self.recipes.insert(v.clone(), beta_recipe(next.clone()));
        let mut step_args = xs.to_vec();
        step_args.extend([iv.clone(), Term::var(&u)]);
        let at_i = self.beta(&c, &d, &iv, &Term::var(&u));
        let body = match direct(step, &step_args) {
            Some(t) => {
                let at_next = self.beta(&c, &d, &next, &t);
                Formula::exists(u.clone(), Formula::and(at_i, at_next))
            }
            None => {
                let at_next = self.beta(&c, &d, &next, &Term::var(&v));
                let value = self.build(step, &step_args, Term::var(&v), false);
                Formula::exists(u.clone(), Formula::exists(v.clone(), Formula::and_all(vec![at_i, at_next, value])))
            }
        };
        let guard = Formula::exists(
            w.clone(),
            Formula::eq(Term::add(iv, Term::add(Term::var(&w), Term::One)), n.clone()),
        );
        let step_part = Formula::forall(i, Formula::implies(guard, body));
        let end = self.beta(&c, &d, n, &y);
        Formula::exists(c, Formula::exists(d, Formula::and_all(vec![base_part, step_part, end])))
    }
}

pub fn represent(f: &PrfFn) -> Result<RepresentedFn, RepresentError> {
    represent_with_limit(f, DEFAULT_NODE_LIMIT)
}

pub fn represent_with_limit(f: &PrfFn, limit: usize) -> Result<RepresentedFn, RepresentError> {
    let k = f.arity();
    if k == 0 {
        return Err(RepresentError::Nullary);
    }
    let inputs: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
    let output = "y".to_string();
    let mut b = Builder { counter: 0, recipes: HashMap::new() };
    let args: Vec<Term> = inputs.iter().map(Term::var).collect();
    let formula = b.build(f, &args, Term::var(&output), true);
    let nodes = formula.size();
    if nodes > limit {
        return Err(RepresentError::SizeExceeded { nodes, limit });
    }
    Ok(RepresentedFn { source: f.clone(), formula, arity: k, inputs, output, recipes: b.recipes })
}

type CodeKey = (usize, Vec<u64>, u64);

/// Witness source for evaluating a represented formula. β-codes are
/// cached; at the outermost recursion a horizon may stretch the encoded
/// trace so that one code serves many values of the recursion argument.
pub struct Hints<'r> {
    rep: &'r RepresentedFn,
    machine: RefCell<Machine>,
    codes: RefCell<HashMap<CodeKey, Option<(BigUint, BigUint)>>>,
    horizon: Option<Box<dyn Fn(&[u64]) -> u64 + 'r>>,
}

impl<'r> Hints<'r> {
    pub fn new(rep: &'r RepresentedFn) -> Self {
        Hints { rep, machine: RefCell::new(Machine::with_budget(MACHINE_BUDGET)), codes: RefCell::new(HashMap::new()), horizon: None }
    }

    /// `horizon(params)` is the last recursion index to encode at the root.
    pub fn with_horizon(mut self, horizon: impl Fn(&[u64]) -> u64 + 'r) -> Self {
        self.horizon = Some(Box::new(horizon));
        self
    }

    pub fn eval_source(&self, args: &[u64]) -> Result<u64, PrfError> {
        self.machine.borrow_mut().eval(&self.rep.source, args)
    }

    fn code(&self, f: &PrfFn, params: &[u64], top: u64) -> Option<(BigUint, BigUint)> {
        let key = (f.id(), params.to_vec(), top);
        if let Some(hit) = self.codes.borrow().get(&key) {
            return hit.clone();
        }
        let trace = self.machine.borrow_mut().trace(f, params, top).ok();
        let found = trace.and_then(|t| beta_code(&t));
        let mut codes = self.codes.borrow_mut();
        if codes.len() >= CODE_CACHE_LIMIT {
            codes.clear();
        }
        codes.insert(key, found.clone());
        found
    }
}

fn values(args: &[Term], env: &Env<'_>) -> Option<Vec<u64>> {
    args.iter().map(|t| env.term_value(t)?.to_u64()).collect()
}

impl WitnessHints for Hints<'_> {
    fn suggest(&self, var: &str, env: &Env<'_>) -> Option<BigUint> {
        match self.rep.recipes.get(var)? {
            Recipe::Value { f, args } => {
                let vals = values(args, env)?;
                self.machine.borrow_mut().eval(f, &vals).ok().map(BigUint::from)
            }
            Recipe::Code { f, args, part, root } => {
                let vals = values(args, env)?;
                let (params, n) = vals.split_at(vals.len() - 1);
                let mut top = n[0];
                if *root {
                    if let Some(h) = &self.horizon {
                        top = top.max(h(params));
                    }
                }
                let (c, d) = self.code(f, params, top)?;
                Some(if *part == CodePart::C { c } else { d })
            }
            Recipe::Beta { c, d, index } => Some(beta(env.get(c)?, env.get(d)?, &env.term_value(index)?)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// `f(args) = m` and the instance holds.
    ConditionI,
    /// `f(args) != m` and the negated instance holds.
    ConditionII,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Half {
    Passed { method: String },
    Failed { reason: String },
    Undetermined { reason: String },
    NotApplicable,
}

impl Half {
    pub fn passed(&self) -> bool {
        matches!(self, Half::Passed { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationVerdict {
    pub args: Vec<u64>,
    pub claimed: u64,
    pub value: u64,
    pub condition: Condition,
    pub semantic: Half,
    pub syntactic: Half,
}

/// Checks instances of one represented function, keeping the evaluator's
/// caches between calls.
pub struct Verifier<'r> {
    rep: &'r RepresentedFn,
    hints: &'r Hints<'r>,
    eval: Evaluator<'r>,
    prove: bool,
}

impl<'r> Verifier<'r> {
    pub fn new(rep: &'r RepresentedFn, hints: &'r Hints<'r>, bound: u64) -> Self {
        Verifier { rep, hints, eval: Evaluator::new(bound).with_hints(hints), prove: true }
    }

    /// Skips kernel proofs for the syntactic half.
    pub fn without_proofs(mut self) -> Self {
        self.prove = false;
        self
    }

    fn holds(&self, args: &[u64], m: u64) -> TruthVerdict {
        let mut env = Env::new();
        for (name, a) in self.rep.inputs.iter().zip(args) {
            env.push(name, BigUint::from(*a));
        }
        env.push(&self.rep.output, BigUint::from(m));
        self.eval.eval(&self.rep.formula, &mut env)
    }

    pub fn verify(&self, args: &[u64], m: u64) -> Result<RepresentationVerdict, RepresentError> {
        if args.len() != self.rep.arity {
            return Err(RepresentError::Arity { expected: self.rep.arity, got: args.len() });
        }
        let value = self.hints.eval_source(args)?;
        let quantifier_free = self.rep.formula.is_quantifier_free();
        let semantic = if value == m || quantifier_free {
            let want = value == m;
            match self.holds(args, m) {
                TruthVerdict::Unknown(r) => Half::Undetermined { reason: r },
                v if v.is_true() == want => Half::Passed { method: "evaluation".into() },
                _ => Half::Failed { reason: format!("instance evaluates to {}", !want) },
            }
        } else {
            // the formula is functional by construction, so the true
            // instance at f(args) excludes every other value
            match self.holds(args, value) {
                TruthVerdict::True => Half::Passed { method: "functionality certificate".into() },
                TruthVerdict::False => Half::Failed { reason: "instance at the true value is false".into() },
                TruthVerdict::Unknown(r) => Half::Undetermined { reason: r },
            }
        };
        let syntactic = if !quantifier_free {
            Half::NotApplicable
        } else if !self.prove {
            Half::Undetermined { reason: "proofs disabled".into() }
        } else {
            let instance = self.rep.instance(args, m);
            let goal = if value == m { instance } else { Formula::not(instance) };
            match witness_proof(&goal, System::Pp) {
                Ok(p) => Half::Passed { method: format!("kernel proof, {} lines", p.lines.len()) },
                Err(e) => Half::Failed { reason: e.to_string() },
            }
        };
        let condition = match (semantic.passed(), value == m) {
            (true, true) => Condition::ConditionI,
            (true, false) => Condition::ConditionII,
            (false, _) => Condition::Undetermined,
        };
        Ok(RepresentationVerdict { args: args.to_vec(), claimed: m, value, condition, semantic, syntactic })
    }
}

/// One-off check; for many instances of the same function keep a
/// [`Verifier`] instead.
pub fn verify_representation(
    rep: &RepresentedFn,
    args: &[u64],
    m: u64,
    bound: u64,
) -> Result<RepresentationVerdict, RepresentError> {
    let hints = Hints::new(rep);
    Verifier::new(rep, &hints, bound).verify(args, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{eval_closed, print};
    use crate::primrec::library;

    #[test]
    fn beta_examples() {
        let b = |c: u32, d: u32, i: u32| beta(&c.into(), &d.into(), &i.into());
        assert_eq!(b(5, 0, 3), 0u32.into());
        assert_eq!(b(7, 2, 1), 2u32.into());
        let f = beta_formula();
        assert_eq!(print(&f), "(Ew)(Eu)((c=((w*(1+((i+1)*d)))+v))&(((v+u)+1)=(1+((i+1)*d))))");
        let inst = |v: u64| {
            f.substitute_all(&[("c", numeral(7u32)), ("d", numeral(2u32)), ("i", numeral(1u32)), ("v", numeral(v))])
        };
        assert!(eval_closed(&inst(2), 100).unwrap().is_true());
        assert!(eval_closed(&inst(3), 100).unwrap().is_false());
    }

    #[test]
    fn codes_reproduce_sequences() {
        for seq in [vec![2, 3], vec![1, 1, 2, 6, 24, 120, 720], vec![0, 0, 0], vec![5]] {
            let (c, d) = beta_code(&seq).unwrap();
            for (i, a) in seq.iter().enumerate() {
                assert_eq!(beta(&c, &d, &BigUint::from(i)), BigUint::from(*a));
            }
        }
    }

    #[test]
    fn successor_is_quantifier_free() {
        let rep = represent(&PrfFn::succ()).unwrap();
        assert_eq!(print(&rep.formula), "(y=(x1+1))");
        let v = verify_representation(&rep, &[0], 1, 10).unwrap();
        assert_eq!(v.condition, Condition::ConditionI);
        assert!(v.syntactic.passed());
        let v = verify_representation(&rep, &[3], 5, 10).unwrap();
        assert_eq!(v.condition, Condition::ConditionII);
        assert!(v.syntactic.passed());
    }

    #[test]
    fn recursive_functions() {
        let lib = library();
        let add = represent(&lib.add).unwrap();
        assert_eq!(add.formula.free_vars().len(), 3);
        assert!(!add.formula.contains_turnstile());
        let v = verify_representation(&add, &[2, 3], 5, 1000).unwrap();
        assert_eq!((v.condition, v.semantic.passed()), (Condition::ConditionI, true));
        let v = verify_representation(&add, &[2, 3], 6, 1000).unwrap();
        assert_eq!(v.condition, Condition::ConditionII);
        assert_eq!(v.syntactic, Half::NotApplicable);

        let fact = represent(&lib.factorial).unwrap();
        let v = verify_representation(&fact, &[3], 6, 10_000).unwrap();
        assert_eq!(v.condition, Condition::ConditionI);
        let v = verify_representation(&fact, &[3], 7, 10_000).unwrap();
        assert_eq!(v.condition, Condition::ConditionII);
        assert!(matches!(verify_representation(&fact, &[3, 1], 7, 10), Err(RepresentError::Arity { .. })));
    }

    #[test]
    fn closed_instances_evaluate() {
        // the closed instance, without hints, is decided for tiny values
        let rep = represent(&library().add).unwrap();
        let f = rep.instance(&[1, 1], 2);
        assert!(f.free_vars().is_empty());
        let hints = Hints::new(&rep);
        let v = Verifier::new(&rep, &hints, 50);
        assert!(v.holds(&[1, 1], 2).is_true());
    }
}
