//! Three-valued truth evaluation over the naturals.
//!
//! Every `True`/`False` answer is sound. Quantifiers are decided exactly when
//! the body pins the variable down (by solving an equation for it, or by an
//! equation that bounds it from above); otherwise the search runs through
//! `0..=bound` and may end in `Unknown`.

use std::borrow::Cow;
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use super::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TruthVerdict {
    True,
    False,
    Unknown(String),
}

impl TruthVerdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthVerdict::True
        } else {
            TruthVerdict::False
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, TruthVerdict::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, TruthVerdict::False)
    }

    pub fn is_decided(&self) -> bool {
        !matches!(self, TruthVerdict::Unknown(_))
    }

    pub fn negate(self) -> Self {
        match self {
            TruthVerdict::True => TruthVerdict::False,
            TruthVerdict::False => TruthVerdict::True,
            u => u,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula has free variables: {0:?}")]
    FreeVariables(Vec<String>),
}

/// Variable assignment. Later bindings shadow earlier ones; a binding with
/// no value marks the name as deliberately unbound.
#[derive(Clone, Debug, Default)]
pub struct Env<'s> {
    slots: Vec<(Cow<'s, str>, Option<BigUint>)>,
}

impl<'s> Env<'s> {
    pub fn new() -> Self {
        Env { slots: Vec::new() }
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, BigUint)>,
        S: Into<String>,
    {
        Env {
            slots: pairs
                .into_iter()
                .map(|(n, v)| (Cow::Owned(n.into()), Some(v)))
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&BigUint> {
        self.slots
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| v.as_ref())
    }

    pub fn push(&mut self, name: &'s str, value: BigUint) {
        self.slots.push((Cow::Borrowed(name), Some(value)));
    }

    pub fn push_owned(&mut self, name: String, value: BigUint) {
        self.slots.push((Cow::Owned(name), Some(value)));
    }

    fn push_unbound(&mut self, name: &'s str) {
        self.slots.push((Cow::Borrowed(name), None));
    }

    pub fn pop(&mut self) {
        self.slots.pop();
    }

    pub fn term_value(&self, t: &Term) -> Option<BigUint> {
        match t {
            Term::Var(v) => self.get(v).cloned(),
            Term::Zero => Some(BigUint::zero()),
            Term::One => Some(BigUint::from(1u32)),
            Term::Numeral(n) => Some(n.clone()),
            Term::Add(l, r) => Some(self.term_value(l)? + self.term_value(r)?),
            Term::Mul(l, r) => Some(self.term_value(l)? * self.term_value(r)?),
        }
    }
}

/// Candidate witnesses for existential variables, by name.
pub trait WitnessHints {
    fn suggest(&self, var: &str, env: &Env<'_>) -> Option<BigUint>;
}

/// Truth of defined predicates at argument values; `None` when undecided.
pub trait PredicateInterp {
    fn holds(&self, name: &str, args: &[BigUint]) -> Option<bool>;
}

#[derive(Default, Clone)]
struct Prefix {
    len: u64,
    first_false: Option<u64>,
    first_unknown: Option<u64>,
}

type MemoKey = (usize, Vec<Option<BigUint>>);

const MEMO_LIMIT: usize = 1 << 21;

pub struct Evaluator<'a> {
    bound: u64,
    budget: u64,
    hints: Option<&'a dyn WitnessHints>,
    preds: Option<&'a dyn PredicateInterp>,
    prefix_memo: RefCell<HashMap<MemoKey, Prefix>>,
    free_memo: RefCell<HashMap<usize, Rc<[String]>>>,
}

enum Solve {
    Unique(BigUint),
    NoSolution,
    Open,
}

impl<'a> Evaluator<'a> {
    /// `bound` limits unguarded searches; exact enumerations may go up to
    /// `max(bound, budget)` candidates.
    pub fn new(bound: u64) -> Self {
        Evaluator {
            bound,
            budget: 1 << 20,
            hints: None,
            preds: None,
            prefix_memo: RefCell::new(HashMap::new()),
            free_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_hints(mut self, hints: &'a dyn WitnessHints) -> Self {
        self.hints = Some(hints);
        self
    }

    pub fn with_predicates(mut self, preds: &'a dyn PredicateInterp) -> Self {
        self.preds = Some(preds);
        self
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    fn exact_cap(&self) -> u64 {
        self.bound.max(self.budget)
    }

    /// Formulas must outlive the evaluator: cached results are keyed by
    /// node address.
    pub fn eval(&self, f: &'a Formula, env: &mut Env<'a>) -> TruthVerdict {
        use TruthVerdict::*;
        match f {
            Formula::Eq(l, r) => match (env.term_value(l), env.term_value(r)) {
                (Some(a), Some(b)) => TruthVerdict::from_bool(a == b),
                _ => Unknown("unbound variable".into()),
            },
            Formula::Pred(name, args) => {
                let vals: Option<Vec<BigUint>> = args.iter().map(|t| env.term_value(t)).collect();
                let Some(vals) = vals else {
                    return Unknown("unbound variable".into());
                };
                match self.preds.and_then(|p| p.holds(name, &vals)) {
                    Some(b) => TruthVerdict::from_bool(b),
                    None => Unknown(format!("no interpretation decides {name}")),
                }
            }
            Formula::Not(b) => self.eval(b, env).negate(),
            Formula::Turnstile(b) => self.eval(b, env),
            Formula::And(a, b) => {
                let x = self.eval(a, env);
                if x.is_false() {
                    return False;
                }
                let y = self.eval(b, env);
                match (x, y) {
                    (_, False) => False,
                    (True, True) => True,
                    (Unknown(r), _) | (_, Unknown(r)) => Unknown(r),
                    _ => unreachable!(),
                }
            }
            Formula::Or(a, b) => {
                let x = self.eval(a, env);
                if x.is_true() {
                    return True;
                }
                let y = self.eval(b, env);
                match (x, y) {
                    (_, True) => True,
                    (False, False) => False,
                    (Unknown(r), _) | (_, Unknown(r)) => Unknown(r),
                    _ => unreachable!(),
                }
            }
            Formula::Implies(a, b) => {
                let x = self.eval(a, env);
                if x.is_false() {
                    return True;
                }
                let y = self.eval(b, env);
                match (x, y) {
                    (_, True) => True,
                    (True, False) => False,
                    (Unknown(r), _) | (_, Unknown(r)) => Unknown(r),
                    _ => unreachable!(),
                }
            }
            Formula::ForAll(v, b) => self.forall(v, b, env),
            Formula::Exists(v, b) => self.exists(v, b, env),
            Formula::ExistsUnique(v, b) => self.exists_unique(v, b, env),
        }
    }

    fn at(&self, v: &'a str, value: BigUint, body: &'a Formula, env: &mut Env<'a>) -> TruthVerdict {
        env.push(v, value);
        let r = self.eval(body, env);
        env.pop();
        r
    }

    fn forall(&self, v: &'a str, body: &'a Formula, env: &mut Env<'a>) -> TruthVerdict {
        let cap = self.exact_cap();
        if let Formula::Implies(guard, p) = skip_turnstiles(body) {
            if let Some(t) = lt_guard(guard, v) {
                if let Some(n) = env.term_value(t).and_then(|n| n.to_u64()).filter(|n| *n <= cap) {
                    return self.bounded_forall(v, p, n, env);
                }
            }
            let top = self.upper_bound_in(guard, v, env).and_then(|b| b.to_u64());
            if let Some(top) = top.filter(|b| *b < cap) {
                let mut unknown = None;
                for i in 0..=top {
                    match self.at(v, i.into(), body, env) {
                        TruthVerdict::False => return TruthVerdict::False,
                        TruthVerdict::Unknown(r) => unknown = unknown.or(Some(r)),
                        TruthVerdict::True => {}
                    }
                }
                return unknown.map_or(TruthVerdict::True, TruthVerdict::Unknown);
            }
        }
        for i in 0..=self.bound {
            if self.at(v, i.into(), body, env).is_false() {
                return TruthVerdict::False;
            }
        }
        TruthVerdict::Unknown(format!("no counterexample for {v} up to {}", self.bound))
    }

    /// `(Av)(v < n => p)`, answered from a per-context prefix cache so that
    /// repeated queries with growing `n` do not redo work.
    fn bounded_forall(&self, v: &'a str, p: &'a Formula, n: u64, env: &mut Env<'a>) -> TruthVerdict {
        let fv = self.free_names(p);
        let ctx: Vec<Option<BigUint>> = fv
            .iter()
            .filter(|name| name.as_str() != v)
            .map(|name| env.get(name).cloned())
            .collect();
        let key = (p as *const Formula as usize, ctx);
        let mut entry = self.prefix_memo.borrow_mut().remove(&key).unwrap_or_default();
        while entry.len < n && entry.first_false.is_none() {
            let i = entry.len;
            match self.at(v, i.into(), p, env) {
                TruthVerdict::False => entry.first_false = Some(i),
                TruthVerdict::Unknown(_) => {
                    entry.first_unknown.get_or_insert(i);
                }
                TruthVerdict::True => {}
            }
            entry.len += 1;
        }
        let verdict = if entry.first_false.is_some_and(|i| i < n) {
            TruthVerdict::False
        } else if entry.first_unknown.is_some_and(|i| i < n) {
            TruthVerdict::Unknown(format!("undecided instance below {n}"))
        } else {
            TruthVerdict::True
        };
        let mut memo = self.prefix_memo.borrow_mut();
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, entry);
        verdict
    }

    fn free_names(&self, f: &'a Formula) -> Rc<[String]> {
        let addr = f as *const Formula as usize;
        if let Some(names) = self.free_memo.borrow().get(&addr) {
            return names.clone();
        }
        let names: Rc<[String]> = f.free_vars().into_iter().collect::<Vec<_>>().into();
        self.free_memo.borrow_mut().insert(addr, names.clone());
        names
    }

    fn exists(&self, v: &'a str, body: &'a Formula, env: &mut Env<'a>) -> TruthVerdict {
        if let Some(val) = self.hints.and_then(|h| h.suggest(v, env)) {
            if self.at(v, val, body, env).is_true() {
                return TruthVerdict::True;
            }
        }
        match self.invert(v, body, env) {
            Solve::Unique(a) => return self.at(v, a, body, env),
            Solve::NoSolution => return TruthVerdict::False,
            Solve::Open => {}
        }
        let cap = self.exact_cap();
        let top = self.upper_bound_in(body, v, env).and_then(|b| b.to_u64());
        if let Some(top) = top.filter(|b| *b < cap) {
            let mut unknown = None;
            for i in 0..=top {
                match self.at(v, i.into(), body, env) {
                    TruthVerdict::True => return TruthVerdict::True,
                    TruthVerdict::Unknown(r) => unknown = unknown.or(Some(r)),
                    TruthVerdict::False => {}
                }
            }
            return unknown.map_or(TruthVerdict::False, TruthVerdict::Unknown);
        }
        for i in 0..=self.bound {
            if self.at(v, i.into(), body, env).is_true() {
                return TruthVerdict::True;
            }
        }
        TruthVerdict::Unknown(format!("no witness for {v} up to {}", self.bound))
    }

    /// Exactly one witness. Decided only when the candidates are known to
    /// be exhaustive, or when two witnesses turn up.
    fn exists_unique(&self, v: &'a str, body: &'a Formula, env: &mut Env<'a>) -> TruthVerdict {
        match self.invert(v, body, env) {
            Solve::Unique(a) => return self.at(v, a, body, env),
            Solve::NoSolution => return TruthVerdict::False,
            Solve::Open => {}
        }
        let cap = self.exact_cap();
        let top = self.upper_bound_in(body, v, env).and_then(|b| b.to_u64());
        let (last, exhaustive) = match top.filter(|b| *b < cap) {
            Some(t) => (t, true),
            None => (self.bound, false),
        };
        let mut found = 0u32;
        let mut unknown = None;
        for i in 0..=last {
            match self.at(v, i.into(), body, env) {
                TruthVerdict::True => {
                    found += 1;
                    if found == 2 {
                        return TruthVerdict::False;
                    }
                }
                TruthVerdict::Unknown(r) => unknown = unknown.or(Some(r)),
                TruthVerdict::False => {}
            }
        }
        match (exhaustive, unknown) {
            (true, None) => TruthVerdict::from_bool(found == 1),
            (true, Some(r)) => TruthVerdict::Unknown(r),
            (false, _) => TruthVerdict::Unknown(format!("uniqueness of {v} not settled up to {}", self.bound)),
        }
    }

    /// Looks for a conjunct equation that determines `v`.
    fn invert(&self, v: &'a str, body: &'a Formula, env: &mut Env<'a>) -> Solve {
        env.push_unbound(v);
        let mut pushed = 1;
        let r = self.invert_walk(v, body, env, &mut pushed);
        for _ in 0..pushed {
            env.pop();
        }
        r
    }

    fn invert_walk(&self, v: &'a str, f: &'a Formula, env: &mut Env<'a>, pushed: &mut usize) -> Solve {
        match f {
            Formula::Eq(s, t) => {
                for (a, b) in [(s, t), (t, s)] {
                    if a.mentions(v) || b.occurrences(v) != 1 {
                        continue;
                    }
                    if let Some(k) = env.term_value(a) {
                        match solve(b, v, k, env) {
                            Solve::Open => {}
                            decided => return decided,
                        }
                    }
                }
                Solve::Open
            }
            Formula::And(a, b) => match self.invert_walk(v, a, env, pushed) {
                Solve::Open => self.invert_walk(v, b, env, pushed),
                decided => decided,
            },
            Formula::Turnstile(b) => self.invert_walk(v, b, env, pushed),
            Formula::Exists(w, b) | Formula::ExistsUnique(w, b) if w != v => {
                env.push_unbound(w);
                *pushed += 1;
                self.invert_walk(v, b, env, pushed)
            }
            _ => Solve::Open,
        }
    }

    /// An upper bound on `v` implied by `f` being true, if one is visible.
    fn upper_bound_in(&self, f: &'a Formula, v: &'a str, env: &mut Env<'a>) -> Option<BigUint> {
        env.push_unbound(v);
        let mut pushed = 1;
        let r = upper_bound_walk(f, v, env, &mut pushed);
        for _ in 0..pushed {
            env.pop();
        }
        r
    }
}

fn upper_bound_walk<'a>(f: &'a Formula, v: &'a str, env: &mut Env<'a>, pushed: &mut usize) -> Option<BigUint> {
    match f {
        Formula::Eq(s, t) => [(s, t), (t, s)]
            .into_iter()
            .filter(|(a, b)| !a.mentions(v) && dominates(b, v))
            .filter_map(|(a, _)| env.term_value(a))
            .min(),
        Formula::And(a, b) => {
            let x = upper_bound_walk(a, v, env, pushed);
            let y = upper_bound_walk(b, v, env, pushed);
            match (x, y) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            }
        }
        Formula::Or(a, b) => {
            let x = upper_bound_walk(a, v, env, pushed)?;
            let y = upper_bound_walk(b, v, env, pushed)?;
            Some(x.max(y))
        }
        Formula::Turnstile(b) => upper_bound_walk(b, v, env, pushed),
        Formula::Exists(w, b) | Formula::ExistsUnique(w, b) if w != v => {
            env.push_unbound(w);
            *pushed += 1;
            upper_bound_walk(b, v, env, pushed)
        }
        _ => None,
    }
}

/// `t >= v` for every assignment.
fn dominates(t: &Term, v: &str) -> bool {
    match t {
        Term::Var(x) => x == v,
        Term::Add(l, r) => dominates(l, v) || dominates(r, v),
        Term::Mul(l, r) => (dominates(l, v) && positive(r)) || (dominates(r, v) && positive(l)),
        _ => false,
    }
}

/// `t >= 1` for every assignment.
fn positive(t: &Term) -> bool {
    match t {
        Term::One | Term::Numeral(_) => true,
        Term::Add(l, r) => positive(l) || positive(r),
        Term::Mul(l, r) => positive(l) && positive(r),
        Term::Var(_) | Term::Zero => false,
    }
}

/// Solves `t = target` for the single occurrence of `v` in `t`.
fn solve(t: &Term, v: &str, target: BigUint, env: &Env<'_>) -> Solve {
    match t {
        Term::Var(x) if x == v => Solve::Unique(target),
        Term::Add(l, r) => {
            let (inner, other) = if l.mentions(v) { (l, r) } else { (r, l) };
            match env.term_value(other) {
                Some(o) if o > target => Solve::NoSolution,
                Some(o) => solve(inner, v, target - o, env),
                None => Solve::Open,
            }
        }
        Term::Mul(l, r) => {
            let (inner, other) = if l.mentions(v) { (l, r) } else { (r, l) };
            match env.term_value(other) {
                Some(o) if o.is_zero() => {
                    if target.is_zero() {
                        Solve::Open
                    } else {
                        Solve::NoSolution
                    }
                }
                Some(o) => {
                    let (q, rem) = target.div_rem(&o);
                    if rem.is_zero() {
                        solve(inner, v, q, env)
                    } else {
                        Solve::NoSolution
                    }
                }
                None => Solve::Open,
            }
        }
        _ => Solve::Open,
    }
}

fn skip_turnstiles(mut f: &Formula) -> &Formula {
    while let Formula::Turnstile(b) = f {
        f = b;
    }
    f
}

/// Recognizes `(Ew)((v+(w+1))=t)`, the strict order `v < t`, and returns `t`.
fn lt_guard<'f>(guard: &'f Formula, v: &str) -> Option<&'f Term> {
    let Formula::Exists(w, eq) = skip_turnstiles(guard) else {
        return None;
    };
    let Formula::Eq(lhs, t) = &**eq else {
        return None;
    };
    let Term::Add(a, b) = lhs else {
        return None;
    };
    let Term::Add(wb, one) = &**b else {
        return None;
    };
    let shape = matches!(&**a, Term::Var(x) if x == v)
        && matches!(&**wb, Term::Var(x) if x == w)
        && **one == Term::One
        && w != v
        && !t.mentions(v)
        && !t.mentions(w);
    shape.then_some(t)
}

/// Evaluates a closed formula with quantifiers searched up to `bound`.
pub fn eval_closed(f: &Formula, bound: u64) -> Result<TruthVerdict, EvalError> {
    let fv = f.free_vars();
    if !fv.is_empty() {
        return Err(EvalError::FreeVariables(fv.into_iter().collect()));
    }
    Ok(Evaluator::new(bound).eval(f, &mut Env::new()))
}
