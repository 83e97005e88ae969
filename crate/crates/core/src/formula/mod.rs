//! Terms and formulas over the arithmetic alphabet: `0`, `1`, `+`, `*`, `=`,
//! the propositional connectives, the three quantifiers, the `|=PP`
//! turnstile and registered defined predicates.

mod eval;
pub mod gen;
mod parse;
mod print;

use std::borrow::Cow;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One as _, Zero as _};

pub use eval::{eval_closed, Env, EvalError, Evaluator, PredicateInterp, TruthVerdict, WitnessHints};
pub use parse::{parse, parse_in, parse_term, parse_term_list, ParseError, PredicateScope};
pub use print::{print, print_term, CompactDisplay};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    /// Compact storage for the numeral with `n >= 1` successor steps,
    /// i.e. `((..(0+1)..)+1)`. Always produced by [`Term::add`] when the
    /// left operand is a numeral and the right one is `1`, so that every
    /// numeral has exactly one in-memory shape.
    Numeral(BigUint),
}

/// Borrowed one-level view of a term in which numerals expose their
/// `(n-1)+1` structure.
pub enum TermView<'a> {
    Var(&'a str),
    Zero,
    One,
    Add(Cow<'a, Term>, Cow<'a, Term>),
    Mul(&'a Term, &'a Term),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn add(l: Term, r: Term) -> Term {
        if r == Term::One {
            match l {
                Term::Zero => return Term::Numeral(BigUint::one()),
                Term::Numeral(n) => return Term::Numeral(n + 1u32),
                _ => {}
            }
        }
        Term::Add(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Term, r: Term) -> Term {
        Term::Mul(Box::new(l), Box::new(r))
    }

    pub fn succ(t: Term) -> Term {
        Term::add(t, Term::One)
    }

    pub fn numeral_value(&self) -> Option<BigUint> {
        match self {
            Term::Zero => Some(BigUint::zero()),
            Term::Numeral(n) => Some(n.clone()),
            _ => None,
        }
    }

    pub fn is_numeral(&self) -> bool {
        matches!(self, Term::Zero | Term::Numeral(_))
    }

    pub fn view(&self) -> TermView<'_> {
        match self {
            Term::Var(v) => TermView::Var(v),
            Term::Zero => TermView::Zero,
            Term::One => TermView::One,
            Term::Add(l, r) => TermView::Add(Cow::Borrowed(l), Cow::Borrowed(r)),
            Term::Mul(l, r) => TermView::Mul(l, r),
            Term::Numeral(n) => TermView::Add(
                Cow::Owned(numeral(n - BigUint::one())),
                Cow::Owned(Term::One),
            ),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Add(l, r) | Term::Mul(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Term::Zero | Term::One | Term::Numeral(_) => {}
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::Add(l, r) | Term::Mul(l, r) => l.mentions(var) || r.mentions(var),
            _ => false,
        }
    }

    pub fn occurrences(&self, var: &str) -> usize {
        match self {
            Term::Var(v) => usize::from(v == var),
            Term::Add(l, r) | Term::Mul(l, r) => l.occurrences(var) + r.occurrences(var),
            _ => 0,
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Add(l, r) | Term::Mul(l, r) => l.is_closed() && r.is_closed(),
            _ => true,
        }
    }

    pub fn substitute(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Add(l, r) => Term::add(l.substitute(var, t), r.substitute(var, t)),
            Term::Mul(l, r) => Term::mul(l.substitute(var, t), r.substitute(var, t)),
            other => other.clone(),
        }
    }

    /// Value of a closed term; `None` if a variable occurs.
    pub fn value(&self) -> Option<BigUint> {
        match self {
            Term::Var(_) => None,
            Term::Zero => Some(BigUint::zero()),
            Term::One => Some(BigUint::one()),
            Term::Numeral(n) => Some(n.clone()),
            Term::Add(l, r) => Some(l.value()? + r.value()?),
            Term::Mul(l, r) => Some(l.value()? * r.value()?),
        }
    }
}

/// `numeral(0) = 0`, `numeral(n+1) = (numeral(n)+1)`.
pub fn numeral(n: impl Into<BigUint>) -> Term {
    let n = n.into();
    if n.is_zero() {
        Term::Zero
    } else {
        Term::Numeral(n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    All,
    Exists,
    ExistsUnique,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
    ExistsUnique(String, Box<Formula>),
    Turnstile(Box<Formula>),
    Pred(String, Vec<Term>),
}

impl Formula {
    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Eq(l, r)
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(body))
    }
    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }
    pub fn exists_unique(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ExistsUnique(v.into(), Box::new(body))
    }
    pub fn turnstile(body: Formula) -> Formula {
        Formula::Turnstile(Box::new(body))
    }
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    /// Conjunction of a non-empty list, nested to the right.
    pub fn and_all(mut parts: Vec<Formula>) -> Formula {
        let mut acc = parts.pop().expect("and_all of an empty list");
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    pub fn quantifier(q: Quantifier, v: impl Into<String>, body: Formula) -> Formula {
        match q {
            Quantifier::All => Formula::forall(v, body),
            Quantifier::Exists => Formula::exists(v, body),
            Quantifier::ExistsUnique => Formula::exists_unique(v, body),
        }
    }

    /// `(kind, variable, body)` when the top node is a quantifier.
    pub fn as_quantifier(&self) -> Option<(Quantifier, &str, &Formula)> {
        match self {
            Formula::ForAll(v, b) => Some((Quantifier::All, v, b)),
            Formula::Exists(v, b) => Some((Quantifier::Exists, v, b)),
            Formula::ExistsUnique(v, b) => Some((Quantifier::ExistsUnique, v, b)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(l, r) => {
                for v in l.vars().into_iter().chain(r.vars()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Pred(_, args) => {
                for t in args {
                    for v in t.vars() {
                        if !bound.contains(&v) {
                            out.insert(v);
                        }
                    }
                }
            }
            Formula::Not(f) | Formula::Turnstile(f) => f.collect_free(bound, out),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(v, f) | Formula::Exists(v, f) | Formula::ExistsUnique(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, var: &str) -> bool {
        match self {
            Formula::Eq(l, r) => l.mentions(var) || r.mentions(var),
            Formula::Pred(_, args) => args.iter().any(|t| t.mentions(var)),
            Formula::Not(f) | Formula::Turnstile(f) => f.has_free(var),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.has_free(var) || b.has_free(var)
            }
            Formula::ForAll(v, f) | Formula::Exists(v, f) | Formula::ExistsUnique(v, f) => {
                v != var && f.has_free(var)
            }
        }
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
            Formula::Not(f) | Formula::Turnstile(f) => f.all_vars(out),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::ForAll(v, f) | Formula::Exists(v, f) | Formula::ExistsUnique(v, f) => {
                out.insert(v.clone());
                f.all_vars(out);
            }
        }
    }

    pub fn is_proposition(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Capture-avoiding substitution of `t` for the free occurrences of
    /// `var`. A binder whose variable occurs in `t` is renamed to the first
    /// unused `<letter><k>`.
    pub fn substitute(&self, var: &str, t: &Term) -> Formula {
        if !self.has_free(var) {
            return self.clone();
        }
        match self {
            Formula::Eq(l, r) => Formula::Eq(l.substitute(var, t), r.substitute(var, t)),
            Formula::Pred(n, args) => {
                Formula::Pred(n.clone(), args.iter().map(|a| a.substitute(var, t)).collect())
            }
            Formula::Not(f) => Formula::not(f.substitute(var, t)),
            Formula::Turnstile(f) => Formula::turnstile(f.substitute(var, t)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(var, t), b.substitute(var, t)),
            Formula::And(a, b) => Formula::and(a.substitute(var, t), b.substitute(var, t)),
            Formula::Or(a, b) => Formula::or(a.substitute(var, t), b.substitute(var, t)),
            Formula::ForAll(..) | Formula::Exists(..) | Formula::ExistsUnique(..) => {
                let (q, v, body) = self.as_quantifier().unwrap();
                if t.mentions(v) {
                    let mut avoid = body.free_vars();
                    avoid.extend(t.vars());
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(v, &avoid);
                    let renamed = body.substitute(v, &Term::var(fresh.clone()));
                    Formula::quantifier(q, fresh, renamed.substitute(var, t))
                } else {
                    Formula::quantifier(q, v, body.substitute(var, t))
                }
            }
        }
    }

    /// Simultaneous substitution; used for schemas whose metavariables may
    /// occur inside the substituted terms.
    pub fn substitute_all(&self, pairs: &[(&str, Term)]) -> Formula {
        // route through placeholder names that cannot clash with the terms
        let mut avoid = BTreeSet::new();
        self.all_vars(&mut avoid);
        for (_, t) in pairs {
            t.collect_vars(&mut avoid);
        }
        let mut out = self.clone();
        let mut temps = Vec::new();
        for (v, _) in pairs {
            let tmp = fresh_name("t", &avoid);
            avoid.insert(tmp.clone());
            out = out.substitute(v, &Term::var(tmp.clone()));
            temps.push(tmp);
        }
        for (tmp, (_, t)) in temps.iter().zip(pairs) {
            out = out.substitute(tmp, t);
        }
        out
    }

    /// Drops every turnstile node.
    pub fn strip_turnstiles(&self) -> Formula {
        match self {
            Formula::Turnstile(f) => f.strip_turnstiles(),
            Formula::Eq(..) | Formula::Pred(..) => self.clone(),
            Formula::Not(f) => Formula::not(f.strip_turnstiles()),
            Formula::Implies(a, b) => Formula::implies(a.strip_turnstiles(), b.strip_turnstiles()),
            Formula::And(a, b) => Formula::and(a.strip_turnstiles(), b.strip_turnstiles()),
            Formula::Or(a, b) => Formula::or(a.strip_turnstiles(), b.strip_turnstiles()),
            Formula::ForAll(v, f) => Formula::forall(v.clone(), f.strip_turnstiles()),
            Formula::Exists(v, f) => Formula::exists(v.clone(), f.strip_turnstiles()),
            Formula::ExistsUnique(v, f) => Formula::exists_unique(v.clone(), f.strip_turnstiles()),
        }
    }

    pub fn contains_turnstile(&self) -> bool {
        match self {
            Formula::Turnstile(_) => true,
            Formula::Eq(..) | Formula::Pred(..) => false,
            Formula::Not(f) => f.contains_turnstile(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_turnstile() || b.contains_turnstile()
            }
            Formula::ForAll(_, f) | Formula::Exists(_, f) | Formula::ExistsUnique(_, f) => {
                f.contains_turnstile()
            }
        }
    }

    pub fn contains_pred(&self) -> bool {
        match self {
            Formula::Pred(..) => true,
            Formula::Eq(..) => false,
            Formula::Not(f) | Formula::Turnstile(f) => f.contains_pred(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_pred() || b.contains_pred()
            }
            Formula::ForAll(_, f) | Formula::Exists(_, f) | Formula::ExistsUnique(_, f) => {
                f.contains_pred()
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => true,
            Formula::Not(f) | Formula::Turnstile(f) => f.is_quantifier_free(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            _ => false,
        }
    }

    /// Quantifier placement rule of the turnstile language: the immediate
    /// child of every quantifier is a turnstile, another quantifier (a
    /// prefix such as `(Ax)(Ay)|=PP ..`), or an implication between two
    /// turnstiled formulas (the premise shape of constructive provability).
    /// A turnstile may not directly wrap another turnstile.
    pub fn is_pp_wff(&self) -> bool {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => true,
            Formula::Turnstile(f) => !matches!(**f, Formula::Turnstile(_)) && f.is_pp_wff(),
            Formula::Not(f) => f.is_pp_wff(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_pp_wff() && b.is_pp_wff()
            }
            Formula::ForAll(_, f) | Formula::Exists(_, f) | Formula::ExistsUnique(_, f) => {
                let placed = match &**f {
                    Formula::Turnstile(_)
                    | Formula::ForAll(..)
                    | Formula::Exists(..)
                    | Formula::ExistsUnique(..) => true,
                    Formula::Implies(a, b) => {
                        matches!(**a, Formula::Turnstile(_)) && matches!(**b, Formula::Turnstile(_))
                    }
                    _ => false,
                };
                placed && f.is_pp_wff()
            }
        }
    }

    /// Number of AST nodes, terms included.
    pub fn size(&self) -> usize {
        fn term_size(t: &Term) -> usize {
            match t {
                Term::Add(l, r) | Term::Mul(l, r) => 1 + term_size(l) + term_size(r),
                _ => 1,
            }
        }
        match self {
            Formula::Eq(l, r) => 1 + term_size(l) + term_size(r),
            Formula::Pred(_, args) => 1 + args.iter().map(term_size).sum::<usize>(),
            Formula::Not(f) | Formula::Turnstile(f) => 1 + f.size(),
            Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::ForAll(_, f) | Formula::Exists(_, f) | Formula::ExistsUnique(_, f) => 1 + f.size(),
        }
    }
}

/// First `<letter><k>` (k = 1, 2, ...) not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let letter = base.chars().next().unwrap_or('v');
    (1u64..)
        .map(|k| format!("{letter}{k}"))
        .find(|cand| !avoid.contains(cand))
        .unwrap()
}

/// Structural match of `pattern` against `target`, where the free
/// occurrences of `var` in `pattern` may stand for any single term.
/// Returns `Some(None)` when the pattern does not mention `var` freely and
/// equals the target, `Some(Some(t))` with the bound term, `None` on
/// mismatch.
pub fn match_instance(pattern: &Formula, var: &str, target: &Formula) -> Option<Option<Term>> {
    let mut binding = None;
    if match_formula(pattern, var, target, &mut binding) {
        Some(binding)
    } else {
        None
    }
}

fn match_formula(p: &Formula, var: &str, t: &Formula, binding: &mut Option<Term>) -> bool {
    match (p, t) {
        (Formula::Eq(a, b), Formula::Eq(c, d)) => {
            match_term(a, var, c, binding) && match_term(b, var, d, binding)
        }
        (Formula::Pred(n, xs), Formula::Pred(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, var, y, binding))
        }
        (Formula::Not(a), Formula::Not(b)) | (Formula::Turnstile(a), Formula::Turnstile(b)) => {
            match_formula(a, var, b, binding)
        }
        (Formula::Implies(a, b), Formula::Implies(c, d))
        | (Formula::And(a, b), Formula::And(c, d))
        | (Formula::Or(a, b), Formula::Or(c, d)) => {
            match_formula(a, var, c, binding) && match_formula(b, var, d, binding)
        }
        _ => match (p.as_quantifier(), t.as_quantifier()) {
            (Some((q1, v1, b1)), Some((q2, v2, b2))) if q1 == q2 && v1 == v2 => {
                if v1 == var {
                    b1 == b2
                } else {
                    // a binding may not capture the binder
                    let before = binding.clone();
                    let ok = match_formula(b1, var, b2, binding);
                    ok && match (&before, &*binding) {
                        (None, Some(term)) if b1.has_free(var) => !term.mentions(v1),
                        _ => true,
                    }
                }
            }
            _ => false,
        },
    }
}

fn match_term(p: &Term, var: &str, t: &Term, binding: &mut Option<Term>) -> bool {
    if let Term::Var(v) = p {
        if v == var {
            return match binding {
                Some(b) => b == t,
                None => {
                    *binding = Some(t.clone());
                    true
                }
            };
        }
    }
    if !p.mentions(var) {
        return p == t;
    }
    match (p.view(), t.view()) {
        (TermView::Add(a, b), TermView::Add(c, d)) => {
            match_term(&a, var, &c, binding) && match_term(&b, var, &d, binding)
        }
        (TermView::Mul(a, b), TermView::Mul(c, d)) => {
            match_term(a, var, c, binding) && match_term(b, var, d, binding)
        }
        _ => false,
    }
}
