//! Proofs of true closed quantifier-free formulas by computation.
//!
//! Terms are rewritten to numerals innermost first with the defining
//! equations of `+` and `*`; distinct numerals are told apart with the
//! successor axioms; the goal is then a tautological consequence of the
//! atoms it mentions.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::formula::{numeral, print, Formula, Term};

use super::{check, judgment, Justification, LogicalKind, Proof, RuleId, Schema, System};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("goal has free variables")]
    NotClosed,
    #[error("goal is not quantifier-free")]
    NotQuantifierFree,
    #[error("goal is false")]
    GoalFalse,
    #[error("not derivable by this generator: {0}")]
    NotDerivableByThisGenerator(String),
    #[error("generated proof failed its own check at line {0}")]
    SelfCheck(usize),
}

/// `lhs = rhs`, proved at `line`, or syntactically reflexive when `line`
/// is `None`.
#[derive(Clone)]
struct Eqn {
    lhs: Term,
    rhs: Term,
    line: Option<usize>,
}

impl Eqn {
    fn refl(t: Term) -> Eqn {
        Eqn { lhs: t.clone(), rhs: t, line: None }
    }
}

struct Builder {
    system: System,
    proof: Proof,
    index: HashMap<Formula, usize>,
    sums: HashMap<(BigUint, BigUint), Eqn>,
    products: HashMap<(BigUint, BigUint), Eqn>,
}

impl Builder {
    fn new(system: System) -> Builder {
        Builder {
            system,
            proof: Proof::new(system),
            index: HashMap::new(),
            sums: HashMap::new(),
            products: HashMap::new(),
        }
    }

    fn add(&mut self, f: Formula, just: Justification) -> usize {
        if let Some(&i) = self.index.get(&f) {
            return i;
        }
        let i = self.proof.push(f.clone(), just);
        self.index.insert(f, i);
        i
    }

    fn body(&self, line: usize) -> Formula {
        match &self.proof.lines[line].formula {
            Formula::Turnstile(b) if self.system.is_pp() => (**b).clone(),
            other => other.clone(),
        }
    }

    fn logical(&mut self, kind: LogicalKind, core: Formula) -> usize {
        let f = judgment(self.system, core);
        self.add(f, Justification::Logical(kind))
    }

    fn mp(&mut self, a: usize, ab: usize) -> usize {
        let Formula::Implies(_, b) = self.body(ab) else {
            unreachable!("modus ponens on a non-implication")
        };
        let rule = if self.system.is_pp() { RuleId::PPR1 } else { RuleId::GPR1 };
        let f = judgment(self.system, *b);
        self.add(f, Justification::Rule { rule, premises: vec![a, ab] })
    }

    /// Instance of the `k`-th arithmetic axiom at the given numerals.
    fn axiom(&mut self, k: usize, values: &[Term]) -> usize {
        if !self.system.is_pp() {
            let schema = Schema::PA[k];
            let f = super::axiom_instance(self.system, schema, values).expect("schema arity");
            return self.add(f, Justification::Axiom { schema, terms: values.to_vec() });
        }
        let schema = Schema::PP[k];
        let mut cur = schema.formula();
        let mut line = self.add(cur.clone(), Justification::Axiom { schema, terms: vec![] });
        for t in values {
            let Formula::ForAll(x, body) = cur else { unreachable!("axiom prefix") };
            cur = body.substitute(&x, t);
            line = self.add(cur.clone(), Justification::Rule { rule: RuleId::INST, premises: vec![line] });
        }
        line
    }

    fn axiom_eqn(&mut self, k: usize, values: &[Term]) -> Eqn {
        let line = self.axiom(k, values);
        match self.body(line) {
            Formula::Eq(lhs, rhs) => Eqn { lhs, rhs, line: Some(line) },
            _ => unreachable!("equational axiom"),
        }
    }

    fn ensure(&mut self, e: &Eqn) -> usize {
        match e.line {
            Some(l) => l,
            None => self.logical(LogicalKind::EQ_REFL, Formula::eq(e.lhs.clone(), e.rhs.clone())),
        }
    }

    /// `a'` from `l=r` and `a`.
    fn rewrite(&mut self, eq: usize, l: &Term, r: &Term, a: Formula, a_line: usize, a2: Formula) -> usize {
        let imp = self.rewrite_imp(eq, l, r, a, a2);
        self.mp(a_line, imp)
    }

    fn trans(&mut self, e1: Eqn, e2: Eqn) -> Eqn {
        debug_assert!(e1.rhs == e2.lhs);
        match (e1.line, e2.line) {
            (None, _) => Eqn { lhs: e1.lhs, ..e2 },
            (_, None) => Eqn { rhs: e2.rhs, ..e1 },
            (Some(l1), Some(l2)) => {
                let a = Formula::eq(e1.lhs.clone(), e1.rhs.clone());
                let a2 = Formula::eq(e1.lhs.clone(), e2.rhs.clone());
                let line = self.rewrite(l2, &e2.lhs, &e2.rhs, a, l1, a2);
                Eqn { lhs: e1.lhs, rhs: e2.rhs, line: Some(line) }
            }
        }
    }

    fn sym(&mut self, e: Eqn) -> Eqn {
        let Some(l) = e.line else { return e };
        let refl = self.ensure(&Eqn::refl(e.lhs.clone()));
        let a = Formula::eq(e.lhs.clone(), e.lhs.clone());
        let a2 = Formula::eq(e.rhs.clone(), e.lhs.clone());
        let line = self.rewrite(l, &e.lhs, &e.rhs, a, refl, a2);
        Eqn { lhs: e.rhs, rhs: e.lhs, line: Some(line) }
    }

    /// `C[a] = C[n]` from `a = n`.
    fn cong(&mut self, e: &Eqn, ctx: impl Fn(Term) -> Term) -> Eqn {
        let (ca, cn) = (ctx(e.lhs.clone()), ctx(e.rhs.clone()));
        let Some(l) = e.line else { return Eqn::refl(ca) };
        let refl = self.ensure(&Eqn::refl(ca.clone()));
        let a = Formula::eq(ca.clone(), ca.clone());
        let a2 = Formula::eq(ca.clone(), cn.clone());
        let line = self.rewrite(l, &e.lhs, &e.rhs, a, refl, a2);
        Eqn { lhs: ca, rhs: cn, line: Some(line) }
    }

    /// `(a+b) = numeral(a+b)` for numerals.
    fn sum(&mut self, a: &BigUint, b: &BigUint) -> Eqn {
        if let Some(e) = self.sums.get(&(a.clone(), b.clone())) {
            return e.clone();
        }
        let na = numeral(a.clone());
        let e = if b.is_zero() {
            self.axiom_eqn(2, &[na])
        } else {
            let m = b - 1u32;
            let step = self.axiom_eqn(3, &[na, numeral(m.clone())]);
            let rec = self.sum(a, &m);
            let lifted = self.cong(&rec, Term::succ);
            self.trans(step, lifted)
        };
        self.sums.insert((a.clone(), b.clone()), e.clone());
        e
    }

    /// `(a*b) = numeral(a*b)` for numerals.
    fn product(&mut self, a: &BigUint, b: &BigUint) -> Eqn {
        if let Some(e) = self.products.get(&(a.clone(), b.clone())) {
            return e.clone();
        }
        let na = numeral(a.clone());
        let e = if b.is_zero() {
            self.axiom_eqn(4, &[na])
        } else {
            let m = b - 1u32;
            let step = self.axiom_eqn(5, &[na.clone(), numeral(m.clone())]);
            let rec = self.product(a, &m);
            let lifted = self.cong(&rec, |t| Term::add(t, na.clone()));
            let partial = a * &m;
            let add = self.sum(&partial, a);
            let e = self.trans(step, lifted);
            self.trans(e, add)
        };
        self.products.insert((a.clone(), b.clone()), e.clone());
        e
    }

    /// `t = numeral(value)`.
    fn normalize(&mut self, t: &Term) -> Result<(BigUint, Eqn), WitnessError> {
        match t {
            Term::Zero => Ok((BigUint::zero(), Eqn::refl(t.clone()))),
            Term::Numeral(n) => Ok((n.clone(), Eqn::refl(t.clone()))),
            Term::Var(_) => Err(WitnessError::NotClosed),
            Term::One => Err(WitnessError::NotDerivableByThisGenerator(
                "`1` outside a successor position".into(),
            )),
            Term::Add(a, b) if **b == Term::One => {
                let (va, ea) = self.normalize(a)?;
                Ok((va + 1u32, self.cong(&ea, Term::succ)))
            }
            Term::Add(a, b) | Term::Mul(a, b) => {
                let is_add = matches!(t, Term::Add(..));
                let join = move |l: Term, r: Term| if is_add { Term::add(l, r) } else { Term::mul(l, r) };
                let (va, ea) = self.normalize(a)?;
                let (vb, eb) = self.normalize(b)?;
                let b_term = (**b).clone();
                let e1 = self.cong(&ea, |x| join(x, b_term.clone()));
                let na = ea.rhs.clone();
                let e2 = self.cong(&eb, |y| join(na.clone(), y));
                let e3 = if is_add { self.sum(&va, &vb) } else { self.product(&va, &vb) };
                let e = self.trans(e1, e2);
                let value = if is_add { &va + &vb } else { &va * &vb };
                Ok((value, self.trans(e, e3)))
            }
        }
    }

    /// `~(numeral(a) = numeral(b))` for `a != b`.
    fn distinct(&mut self, a: &BigUint, b: &BigUint) -> usize {
        match (a.is_zero(), b.is_zero()) {
            (true, _) => self.axiom(0, &[numeral(b - 1u32)]),
            (_, true) => {
                // symmetric form of ~(0=(n+1))
                let (na, zero) = (numeral(a.clone()), Term::Zero);
                let base = self.axiom(0, &[numeral(a - 1u32)]);
                let x = Formula::eq(na.clone(), zero.clone());
                let refl_f = Formula::eq(na.clone(), na.clone());
                let y = Formula::eq(zero, na.clone());
                let e = Formula::implies(x.clone(), Formula::implies(refl_f.clone(), y.clone()));
                let e_line = self.logical(LogicalKind::EQ_SUBST, e.clone());
                let r_line = self.ensure(&Eqn::refl(na));
                let taut = Formula::implies(
                    e,
                    Formula::implies(refl_f, Formula::implies(Formula::not(y), Formula::not(x))),
                );
                let t = self.logical(LogicalKind::TAUT, taut);
                let t = self.mp(e_line, t);
                let t = self.mp(r_line, t);
                self.mp(base, t)
            }
            _ => {
                let (pa, pb) = (a - 1u32, b - 1u32);
                let inner = self.distinct(&pa, &pb);
                let step = self.axiom(1, &[numeral(pa), numeral(pb)]);
                self.mp(inner, step)
            }
        }
    }

    /// The true literal for `s=t`: the equation or its negation.
    fn literal(&mut self, s: &Term, t: &Term) -> Result<(Formula, usize), WitnessError> {
        let (vs, es) = self.normalize(s)?;
        let (vt, et) = self.normalize(t)?;
        let atom = Formula::eq(s.clone(), t.clone());
        if vs == vt {
            let back = self.sym(et);
            let e = self.trans(es, back);
            return Ok((atom, self.ensure(&e)));
        }
        let (ns, nt) = (es.rhs.clone(), et.rhs.clone());
        let d = self.distinct(&vs, &vt);
        let p1 = self.ensure(&es);
        let p2 = self.ensure(&et);
        let a = atom.clone();
        let b = Formula::eq(ns.clone(), t.clone());
        let c = Formula::eq(ns.clone(), nt.clone());
        let l1 = self.rewrite_imp(p1, s, &ns, a.clone(), b.clone());
        let l2 = self.rewrite_imp(p2, t, &nt, b.clone(), c.clone());
        let neg = Formula::not(a.clone());
        let taut = Formula::implies(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(Formula::implies(b, c.clone()), Formula::implies(Formula::not(c), neg.clone())),
        );
        let t_line = self.logical(LogicalKind::TAUT, taut);
        let t_line = self.mp(l1, t_line);
        let t_line = self.mp(l2, t_line);
        Ok((neg, self.mp(d, t_line)))
    }

    /// `a => a'` from `l=r`.
    fn rewrite_imp(&mut self, eq: usize, l: &Term, r: &Term, a: Formula, a2: Formula) -> usize {
        let subst = Formula::implies(Formula::eq(l.clone(), r.clone()), Formula::implies(a, a2));
        let s = self.logical(LogicalKind::EQ_SUBST, subst);
        self.mp(eq, s)
    }
}

fn collect_atoms<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) -> Result<(), WitnessError> {
    match f {
        Formula::Eq(..) => {
            if !out.contains(&f) {
                out.push(f);
            }
            Ok(())
        }
        Formula::Not(g) => collect_atoms(g, out),
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
            collect_atoms(a, out)?;
            collect_atoms(b, out)
        }
        Formula::Turnstile(_) | Formula::Pred(..) => Err(WitnessError::NotDerivableByThisGenerator(format!(
            "unsupported connective in {}",
            print(f)
        ))),
        _ => Err(WitnessError::NotQuantifierFree),
    }
}

fn truth(f: &Formula) -> bool {
    match f {
        Formula::Eq(a, b) => a.value() == b.value(),
        Formula::Not(g) => !truth(g),
        Formula::Implies(a, b) => !truth(a) || truth(b),
        Formula::And(a, b) => truth(a) && truth(b),
        Formula::Or(a, b) => truth(a) || truth(b),
        _ => false,
    }
}

/// A proof of the closed quantifier-free `goal` in `system`. In the PP
/// systems the conclusion is `|=PP goal`.
pub fn witness_proof(goal: &Formula, system: System) -> Result<Proof, WitnessError> {
    if !goal.is_quantifier_free() {
        return Err(WitnessError::NotQuantifierFree);
    }
    if !goal.free_vars().is_empty() {
        return Err(WitnessError::NotClosed);
    }
    let mut atoms = Vec::new();
    collect_atoms(goal, &mut atoms)?;
    if atoms.len() > 20 {
        return Err(WitnessError::NotDerivableByThisGenerator("too many atoms".into()));
    }
    if !truth(goal) {
        return Err(WitnessError::GoalFalse);
    }
    let mut b = Builder::new(system);
    let mut literals = Vec::new();
    for atom in &atoms {
        let Formula::Eq(s, t) = atom else { unreachable!("atoms are equations") };
        literals.push(b.literal(s, t)?);
    }
    let target = judgment(system, goal.clone());
    if !b.index.contains_key(&target) {
        let taut = literals
            .iter()
            .rev()
            .fold(goal.clone(), |acc, (lit, _)| Formula::implies(lit.clone(), acc));
        let mut line = b.logical(LogicalKind::TAUT, taut);
        for (_, lit_line) in &literals {
            line = b.mp(*lit_line, line);
        }
    }
    let end = b.index[&target];
    let mut proof = b.proof;
    proof.lines.truncate(end + 1);
    let verdict = check(&proof);
    match verdict.first_error() {
        Some(d) => Err(WitnessError::SelfCheck(d.line)),
        None => Ok(proof),
    }
}
