use std::collections::HashMap;

use crate::formula::{match_instance, Formula, Term, TermView};

use super::LogicalKind;

const MAX_ATOMS: usize = 20;

/// Strips a `ForAll` prefix and one outer turnstile.
pub(crate) fn core_of(f: &Formula) -> &Formula {
    let mut cur = f;
    while let Formula::ForAll(_, body) = cur {
        cur = body;
    }
    match cur {
        Formula::Turnstile(body) => body,
        other => other,
    }
}

/// Propositional skeleton over the maximal non-propositional subformulas.
/// Turnstiles are transparent.
enum Skel {
    Atom(usize),
    Not(Box<Skel>),
    Implies(Box<Skel>, Box<Skel>),
    And(Box<Skel>, Box<Skel>),
    Or(Box<Skel>, Box<Skel>),
}

fn skeleton<'a>(f: &'a Formula, atoms: &mut HashMap<&'a Formula, usize>) -> Skel {
    match f {
        Formula::Turnstile(g) => skeleton(g, atoms),
        Formula::Not(g) => Skel::Not(Box::new(skeleton(g, atoms))),
        Formula::Implies(a, b) => Skel::Implies(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        Formula::And(a, b) => Skel::And(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        Formula::Or(a, b) => Skel::Or(Box::new(skeleton(a, atoms)), Box::new(skeleton(b, atoms))),
        atom => {
            let next = atoms.len();
            Skel::Atom(*atoms.entry(atom).or_insert(next))
        }
    }
}

fn value(s: &Skel, assignment: u32) -> bool {
    match s {
        Skel::Atom(i) => assignment >> i & 1 == 1,
        Skel::Not(a) => !value(a, assignment),
        Skel::Implies(a, b) => !value(a, assignment) || value(b, assignment),
        Skel::And(a, b) => value(a, assignment) && value(b, assignment),
        Skel::Or(a, b) => value(a, assignment) || value(b, assignment),
    }
}

/// Truth-table check. Formulas with more than twenty distinct atoms are
/// refused rather than enumerated.
pub fn is_tautology(f: &Formula) -> bool {
    let mut atoms = HashMap::new();
    let skel = skeleton(f, &mut atoms);
    if atoms.len() > MAX_ATOMS {
        return false;
    }
    (0..1u32 << atoms.len()).all(|a| value(&skel, a))
}

/// `b` is `a` with some occurrences of `l` replaced by `r`.
fn term_replaces(a: &Term, b: &Term, l: &Term, r: &Term) -> bool {
    if a == b || (a == l && b == r) {
        return true;
    }
    match (a.view(), b.view()) {
        (TermView::Add(x1, y1), TermView::Add(x2, y2)) => term_replaces(&x1, &x2, l, r) && term_replaces(&y1, &y2, l, r),
        (TermView::Mul(x1, y1), TermView::Mul(x2, y2)) => term_replaces(x1, x2, l, r) && term_replaces(y1, y2, l, r),
        _ => false,
    }
}

fn atom_replaces(a: &Formula, b: &Formula, l: &Term, r: &Term) -> bool {
    match (a, b) {
        (Formula::Eq(x1, y1), Formula::Eq(x2, y2)) => term_replaces(x1, x2, l, r) && term_replaces(y1, y2, l, r),
        (Formula::Pred(n, xs), Formula::Pred(m, ys)) => {
            n == m && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_replaces(x, y, l, r))
        }
        _ => false,
    }
}

fn is_instance_of(kind: LogicalKind, core: &Formula) -> bool {
    match kind {
        LogicalKind::TAUT => is_tautology(core),
        LogicalKind::EQ_REFL => matches!(core, Formula::Eq(a, b) if a == b),
        LogicalKind::EQ_SUBST => match core {
            Formula::Implies(eq, rest) => match (&**eq, &**rest) {
                (Formula::Eq(l, r), Formula::Implies(a, b)) => atom_replaces(a, b, l, r),
                _ => false,
            },
            _ => false,
        },
        LogicalKind::ALL_ELIM => match core {
            Formula::Implies(a, g) => match &**a {
                Formula::ForAll(x, body) => match_instance(body, x, g).is_some(),
                _ => false,
            },
            _ => false,
        },
        LogicalKind::EX_INTRO => match core {
            Formula::Implies(g, e) => match &**e {
                Formula::Exists(x, body) => match_instance(body, x, g).is_some(),
                _ => false,
            },
            _ => false,
        },
    }
}

/// Logical axiom check, allowing a universal prefix and an outer turnstile.
/// The equality and quantifier shapes are compared with turnstiles
/// removed.
pub(crate) fn is_logical(kind: LogicalKind, f: &Formula) -> bool {
    let core = core_of(f);
    if kind == LogicalKind::TAUT {
        return is_instance_of(kind, core);
    }
    if core.contains_turnstile() {
        is_instance_of(kind, &core.strip_turnstiles())
    } else {
        is_instance_of(kind, core)
    }
}

pub(crate) fn which_logical(kinds: &[LogicalKind], f: &Formula) -> Option<LogicalKind> {
    kinds.iter().copied().find(|k| is_logical(*k, f))
}
