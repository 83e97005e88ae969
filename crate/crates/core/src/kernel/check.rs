use std::collections::HashMap;

use crate::formula::{match_instance, parse, Formula, Term, TermView};

use super::logic::{is_logical, which_logical};
use super::{
    axiom_instance, Justification, LineDiagnostic, LineStatus, Proof, RuleId, Schema, System, SystemConfig,
    Verdict,
};

/// A line read as `Π F` or `Π |=PP F`, with `Π` a universal prefix.
pub(super) struct Judgment<'a> {
    pub prefix: Vec<&'a str>,
    pub turnstile: bool,
    pub body: &'a Formula,
}

pub(super) fn judgment_of(f: &Formula) -> Judgment<'_> {
    let mut prefix = Vec::new();
    let mut cur = f;
    while let Formula::ForAll(v, body) = cur {
        prefix.push(v.as_str());
        cur = body;
    }
    match cur {
        Formula::Turnstile(body) => Judgment { prefix, turnstile: true, body },
        other => Judgment { prefix, turnstile: false, body: other },
    }
}

pub(super) fn rebuild(prefix: &[&str], turnstile: bool, body: Formula) -> Formula {
    let inner = if turnstile { Formula::turnstile(body) } else { body };
    prefix.iter().rev().fold(inner, |acc, v| Formula::forall(*v, acc))
}

fn succ_of(x: &str) -> Term {
    Term::add(Term::var(x), Term::One)
}

/// `x is a numeral`, written in the turnstile language.
pub fn num_formula(x: &str) -> Formula {
    let template = parse("((x=0)|(E!y)|=PP(E!z)|=PP((x=(y+1))&(z=(x+1))))").expect("numeral formula parses");
    template.substitute("x", &Term::var(x))
}

fn modus_ponens_pp(a: &Formula, b: &Formula, c: &Formula) -> bool {
    let (ja, jb, jc) = (judgment_of(a), judgment_of(b), judgment_of(c));
    if ja.prefix != jc.prefix || jb.prefix != jc.prefix || ja.turnstile != jc.turnstile || jb.turnstile != jc.turnstile {
        return false;
    }
    matches!(jb.body, Formula::Implies(p, q) if **p == *ja.body && **q == *jc.body)
}

/// Base and step premises that induction would need for `c`.
fn induction_premises_pp(c: &Formula) -> Option<(Formula, Formula)> {
    let jc = judgment_of(c);
    let (&x, outer) = jc.prefix.split_last()?;
    let base = rebuild(outer, jc.turnstile, jc.body.substitute(x, &Term::Zero));
    let step = rebuild(
        &jc.prefix,
        jc.turnstile,
        Formula::implies(jc.body.clone(), jc.body.substitute(x, &succ_of(x))),
    );
    Some((base, step))
}

fn induction_premises_pa(c: &Formula) -> Option<(Formula, Formula)> {
    let Formula::ForAll(x, body) = c else { return None };
    let base = body.substitute(x, &Term::Zero);
    let step = Formula::forall(x.clone(), Formula::implies((**body).clone(), body.substitute(x, &succ_of(x))));
    Some((base, step))
}

/// For an induction step line, the base it needs and the conclusion.
pub(super) fn induction_step_conclusion(system: System, step: &Formula) -> Option<(Formula, Formula)> {
    let j = judgment_of(step);
    if system.is_pp() {
        let (&x, outer) = j.prefix.split_last()?;
        let Formula::Implies(f, g) = j.body else { return None };
        if **g != f.substitute(x, &succ_of(x)) {
            return None;
        }
        Some((rebuild(outer, j.turnstile, f.substitute(x, &Term::Zero)), rebuild(&j.prefix, j.turnstile, (**f).clone())))
    } else {
        let Formula::ForAll(x, body) = step else { return None };
        let Formula::Implies(f, g) = &**body else { return None };
        if **g != f.substitute(x, &succ_of(x)) {
            return None;
        }
        Some((f.substitute(x, &Term::Zero), Formula::forall(x.clone(), (**f).clone())))
    }
}

/// The premise from which `PPR3` concludes `c`, if `c` has the right shape.
pub fn constructive_premise(c: &Formula) -> Option<Formula> {
    let jc = judgment_of(c);
    if !jc.turnstile {
        return None;
    }
    let (&x, outer) = jc.prefix.split_last()?;
    let inner = Formula::forall(
        x,
        Formula::implies(Formula::turnstile(num_formula(x)), Formula::turnstile(jc.body.clone())),
    );
    Some(outer.iter().rev().fold(inner, |acc, v| Formula::forall(*v, acc)))
}

fn instantiates(premise: &Formula, c: &Formula) -> bool {
    let Formula::ForAll(x, body) = premise else { return false };
    match match_instance(body, x, c) {
        Some(None) => true,
        Some(Some(t)) => t.is_numeral(),
        None => false,
    }
}

fn rule_applies(rule: RuleId, premises: &[&Formula], c: &Formula) -> bool {
    match (rule, premises) {
        (RuleId::PPR1, [a, b]) => modus_ponens_pp(a, b, c) || modus_ponens_pp(b, a, c),
        (RuleId::GPR1, [a, b]) => {
            let mp = |a: &Formula, b: &Formula| matches!(b, Formula::Implies(p, q) if **p == *a && **q == *c);
            mp(a, b) || mp(b, a)
        }
        (RuleId::PPR2, [a, b]) => induction_premises_pp(c)
            .is_some_and(|(base, step)| (**a == base && **b == step) || (**b == base && **a == step)),
        (RuleId::GPR2, [a, b]) => induction_premises_pa(c)
            .is_some_and(|(base, step)| (**a == base && **b == step) || (**b == base && **a == step)),
        (RuleId::PPR3, [a]) => constructive_premise(c).is_some_and(|p| **a == p),
        (RuleId::INST, [a]) => instantiates(a, c),
        (RuleId::GPR3, [a]) => matches!(c, Formula::ForAll(_, body) if **body == **a),
        _ => false,
    }
}

/// Whether one application of `rule` from `premises` to `conclusion` is a
/// valid step of `system`.
pub fn rule_step(system: System, rule: RuleId, premises: &[&Formula], conclusion: &Formula) -> Result<(), String> {
    if !system.config().enables(rule) {
        return Err("rule not enabled".into());
    }
    if premises.len() != rule.premise_count() {
        return Err(format!("{rule:?} takes {} premises", rule.premise_count()));
    }
    if rule_applies(rule, premises, conclusion) {
        Ok(())
    } else {
        Err(format!("{rule:?} pattern mismatch"))
    }
}

fn line_form_error(system: System, f: &Formula) -> Option<&'static str> {
    if system.is_pp() {
        (!f.is_pp_wff()).then_some("not a well-formed PP judgment")
    } else {
        f.contains_turnstile().then_some("turnstile in a PA formula")
    }
}

fn justify(cfg: &SystemConfig, lines: &[Formula], i: usize, just: &Justification) -> Result<(), String> {
    let f = &lines[i];
    match just {
        Justification::Axiom { schema, terms } => {
            if !cfg.axioms.contains(schema) {
                return Err(format!("axiom {schema:?} not in {}", cfg.name));
            }
            let expected = axiom_instance(cfg.name, *schema, terms).map_err(|e| e.to_string())?;
            if expected == *f {
                Ok(())
            } else {
                Err(format!("not an instance of {schema:?}"))
            }
        }
        Justification::Logical(kind) => {
            if !cfg.logical_base.contains(kind) {
                return Err(format!("logical axiom {kind:?} not enabled"));
            }
            if is_logical(*kind, f) {
                Ok(())
            } else {
                Err(format!("not an instance of {kind:?}"))
            }
        }
        Justification::Rule { rule, premises } => {
            if !cfg.enables(*rule) {
                return Err("rule not enabled".to_string());
            }
            if premises.len() != rule.premise_count() {
                return Err(format!("{rule:?} takes {} premises", rule.premise_count()));
            }
            if let Some(bad) = premises.iter().find(|&&p| p >= i) {
                return Err(format!("premise {} does not precede line {}", bad + 1, i + 1));
            }
            let prem: Vec<&Formula> = premises.iter().map(|&p| &lines[p]).collect();
            if rule_applies(*rule, &prem, f) {
                Ok(())
            } else {
                Err(format!("{rule:?} pattern mismatch"))
            }
        }
    }
}

fn finish(diagnostics: Vec<LineDiagnostic>) -> Verdict {
    let accepted = !diagnostics.is_empty() && diagnostics.iter().all(|d| d.status == LineStatus::Ok);
    Verdict { accepted, diagnostics }
}

fn diag(i: usize, result: Result<String, String>) -> LineDiagnostic {
    match result {
        Ok(reason) => LineDiagnostic { line: i + 1, status: LineStatus::Ok, reason },
        Err(reason) => LineDiagnostic { line: i + 1, status: LineStatus::Error, reason },
    }
}

/// Checks an annotated proof. Checking stops at the first bad line, which
/// carries the reason.
pub fn check(proof: &Proof) -> Verdict {
    let cfg = proof.system.config();
    let lines = proof.formulas();
    let mut out = Vec::with_capacity(lines.len());
    for (i, line) in proof.lines.iter().enumerate() {
        let res = match line_form_error(proof.system, &line.formula) {
            Some(e) => Err(e.to_string()),
            None => justify(&cfg, &lines, i, &line.justification).map(|()| "ok".to_string()),
        };
        let failed = res.is_err();
        out.push(diag(i, res));
        if failed {
            break;
        }
    }
    finish(out)
}

/// Reconstructing check of a bare formula sequence: each line must be an
/// axiom, a logical axiom, or follow from earlier lines by an enabled rule.
pub fn check_formulas(system: System, lines: &[Formula]) -> Verdict {
    let cfg = system.config();
    let mut seen: HashMap<&Formula, usize> = HashMap::new();
    let mut out = Vec::with_capacity(lines.len());
    for (i, f) in lines.iter().enumerate() {
        let res = match line_form_error(system, f) {
            Some(e) => Err(e.to_string()),
            None => reconstruct(&cfg, &lines[..i], &seen, f).ok_or_else(|| "no justification found".to_string()),
        };
        let failed = res.is_err();
        out.push(diag(i, res));
        if failed {
            break;
        }
        seen.entry(f).or_insert(i);
    }
    finish(out)
}

fn reconstruct(cfg: &SystemConfig, earlier: &[Formula], seen: &HashMap<&Formula, usize>, f: &Formula) -> Option<String> {
    if let Some(s) = cfg.axioms.iter().find(|s| is_axiom_instance(cfg.name, **s, f)) {
        return Some(format!("AX {s:?}"));
    }
    if let Some(k) = which_logical(&cfg.logical_base, f) {
        return Some(format!("LOG {k:?}"));
    }
    let have = |g: &Formula| seen.get(g).map(|i| i + 1);
    for rule in cfg.rules.iter().copied() {
        let found = match rule {
            RuleId::PPR1 => earlier.iter().find_map(|b| {
                let jb = judgment_of(b);
                let jc = judgment_of(f);
                match jb.body {
                    Formula::Implies(p, q) if jb.prefix == jc.prefix && jb.turnstile == jc.turnstile && **q == *jc.body => {
                        have(&rebuild(&jc.prefix, jc.turnstile, (**p).clone()))
                    }
                    _ => None,
                }
            }),
            RuleId::GPR1 => earlier.iter().find_map(|b| match b {
                Formula::Implies(p, q) if **q == *f => have(p),
                _ => None,
            }),
            RuleId::PPR2 | RuleId::GPR2 => {
                let prem = if rule == RuleId::PPR2 { induction_premises_pp(f) } else { induction_premises_pa(f) };
                prem.and_then(|(base, step)| have(&base).and(have(&step)))
            }
            RuleId::PPR3 => constructive_premise(f).and_then(|p| have(&p)),
            RuleId::INST => earlier
                .iter()
                .position(|p| instantiates(p, f))
                .map(|i| i + 1),
            RuleId::GPR3 => match f {
                Formula::ForAll(_, body) => have(body),
                _ => None,
            },
        };
        if let Some(line) = found {
            return Some(format!("RULE {rule:?} from {line}"));
        }
    }
    None
}

/// PP axioms are closed; PA schemas are matched with every metavariable
/// free to take any term.
fn is_axiom_instance(system: System, schema: Schema, f: &Formula) -> bool {
    if schema.is_pp() {
        return schema.formula() == *f;
    }
    let mut bound: HashMap<&str, Term> = HashMap::new();
    if !match_schema(&schema.open(), schema.vars(), f, &mut bound) {
        return false;
    }
    let terms: Vec<Term> = schema.vars().iter().map(|v| bound.get(v).cloned().unwrap_or(Term::Zero)).collect();
    axiom_instance(system, schema, &terms).is_ok_and(|g| g == *f)
}

fn match_schema<'v>(p: &Formula, vars: &[&'v str], t: &Formula, bound: &mut HashMap<&'v str, Term>) -> bool {
    match (p, t) {
        (Formula::Eq(a, c), Formula::Eq(d, e)) => schema_term(a, vars, d, bound) && schema_term(c, vars, e, bound),
        (Formula::Not(a), Formula::Not(c)) => match_schema(a, vars, c, bound),
        (Formula::Implies(a, c), Formula::Implies(d, e)) => {
            match_schema(a, vars, d, bound) && match_schema(c, vars, e, bound)
        }
        _ => false,
    }
}

fn schema_term<'v>(p: &Term, vars: &[&'v str], t: &Term, bound: &mut HashMap<&'v str, Term>) -> bool {
    if let Term::Var(v) = p {
        if let Some(&key) = vars.iter().find(|k| **k == v.as_str()) {
            return match bound.get(key) {
                Some(b) => b == t,
                None => {
                    bound.insert(key, t.clone());
                    true
                }
            };
        }
    }
    match (p.view(), t.view()) {
        (TermView::Add(a, c), TermView::Add(d, e)) => schema_term(&a, vars, &d, bound) && schema_term(&c, vars, &e, bound),
        (TermView::Mul(a, c), TermView::Mul(d, e)) => schema_term(a, vars, d, bound) && schema_term(c, vars, e, bound),
        _ => p == t,
    }
}
