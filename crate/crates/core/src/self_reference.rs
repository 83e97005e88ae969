//! The diagonal sentence. `Q` enters the language as a defined predicate
//! whose instances are decided by the procedure `q`; its full arithmetic
//! expansion is never built.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::codec::{decode_formula, encode_formula, CodecError, SymbolTable};
use crate::formula::{parse_in, CompactDisplay, Formula, ParseError, PredicateInterp, Term};
use crate::kernel::{constructive_premise, rule_step, RuleId, System};
use crate::primrec::{ProvabilityLimits, ProvabilityOracle};

pub const Q: &str = "Q";

/// Numerals above this are shown as `[n]` in reports.
const SHOW_LIMIT: u64 = 64;

pub const NOT_DECIDED: &str = "not decided at this bound";

#[derive(Debug, Error)]
pub enum SelfRefError {
    #[error("predicate Q is not registered in the symbol table")]
    QUnregistered,
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `Q(x, y)` evaluated as `q(x, y) = 1`.
pub struct QPredicate {
    oracle: ProvabilityOracle,
}

impl QPredicate {
    /// For a table that already has `Q`.
    pub fn for_table(system: System, table: &SymbolTable, limits: ProvabilityLimits) -> Result<Self, SelfRefError> {
        if !table.predicates().iter().any(|n| n == Q) {
            return Err(SelfRefError::QUnregistered);
        }
        Ok(QPredicate { oracle: ProvabilityOracle::new(system, table.clone(), limits) })
    }

    pub fn oracle(&self) -> &ProvabilityOracle {
        &self.oracle
    }
}

impl PredicateInterp for QPredicate {
    fn holds(&self, name: &str, args: &[BigUint]) -> Option<bool> {
        match (name, args) {
            (Q, [x, y]) => Some(self.oracle.q(x, y) == 1),
            _ => None,
        }
    }
}

/// Adds `Q` to `table` and returns its interpretation. The oracle reads
/// codes against the extended table.
pub fn register_q(system: System, table: &mut SymbolTable, limits: ProvabilityLimits) -> Result<QPredicate, SelfRefError> {
    table.register(Q)?;
    Ok(QPredicate { oracle: ProvabilityOracle::new(system, table.clone(), limits) })
}

pub fn pre_image_text(system: System) -> &'static str {
    if system.is_pp() {
        "(Ay)|=PP(~Q(x,y))"
    } else {
        "(Ay)(~Q(x,y))"
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalResult {
    pub system: System,
    pub pre_image: Formula,
    pub p: BigUint,
    pub gus: Formula,
}

pub fn diagonalize(system: System, table: &SymbolTable) -> Result<DiagonalResult, SelfRefError> {
    if !table.predicates().iter().any(|n| n == Q) {
        return Err(SelfRefError::QUnregistered);
    }
    let pre_image = parse_in(pre_image_text(system), table)?;
    let p = encode_formula(&pre_image, table)?;
    let gus = pre_image.substitute("x", &Term::Numeral(p.clone()));
    Ok(DiagonalResult { system, pre_image, p, gus })
}

impl DiagonalResult {
    /// Names of the violated invariants; empty when all hold.
    pub fn invariant_failures(&self, table: &SymbolTable) -> Vec<&'static str> {
        let mut failed = Vec::new();
        if decode_formula(&self.p, table).ok().as_ref() != Some(&self.pre_image) {
            failed.push("decode(p) = pre_image");
        }
        if self.gus != self.pre_image.substitute("x", &Term::Numeral(self.p.clone())) {
            failed.push("gus = pre_image[x := p]");
        }
        if !self.gus.free_vars().is_empty() {
            failed.push("gus is closed");
        }
        if !self.pre_image.free_vars().iter().eq(["x".to_string()].iter()) {
            failed.push("pre_image has exactly the free variable x");
        }
        if !self.numeral_evaluates() {
            failed.push("numeral(p) evaluates to p");
        }
        failed
    }

    /// The numeral inside `gus` evaluates back to `p`, checked through its
    /// successor view as well as directly.
    pub fn numeral_evaluates(&self) -> bool {
        let Formula::ForAll(_, body) = &self.gus else { return false };
        let mut inner: &Formula = body;
        if let Formula::Turnstile(b) = inner {
            inner = b;
        }
        let Formula::Not(atom) = inner else { return false };
        let Formula::Pred(_, args) = &**atom else { return false };
        let Some(n) = args.first() else { return false };
        let pred_plus_one = Term::succ(Term::Numeral(&self.p - 1u32));
        n.value().as_ref() == Some(&self.p) && pred_plus_one.value().as_ref() == Some(&self.p)
    }

    pub fn summary(&self) -> DiagonalSummary {
        DiagonalSummary {
            system: self.system.name().to_string(),
            pre_image: crate::formula::print(&self.pre_image),
            p: self.p.to_string(),
            p_bits: self.p.bits(),
            gus: CompactDisplay { formula: &self.gus, limit: SHOW_LIMIT }.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalSummary {
    pub system: String,
    pub pre_image: String,
    pub p: String,
    pub p_bits: u64,
    /// `p` is shown as `[p]`.
    pub gus: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructiveStep {
    pub rule: String,
    pub premise: String,
    pub conclusion: String,
    pub enabled: bool,
    pub shape_valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub sample_bound: u64,
    /// Every `r < sample_bound` with `q(p, r) = 1`. Each one would be a
    /// checked proof of the diagonal sentence.
    pub proofs_found: Vec<u64>,
    pub ppr3: String,
    pub final_step: Option<ConstructiveStep>,
    pub gus_provable: String,
    pub negation_provable: String,
    pub well_definedness_target: String,
    pub note: String,
}

/// `(E!w)Q(x,w)`, stated but not decided.
pub fn well_definedness_target(table: &SymbolTable) -> Result<Formula, SelfRefError> {
    Ok(parse_in("(E!w)Q(x,w)", table)?)
}

/// A bounded look at the diagonal sentence. Nothing here is a claim about
/// unbounded provability.
pub fn gus_case_report(
    result: &DiagonalResult,
    q: &QPredicate,
    table: &SymbolTable,
    sample_bound: u64,
) -> Result<CaseReport, SelfRefError> {
    let proofs_found = (0..sample_bound).filter(|r| q.oracle.q(&result.p, &BigUint::from(*r)) == 1).collect();
    let enabled = result.system.config().enables(RuleId::PPR3);
    let final_step = result.system.is_pp().then(|| {
        let premise = constructive_premise(&result.gus).expect("gus has a quantifier prefix and a turnstile");
        let shape_valid = rule_step(System::PpPlus, RuleId::PPR3, &[&premise], &result.gus).is_ok();
        ConstructiveStep {
            rule: "PPR3".into(),
            premise: CompactDisplay { formula: &premise, limit: SHOW_LIMIT }.to_string(),
            conclusion: CompactDisplay { formula: &result.gus, limit: SHOW_LIMIT }.to_string(),
            enabled,
            shape_valid,
        }
    });
    Ok(CaseReport {
        sample_bound,
        proofs_found,
        ppr3: if enabled { "enabled" } else { "disabled" }.into(),
        final_step,
        gus_provable: NOT_DECIDED.into(),
        negation_provable: NOT_DECIDED.into(),
        well_definedness_target: crate::formula::print(&well_definedness_target(table)?),
        note: "Q is a defined predicate evaluated by q, not its arithmetic expansion".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode_proof;
    use crate::formula::{eval_closed, parse, Env, Evaluator};
    use crate::kernel::witness_proof;

    fn setup(system: System) -> (SymbolTable, QPredicate) {
        let mut table = SymbolTable::new();
        let q = register_q(system, &mut table, ProvabilityLimits::default()).unwrap();
        (table, q)
    }

    #[test]
    fn registration() {
        let (mut table, q) = setup(System::Pp);
        assert!(parse_in("(Ay)|=PP(~Q(x,y))", &table).is_ok());
        assert!(register_q(System::Pp, &mut table, ProvabilityLimits::default()).is_err());
        let f = parse_in("Q(0,0)", &table).unwrap();
        assert!(Evaluator::new(10).with_predicates(&q).eval(&f, &mut Env::new()).is_false());
        // without an interpretation the atom is unknown
        assert!(!eval_closed(&f, 10).unwrap().is_true());
    }

    #[test]
    fn predicate_agrees_with_q() {
        let (table, q) = setup(System::Pp);
        let h = parse("(z=z)").unwrap();
        let x = encode_formula(&h, &table).unwrap();
        let small = witness_proof(&parse("(0=0)").unwrap(), System::Pp).unwrap();
        let y = encode_proof(&small.formulas(), &table).unwrap();
        let f = Formula::pred(Q, vec![Term::Numeral(x.clone()), Term::Numeral(y.clone())]);
        let verdict = Evaluator::new(10).with_predicates(&q).eval(&f, &mut Env::new());
        assert!(verdict.is_false());
        assert_eq!(q.oracle().q(&x, &y), 0);
        // the true instance is checked on decoded lines
        let goal = h.substitute("z", &Term::Numeral(x.clone()));
        assert_eq!(q.oracle().q_for_lines(&x, &[goal]), Ok(()));
    }

    #[test]
    fn diagonal_pp_and_pa() {
        for system in [System::Pp, System::PpPlus, System::Pa] {
            let (table, q) = setup(system);
            let d = diagonalize(system, &table).unwrap();
            assert_eq!(d.invariant_failures(&table), Vec::<&str>::new());
            assert!(d.gus.is_proposition());
            assert_eq!(d, diagonalize(system, &table).unwrap());
            let report = gus_case_report(&d, &q, &table, 200).unwrap();
            assert!(report.proofs_found.is_empty());
            assert_eq!(report.gus_provable, NOT_DECIDED);
            assert_eq!(report.ppr3, if system == System::PpPlus { "enabled" } else { "disabled" });
            if let Some(step) = report.final_step {
                assert!(step.shape_valid);
            }
        }
    }

    #[test]
    fn needs_registration() {
        assert!(matches!(diagonalize(System::Pp, &SymbolTable::new()), Err(SelfRefError::QUnregistered)));
    }
}
