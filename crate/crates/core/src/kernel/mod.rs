//! Proofs for the three rule sets and their checker.

mod check;
mod format;
mod logic;
mod search;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{numeral, parse, Formula, Term};

pub use check::{check, check_formulas, constructive_premise, num_formula, rule_step};
pub use format::ProofFormatError;
pub use logic::is_tautology;
pub use search::{search, SearchConfig, SearchError};
pub use witness::{witness_proof, WitnessError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    #[serde(rename = "PP")]
    Pp,
    #[serde(rename = "PP+")]
    PpPlus,
    #[serde(rename = "PA")]
    Pa,
}

impl System {
    pub const ALL: [System; 3] = [System::Pp, System::PpPlus, System::Pa];

    pub fn name(self) -> &'static str {
        match self {
            System::Pp => "PP",
            System::PpPlus => "PP+",
            System::Pa => "PA",
        }
    }

    pub fn is_pp(self) -> bool {
        matches!(self, System::Pp | System::PpPlus)
    }

    pub fn config(self) -> SystemConfig {
        SystemConfig::new(self)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Error)]
#[error("unknown system `{0}` (expected pp, pp+ or pa)")]
pub struct UnknownSystem(pub String);

impl FromStr for System {
    type Err = UnknownSystem;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pp" => Ok(System::Pp),
            "pp+" | "ppplus" | "pp-plus" => Ok(System::PpPlus),
            "pa" => Ok(System::Pa),
            _ => Err(UnknownSystem(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Schema {
    PP1,
    PP2,
    PP3,
    PP4,
    PP5,
    PP6,
    GP1,
    GP2,
    GP3,
    GP4,
    GP5,
    GP6,
}

impl Schema {
    pub const PP: [Schema; 6] = [Schema::PP1, Schema::PP2, Schema::PP3, Schema::PP4, Schema::PP5, Schema::PP6];
    pub const PA: [Schema; 6] = [Schema::GP1, Schema::GP2, Schema::GP3, Schema::GP4, Schema::GP5, Schema::GP6];

    pub fn name(self) -> String {
        format!("{self:?}")
    }

    /// The arithmetic content shared by the two families, over `x` and `y`.
    fn matrix(self) -> &'static str {
        match self {
            Schema::PP1 | Schema::GP1 => "~(0=(x+1))",
            Schema::PP2 | Schema::GP2 => "(~(x=y)=>~((x+1)=(y+1)))",
            Schema::PP3 | Schema::GP3 => "((x+0)=x)",
            Schema::PP4 | Schema::GP4 => "((x+(y+1))=((x+y)+1))",
            Schema::PP5 | Schema::GP5 => "((x*0)=0)",
            Schema::PP6 | Schema::GP6 => "((x*(y+1))=((x*y)+x))",
        }
    }

    /// Metavariables of the schema, in instantiation order.
    pub fn vars(self) -> &'static [&'static str] {
        match self {
            Schema::PP1 | Schema::GP1 | Schema::PP3 | Schema::GP3 | Schema::PP5 | Schema::GP5 => &["x"],
            _ => &["x", "y"],
        }
    }

    pub fn is_pp(self) -> bool {
        Schema::PP.contains(&self)
    }

    /// The open matrix `F(x, y)`.
    pub fn open(self) -> Formula {
        parse(self.matrix()).expect("schema text parses")
    }

    /// The closed axiom for PP schemas, `(Ax)..|=PP F`; the open schema
    /// for PA.
    pub fn formula(self) -> Formula {
        let open = self.open();
        if self.is_pp() {
            self.vars()
                .iter()
                .rev()
                .fold(Formula::turnstile(open), |acc, v| Formula::forall(*v, acc))
        } else {
            open
        }
    }

    /// The PP axiom with its quantifiers instantiated at numerals, still
    /// under the turnstile.
    pub fn pp_instance(self, values: &[Term]) -> Formula {
        let pairs: Vec<(&str, Term)> = self.vars().iter().copied().zip(values.iter().cloned()).collect();
        Formula::turnstile(self.open().substitute_all(&pairs))
    }
}

impl FromStr for Schema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Schema::PP
            .into_iter()
            .chain(Schema::PA)
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown schema `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("schema {0:?} does not belong to {1}")]
    WrongSystem(Schema, System),
    #[error("schema {schema:?} takes {expected} terms, got {got}")]
    Arity { schema: Schema, expected: usize, got: usize },
}

/// Axiom instance: the closed PP axiom (no terms), or the PA schema with
/// the terms substituted simultaneously.
pub fn axiom_instance(system: System, schema: Schema, terms: &[Term]) -> Result<Formula, AxiomError> {
    if system.is_pp() != schema.is_pp() {
        return Err(AxiomError::WrongSystem(schema, system));
    }
    let expected = if schema.is_pp() { 0 } else { schema.vars().len() };
    if terms.len() != expected {
        return Err(AxiomError::Arity { schema, expected, got: terms.len() });
    }
    if schema.is_pp() {
        return Ok(schema.formula());
    }
    let pairs: Vec<(&str, Term)> = schema.vars().iter().copied().zip(terms.iter().cloned()).collect();
    Ok(schema.open().substitute_all(&pairs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    PPR1,
    PPR2,
    PPR3,
    INST,
    GPR1,
    GPR2,
    GPR3,
}

impl RuleId {
    pub const ALL: [RuleId; 7] = [
        RuleId::PPR1,
        RuleId::PPR2,
        RuleId::PPR3,
        RuleId::INST,
        RuleId::GPR1,
        RuleId::GPR2,
        RuleId::GPR3,
    ];

    pub fn premise_count(self) -> usize {
        match self {
            RuleId::PPR1 | RuleId::PPR2 | RuleId::GPR1 | RuleId::GPR2 => 2,
            RuleId::PPR3 | RuleId::INST | RuleId::GPR3 => 1,
        }
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| format!("{r:?}") == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[allow(non_camel_case_types)]
pub enum LogicalKind {
    /// Propositional tautology over maximal non-propositional parts.
    TAUT,
    /// `t=t`.
    EQ_REFL,
    /// `(l=r)=>(A=>A')` with `A'` replacing some occurrences of `l` in the
    /// atom `A` by `r`.
    EQ_SUBST,
    /// `(Ax)F=>F[x:=t]`.
    ALL_ELIM,
    /// `F[x:=t]=>(Ex)F`.
    EX_INTRO,
}

impl LogicalKind {
    pub const ALL: [LogicalKind; 5] = [
        LogicalKind::TAUT,
        LogicalKind::EQ_REFL,
        LogicalKind::EQ_SUBST,
        LogicalKind::ALL_ELIM,
        LogicalKind::EX_INTRO,
    ];
}

impl FromStr for LogicalKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LogicalKind::ALL
            .into_iter()
            .find(|k| format!("{k:?}") == s)
            .ok_or_else(|| format!("unknown logical axiom kind `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub name: System,
    pub axioms: Vec<Schema>,
    pub rules: Vec<RuleId>,
    pub logical_base: Vec<LogicalKind>,
}

impl SystemConfig {
    pub fn new(system: System) -> SystemConfig {
        let (axioms, rules) = match system {
            System::Pp => (Schema::PP.to_vec(), vec![RuleId::PPR1, RuleId::PPR2, RuleId::INST]),
            System::PpPlus => (
                Schema::PP.to_vec(),
                vec![RuleId::PPR1, RuleId::PPR2, RuleId::PPR3, RuleId::INST],
            ),
            System::Pa => (Schema::PA.to_vec(), vec![RuleId::GPR1, RuleId::GPR2, RuleId::GPR3]),
        };
        SystemConfig {
            name: system,
            axioms,
            rules,
            logical_base: LogicalKind::ALL.to_vec(),
        }
    }

    pub fn enables(&self, rule: RuleId) -> bool {
        self.rules.contains(&rule)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom { schema: Schema, terms: Vec<Term> },
    Logical(LogicalKind),
    /// Premises are 0-based line positions.
    Rule { rule: RuleId, premises: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub system: System,
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn new(system: System) -> Proof {
        Proof { system, lines: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.lines.iter().map(|l| l.formula.clone()).collect()
    }

    /// Appends a line and returns its 0-based position.
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.lines.push(ProofLine { formula, justification });
        self.lines.len() - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineStatus {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "error")]
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineDiagnostic {
    /// 1-based line number.
    pub line: usize,
    pub status: LineStatus,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub accepted: bool,
    pub diagnostics: Vec<LineDiagnostic>,
}

impl Verdict {
    pub fn first_error(&self) -> Option<&LineDiagnostic> {
        self.diagnostics.iter().find(|d| d.status == LineStatus::Error)
    }
}

/// PP judgment `|=PP f` or bare `f` for PA.
pub fn judgment(system: System, f: Formula) -> Formula {
    if system.is_pp() {
        Formula::turnstile(f)
    } else {
        f
    }
}

pub(crate) fn numerals_upto(cap: u64) -> impl Iterator<Item = Term> {
    (0..=cap).map(numeral)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::print;

    #[test]
    fn axiom_examples() {
        let x = Term::var("x");
        assert_eq!(print(&axiom_instance(System::Pa, Schema::GP1, &[x]).unwrap()), "~(0=(x+1))");
        assert_eq!(print(&axiom_instance(System::Pp, Schema::PP5, &[]).unwrap()), "(Ax)|=PP((x*0)=0)");
        let ab = [Term::var("a"), Term::var("b")];
        assert_eq!(print(&axiom_instance(System::Pa, Schema::GP6, &ab).unwrap()), "((a*(b+1))=((a*b)+a))");
        assert_eq!(
            print(&Schema::PP2.formula()),
            "(Ax)(Ay)|=PP(~(x=y)=>~((x+1)=(y+1)))"
        );
        assert!(axiom_instance(System::Pa, Schema::GP6, &ab[..1]).is_err());
        assert!(axiom_instance(System::Pp, Schema::GP1, &[]).is_err());
        for s in Schema::PP {
            assert!(s.formula().is_pp_wff());
            assert!(s.formula().is_proposition());
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("pp+".parse::<System>().unwrap(), System::PpPlus);
        assert_eq!("GP4".parse::<Schema>().unwrap(), Schema::GP4);
        assert_eq!("INST".parse::<RuleId>().unwrap(), RuleId::INST);
        assert_eq!("EQ_SUBST".parse::<LogicalKind>().unwrap(), LogicalKind::EQ_SUBST);
        assert!("PP7".parse::<Schema>().is_err());
    }
}
