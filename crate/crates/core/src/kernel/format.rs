//! Text form of annotated proofs, one line per step:
//!
//! ```text
//! 1 | (Ax)|=PP((x+0)=x) | AX PP3
//! 2 | |=PP((0+0)=0) | RULE INST 1
//! ```
//!
//! Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{parse, parse_in, parse_term_list, print, print_term, ParseError, PredicateScope};

use super::{Justification, Proof, System};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFormatError {
    #[error("proof line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("proof line {line}: {source}")]
    Formula {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("empty proof")]
    Empty,
}

fn parse_justification(text: &str, line: usize) -> Result<Justification, ProofFormatError> {
    let err = |msg: String| ProofFormatError::Line { line, msg };
    let mut words = text.split_whitespace();
    match words.next() {
        Some("AX") => {
            let schema = words.next().ok_or_else(|| err("missing schema".into()))?.parse().map_err(err)?;
            let rest = text.trim_start()[2..].trim_start();
            let rest = rest[rest.find(char::is_whitespace).unwrap_or(rest.len())..].trim();
            let terms = if rest.is_empty() {
                Vec::new()
            } else {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| err(format!("expected [terms], found `{rest}`")))?;
                parse_term_list(inner).map_err(|source| ProofFormatError::Formula { line, source })?
            };
            Ok(Justification::Axiom { schema, terms })
        }
        Some("LOG") => {
            let kind = words.next().ok_or_else(|| err("missing logical kind".into()))?.parse().map_err(err)?;
            match words.next() {
                None => Ok(Justification::Logical(kind)),
                Some(extra) => Err(err(format!("unexpected `{extra}`"))),
            }
        }
        Some("RULE") => {
            let rule = words.next().ok_or_else(|| err("missing rule".into()))?.parse().map_err(err)?;
            let premises = words
                .map(|w| match w.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(n - 1),
                    _ => Err(err(format!("bad premise index `{w}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Justification::Rule { rule, premises })
        }
        Some(other) => Err(err(format!("expected AX, LOG or RULE, found `{other}`"))),
        None => Err(err("missing justification".into())),
    }
}

impl Proof {
    /// Reads the text form. With a scope, defined predicates must be
    /// registered.
    pub fn parse(text: &str, system: System, scope: Option<&dyn PredicateScope>) -> Result<Proof, ProofFormatError> {
        let mut proof = Proof::new(system);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |msg: String| ProofFormatError::Line { line, msg };
            let (first, last) = match (trimmed.find(" | "), trimmed.rfind(" | ")) {
                (Some(a), Some(b)) if a < b => (a, b),
                _ => return Err(err("expected `<index> | <formula> | <justification>`".into())),
            };
            let index: usize = trimmed[..first].trim().parse().map_err(|_| err("bad line index".into()))?;
            if index != proof.lines.len() + 1 {
                return Err(err(format!("line index {index}, expected {}", proof.lines.len() + 1)));
            }
            let ftext = trimmed[first + 3..last].trim();
            let formula = match scope {
                Some(s) => parse_in(ftext, s),
                None => parse(ftext),
            }
            .map_err(|source| ProofFormatError::Formula { line, source })?;
            let justification = parse_justification(&trimmed[last + 3..], line)?;
            proof.push(formula, justification);
        }
        if proof.lines.is_empty() {
            return Err(ProofFormatError::Empty);
        }
        Ok(proof)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.lines.iter().enumerate() {
            let just = match &l.justification {
                Justification::Axiom { schema, terms } if terms.is_empty() => format!("AX {schema:?}"),
                Justification::Axiom { schema, terms } => {
                    let ts: Vec<String> = terms.iter().map(print_term).collect();
                    format!("AX {schema:?} [{}]", ts.join(", "))
                }
                Justification::Logical(k) => format!("LOG {k:?}"),
                Justification::Rule { rule, premises } => {
                    let ps: Vec<String> = premises.iter().map(|p| (p + 1).to_string()).collect();
                    format!("RULE {rule:?} {}", ps.join(" "))
                }
            };
            let _ = writeln!(out, "{} | {} | {}", i + 1, print(&l.formula), just);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check, RuleId};

    const INST_PROOF: &str = "\
# (0+0)=0 from the additive identity
1 | (Ax)|=PP((x+0)=x) | AX PP3
2 | |=PP((0+0)=0) | RULE INST 1
";

    #[test]
    fn round_trip_and_check() {
        let proof = Proof::parse(INST_PROOF, System::Pp, None).unwrap();
        assert_eq!(proof.lines.len(), 2);
        assert_eq!(
            proof.lines[1].justification,
            Justification::Rule { rule: RuleId::INST, premises: vec![0] }
        );
        let again = Proof::parse(&proof.to_text(), System::Pp, None).unwrap();
        assert_eq!(again, proof);
        assert!(check(&proof).accepted);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(
            Proof::parse("1 | (0=0)", System::Pa, None),
            Err(ProofFormatError::Line { line: 1, .. })
        ));
        assert!(matches!(
            Proof::parse("2 | (0=0) | LOG EQ_REFL", System::Pa, None),
            Err(ProofFormatError::Line { .. })
        ));
        assert!(matches!(
            Proof::parse("1 | (0= | LOG EQ_REFL", System::Pa, None),
            Err(ProofFormatError::Formula { .. })
        ));
        assert!(matches!(
            Proof::parse("1 | (0=0) | RULE GPR1 0 1", System::Pa, None),
            Err(ProofFormatError::Line { .. })
        ));
        assert!(matches!(Proof::parse("# nothing\n", System::Pa, None), Err(ProofFormatError::Empty)));
        let p = Proof::parse("1 | ((x+0)=x) | AX GP3 [x]", System::Pa, None).unwrap();
        assert!(check(&p).accepted);
    }
}
