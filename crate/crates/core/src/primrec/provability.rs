//! The proof-pair predicate `prf` and the self-reference predicate `q`.
//!
//! Both are ordinary procedures. Each step is a bounded loop over the
//! prime-power digits of the input (decoding, re-tokenising, checking lines
//! against earlier lines), so both are primitive recursive in the usual
//! sense; the repository README spells the argument out.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::codec::{decode_formula, decode_sequence, encode_sequence, proof_from_codes, SymbolTable, SEPARATOR};
use crate::formula::{Formula, Term};
use crate::kernel::{check_formulas, System};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvabilityLimits {
    /// Inputs wider than this are refused before any factoring.
    pub max_bits: u64,
    pub max_tokens: usize,
    pub max_lines: usize,
}

impl Default for ProvabilityLimits {
    fn default() -> Self {
        ProvabilityLimits { max_bits: 1 << 20, max_tokens: 50_000, max_lines: 2_000 }
    }
}

/// Why `prf` or `q` came out 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    LimitExceeded(String),
    NotACode(String),
    KernelRejected { line: usize, reason: String },
    WrongConclusion,
    FreeVariables(usize),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::LimitExceeded(what) => write!(f, "limit exceeded: {what}"),
            Rejection::NotACode(why) => write!(f, "not a code: {why}"),
            Rejection::KernelRejected { line, reason } => write!(f, "kernel rejects line {line}: {reason}"),
            Rejection::WrongConclusion => f.write_str("last line does not match"),
            Rejection::FreeVariables(n) => write!(f, "formula has {n} free variables, expected 1"),
        }
    }
}

pub struct ProvabilityOracle {
    system: System,
    table: SymbolTable,
    limits: ProvabilityLimits,
}

impl ProvabilityOracle {
    pub fn new(system: System, table: SymbolTable, limits: ProvabilityLimits) -> Self {
        ProvabilityOracle { system, table, limits }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    fn bounded_codes(&self, n: &BigUint) -> Result<Vec<u64>, Rejection> {
        if n.bits() > self.limits.max_bits {
            return Err(Rejection::LimitExceeded(format!("{} bits", n.bits())));
        }
        let codes = decode_sequence(n).map_err(|e| Rejection::NotACode(e.to_string()))?;
        if codes.len() > self.limits.max_tokens {
            return Err(Rejection::LimitExceeded(format!("{} tokens", codes.len())));
        }
        let lines = codes.iter().filter(|c| **c == SEPARATOR).count() + 1;
        if lines > self.limits.max_lines {
            return Err(Rejection::LimitExceeded(format!("{lines} lines")));
        }
        Ok(codes)
    }

    fn check_lines(&self, lines: &[Formula]) -> Result<(), Rejection> {
        match check_formulas(self.system, lines).first_error() {
            Some(d) => Err(Rejection::KernelRejected { line: d.line, reason: d.reason.clone() }),
            None => Ok(()),
        }
    }

    /// Decodes and checks the proof coded by `k`; returns its lines and the
    /// codes of the last one.
    fn checked_proof(&self, k: &BigUint) -> Result<(Vec<Formula>, Vec<u64>), Rejection> {
        let codes = self.bounded_codes(k)?;
        let lines = proof_from_codes(&codes, &self.table).map_err(|e| Rejection::NotACode(e.to_string()))?;
        self.check_lines(&lines)?;
        let last = codes.rsplit(|c| *c == SEPARATOR).next().unwrap_or_default().to_vec();
        Ok((lines, last))
    }

    pub fn prf_verdict(&self, k: &BigUint, m: &BigUint) -> Result<(), Rejection> {
        let (_, last) = self.checked_proof(k)?;
        let code = encode_sequence(&last).map_err(|e| Rejection::NotACode(e.to_string()))?;
        if code == *m {
            Ok(())
        } else {
            Err(Rejection::WrongConclusion)
        }
    }

    /// `prf(k, m)`: 1 iff `k` codes a proof whose last line has code `m`.
    pub fn prf(&self, k: &BigUint, m: &BigUint) -> u64 {
        u64::from(self.prf_verdict(k, m).is_ok())
    }

    /// `H[z := numeral(x)]` for the one-free-variable formula coded by `x`.
    pub fn diagonal_instance(&self, x: &BigUint) -> Result<Formula, Rejection> {
        if x.bits() > self.limits.max_bits {
            return Err(Rejection::LimitExceeded(format!("{} bits", x.bits())));
        }
        let h = decode_formula(x, &self.table).map_err(|e| Rejection::NotACode(e.to_string()))?;
        let free = h.free_vars();
        if free.len() != 1 {
            return Err(Rejection::FreeVariables(free.len()));
        }
        let z = free.into_iter().next().expect("one free variable");
        Ok(h.substitute(&z, &Term::Numeral(x.clone())))
    }

    /// The instance is compared as a formula rather than by code: its
    /// numeral is as long as `x` is large, so its code is never computed.
    pub fn q_verdict(&self, x: &BigUint, y: &BigUint) -> Result<(), Rejection> {
        let target = self.diagonal_instance(x)?;
        let (lines, _) = self.checked_proof(y)?;
        Self::concludes(&lines, &target)
    }

    /// `q` with the proof already decoded. Proofs of diagonal instances
    /// contain the numeral of a formula code and so have no code of
    /// practical size; this is how such proofs are checked.
    pub fn q_for_lines(&self, x: &BigUint, lines: &[Formula]) -> Result<(), Rejection> {
        let target = self.diagonal_instance(x)?;
        self.check_lines(lines)?;
        Self::concludes(lines, &target)
    }

    fn concludes(lines: &[Formula], target: &Formula) -> Result<(), Rejection> {
        if lines.last() == Some(target) {
            Ok(())
        } else {
            Err(Rejection::WrongConclusion)
        }
    }

    pub fn q(&self, x: &BigUint, y: &BigUint) -> u64 {
        u64::from(self.q_verdict(x, y).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{encode_formula, encode_proof};
    use crate::formula::parse;
    use crate::kernel::{witness_proof, Schema};

    fn oracle(system: System) -> ProvabilityOracle {
        ProvabilityOracle::new(system, SymbolTable::new(), ProvabilityLimits::default())
    }

    #[test]
    fn one_line_axiom_proof() {
        let o = oracle(System::Pp);
        let ax = Schema::PP3.formula();
        let t = SymbolTable::new();
        let k = encode_proof(std::slice::from_ref(&ax), &t).unwrap();
        let m = encode_formula(&ax, &t).unwrap();
        assert_eq!(o.prf(&k, &m), 1);
        assert_eq!(o.prf(&k, &(m.clone() + 1u32)), 0);
        assert_eq!(o.prf(&BigUint::from(0u32), &m), 0);
        assert_eq!(oracle(System::Pa).prf(&k, &m), 0);
    }

    #[test]
    fn self_reference_instance() {
        let t = SymbolTable::new();
        let o = oracle(System::Pp);
        let h = parse("|=PP((z+0)=z)").unwrap();
        let x = encode_formula(&h, &t).unwrap();
        let instance = h.substitute("z", &Term::Numeral(x.clone()));
        let proof = [Schema::PP3.formula(), instance];
        assert_eq!(o.q_for_lines(&x, &proof), Ok(()));
        let other = [Schema::PP3.formula(), parse("|=PP((0+0)=0)").unwrap()];
        assert_eq!(o.q_for_lines(&x, &other), Err(Rejection::WrongConclusion));

        let small = witness_proof(&parse("(0=0)").unwrap(), System::Pp).unwrap();
        let y = encode_proof(&small.formulas(), &t).unwrap();
        assert_eq!(o.q_verdict(&x, &y), Err(Rejection::WrongConclusion));
        let closed = encode_formula(&parse("(0=0)").unwrap(), &t).unwrap();
        assert_eq!(o.q_verdict(&closed, &y), Err(Rejection::FreeVariables(0)));
        assert!(matches!(o.q_verdict(&BigUint::from(10u32), &y), Err(Rejection::NotACode(_))));
    }

    #[test]
    fn limits_are_enforced() {
        let o = ProvabilityOracle::new(
            System::Pa,
            SymbolTable::new(),
            ProvabilityLimits { max_bits: 8, ..ProvabilityLimits::default() },
        );
        let big = BigUint::from(1u32) << 20;
        assert!(matches!(o.prf_verdict(&big, &big), Err(Rejection::LimitExceeded(_))));
    }
}
