//! Prime-power Gödel numbering of token streams.
//!
//! Base tokens take codes 1..=17 in grammar order. Variables and registered
//! predicates share the rest: variable number `k` gets `18 + 2k`, the `j`-th
//! registered predicate gets `19 + 2j`, so registering a name never moves
//! any other code.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::formula::{parse_in, print, Formula, ParseError, PredicateScope};

pub const BASE_TOKENS: [&str; 17] = [
    "(", ")", ",", "+", "*", "=", "~", "=>", "&", "|", "|=PP", "0", "1", "A", "E", "E!", ";",
];

pub const SEPARATOR: u64 = 17;
const FIRST_FREE: u64 = 18;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("not a code")]
    NotACode,
    #[error("sequence element 0 cannot be encoded")]
    ZeroElement,
    #[error("no symbol has code {0}")]
    UnknownCode(u64),
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("predicate `{0}` is not registered")]
    UnregisteredPredicate(String),
    #[error("predicate `{0}` is already registered")]
    DuplicatePredicate(String),
    #[error("`{0}` is not a usable predicate name")]
    InvalidPredicateName(String),
    #[error("decoded tokens do not form a formula: {0}")]
    Parse(#[from] ParseError),
    #[error("decoded tokens are not in canonical form")]
    NonCanonical,
    #[error("a proof needs at least one line")]
    EmptyProof,
    #[error("symbol code too large")]
    CodeOverflow,
    #[error("symbol table file: {0}")]
    TableFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    predicates: Vec<String>,
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable::default()
    }

    /// Appends a defined predicate and returns its code.
    pub fn register(&mut self, name: &str) -> Result<u64, CodecError> {
        let mut chars = name.chars();
        let well_formed = chars.next().is_some_and(|c| c.is_ascii_uppercase())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !well_formed || name == "A" || name == "E" {
            return Err(CodecError::InvalidPredicateName(name.to_string()));
        }
        if self.predicates.iter().any(|p| p == name) {
            return Err(CodecError::DuplicatePredicate(name.to_string()));
        }
        self.predicates.push(name.to_string());
        Ok(FIRST_FREE + 1 + 2 * (self.predicates.len() as u64 - 1))
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    pub fn code_of(&self, token: &str) -> Result<u64, CodecError> {
        if let Some(i) = BASE_TOKENS.iter().position(|t| *t == token) {
            return Ok(i as u64 + 1);
        }
        let first = token.chars().next().ok_or_else(|| CodecError::UnknownToken(String::new()))?;
        if first.is_ascii_lowercase() {
            let idx = variable_index(token).ok_or_else(|| CodecError::UnknownToken(token.to_string()))?;
            return idx
                .checked_mul(2)
                .and_then(|k| k.checked_add(FIRST_FREE))
                .ok_or(CodecError::CodeOverflow);
        }
        if first.is_ascii_uppercase() {
            return self
                .predicates
                .iter()
                .position(|p| p == token)
                .map(|j| FIRST_FREE + 1 + 2 * j as u64)
                .ok_or_else(|| CodecError::UnregisteredPredicate(token.to_string()));
        }
        Err(CodecError::UnknownToken(token.to_string()))
    }

    pub fn token_of(&self, code: u64) -> Result<String, CodecError> {
        match code {
            0 => Err(CodecError::UnknownCode(0)),
            1..=17 => Ok(BASE_TOKENS[code as usize - 1].to_string()),
            c if c % 2 == 0 => Ok(variable_name((c - FIRST_FREE) / 2)),
            c => self
                .predicates
                .get(((c - FIRST_FREE - 1) / 2) as usize)
                .cloned()
                .ok_or(CodecError::UnknownCode(c)),
        }
    }

    /// `token<TAB>code` lines: base symbols, then registered predicates.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for (i, t) in BASE_TOKENS.iter().enumerate() {
            let _ = writeln!(out, "{t}\t{}", i + 1);
        }
        for (j, p) in self.predicates.iter().enumerate() {
            let _ = writeln!(out, "{p}\t{}", FIRST_FREE + 1 + 2 * j as u64);
        }
        out
    }

    pub fn from_file_string(text: &str) -> Result<Self, CodecError> {
        let mut table = SymbolTable::new();
        let bad = |n: usize, why: &str| CodecError::TableFormat(format!("line {n}: {why}"));
        for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let (token, code) = line.split_once('\t').ok_or_else(|| bad(n + 1, "expected token<TAB>code"))?;
            let code: u64 = code.trim().parse().map_err(|_| bad(n + 1, "code is not a number"))?;
            if n < BASE_TOKENS.len() {
                if BASE_TOKENS[n] != token || code != n as u64 + 1 {
                    return Err(bad(n + 1, "base symbols must come first, in order"));
                }
            } else if table.register(token)? != code {
                return Err(bad(n + 1, "predicate code out of sequence"));
            }
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, CodecError> {
        SymbolTable::from_file_string(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), CodecError> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }
}

impl PredicateScope for SymbolTable {
    fn is_registered(&self, name: &str) -> bool {
        self.predicates.iter().any(|p| p == name)
    }
}

/// Letter index plus 26 times the shortlex rank of the digit suffix.
fn variable_index(name: &str) -> Option<u64> {
    let letter = name.as_bytes()[0];
    if !letter.is_ascii_lowercase() {
        return None;
    }
    let digits = &name[1..];
    if !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 17 {
        return None;
    }
    let offset = (10u64.pow(digits.len() as u32) - 1) / 9;
    let value: u64 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    (offset + value)
        .checked_mul(26)?
        .checked_add((letter - b'a') as u64)
}

fn variable_name(idx: u64) -> String {
    let letter = (b'a' + (idx % 26) as u8) as char;
    let mut rank = idx / 26;
    let mut len = 0u32;
    while len < 19 && rank >= 10u64.pow(len) {
        rank -= 10u64.pow(len);
        len += 1;
    }
    if len == 0 {
        letter.to_string()
    } else {
        format!("{letter}{rank:0width$}", width = len as usize)
    }
}

/// Splits canonical formula text into symbol tokens. Quantifier prefixes
/// become `(`, `A`/`E`/`E!`, the variable and `)`.
pub fn tokens(f: &Formula) -> Vec<String> {
    let text = print(f);
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let take = match c {
            b'=' if b.get(i + 1) == Some(&b'>') => 2,
            b'|' if text[i..].starts_with("|=PP") => 4,
            b'E' if b.get(i + 1) == Some(&b'!') => 2,
            b'A' | b'E' if quantifier_letter(b, i) => 1,
            b'a'..=b'z' => 1 + b[i + 1..].iter().take_while(|d| d.is_ascii_digit()).count(),
            b'A'..=b'Z' => 1 + b[i + 1..].iter().take_while(|d| d.is_ascii_alphanumeric() || **d == b'_').count(),
            _ => 1,
        };
        out.push(text[i..i + take].to_string());
        i += take;
    }
    out
}

/// `A` or `E` at `i` opens a quantifier prefix `(A<var>)` rather than a
/// predicate name.
fn quantifier_letter(b: &[u8], i: usize) -> bool {
    if i == 0 || b[i - 1] != b'(' || !b.get(i + 1).is_some_and(|c| c.is_ascii_lowercase()) {
        return false;
    }
    let end = i + 2 + b[i + 2..].iter().take_while(|d| d.is_ascii_digit()).count();
    b.get(end) == Some(&b')')
}

pub fn formula_codes(f: &Formula, table: &SymbolTable) -> Result<Vec<u64>, CodecError> {
    tokens(f).iter().map(|t| table.code_of(t)).collect()
}

/// Product of the first `codes.len()` primes raised to the codes.
pub fn encode_sequence(codes: &[u64]) -> Result<BigUint, CodecError> {
    if codes.contains(&0) {
        return Err(CodecError::ZeroElement);
    }
    let primes = first_primes(codes.len());
    let mut n = BigUint::one();
    for (p, c) in primes.iter().zip(codes) {
        let e = u32::try_from(*c).map_err(|_| CodecError::CodeOverflow)?;
        n *= BigUint::from(*p).pow(e);
    }
    Ok(n)
}

pub fn decode_sequence(n: &BigUint) -> Result<Vec<u64>, CodecError> {
    if n.is_zero() {
        return Err(CodecError::NotACode);
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut primes = PrimeIter::default();
    while !rest.is_one() {
        let p = BigUint::from(primes.next_prime());
        let mut e = 0u64;
        loop {
            let (q, r) = rest.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e == 0 {
            return Err(CodecError::NotACode);
        }
        out.push(e);
    }
    Ok(out)
}

pub fn encode_formula(f: &Formula, table: &SymbolTable) -> Result<BigUint, CodecError> {
    encode_sequence(&formula_codes(f, table)?)
}

pub fn decode_formula(n: &BigUint, table: &SymbolTable) -> Result<Formula, CodecError> {
    formula_from_codes(&decode_sequence(n)?, table)
}

pub fn formula_from_codes(codes: &[u64], table: &SymbolTable) -> Result<Formula, CodecError> {
    let toks: Vec<String> = codes.iter().map(|c| table.token_of(*c)).collect::<Result<_, _>>()?;
    if toks.iter().any(|t| t == ";") {
        return Err(CodecError::NonCanonical);
    }
    let f = parse_in(&toks.concat(), table)?;
    if tokens(&f) != toks {
        return Err(CodecError::NonCanonical);
    }
    Ok(f)
}

/// A proof is coded as the token stream of its lines joined by `;`.
pub fn proof_codes(lines: &[Formula], table: &SymbolTable) -> Result<Vec<u64>, CodecError> {
    if lines.is_empty() {
        return Err(CodecError::EmptyProof);
    }
    let mut out = Vec::new();
    for (i, f) in lines.iter().enumerate() {
        if i > 0 {
            out.push(SEPARATOR);
        }
        out.extend(formula_codes(f, table)?);
    }
    Ok(out)
}

pub fn encode_proof(lines: &[Formula], table: &SymbolTable) -> Result<BigUint, CodecError> {
    encode_sequence(&proof_codes(lines, table)?)
}

pub fn decode_proof(n: &BigUint, table: &SymbolTable) -> Result<Vec<Formula>, CodecError> {
    proof_from_codes(&decode_sequence(n)?, table)
}

pub fn proof_from_codes(codes: &[u64], table: &SymbolTable) -> Result<Vec<Formula>, CodecError> {
    if codes.is_empty() {
        return Err(CodecError::EmptyProof);
    }
    codes
        .split(|c| *c == SEPARATOR)
        .map(|seg| {
            if seg.is_empty() {
                Err(CodecError::NonCanonical)
            } else {
                formula_from_codes(seg, table)
            }
        })
        .collect()
}

/// Incremental prime generator by trial division against earlier primes.
#[derive(Default)]
pub struct PrimeIter {
    found: Vec<u64>,
}

impl PrimeIter {
    pub fn next_prime(&mut self) -> u64 {
        let mut cand = match self.found.last() {
            None => 2,
            Some(2) => 3,
            Some(p) => p + 2,
        };
        while !self.found.iter().take_while(|p| *p * *p <= cand).all(|p| cand % p != 0) {
            cand += 2;
        }
        self.found.push(cand);
        cand
    }
}

pub fn first_primes(n: usize) -> Vec<u64> {
    let mut it = PrimeIter::default();
    (0..n).map(|_| it.next_prime()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn table_q() -> SymbolTable {
        let mut t = SymbolTable::new();
        t.register("Q").unwrap();
        t
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(encode_sequence(&[]).unwrap(), BigUint::one());
        assert_eq!(encode_sequence(&[3]).unwrap(), BigUint::from(8u32));
        assert_eq!(encode_sequence(&[1, 2]).unwrap(), BigUint::from(18u32));
        assert_eq!(decode_sequence(&BigUint::one()).unwrap(), Vec::<u64>::new());
        assert_eq!(decode_sequence(&BigUint::from(18u32)).unwrap(), vec![1, 2]);
        assert!(matches!(decode_sequence(&BigUint::from(10u32)), Err(CodecError::NotACode)));
        assert!(matches!(decode_sequence(&BigUint::zero()), Err(CodecError::NotACode)));
        assert!(encode_sequence(&[2, 0]).is_err());
    }

    #[test]
    fn variable_codes_round_trip() {
        let t = SymbolTable::new();
        assert_eq!(t.code_of("x").unwrap(), 64);
        assert_eq!(t.code_of("y").unwrap(), 66);
        for name in ["a", "z", "a0", "a9", "b00", "y1", "q123", "c09"] {
            let c = t.code_of(name).unwrap();
            assert_eq!(c % 2, 0);
            assert_eq!(t.token_of(c).unwrap(), name);
        }
        for c in (18..5000).step_by(2) {
            assert_eq!(t.code_of(&t.token_of(c).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn registration() {
        let mut t = SymbolTable::new();
        assert_eq!(t.register("Q").unwrap(), 19);
        assert_eq!(t.register("Prf").unwrap(), 21);
        assert!(matches!(t.register("Q"), Err(CodecError::DuplicatePredicate(_))));
        assert!(t.register("A").is_err());
        assert!(t.register("lower").is_err());
        assert_eq!(t.token_of(21).unwrap(), "Prf");
        assert!(t.token_of(23).is_err());
        let back = SymbolTable::from_file_string(&t.to_file_string()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tokens_split_quantifiers() {
        let f = parse("(E!y1)|=PP(~Q(x,y1))").unwrap();
        assert_eq!(
            tokens(&f),
            ["(", "E!", "y1", ")", "|=PP", "(", "~", "Q", "(", "x", ",", "y1", ")", ")"]
        );
        let g = parse("((Ex)(x=0)&Ex(x))").unwrap();
        assert_eq!(tokens(&g)[..6], ["(", "(", "E", "x", ")", "("]);
        assert!(tokens(&g).contains(&"Ex".to_string()));
    }

    #[test]
    fn formula_round_trip() {
        let t = table_q();
        for s in ["(0=0)", "(Ay)|=PP(~Q(x,y))", "(Ax)(Ay)|=PP(~(x=y)=>~((x+1)=(y+1)))", "((x*y)=(z+1)|(E!w)(w=0))"] {
            let f = parse(s).unwrap();
            let n = encode_formula(&f, &t).unwrap();
            assert_eq!(decode_formula(&n, &t).unwrap(), f, "{s}");
        }
    }

    #[test]
    fn non_canonical_streams_are_rejected() {
        let t = SymbolTable::new();
        // "0=0" without its parentheses parses but is not canonical
        let codes = [12, 6, 12];
        assert!(matches!(formula_from_codes(&codes, &t), Err(CodecError::NonCanonical)));
        assert!(formula_from_codes(&[1, 12], &t).is_err());
    }

    #[test]
    fn proof_codes() {
        let t = SymbolTable::new();
        let a = parse("(0=0)").unwrap();
        let b = parse("((0=0)=>(0=0))").unwrap();
        assert_eq!(encode_proof(std::slice::from_ref(&a), &t).unwrap(), encode_formula(&a, &t).unwrap());
        let n = encode_proof(&[a.clone(), b.clone(), a.clone()], &t).unwrap();
        assert_eq!(decode_proof(&n, &t).unwrap(), vec![a.clone(), b, a.clone()]);
        assert!(n > encode_formula(&a, &t).unwrap());
        assert!(encode_proof(&[], &t).is_err());
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(10), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
