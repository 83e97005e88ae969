//! Primitive recursive function terms and their evaluation.

mod library;
mod provability;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use library::{bounded_mu, library, Library};
pub use provability::{ProvabilityLimits, ProvabilityOracle, Rejection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrfError {
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("projection index {index} out of range for arity {arity}")]
    Projection { index: usize, arity: usize },
    #[error("composition needs at least one inner function")]
    EmptyComposition,
    #[error("not a recursion node")]
    NotRecursion,
    #[error("arithmetic overflow during evaluation")]
    Overflow,
    #[error("evaluation exceeded {0} steps")]
    Budget(u64),
    #[error("malformed function text at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Debug)]
pub enum PrfNode {
    Zero,
    Succ,
    /// 1-based index.
    Proj { index: usize },
    Comp { outer: PrfFn, inners: Vec<PrfFn> },
    /// Recursion on the last argument; `step` takes `(x.., n, previous)`.
    PrimRec { base: PrfFn, step: PrfFn },
}

#[derive(Debug)]
struct Inner {
    arity: usize,
    node: PrfNode,
}

/// Shared, immutable function term. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct PrfFn(Arc<Inner>);

impl PrfFn {
    pub fn zero(arity: usize) -> PrfFn {
        PrfFn::make(arity, PrfNode::Zero)
    }

    pub fn succ() -> PrfFn {
        PrfFn::make(1, PrfNode::Succ)
    }

    pub fn proj(index: usize, arity: usize) -> Result<PrfFn, PrfError> {
        if index == 0 || index > arity {
            return Err(PrfError::Projection { index, arity });
        }
        Ok(PrfFn::make(arity, PrfNode::Proj { index }))
    }

    pub fn comp(outer: PrfFn, inners: Vec<PrfFn>) -> Result<PrfFn, PrfError> {
        let first = inners.first().ok_or(PrfError::EmptyComposition)?;
        let arity = first.arity();
        if outer.arity() != inners.len() {
            return Err(PrfError::Arity { expected: outer.arity(), got: inners.len() });
        }
        if let Some(bad) = inners.iter().find(|g| g.arity() != arity) {
            return Err(PrfError::Arity { expected: arity, got: bad.arity() });
        }
        Ok(PrfFn::make(arity, PrfNode::Comp { outer, inners }))
    }

    pub fn prim_rec(base: PrfFn, step: PrfFn) -> Result<PrfFn, PrfError> {
        let k = base.arity();
        if step.arity() != k + 2 {
            return Err(PrfError::Arity { expected: k + 2, got: step.arity() });
        }
        Ok(PrfFn::make(k + 1, PrfNode::PrimRec { base, step }))
    }

    fn make(arity: usize, node: PrfNode) -> PrfFn {
        PrfFn(Arc::new(Inner { arity, node }))
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    pub fn node(&self) -> &PrfNode {
        &self.0.node
    }

    /// Identity of this shared node, stable while any clone is alive.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Number of nodes in the tree, counting shared subtrees each time.
    pub fn size(&self) -> usize {
        match self.node() {
            PrfNode::Zero | PrfNode::Succ | PrfNode::Proj { .. } => 1,
            PrfNode::Comp { outer, inners } => 1 + outer.size() + inners.iter().map(PrfFn::size).sum::<usize>(),
            PrfNode::PrimRec { base, step } => 1 + base.size() + step.size(),
        }
    }

    /// One-shot evaluation. Use a [`Machine`] to share memoized work
    /// across calls.
    pub fn eval(&self, args: &[u64]) -> Result<u64, PrfError> {
        Machine::new().eval(self, args)
    }

    pub fn parse(text: &str) -> Result<PrfFn, PrfError> {
        let mut p = TextParser { s: text.as_bytes(), pos: 0 };
        let f = p.function()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(f)
    }
}

impl PartialEq for PrfFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.to_string() == other.to_string()
    }
}

impl Eq for PrfFn {}

impl fmt::Display for PrfFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            PrfNode::Zero => write!(f, "Zero(arity={})", self.arity()),
            PrfNode::Succ => f.write_str("Succ"),
            PrfNode::Proj { index } => write!(f, "Proj(i={index},arity={})", self.arity()),
            PrfNode::Comp { outer, inners } => {
                write!(f, "Comp(outer={outer},inners=[")?;
                for (i, g) in inners.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str("])")
            }
            PrfNode::PrimRec { base, step } => write!(f, "PrimRec(base={base},step={step})"),
        }
    }
}

struct TextParser<'s> {
    s: &'s [u8],
    pos: usize,
}

impl TextParser<'_> {
    fn err(&self, msg: &str) -> PrfError {
        PrfError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn lit(&mut self, l: &str) -> Result<(), PrfError> {
        self.ws();
        if self.s[self.pos..].starts_with(l.as_bytes()) {
            self.pos += l.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{l}`")))
        }
    }

    fn peek_lit(&mut self, l: &str) -> bool {
        self.ws();
        self.s[self.pos..].starts_with(l.as_bytes())
    }

    fn number(&mut self) -> Result<usize, PrfError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }

    fn function(&mut self) -> Result<PrfFn, PrfError> {
        let at = self.pos;
        let located = |e: PrfError| match e {
            PrfError::Syntax { .. } => e,
            other => PrfError::Syntax { pos: at, msg: other.to_string() },
        };
        if self.peek_lit("Zero") {
            self.lit("Zero")?;
            self.lit("(")?;
            self.lit("arity=")?;
            let k = self.number()?;
            self.lit(")")?;
            Ok(PrfFn::zero(k))
        } else if self.peek_lit("Succ") {
            self.lit("Succ")?;
            Ok(PrfFn::succ())
        } else if self.peek_lit("Proj") {
            self.lit("Proj")?;
            self.lit("(")?;
            self.lit("i=")?;
            let i = self.number()?;
            self.lit(",")?;
            self.lit("arity=")?;
            let k = self.number()?;
            self.lit(")")?;
            PrfFn::proj(i, k).map_err(located)
        } else if self.peek_lit("Comp") {
            self.lit("Comp")?;
            self.lit("(")?;
            self.lit("outer=")?;
            let outer = self.function()?;
            self.lit(",")?;
            self.lit("inners=")?;
            self.lit("[")?;
            let mut inners = vec![self.function()?];
            while self.peek_lit(",") {
                self.lit(",")?;
                inners.push(self.function()?);
            }
            self.lit("]")?;
            self.lit(")")?;
            PrfFn::comp(outer, inners).map_err(located)
        } else if self.peek_lit("PrimRec") {
            self.lit("PrimRec")?;
            self.lit("(")?;
            self.lit("base=")?;
            let base = self.function()?;
            self.lit(",")?;
            self.lit("step=")?;
            let step = self.function()?;
            self.lit(")")?;
            PrfFn::prim_rec(base, step).map_err(located)
        } else {
            Err(self.err("expected Zero, Succ, Proj, Comp or PrimRec"))
        }
    }
}

/// Evaluator with a per-machine memo: for each recursion node and
/// parameter tuple it keeps the prefix of values computed so far.
#[derive(Default)]
pub struct Machine {
    prefixes: HashMap<(usize, Vec<u64>), (PrfFn, Vec<u64>)>,
    stored: usize,
    /// Node visits allowed per `eval` or `trace` call.
    budget: Option<u64>,
    steps: u64,
}

/// Stored prefix values before the memo is dropped and rebuilt.
const MEMO_VALUES: usize = 1 << 24;

impl Machine {
    pub fn new() -> Self {
        Machine::default()
    }

    pub fn with_budget(budget: u64) -> Self {
        Machine { budget: Some(budget), ..Machine::default() }
    }

    pub fn eval(&mut self, f: &PrfFn, args: &[u64]) -> Result<u64, PrfError> {
        if args.len() != f.arity() {
            return Err(PrfError::Arity { expected: f.arity(), got: args.len() });
        }
        self.steps = 0;
        self.run(f, args)
    }

    /// Values `h(params, 0..=n)` of a recursion node.
    pub fn trace(&mut self, f: &PrfFn, params: &[u64], n: u64) -> Result<Vec<u64>, PrfError> {
        let PrfNode::PrimRec { base, step } = f.node() else {
            return Err(PrfError::NotRecursion);
        };
        if params.len() + 1 != f.arity() {
            return Err(PrfError::Arity { expected: f.arity() - 1, got: params.len() });
        }
        self.steps = 0;
        self.extend(f, base, step, params, n)?;
        Ok(self.prefixes[&(f.id(), params.to_vec())].1[..=n as usize].to_vec())
    }

    fn run(&mut self, f: &PrfFn, args: &[u64]) -> Result<u64, PrfError> {
        if let Some(b) = self.budget {
            self.steps += 1;
            if self.steps > b {
                return Err(PrfError::Budget(b));
            }
        }
        match f.node() {
            PrfNode::Zero => Ok(0),
            PrfNode::Succ => args[0].checked_add(1).ok_or(PrfError::Overflow),
            PrfNode::Proj { index } => Ok(args[index - 1]),
            PrfNode::Comp { outer, inners } => {
                let mid = inners.iter().map(|g| self.run(g, args)).collect::<Result<Vec<_>, _>>()?;
                self.run(outer, &mid)
            }
            PrfNode::PrimRec { base, step } => {
                let (params, n) = args.split_at(args.len() - 1);
                let n = n[0];
                self.extend(f, base, step, params, n)?;
                Ok(self.prefixes[&(f.id(), params.to_vec())].1[n as usize])
            }
        }
    }

    fn extend(&mut self, f: &PrfFn, base: &PrfFn, step: &PrfFn, params: &[u64], n: u64) -> Result<(), PrfError> {
        let key = (f.id(), params.to_vec());
        let mut values = match self.prefixes.remove(&key) {
            Some((_, v)) => v,
            None => vec![self.run(base, params)?],
        };
        let before = values.len();
        let mut buf: Vec<u64> = params.to_vec();
        buf.extend([0, 0]);
        let k = params.len();
        let result = (|| {
            while (values.len() as u64) <= n {
                let i = values.len() as u64 - 1;
                buf[k] = i;
                buf[k + 1] = *values.last().unwrap();
                let next = self.run(step, &buf)?;
                values.push(next);
            }
            Ok(())
        })();
        self.stored += values.len() - before;
        if self.stored > MEMO_VALUES {
            self.prefixes.clear();
            self.stored = values.len();
        }
        self.prefixes.insert(key, (f.clone(), values));
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_check_arity() {
        assert!(PrfFn::proj(0, 2).is_err());
        assert!(PrfFn::proj(3, 2).is_err());
        assert!(PrfFn::comp(PrfFn::succ(), vec![]).is_err());
        assert!(PrfFn::comp(PrfFn::succ(), vec![PrfFn::zero(1), PrfFn::zero(1)]).is_err());
        assert!(PrfFn::prim_rec(PrfFn::zero(1), PrfFn::zero(2)).is_err());
        let add = PrfFn::prim_rec(
            PrfFn::proj(1, 1).unwrap(),
            PrfFn::comp(PrfFn::succ(), vec![PrfFn::proj(3, 3).unwrap()]).unwrap(),
        )
        .unwrap();
        assert_eq!(add.arity(), 2);
        assert_eq!(add.eval(&[2, 3]).unwrap(), 5);
        assert!(add.eval(&[2]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let lib = library();
        for (_, f) in lib.named() {
            let text = f.to_string();
            let back = PrfFn::parse(&text).unwrap();
            assert_eq!(back.to_string(), text);
        }
        assert_eq!(
            PrfFn::parse(" Comp( outer=Succ , inners=[Zero(arity=0)] )").unwrap().eval(&[]).unwrap(),
            1
        );
        assert!(matches!(PrfFn::parse("Proj(i=3,arity=2)"), Err(PrfError::Syntax { .. })));
        assert!(PrfFn::parse("Succ Succ").is_err());
    }

    #[test]
    fn traces() {
        let lib = library();
        let mut m = Machine::new();
        assert_eq!(m.trace(&lib.factorial, &[], 4).unwrap(), vec![1, 1, 2, 6, 24]);
        assert_eq!(m.trace(&lib.add, &[3], 2).unwrap(), vec![3, 4, 5]);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(PrfFn::succ().eval(&[u64::MAX]), Err(PrfError::Overflow));
    }
}
