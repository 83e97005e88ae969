//! Seeded random formulas for round-trip and property tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{numeral, Formula, Term};

const VARS: [&str; 6] = ["x", "y", "z", "w", "a", "b"];

pub struct FormulaGen {
    rng: ChaCha8Rng,
    /// Predicate names with their arities.
    predicates: Vec<(String, usize)>,
    pub max_numeral: u64,
    pub term_depth: usize,
    /// When false, terms are closed.
    pub variables: bool,
}

impl FormulaGen {
    pub fn new(seed: u64) -> Self {
        FormulaGen { rng: ChaCha8Rng::seed_from_u64(seed), predicates: Vec::new(), max_numeral: 5, term_depth: 3, variables: true }
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Self {
        self.predicates.push((name.to_string(), arity));
        self
    }

    fn var(&mut self) -> String {
        VARS[self.rng.gen_range(0..VARS.len())].to_string()
    }

    pub fn term(&mut self, depth: usize) -> Term {
        let leaf = depth == 0 || self.rng.gen_bool(0.4);
        if leaf {
            let kinds = if self.variables { 4 } else { 3 };
            return match self.rng.gen_range(0..kinds) {
                0 => Term::Zero,
                1 => Term::One,
                2 => numeral(self.rng.gen_range(0..=self.max_numeral)),
                _ => Term::var(self.var()),
            };
        }
        let (l, r) = (self.term(depth - 1), self.term(depth - 1));
        if self.rng.gen_bool(0.5) {
            Term::add(l, r)
        } else {
            Term::mul(l, r)
        }
    }

    /// A formula whose connective nesting is at most `depth`.
    pub fn formula(&mut self, depth: usize) -> Formula {
        if depth <= 1 || self.rng.gen_bool(0.2) {
            return self.atom();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 => Formula::not(self.formula(d)),
            1 => Formula::implies(self.formula(d), self.formula(d)),
            2 => Formula::and(self.formula(d), self.formula(d)),
            3 => Formula::or(self.formula(d), self.formula(d)),
            4 => Formula::forall(self.var(), self.formula(d)),
            5 => Formula::exists(self.var(), self.formula(d)),
            6 => Formula::exists_unique(self.var(), self.formula(d)),
            7 => Formula::turnstile(self.formula(d)),
            _ => self.atom(),
        }
    }

    /// A closed equation, true or false.
    pub fn closed_equation(&mut self) -> Formula {
        let saved = std::mem::replace(&mut self.variables, false);
        let (l, r) = (self.term(self.term_depth), self.term(self.term_depth));
        self.variables = saved;
        Formula::eq(l, r)
    }

    fn atom(&mut self) -> Formula {
        if !self.predicates.is_empty() && self.rng.gen_bool(0.2) {
            let (name, arity) = self.predicates[self.rng.gen_range(0..self.predicates.len())].clone();
            let args = (0..arity).map(|_| self.term(self.term_depth - 1)).collect();
            return Formula::pred(name, args);
        }
        let (l, r) = (self.term(self.term_depth), self.term(self.term_depth));
        Formula::eq(l, r)
    }
}

pub fn depth(f: &Formula) -> usize {
    match f {
        Formula::Eq(..) | Formula::Pred(..) => 1,
        Formula::Not(g) | Formula::Turnstile(g) => 1 + depth(g),
        Formula::ForAll(_, g) | Formula::Exists(_, g) | Formula::ExistsUnique(_, g) => 1 + depth(g),
        Formula::Implies(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + depth(a).max(depth(b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, print};

    #[test]
    fn seeded_and_bounded() {
        let a: Vec<_> = { let mut g = FormulaGen::new(7); (0..50).map(|_| g.formula(6)).collect() };
        let b: Vec<_> = { let mut g = FormulaGen::new(7); (0..50).map(|_| g.formula(6)).collect() };
        assert_eq!(a, b);
        for f in &a {
            assert!(depth(f) <= 6);
            assert_eq!(&parse(&print(f)).unwrap(), f);
        }
    }
}
