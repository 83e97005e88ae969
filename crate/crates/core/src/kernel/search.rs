use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{print, Formula, Term};

use super::check::{induction_step_conclusion, judgment_of, num_formula, rebuild};
use super::{numerals_upto, Schema, System};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search depth {depth} exceeds the configured maximum {max}")]
    DepthExceeded { depth: usize, max: usize },
    #[error("seed {0} is not a line of the system")]
    InvalidSeed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub depth: usize,
    pub max_depth: usize,
    /// Instantiation uses numerals `0..=numeral_cap`.
    pub numeral_cap: u64,
    /// Derived formulas larger than this many nodes are dropped.
    pub max_size: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { depth: 4, max_depth: 6, numeral_cap: 3, max_size: 80 }
    }
}

fn start(system: System, cap: u64) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    if system.is_pp() {
        out.extend(Schema::PP.iter().map(|s| s.formula()));
        return out;
    }
    for s in Schema::PA {
        let open = s.open();
        out.insert(open.clone());
        let nums: Vec<Term> = numerals_upto(cap).collect();
        match s.vars() {
            [x] => out.extend(nums.iter().map(|n| open.substitute(x, n))),
            _ => {
                for a in &nums {
                    for b in &nums {
                        out.insert(open.substitute_all(&[("x", a.clone()), ("y", b.clone())]));
                    }
                }
            }
        }
    }
    out
}

fn step(system: System, have: &BTreeSet<Formula>, cap: u64) -> Vec<Formula> {
    let rules = system.config().rules;
    let enabled = |r| rules.contains(&r);
    let mut out = Vec::new();
    use super::RuleId::*;
    for f in have {
        if enabled(INST) {
            if let Formula::ForAll(x, body) = f {
                out.extend(numerals_upto(cap).map(|n| body.substitute(x, &n)));
            }
        }
        if enabled(PPR1) {
            let j = judgment_of(f);
            if let Formula::Implies(p, q) = j.body {
                if have.contains(&rebuild(&j.prefix, j.turnstile, (**p).clone())) {
                    out.push(rebuild(&j.prefix, j.turnstile, (**q).clone()));
                }
            }
        }
        if enabled(GPR1) {
            if let Formula::Implies(p, q) = f {
                if have.contains(&**p) {
                    out.push((**q).clone());
                }
            }
        }
        if enabled(PPR2) || enabled(GPR2) {
            if let Some((base, concl)) = induction_step_conclusion(system, f) {
                if have.contains(&base) {
                    out.push(concl);
                }
            }
        }
        if enabled(PPR3) {
            let j = judgment_of(f);
            if let (Some((&x, outer)), false) = (j.prefix.split_last(), j.turnstile) {
                if let Formula::Implies(n, g) = j.body {
                    if let (Formula::Turnstile(n), Formula::Turnstile(_)) = (&**n, &**g) {
                        if **n == num_formula(x) {
                            let mut prefix = outer.to_vec();
                            prefix.push(x);
                            out.push(rebuild(&prefix, false, (**g).clone()));
                        }
                    }
                }
            }
        }
        if enabled(GPR3) {
            out.extend(f.free_vars().into_iter().map(|v| Formula::forall(v, f.clone())));
        }
    }
    out
}

/// Formulas derivable within `depth` rounds of rule application from the
/// axioms (PA: schemas and their instances at small numerals) and the
/// seeds, ordered by canonical text.
pub fn search(system: System, seeds: &[Formula], cfg: &SearchConfig) -> Result<Vec<Formula>, SearchError> {
    if cfg.depth > cfg.max_depth {
        return Err(SearchError::DepthExceeded { depth: cfg.depth, max: cfg.max_depth });
    }
    for s in seeds {
        let ok = if system.is_pp() { s.is_pp_wff() } else { !s.contains_turnstile() };
        if !ok {
            return Err(SearchError::InvalidSeed(print(s)));
        }
    }
    let mut have = start(system, cfg.numeral_cap);
    have.extend(seeds.iter().cloned());
    for _ in 0..cfg.depth {
        let fresh: Vec<Formula> = step(system, &have, cfg.numeral_cap)
            .into_iter()
            .filter(|g| g.size() <= cfg.max_size && !have.contains(g))
            .collect();
        if fresh.is_empty() {
            break;
        }
        have.extend(fresh);
    }
    let mut out: Vec<(String, Formula)> = have.into_iter().map(|f| (print(&f), f)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, f)| f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn generalization_appears_in_pa() {
        let seed = parse("(((0+1)+0)=(0+1))").unwrap();
        let cfg = SearchConfig { depth: 1, ..SearchConfig::default() };
        let found = search(System::Pa, &[seed], &cfg).unwrap();
        let want = parse("(Ax)((x+0)=x)").unwrap();
        assert!(found.contains(&want));
    }

    #[test]
    fn pp_plus_extends_pp() {
        let cfg = SearchConfig { depth: 2, ..SearchConfig::default() };
        let pp: BTreeSet<_> = search(System::Pp, &[], &cfg).unwrap().into_iter().collect();
        let plus: BTreeSet<_> = search(System::PpPlus, &[], &cfg).unwrap().into_iter().collect();
        assert!(pp.is_subset(&plus));
        assert!(pp.contains(&parse("|=PP((0+0)=0)").unwrap()));
    }

    #[test]
    fn depth_limit() {
        let cfg = SearchConfig { depth: 7, ..SearchConfig::default() };
        assert!(matches!(search(System::Pa, &[], &cfg), Err(SearchError::DepthExceeded { .. })));
    }
}
