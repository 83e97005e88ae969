use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Formula, Term};

/// Canonical, fully parenthesized rendering. Numerals are expanded in full,
/// so callers must not print formulas carrying astronomically large
/// numerals; use [`CompactDisplay`] for those.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, None).unwrap();
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, None).unwrap();
    out
}

/// Display wrapper that abbreviates numerals above `limit` as `[n]`.
/// Output is for humans and reports only; it is not parseable.
pub struct CompactDisplay<'a> {
    pub formula: &'a Formula,
    pub limit: u64,
}

impl fmt::Display for CompactDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_formula(&mut out, self.formula, Some(self.limit))?;
        f.write_str(&out)
    }
}

fn write_numeral(out: &mut String, n: &BigUint, limit: Option<u64>) -> fmt::Result {
    let small = n.to_u64();
    match (small, limit) {
        (Some(k), Some(lim)) if k <= lim => {}
        (Some(_), None) => {}
        _ if limit.is_some() => return write!(out, "[{n}]"),
        _ => panic!("numeral too large to print in canonical form"),
    }
    let k = small.unwrap() as usize;
    out.reserve(4 * k + 1);
    for _ in 0..k {
        out.push('(');
    }
    out.push('0');
    for _ in 0..k {
        out.push_str("+1)");
    }
    Ok(())
}

fn write_term(out: &mut String, t: &Term, limit: Option<u64>) -> fmt::Result {
    match t {
        Term::Var(v) => out.write_str(v),
        Term::Zero => out.write_str("0"),
        Term::One => out.write_str("1"),
        Term::Numeral(n) => write_numeral(out, n, limit),
        Term::Add(l, r) => {
            out.push('(');
            write_term(out, l, limit)?;
            out.push('+');
            write_term(out, r, limit)?;
            out.push(')');
            Ok(())
        }
        Term::Mul(l, r) => {
            out.push('(');
            write_term(out, l, limit)?;
            out.push('*');
            write_term(out, r, limit)?;
            out.push(')');
            Ok(())
        }
    }
}

fn self_delimited(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Eq(..) | Formula::Implies(..) | Formula::And(..) | Formula::Or(..) | Formula::Pred(..)
    )
}

fn write_body(out: &mut String, body: &Formula, under_quantifier: bool, limit: Option<u64>) -> fmt::Result {
    let direct = self_delimited(body)
        || (under_quantifier && (matches!(body, Formula::Turnstile(_)) || body.as_quantifier().is_some()));
    if direct {
        write_formula(out, body, limit)
    } else {
        out.push('(');
        write_formula(out, body, limit)?;
        out.push(')');
        Ok(())
    }
}

fn write_formula(out: &mut String, f: &Formula, limit: Option<u64>) -> fmt::Result {
    match f {
        Formula::Eq(l, r) => {
            out.push('(');
            write_term(out, l, limit)?;
            out.push('=');
            write_term(out, r, limit)?;
            out.push(')');
            Ok(())
        }
        Formula::Pred(name, args) => {
            out.push_str(name);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(out, a, limit)?;
            }
            out.push(')');
            Ok(())
        }
        Formula::Not(b) => {
            out.push('~');
            write_body(out, b, false, limit)
        }
        Formula::Turnstile(b) => {
            out.push_str("|=PP");
            write_body(out, b, false, limit)
        }
        Formula::Implies(a, b) => write_binary(out, a, "=>", b, limit),
        Formula::And(a, b) => write_binary(out, a, "&", b, limit),
        Formula::Or(a, b) => write_binary(out, a, "|", b, limit),
        Formula::ForAll(v, b) => {
            write!(out, "(A{v})")?;
            write_body(out, b, true, limit)
        }
        Formula::Exists(v, b) => {
            write!(out, "(E{v})")?;
            write_body(out, b, true, limit)
        }
        Formula::ExistsUnique(v, b) => {
            write!(out, "(E!{v})")?;
            write_body(out, b, true, limit)
        }
    }
}

fn write_binary(out: &mut String, a: &Formula, op: &str, b: &Formula, limit: Option<u64>) -> fmt::Result {
    out.push('(');
    write_formula(out, a, limit)?;
    out.push_str(op);
    write_formula(out, b, limit)?;
    out.push(')');
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{numeral, parse};

    #[test]
    fn canonical_examples() {
        assert_eq!(print(&Formula::eq(Term::Zero, Term::Zero)), "(0=0)");
        let f = Formula::forall("y", Formula::turnstile(Formula::not(Formula::eq(Term::var("y"), Term::Zero))));
        assert_eq!(print(&f), "(Ay)|=PP(~(y=0))");
        assert_eq!(print_term(&numeral(2u32)), "((0+1)+1)");
        assert_eq!(print(&parse("~(0=(0+1))").unwrap()), "~(0=(0+1))");
        assert_eq!(print(&parse("(Ay)(~Q(x,y))").unwrap()), "(Ay)(~Q(x,y))");
        assert_eq!(print(&parse("(Ax)((x+0)=x)").unwrap()), "(Ax)((x+0)=x)");
    }

    #[test]
    fn compact_display_abbreviates() {
        let f = Formula::eq(numeral(1_000_000u32), Term::var("x"));
        let shown = CompactDisplay { formula: &f, limit: 3 }.to_string();
        assert_eq!(shown, "([1000000]=x)");
    }
}
