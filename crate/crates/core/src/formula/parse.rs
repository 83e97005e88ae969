use std::collections::BTreeSet;

use thiserror::Error;

use super::{Formula, Quantifier, Term};

/// Which defined predicate names a parse may refer to.
pub trait PredicateScope {
    fn is_registered(&self, name: &str) -> bool;
}

struct AnyPredicate;

impl PredicateScope for AnyPredicate {
    fn is_registered(&self, _: &str) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: expected one of {expected:?}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unregistered defined predicate `{name}` at {line}:{column}")]
    UnregisteredPredicate { name: String, line: usize, column: usize },
}

/// Parses without checking defined predicate names against a symbol table.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    parse_in(text, &AnyPredicate)
}

pub fn parse_in(text: &str, scope: &dyn PredicateScope) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(&tokens, scope);
    let f = p.formula();
    match f {
        Ok(f) if p.at_end() => Ok(f),
        Ok(_) => {
            p.fail("end of input");
            Err(p.error())
        }
        Err(()) => Err(p.error()),
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(&tokens, &AnyPredicate);
    match p.term() {
        Ok(t) if p.at_end() => Ok(t),
        Ok(_) => {
            p.fail("end of input");
            Err(p.error())
        }
        Err(()) => Err(p.error()),
    }
}

/// Comma separated terms, possibly empty.
pub fn parse_term_list(text: &str) -> Result<Vec<Term>, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser::new(&tokens, &AnyPredicate);
    let mut out = Vec::new();
    if p.at_end() {
        return Ok(out);
    }
    loop {
        match p.term() {
            Ok(t) => out.push(t),
            Err(()) => return Err(p.error()),
        }
        if p.at_end() {
            return Ok(out);
        }
        if !p.eat(&Tok::Comma) {
            p.fail(",");
            return Err(p.error());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
    Equals,
    Tilde,
    Implies,
    Amp,
    Bar,
    Turnstile,
    Zero,
    One,
    Var(String),
    Name(String),
    Quant(Quantifier, String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Plus => "+".into(),
            Tok::Star => "*".into(),
            Tok::Equals => "=".into(),
            Tok::Tilde => "~".into(),
            Tok::Implies => "=>".into(),
            Tok::Amp => "&".into(),
            Tok::Bar => "|".into(),
            Tok::Turnstile => "|=PP".into(),
            Tok::Zero => "0".into(),
            Tok::One => "1".into(),
            Tok::Var(v) => format!("variable `{v}`"),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Quant(q, v) => match q {
                Quantifier::All => format!("(A{v})"),
                Quantifier::Exists => format!("(E{v})"),
                Quantifier::ExistsUnique => format!("(E!{v})"),
            },
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize, chars: &[char]| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    let err = |line, column, found: String| ParseError::Syntax {
        line,
        column,
        expected: vec!["a token".into()],
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1, &chars);
            continue;
        }
        let (l0, c0) = (line, col);
        let rest = &chars[i..];
        let starts = |s: &str| {
            let s: Vec<char> = s.chars().collect();
            rest.len() >= s.len() && rest[..s.len()] == s[..]
        };
        let (tok, width) = if c == '(' {
            match lex_quantifier(rest) {
                Some((q, v, w)) => (Tok::Quant(q, v), w),
                None => (Tok::LParen, 1),
            }
        } else if starts("|=PP") {
            (Tok::Turnstile, 4)
        } else if starts("=>") {
            (Tok::Implies, 2)
        } else {
            match c {
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '+' => (Tok::Plus, 1),
                '*' => (Tok::Star, 1),
                '=' => (Tok::Equals, 1),
                '~' => (Tok::Tilde, 1),
                '&' => (Tok::Amp, 1),
                '|' => (Tok::Bar, 1),
                '0' => (Tok::Zero, 1),
                '1' => (Tok::One, 1),
                'a'..='z' => {
                    let w = 1 + rest[1..].iter().take_while(|d| d.is_ascii_digit()).count();
                    (Tok::Var(rest[..w].iter().collect()), w)
                }
                'A'..='Z' => {
                    let w = 1 + rest[1..]
                        .iter()
                        .take_while(|d| d.is_ascii_alphanumeric() || **d == '_')
                        .count();
                    (Tok::Name(rest[..w].iter().collect()), w)
                }
                other => return Err(err(l0, c0, format!("`{other}`"))),
            }
        };
        advance(&mut i, &mut line, &mut col, width, &chars);
        out.push(Spanned { tok, line: l0, column: c0 });
    }
    Ok(out)
}

/// `(A<var>)`, `(E<var>)`, `(E!<var>)`, whitespace allowed inside.
fn lex_quantifier(rest: &[char]) -> Option<(Quantifier, String, usize)> {
    let mut j = 1;
    let skip_ws = |j: &mut usize| {
        while *j < rest.len() && rest[*j].is_whitespace() {
            *j += 1;
        }
    };
    skip_ws(&mut j);
    let q = match rest.get(j)? {
        'A' => Quantifier::All,
        'E' => {
            if rest.get(j + 1) == Some(&'!') {
                j += 1;
                Quantifier::ExistsUnique
            } else {
                Quantifier::Exists
            }
        }
        _ => return None,
    };
    j += 1;
    skip_ws(&mut j);
    let start = j;
    if !rest.get(j)?.is_ascii_lowercase() {
        return None;
    }
    j += 1;
    while j < rest.len() && rest[j].is_ascii_digit() {
        j += 1;
    }
    let var: String = rest[start..j].iter().collect();
    skip_ws(&mut j);
    if rest.get(j)? != &')' {
        return None;
    }
    Some((q, var, j + 1))
}

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    scope: &'a dyn PredicateScope,
    far_pos: usize,
    far_expected: BTreeSet<String>,
    unregistered: Option<(String, usize, usize)>,
}

type PResult<T> = Result<T, ()>;

impl<'a> Parser<'a> {
    fn new(toks: &'a [Spanned], scope: &'a dyn PredicateScope) -> Self {
        Parser {
            toks,
            pos: 0,
            scope,
            far_pos: 0,
            far_expected: BTreeSet::new(),
            unregistered: None,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail(&mut self, expected: &str) {
        if self.pos > self.far_pos {
            self.far_pos = self.pos;
            self.far_expected.clear();
        }
        if self.pos == self.far_pos {
            self.far_expected.insert(expected.to_string());
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.fail(&t.describe());
            Err(())
        }
    }

    fn error(&self) -> ParseError {
        if let Some((name, line, column)) = &self.unregistered {
            return ParseError::UnregisteredPredicate {
                name: name.clone(),
                line: *line,
                column: *column,
            };
        }
        let (line, column, found) = match self.toks.get(self.far_pos) {
            Some(s) => (s.line, s.column, s.tok.describe()),
            None => {
                let (line, column) = self
                    .toks
                    .last()
                    .map(|s| (s.line, s.column + s.tok.describe().len()))
                    .unwrap_or((1, 1));
                (line, column, "end of input".to_string())
            }
        };
        ParseError::Syntax {
            line,
            column,
            expected: self.far_expected.iter().cloned().collect(),
            found,
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let left = self.unary()?;
        let ctor: fn(Formula, Formula) -> Formula = match self.peek() {
            Some(Tok::Implies) => Formula::implies,
            Some(Tok::Amp) => Formula::and,
            Some(Tok::Bar) => Formula::or,
            _ => {
                self.fail("=>");
                self.fail("&");
                self.fail("|");
                return Ok(left);
            }
        };
        self.pos += 1;
        let right = self.unary()?;
        Ok(ctor(left, right))
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().cloned() {
            Some(Tok::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Turnstile) => {
                self.pos += 1;
                Ok(Formula::turnstile(self.unary()?))
            }
            Some(Tok::Quant(q, v)) => {
                self.pos += 1;
                Ok(Formula::quantifier(q, v, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        match self.peek().cloned() {
            Some(Tok::Name(name)) => {
                let (line, column) = (self.toks[self.pos].line, self.toks[self.pos].column);
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let mut args = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                if !self.scope.is_registered(&name) {
                    self.unregistered.get_or_insert((name.clone(), line, column));
                    return Err(());
                }
                Ok(Formula::Pred(name, args))
            }
            Some(Tok::LParen) => {
                let save = self.pos;
                if let Ok(eq) = self.equation() {
                    return Ok(eq);
                }
                if self.unregistered.is_some() {
                    return Err(());
                }
                self.pos = save + 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => self.equation(),
        }
    }

    fn equation(&mut self) -> PResult<Formula> {
        let l = self.term()?;
        self.expect(Tok::Equals)?;
        let r = self.term()?;
        Ok(Formula::Eq(l, r))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut acc = self.product()?;
        while self.eat(&Tok::Plus) {
            acc = Term::add(acc, self.product()?);
        }
        self.fail("+");
        Ok(acc)
    }

    fn product(&mut self) -> PResult<Term> {
        let mut acc = self.term_atom()?;
        while self.eat(&Tok::Star) {
            acc = Term::mul(acc, self.term_atom()?);
        }
        self.fail("*");
        Ok(acc)
    }

    fn term_atom(&mut self) -> PResult<Term> {
        match self.peek().cloned() {
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Zero) => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(Tok::One) => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => {
                for e in ["variable", "0", "1", "("] {
                    self.fail(e);
                }
                Err(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{numeral, print};

    struct Only(&'static [&'static str]);
    impl PredicateScope for Only {
        fn is_registered(&self, name: &str) -> bool {
            self.0.contains(&name)
        }
    }

    #[test]
    fn parses_axiom_shapes() {
        let f = parse("(x+0)=x").unwrap();
        assert_eq!(f, Formula::eq(Term::add(Term::var("x"), Term::Zero), Term::var("x")));
        let g = parse("~(0=(0+1))").unwrap();
        assert_eq!(g, Formula::not(Formula::eq(Term::Zero, numeral(1u32))));
        let h = parse("(Ax)|=PP((x+0)=x)").unwrap();
        assert_eq!(h, Formula::forall("x", Formula::turnstile(f)));
    }

    #[test]
    fn quantifier_variants_and_whitespace() {
        let f = parse(" (E! y) ( y = 0 ) ").unwrap();
        assert_eq!(print(&f), "(E!y)(y=0)");
        let g = parse("(Ex1)(x1 = 1 + 1 * x1)").unwrap();
        assert_eq!(print(&g), "(Ex1)(x1=(1+(1*x1)))");
    }

    #[test]
    fn malformed_input_reports_position() {
        match parse("((0=").unwrap_err() {
            ParseError::Syntax { line, column, expected, .. } => {
                assert_eq!(line, 1);
                assert_eq!(column, 5);
                assert!(expected.contains(&"0".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("(0=0) (0=0)").is_err());
        assert!(parse("x $ y").is_err());
    }

    #[test]
    fn unregistered_predicates_are_rejected_in_scope() {
        let scope = Only(&["Q"]);
        assert!(parse_in("(Ay)|=PP(~Q(x,y))", &scope).is_ok());
        assert!(matches!(
            parse_in("R(x)", &scope),
            Err(ParseError::UnregisteredPredicate { .. })
        ));
    }

    #[test]
    fn term_lists() {
        assert_eq!(parse_term_list("").unwrap(), vec![]);
        assert_eq!(
            parse_term_list("a,(b+1)").unwrap(),
            vec![Term::var("a"), Term::add(Term::var("b"), Term::One)]
        );
    }
}
