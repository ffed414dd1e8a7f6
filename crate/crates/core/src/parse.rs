//! Expression grammar and canonical printer.
//!
//! ```text
//! group   := ['gp' '{'] [expr (',' expr)*] ['}']
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := unary (('*'|'/') unary)*
//! unary   := '-' unary | primary
//! primary := number | imag | 'i' | 'e' | 'pi' | T-ident
//!          | 'exp(' expr ')' | 'log(' expr ')' | 'sqrt(' expr ')'
//!          | 'root(' poly ';' rat ',' rat ',' rat ',' rat ')' | '(' expr ')'
//! ```
//!
//! Numbers are exact (`0.25` is `1/4`). `2i` is an imaginary literal and
//! `1/3i` means `(1/3)i`, matching how Gaussian rationals print.
//! Identifiers starting with `T` are abstract symbols.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::element::{Atom, Element};
use crate::poly::IntPoly;
use crate::rational::{fmt_rational as fmt_rat, GaussianRational, Rational};
use crate::symbol::SymbolKind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    Semantic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn is_semantic(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Semantic(_))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => write!(
                f,
                "line {}, column {}: expected {}, found {}",
                self.line,
                self.col,
                expected.join(" | "),
                found
            ),
            ParseErrorKind::Semantic(m) => write!(f, "line {}, column {}: {}", self.line, self.col, m),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Imag(Rational),
    Ident(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number {q}"),
            Tok::Imag(q) => format!("imaginary literal {q}i"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, col: &mut usize, n: usize| {
        *i += n;
        *col += n;
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
            continue;
        }
        let (tl, tc) = (line, col);
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let (q, n) = read_number(&chars[i..]);
            advance(&mut i, &mut col, n);
            // `a/bi` is the imaginary literal (a/b)i.
            if chars.get(i) == Some(&'/') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                let (d, m) = read_number(&chars[i + 1..]);
                let j = i + 1 + m;
                if chars.get(j) == Some(&'i') && !chars.get(j + 1).is_some_and(|c| is_ident_char(*c)) && !d.is_zero() {
                    out.push(Token { tok: Tok::Imag(q / d), line: tl, col: tc });
                    advance(&mut i, &mut col, m + 2);
                    continue;
                }
            }
            if chars.get(i) == Some(&'i') && !chars.get(i + 1).is_some_and(|c| is_ident_char(*c)) {
                out.push(Token { tok: Tok::Imag(q), line: tl, col: tc });
                advance(&mut i, &mut col, 1);
                continue;
            }
            out.push(Token { tok: Tok::Num(q), line: tl, col: tc });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                advance(&mut i, &mut col, 1);
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
            continue;
        }
        if "+-*/(),;{}^".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: tl, col: tc });
            advance(&mut i, &mut col, 1);
            continue;
        }
        return Err(ParseError {
            line,
            col,
            kind: ParseErrorKind::Syntax {
                expected: vec!["number".into(), "identifier".into(), "operator".into()],
                found: format!("'{c}'"),
            },
        });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Reads `123`, `1.25`, `.5`; returns the value and characters consumed.
fn read_number(chars: &[char]) -> (Rational, usize) {
    let mut n = 0;
    let mut digits = String::new();
    let mut frac = 0usize;
    let mut seen_dot = false;
    while n < chars.len() {
        let c = chars[n];
        if c.is_ascii_digit() {
            digits.push(c);
            if seen_dot {
                frac += 1;
            }
        } else if c == '.' && !seen_dot && chars.get(n + 1).is_some_and(|d| d.is_ascii_digit()) {
            seen_dot = true;
        } else {
            break;
        }
        n += 1;
    }
    let num: BigInt = digits.parse().unwrap_or_default();
    (Rational::new(num, num_traits::pow(BigInt::from(10), frac)), n)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn syntax<T>(&self, expected: &[&str]) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().describe(),
            },
        })
    }

    fn semantic_at<T>(&self, at: (usize, usize), msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: at.0,
            col: at.1,
            kind: ParseErrorKind::Semantic(msg.into()),
        })
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.syntax(&[&format!("'{c}'")])
        }
    }

    fn lift<T>(&self, at: (usize, usize), r: crate::error::Result<T>) -> PResult<T> {
        r.or_else(|e| self.semantic_at(at, e.to_string()))
    }

    fn expr(&mut self) -> PResult<Element> {
        let at = self.here();
        let mut acc = if self.eat_sym('-') {
            self.term()?.neg()
        } else {
            self.eat_sym('+');
            self.term()?
        };
        loop {
            if self.eat_sym('+') {
                let t = self.term()?;
                acc = self.lift(at, acc.add(&t))?;
            } else if self.eat_sym('-') {
                let t = self.term()?;
                acc = self.lift(at, acc.sub(&t))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Element> {
        let mut acc = self.unary()?;
        loop {
            let at = self.here();
            if self.eat_sym('*') {
                let rhs = self.unary()?;
                acc = self.multiply(at, &acc, &rhs)?;
            } else if self.eat_sym('/') {
                let rhs = self.unary()?;
                let g = match (rhs.has_symbols(), rhs.alg().as_gaussian()) {
                    (false, Some(g)) if !g.is_zero() => g.inv().expect("nonzero"),
                    (false, Some(_)) => return self.semantic_at(at, "division by zero"),
                    _ => return self.semantic_at(at, "divisor must be a nonzero Gaussian rational"),
                };
                acc = self.lift(at, acc.scale(&g))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn multiply(&self, at: (usize, usize), a: &Element, b: &Element) -> PResult<Element> {
        match (a.has_symbols(), b.has_symbols()) {
            (true, true) => self.semantic_at(at, "product of two transcendental terms"),
            (false, false) => self.lift(at, a.alg().mul(b.alg()).map(Element::from_alg)),
            (false, true) | (true, false) => {
                let (scalar, x) = if a.has_symbols() { (b, a) } else { (a, b) };
                match scalar.alg().as_gaussian() {
                    Some(g) => self.lift(at, x.scale(g)),
                    None => self.semantic_at(at, "symbol coefficients must be Gaussian rationals"),
                }
            }
        }
    }

    fn unary(&mut self) -> PResult<Element> {
        if self.eat_sym('-') {
            return Ok(self.unary()?.neg());
        }
        self.primary()
    }

    fn algebraic_arg(&mut self, what: &str) -> PResult<(AlgebraicNumber, (usize, usize))> {
        self.expect_sym('(')?;
        let at = self.here();
        let x = self.expr()?;
        self.expect_sym(')')?;
        if x.has_symbols() {
            return self.semantic_at(at, format!("{what} argument must be algebraic"));
        }
        Ok((x.alg().clone(), at))
    }

    fn primary(&mut self) -> PResult<Element> {
        let at = self.here();
        match self.peek().clone() {
            Tok::Num(q) => {
                self.bump();
                Ok(Element::from_gaussian(GaussianRational::real(q)))
            }
            Tok::Imag(q) => {
                self.bump();
                Ok(Element::from_gaussian(GaussianRational::new(Rational::zero(), q)))
            }
            Tok::Sym('(') => {
                self.bump();
                let x = self.expr()?;
                self.expect_sym(')')?;
                Ok(x)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "i" => Ok(Element::from_gaussian(GaussianRational::i())),
                    "pi" => Ok(Element::pi()),
                    "e" => self.lift(at, Element::exp(AlgebraicNumber::one())),
                    "exp" => {
                        let (a, _) = self.algebraic_arg("exp")?;
                        self.lift(at, Element::make(AlgebraicNumber::zero(), vec![(Atom::Exp(a), GaussianRational::one())]))
                    }
                    "log" => {
                        let (a, arg_at) = self.algebraic_arg("log")?;
                        if a.is_zero() || !a.im_is_zero() || !a.is_positively_oriented() {
                            return self.semantic_at(arg_at, "log argument must be a positive real");
                        }
                        self.lift(at, Element::log(a))
                    }
                    "sqrt" => {
                        let (a, arg_at) = self.algebraic_arg("sqrt")?;
                        match a.as_rational() {
                            Some(q) => self.lift(at, AlgebraicNumber::sqrt_rational(q).map(Element::from_alg)),
                            None => self.semantic_at(arg_at, "sqrt argument must be rational"),
                        }
                    }
                    "root" => self.root(),
                    n if n.starts_with('T') => Ok(Element::abstract_named(n)),
                    _ => self.semantic_at(at, format!("unknown identifier '{name}'")),
                }
            }
            _ => self.syntax(&["number", "'i'", "'pi'", "'exp'", "'log'", "'sqrt'", "'root'", "T-symbol", "'('"]),
        }
    }

    fn root(&mut self) -> PResult<Element> {
        self.expect_sym('(')?;
        let at = self.here();
        let poly = self.poly()?;
        self.expect_sym(';')?;
        let mut corners = Vec::new();
        for k in 0..4 {
            if k > 0 {
                self.expect_sym(',')?;
            }
            corners.push(self.signed_rational()?);
        }
        self.expect_sym(')')?;
        let rect = [&corners[0], &corners[1], &corners[2], &corners[3]];
        self.lift(at, AlgebraicNumber::root_in(&poly, rect).map(Element::from_alg))
    }

    fn signed_rational(&mut self) -> PResult<Rational> {
        let neg = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        let Tok::Num(n) = self.peek().clone() else {
            return self.syntax(&["number"]);
        };
        self.bump();
        let mut q = n;
        if self.eat_sym('/') {
            let Tok::Num(d) = self.peek().clone() else {
                return self.syntax(&["number"]);
            };
            if d.is_zero() {
                let at = self.here();
                return self.semantic_at(at, "zero denominator");
            }
            self.bump();
            q /= d;
        }
        Ok(if neg { -q } else { q })
    }

    /// Integer polynomial in `x`, e.g. `3x^2 - x + 1` or `x^4 - 4`.
    fn poly(&mut self) -> PResult<IntPoly> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            let neg = if self.eat_sym('-') {
                true
            } else if self.eat_sym('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let at = self.here();
            let mut c = BigInt::one();
            let mut has_coeff = false;
            if let Tok::Num(q) = self.peek().clone() {
                if !q.is_integer() {
                    return self.semantic_at(at, "polynomial coefficients must be integers");
                }
                c = q.to_integer();
                has_coeff = true;
                self.bump();
                self.eat_sym('*');
            }
            let mut deg = 0usize;
            if *self.peek() == Tok::Ident("x".into()) {
                self.bump();
                deg = 1;
                if self.eat_sym('^') {
                    let Tok::Num(e) = self.peek().clone() else {
                        return self.syntax(&["exponent"]);
                    };
                    if !e.is_integer() || e.is_negative() || e > Rational::from_integer(4096.into()) {
                        let at = self.here();
                        return self.semantic_at(at, "exponent must be a small nonnegative integer");
                    }
                    deg = e.to_integer().try_into().unwrap_or(0);
                    self.bump();
                }
            } else if !has_coeff {
                return self.syntax(&["integer", "'x'"]);
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigInt::zero());
            }
            coeffs[deg] += if neg { -c } else { c };
        }
        Ok(IntPoly::new(coeffs))
    }

    fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.syntax(&["operator", "end of input"])
        }
    }
}

pub fn parse_element(src: &str) -> Result<Element, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let x = p.expr()?;
    p.finish()?;
    Ok(x)
}

/// Comma-separated generators, optionally wrapped as `gp{...}`. Empty input is the trivial group.
pub fn parse_generators(src: &str) -> Result<Vec<Element>, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let wrapped = if *p.peek() == Tok::Ident("gp".into()) {
        p.bump();
        p.expect_sym('{')?;
        true
    } else {
        false
    };
    let mut gens = Vec::new();
    let closes = |p: &Parser| *p.peek() == Tok::Eof || (wrapped && *p.peek() == Tok::Sym('}'));
    if !closes(&p) {
        gens.push(p.expr()?);
        while p.eat_sym(',') {
            gens.push(p.expr()?);
        }
    }
    if wrapped {
        p.expect_sym('}')?;
    }
    p.finish()?;
    Ok(gens)
}

/// Printed algebraic number; reparses to an equal value.
pub fn format_algebraic(a: &AlgebraicNumber) -> String {
    if let Some(g) = a.as_gaussian() {
        return g.to_string();
    }
    let p = a.poly();
    let c = p.coeffs();
    if c.len() == 3 && c[1].is_zero() {
        // d x^2 -+ n
        let (n, d) = (-&c[0], &c[2]);
        let q = Rational::new(n, d.clone());
        let positive = a.is_positively_oriented();
        let s = format!("sqrt({})", fmt_rat(&q));
        return if positive { s } else { format!("-{s}") };
    }
    let b = a.box_rationals();
    format!(
        "root({}; {}, {}, {}, {})",
        p,
        fmt_rat(&b[0]),
        fmt_rat(&b[1]),
        fmt_rat(&b[2]),
        fmt_rat(&b[3])
    )
}

fn format_symbol(k: &SymbolKind) -> String {
    match k {
        SymbolKind::Exp(a) => format!("exp({})", format_algebraic(a)),
        SymbolKind::LogPrime(p) => format!("log({p})"),
        SymbolKind::LogAlg(a) => format!("log({})", format_algebraic(a)),
        SymbolKind::Pi => "pi".into(),
        SymbolKind::Abstract(n) => n.clone(),
    }
}

fn format_coefficient(c: &GaussianRational) -> String {
    if c.is_one() {
        String::new()
    } else if (-c).is_one() {
        "-".into()
    } else if c.im.is_zero() || c.re.is_zero() {
        format!("{c}*")
    } else {
        format!("({c})*")
    }
}

/// Canonical text: symbol terms in canonical order, then the algebraic part.
pub fn format_element(x: &Element) -> String {
    let mut parts: Vec<String> = x
        .terms()
        .iter()
        .map(|(s, c)| format!("{}{}", format_coefficient(c), format_symbol(s.kind())))
        .collect();
    if !x.alg().is_zero() {
        parts.push(format_algebraic(x.alg()));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

pub fn format_generators(gens: &[Element]) -> String {
    let inner: Vec<String> = gens.iter().map(format_element).collect();
    inner.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn basic_groups() {
        let g = parse_generators("exp(1), exp(2)").unwrap();
        assert_eq!(g.len(), 2);
        let p = parse_generators("gp{T, i*T}").unwrap();
        assert_eq!(p[1].terms()[0].1, GaussianRational::i());
        assert!(parse_generators("").unwrap().is_empty());
    }

    #[test]
    fn log_cancellation() {
        let x = parse_element("log(6) - log(2) - log(3)").unwrap();
        assert!(x.is_trivially_zero());
        assert_eq!(format_element(&x), "0");
    }

    #[test]
    fn imaginary_literals() {
        let x = parse_element("1/2-1/3i").unwrap();
        assert_eq!(x.alg().as_gaussian().unwrap(), &GaussianRational::new(rat(1, 2), rat(-1, 3)));
        let y = parse_element("1/(2i)").unwrap();
        assert_eq!(y.alg().as_gaussian().unwrap(), &GaussianRational::new(rat(0, 1), rat(-1, 2)));
        assert_eq!(parse_element("0.25").unwrap().alg().as_rational(), Some(&rat(1, 4)));
    }

    #[test]
    fn printing() {
        let x = parse_element("2*exp(1) + 3*exp(2) + 5").unwrap();
        assert_eq!(format_element(&x), "2*exp(1) + 3*exp(2) + 5");
        assert_eq!(format_element(&parse_element("T/10").unwrap()), "1/10*T");
        assert_eq!(format_element(&parse_element("-T").unwrap()), "-T");
        assert_eq!(format_element(&parse_element("i*T").unwrap()), "i*T");
        assert_eq!(format_element(&parse_element("(1+2i)*T - 1").unwrap()), "(1+2i)*T - 1");
        assert_eq!(format_element(&parse_element("exp(sqrt(2))").unwrap()), "exp(sqrt(2))");
    }

    #[test]
    fn roundtrip_root() {
        let x = parse_element("log(root(x^3 - 2; 1, 2, 0, 0)) + pi").unwrap();
        let s = format_element(&x);
        let y = parse_element(&s).unwrap();
        assert!(x.equals(&y), "{s}");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_element("exp(1) + * 2").unwrap_err();
        assert_eq!((e.line, e.col), (1, 10));
        assert!(!e.is_semantic());
        let e = parse_element("log(-2)").unwrap_err();
        assert!(e.is_semantic());
        let e = parse_element("T*T").unwrap_err();
        assert!(e.is_semantic());
        assert!(parse_element("foo").unwrap_err().is_semantic());
        assert!(parse_element("1 $").is_err());
    }
}
