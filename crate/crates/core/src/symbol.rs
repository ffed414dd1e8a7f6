//! Transcendental basis atoms and their numeric bindings.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_prime::nt_funcs::{factors, is_prime};
use num_traits::{One, Signed};

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::interval::{self, ComplexBox, Dyadic, Interval};
use crate::rational::Rational;

/// Certification family of a symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Exp,
    Log,
    Pi,
    Abstract(String),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Exp => write!(f, "EXP"),
            Family::Log => write!(f, "LOG"),
            Family::Pi => write!(f, "PI"),
            Family::Abstract(n) => write!(f, "ABSTRACT({n})"),
        }
    }
}

#[derive(Clone)]
pub enum SymbolKind {
    /// `e^α`, `α ≠ 0`.
    Exp(AlgebraicNumber),
    /// `log p`, `p` prime.
    LogPrime(BigInt),
    /// `log α`, `α` a positive real irrational algebraic number.
    LogAlg(AlgebraicNumber),
    Pi,
    /// Named transcendental, independent of everything else by declaration.
    /// Abstract symbols are taken to be real.
    Abstract(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum SortKey {
    Exp(Dyadic, Dyadic, Vec<BigInt>),
    LogPrime(BigInt),
    LogAlg(Dyadic, Dyadic, Vec<BigInt>),
    Pi,
    Abstract(String),
}

#[derive(Clone)]
pub struct Symbol {
    kind: SymbolKind,
    key: SortKey,
}

fn alg_key(a: &AlgebraicNumber) -> (Dyadic, Dyadic, Vec<BigInt>) {
    a.sort_key()
}

impl Symbol {
    pub fn exp(alpha: AlgebraicNumber) -> Result<Symbol> {
        if alpha.is_zero() {
            return Err(Error::InvalidSymbol("exp symbol needs a nonzero exponent".into()));
        }
        let (r, i, p) = alg_key(&alpha);
        Ok(Symbol {
            key: SortKey::Exp(r, i, p),
            kind: SymbolKind::Exp(alpha),
        })
    }

    pub fn log_prime(p: BigInt) -> Result<Symbol> {
        let ok = p.sign() == Sign::Plus && is_prime(p.magnitude(), None).probably();
        if !ok {
            return Err(Error::InvalidSymbol(format!("log({p}) is not a prime atom")));
        }
        Ok(Symbol {
            key: SortKey::LogPrime(p.clone()),
            kind: SymbolKind::LogPrime(p),
        })
    }

    pub fn log_alg(alpha: AlgebraicNumber) -> Result<Symbol> {
        if alpha.as_gaussian().is_some() {
            return Err(Error::InvalidSymbol(
                "rational logarithm arguments must be split into primes".into(),
            ));
        }
        if !alpha.im_is_zero() || !alpha.is_positively_oriented() {
            return Err(Error::InvalidSymbol(format!(
                "log argument {alpha:?} is not a positive real"
            )));
        }
        let (r, i, p) = alg_key(&alpha);
        Ok(Symbol {
            key: SortKey::LogAlg(r, i, p),
            kind: SymbolKind::LogAlg(alpha),
        })
    }

    pub fn pi() -> Symbol {
        Symbol {
            kind: SymbolKind::Pi,
            key: SortKey::Pi,
        }
    }

    pub fn abstract_named(name: &str) -> Symbol {
        Symbol {
            kind: SymbolKind::Abstract(name.to_string()),
            key: SortKey::Abstract(name.to_string()),
        }
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn family(&self) -> Family {
        match &self.kind {
            SymbolKind::Exp(_) => Family::Exp,
            SymbolKind::LogPrime(_) | SymbolKind::LogAlg(_) => Family::Log,
            SymbolKind::Pi => Family::Pi,
            SymbolKind::Abstract(n) => Family::Abstract(n.clone()),
        }
    }

    pub fn is_abstract(&self) -> bool {
        matches!(self.kind, SymbolKind::Abstract(_))
    }

    pub fn is_log_alg(&self) -> bool {
        matches!(self.kind, SymbolKind::LogAlg(_))
    }

    /// Every value of this symbol is real.
    pub fn is_real(&self) -> bool {
        match &self.kind {
            SymbolKind::Exp(a) => a.im_is_zero(),
            _ => true,
        }
    }

    /// Enclosure of the symbol's value, width roughly `2^-prec` relative to its size.
    pub fn eval(&self, prec: u32, bindings: &Bindings) -> Result<ComplexBox> {
        match &self.kind {
            SymbolKind::Exp(a) => {
                let coarse = a.refine(8)?;
                let grow = coarse.re.hi().to_f64().max(0.0) * 1.45;
                let bits = prec + 8 + grow.ceil() as u32 + coarse.re.mag().msb().max(0) as u32;
                Ok(interval::exp_box(&a.refine(bits)?, prec + 4))
            }
            SymbolKind::LogPrime(p) => {
                Ok(ComplexBox::real(interval::log_interval(&Interval::point(Dyadic::from_int(p.clone())), prec)?))
            }
            SymbolKind::LogAlg(a) => {
                let coarse = a.refine(8)?;
                let small = (-coarse.re.lo().msb()).max(0) as u32;
                let x = a.refine(prec + 8 + small)?;
                let re = Interval::new(x.re.lo().clone(), x.re.hi().clone());
                Ok(ComplexBox::real(interval::log_interval(&re, prec)?))
            }
            SymbolKind::Pi => Ok(ComplexBox::real(interval::pi(prec))),
            SymbolKind::Abstract(name) => match bindings.get(name) {
                Some(b) => Ok(ComplexBox::real(b.eval(prec))),
                None => Err(Error::UnboundSymbol(name.clone())),
            },
        }
    }

    /// Whether a numeric value can be produced without bindings.
    pub fn is_concrete(&self) -> bool {
        !self.is_abstract()
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Symbol) -> bool {
        match (&self.kind, &other.kind) {
            (SymbolKind::Exp(a), SymbolKind::Exp(b)) | (SymbolKind::LogAlg(a), SymbolKind::LogAlg(b)) => {
                a.equals(b)
            }
            (SymbolKind::LogPrime(p), SymbolKind::LogPrime(q)) => p == q,
            (SymbolKind::Pi, SymbolKind::Pi) => true,
            (SymbolKind::Abstract(a), SymbolKind::Abstract(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Symbol {}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Symbol) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    /// Sorts by family, then by approximate value; equal symbols compare equal.
    fn cmp(&self, other: &Symbol) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.key.cmp(&other.key) {
            Ordering::Equal => {
                // Distinct numbers within 2^-64 of each other; refine to separate.
                let (a, b) = match (&self.kind, &other.kind) {
                    (SymbolKind::Exp(a), SymbolKind::Exp(b)) | (SymbolKind::LogAlg(a), SymbolKind::LogAlg(b)) => (a, b),
                    _ => return Ordering::Equal,
                };
                let mut bits = 128;
                loop {
                    let (x, y) = (a.enclosure(bits), b.enclosure(bits));
                    if x.re.certainly_lt(&y.re) {
                        return Ordering::Less;
                    }
                    if y.re.certainly_lt(&x.re) {
                        return Ordering::Greater;
                    }
                    if x.im.certainly_lt(&y.im) {
                        return Ordering::Less;
                    }
                    if y.im.certainly_lt(&x.im) {
                        return Ordering::Greater;
                    }
                    bits *= 2;
                }
            }
            o => o,
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SymbolKind::Exp(a) => write!(f, "Exp({a:?})"),
            SymbolKind::LogPrime(p) => write!(f, "LogPrime({p})"),
            SymbolKind::LogAlg(a) => write!(f, "LogAlg({a:?})"),
            SymbolKind::Pi => write!(f, "Pi"),
            SymbolKind::Abstract(n) => write!(f, "{n}"),
        }
    }
}

/// Numeric stand-in for an abstract symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binding {
    E,
    Pi,
    /// `sum_k 10^(-k!)`.
    Liouville,
}

impl Binding {
    pub fn parse(s: &str) -> Option<Binding> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e" => Some(Binding::E),
            "pi" => Some(Binding::Pi),
            "liouville" => Some(Binding::Liouville),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Binding::E => "e",
            Binding::Pi => "pi",
            Binding::Liouville => "liouville",
        }
    }

    pub fn eval(&self, prec: u32) -> Interval {
        match self {
            Binding::E => interval::e_const(prec),
            Binding::Pi => interval::pi(prec),
            Binding::Liouville => interval::liouville(10, prec),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    map: BTreeMap<String, Binding>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn with(mut self, name: &str, b: Binding) -> Bindings {
        self.bind(name, b);
        self
    }

    pub fn bind(&mut self, name: &str, b: Binding) {
        self.map.insert(name.to_string(), b);
    }

    pub fn get(&self, name: &str) -> Option<Binding> {
        self.map.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Binding)> {
        self.map.iter()
    }
}

/// Prime factorization of a positive rational as `(p, exponent)` pairs.
pub fn factor_rational(q: &Rational) -> Result<Vec<(BigInt, i64)>> {
    if !q.is_positive() {
        return Err(Error::NonPositiveLogArgument(q.to_string()));
    }
    let mut out: BTreeMap<BigInt, i64> = BTreeMap::new();
    for (n, sign) in [(q.numer(), 1i64), (q.denom(), -1i64)] {
        if n.is_one() {
            continue;
        }
        let (fs, rest) = factors(n.magnitude().clone(), None);
        if rest.is_some() {
            return Err(Error::Unsupported(format!("could not factor {n}")));
        }
        for (p, e) in fs {
            *out.entry(BigInt::from_biguint(Sign::Plus, p)).or_default() += sign * e as i64;
        }
    }
    Ok(out.into_iter().filter(|(_, e)| *e != 0).collect())
}
