//! Group elements: an algebraic part plus Gaussian-rational multiples of symbols.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::interval::{ComplexBox, Dyadic};
use crate::rational::{GaussianRational, Rational};
use crate::symbol::{factor_rational, Bindings, Family, Symbol, SymbolKind};

/// Precision ceiling for numeric zero refutation.
pub const ZERO_TEST_BITS: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    SchanuelConditional,
    MultiplicativeRelationPossible,
    PrecisionLimit,
}

impl UnknownReason {
    pub fn tag(&self) -> &'static str {
        match self {
            UnknownReason::SchanuelConditional => "SCHANUEL_CONDITIONAL",
            UnknownReason::MultiplicativeRelationPossible => "MULTIPLICATIVE_RELATION_POSSIBLE",
            UnknownReason::PrecisionLimit => "PRECISION_LIMIT",
        }
    }
}

/// Why an answer is unknown, and what was checked.
#[derive(Clone, Debug)]
pub struct Evidence {
    pub reason: UnknownReason,
    /// Last enclosure computed, if the value was evaluable.
    pub enclosure: Option<ComplexBox>,
    pub precision_bits: u32,
    /// Integer relations with entries up to this height were excluded.
    pub no_relation_height: Option<BigInt>,
}

impl Evidence {
    pub fn new(reason: UnknownReason) -> Evidence {
        Evidence {
            reason,
            enclosure: None,
            precision_bits: 0,
            no_relation_height: None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum TriBool {
    True,
    False,
    Unknown(Evidence),
}

impl TriBool {
    pub fn is_true(&self) -> bool {
        matches!(self, TriBool::True)
    }

    pub fn is_false(&self) -> bool {
        matches!(self, TriBool::False)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriBool::Unknown(_))
    }

    /// Tag-only comparison.
    pub fn same_tag(&self, other: &TriBool) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }
}

#[derive(Clone, Debug)]
pub enum Transcendence {
    Certified,
    RefutedAlgebraic(AlgebraicNumber),
    Unknown(Evidence),
}

/// Raw atoms accepted by [`Element::make`], before canonicalization.
#[derive(Clone, Debug)]
pub enum Atom {
    Exp(AlgebraicNumber),
    Log(AlgebraicNumber),
    Pi,
    Abstract(String),
}

#[derive(Clone)]
pub struct Element {
    alg: AlgebraicNumber,
    terms: Vec<(Symbol, GaussianRational)>,
}

impl Element {
    pub fn zero() -> Element {
        Element::from_alg(AlgebraicNumber::zero())
    }

    pub fn from_alg(alg: AlgebraicNumber) -> Element {
        Element { alg, terms: vec![] }
    }

    pub fn from_gaussian(g: GaussianRational) -> Element {
        Element::from_alg(AlgebraicNumber::from_gaussian(g))
    }

    pub fn from_symbol(s: Symbol, c: GaussianRational) -> Element {
        Element::from_parts(AlgebraicNumber::zero(), vec![(s, c)])
    }

    /// Builds from already-valid symbols, merging duplicates and dropping zeros.
    pub fn from_parts(alg: AlgebraicNumber, terms: Vec<(Symbol, GaussianRational)>) -> Element {
        let mut merged: Vec<(Symbol, GaussianRational)> = Vec::with_capacity(terms.len());
        for (s, c) in terms {
            match merged.iter_mut().find(|(t, _)| *t == s) {
                Some((_, acc)) => *acc = &*acc + &c,
                None => merged.push((s, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        merged.sort_by(|a, b| a.0.cmp(&b.0));
        Element { alg, terms: merged }
    }

    /// Canonical element from raw atoms: `exp(0)` folds into the algebraic part,
    /// rational logarithms split into prime atoms.
    pub fn make(alg: AlgebraicNumber, atoms: Vec<(Atom, GaussianRational)>) -> Result<Element> {
        let mut alg = alg;
        let mut terms = Vec::new();
        for (atom, c) in atoms {
            if c.is_zero() {
                continue;
            }
            match atom {
                Atom::Exp(a) => {
                    if a.is_zero() {
                        alg = alg.add(&AlgebraicNumber::from_gaussian(c))?;
                    } else {
                        terms.push((Symbol::exp(a)?, c));
                    }
                }
                Atom::Log(a) => {
                    if let Some(q) = a.as_rational() {
                        if !q.is_positive() {
                            return Err(Error::InvalidSymbol(format!("log of nonpositive {q}")));
                        }
                        for (p, e) in factor_rational(q)? {
                            terms.push((Symbol::log_prime(p)?, c.scale(&Rational::from_integer(e.into()))));
                        }
                    } else if a.as_gaussian().is_some() {
                        return Err(Error::InvalidSymbol(format!("log of non-real {a:?}")));
                    } else {
                        terms.push((Symbol::log_alg(a)?, c));
                    }
                }
                Atom::Pi => terms.push((Symbol::pi(), c)),
                Atom::Abstract(name) => terms.push((Symbol::abstract_named(&name), c)),
            }
        }
        Ok(Element::from_parts(alg, terms))
    }

    pub fn exp(a: AlgebraicNumber) -> Result<Element> {
        Element::make(AlgebraicNumber::zero(), vec![(Atom::Exp(a), GaussianRational::one())])
    }

    pub fn log(a: AlgebraicNumber) -> Result<Element> {
        Element::make(AlgebraicNumber::zero(), vec![(Atom::Log(a), GaussianRational::one())])
    }

    pub fn log_rational(q: &Rational) -> Result<Element> {
        if !q.is_positive() {
            return Err(Error::NonPositiveLogArgument(q.to_string()));
        }
        Element::log(AlgebraicNumber::from_rational(q.clone()))
    }

    pub fn pi() -> Element {
        Element::from_symbol(Symbol::pi(), GaussianRational::one())
    }

    pub fn abstract_named(name: &str) -> Element {
        Element::from_symbol(Symbol::abstract_named(name), GaussianRational::one())
    }

    pub fn alg(&self) -> &AlgebraicNumber {
        &self.alg
    }

    pub fn terms(&self) -> &[(Symbol, GaussianRational)] {
        &self.terms
    }

    pub fn has_symbols(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &Symbol) -> GaussianRational {
        self.terms
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn families(&self) -> BTreeSet<Family> {
        self.terms.iter().map(|(s, _)| s.family()).collect()
    }

    /// Zero algebraic part and no symbols.
    pub fn is_trivially_zero(&self) -> bool {
        self.terms.is_empty() && self.alg.is_zero()
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        let alg = self.alg.add(&other.alg)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Element::from_parts(alg, terms))
    }

    pub fn neg(&self) -> Element {
        Element {
            alg: self.alg.neg(),
            terms: self.terms.iter().map(|(s, c)| (s.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn scale(&self, m: &GaussianRational) -> Result<Element> {
        if m.is_zero() {
            return Ok(Element::zero());
        }
        let alg = self.alg.scale(m)?;
        let terms = self.terms.iter().map(|(s, c)| (s.clone(), c * m)).collect();
        Ok(Element { alg, terms })
    }

    pub fn scale_int(&self, n: &BigInt) -> Element {
        if n.is_zero() {
            return Element::zero();
        }
        let m = GaussianRational::from_bigint(n.clone());
        Element {
            alg: self.alg.mul_int(n),
            terms: self.terms.iter().map(|(s, c)| (s.clone(), c * &m)).collect(),
        }
    }

    /// `sum m_j x_j`.
    pub fn combination(xs: &[Element], m: &[BigInt]) -> Result<Element> {
        let mut alg = AlgebraicNumber::zero();
        let mut terms = Vec::new();
        for (x, k) in xs.iter().zip(m) {
            if k.is_zero() {
                continue;
            }
            alg = alg.add(&x.alg.mul_int(k))?;
            let kg = GaussianRational::from_bigint(k.clone());
            terms.extend(x.terms.iter().map(|(s, c)| (s.clone(), c * &kg)));
        }
        Ok(Element::from_parts(alg, terms))
    }

    /// Exact structural equality of canonical forms.
    pub fn equals(&self, other: &Element) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|((s, c), (t, d))| s == t && c == d)
            && self.alg.equals(&other.alg)
    }

    pub fn is_zero(&self) -> TriBool {
        self.is_zero_with(ZERO_TEST_BITS)
    }

    /// Zero test with a precision ceiling for the numeric fallback.
    ///
    /// Exact whenever symbols come from one concrete family, possibly together
    /// with abstract symbols. Mixed concrete families and `log` of irrational
    /// arguments are refuted numerically or reported unknown.
    pub fn is_zero_with(&self, max_bits: u32) -> TriBool {
        if self.terms.is_empty() {
            return if self.alg.is_zero() { TriBool::True } else { TriBool::False };
        }
        if self.terms.iter().any(|(s, _)| s.is_abstract()) {
            return TriBool::False;
        }
        let families = self.families();
        let log_alg = self.terms.iter().any(|(s, _)| s.is_log_alg());
        if families.len() == 1 && !log_alg {
            return TriBool::False;
        }
        // Normalizing by the leading coefficient makes n*x and x share one decision.
        let lead = self.terms[0].1.inv().expect("canonical coefficients are nonzero");
        let normalized = match self.scale(&lead) {
            Ok(x) => x,
            Err(_) => self.clone(),
        };
        let reason = if log_alg && families.len() == 1 {
            UnknownReason::MultiplicativeRelationPossible
        } else {
            UnknownReason::SchanuelConditional
        };
        normalized.refute_zero(reason, max_bits)
    }

    fn refute_zero(&self, reason: UnknownReason, max_bits: u32) -> TriBool {
        let bindings = Bindings::new();
        let mut bits = 32u32;
        let mut last = None;
        let mut used = 0;
        while bits <= max_bits.max(32) {
            match self.eval(bits, &bindings) {
                Ok(b) => {
                    if b.excludes_zero() {
                        return TriBool::False;
                    }
                    last = Some(b);
                    used = bits;
                }
                Err(_) => break,
            }
            bits *= 2;
        }
        TriBool::Unknown(Evidence {
            reason,
            enclosure: last,
            precision_bits: used,
            no_relation_height: None,
        })
    }

    pub fn transcendence(&self) -> Transcendence {
        if self.terms.is_empty() {
            return Transcendence::RefutedAlgebraic(self.alg.clone());
        }
        let families = self.families();
        if families.len() >= 2 {
            let mut ev = Evidence::new(UnknownReason::SchanuelConditional);
            if self.terms.iter().all(|(s, _)| s.is_concrete()) {
                if let Ok(b) = self.eval(128, &Bindings::new()) {
                    ev.enclosure = Some(b);
                    ev.precision_bits = 128;
                }
            }
            return Transcendence::Unknown(ev);
        }
        let log_alg = self.terms.iter().any(|(s, _)| s.is_log_alg());
        if !log_alg {
            return Transcendence::Certified;
        }
        if !self.alg.is_zero() {
            let mut ev = Evidence::new(UnknownReason::SchanuelConditional);
            if let Ok(b) = self.eval(128, &Bindings::new()) {
                ev.enclosure = Some(b);
                ev.precision_bits = 128;
            }
            return Transcendence::Unknown(ev);
        }
        // A nonzero linear form in logarithms of algebraic numbers is transcendental.
        match self.is_zero() {
            TriBool::False => Transcendence::Certified,
            TriBool::True => Transcendence::RefutedAlgebraic(AlgebraicNumber::zero()),
            TriBool::Unknown(ev) => Transcendence::Unknown(ev),
        }
    }

    /// Rigorous enclosure of the value.
    pub fn eval(&self, bits: u32, bindings: &Bindings) -> Result<ComplexBox> {
        if self.is_trivially_zero() {
            return Ok(ComplexBox::zero());
        }
        let coeff_bits = self
            .terms
            .iter()
            .map(|(_, c)| {
                let m = |q: &Rational| q.numer().bits() as i64 - q.denom().bits() as i64 + 1;
                m(&c.re).max(m(&c.im)).max(0) as u32
            })
            .max()
            .unwrap_or(0);
        let count_bits = 64 - (self.terms.len() as u64 + 1).leading_zeros();
        let wp = bits + coeff_bits + count_bits + 12;
        let mut acc = self.alg.refine(wp)?;
        for (s, c) in &self.terms {
            let v = s.eval(wp, bindings)?;
            let extra = v.re.mag().greater(&v.im.mag()).msb().max(0) as u32;
            let v = if extra > 0 { s.eval(wp + extra, bindings)? } else { v };
            acc = acc.add(&v.mul_gaussian(c, wp + extra + coeff_bits), wp + extra + coeff_bits);
        }
        Ok(acc)
    }

    /// Upper bound on `|value|` at the given precision.
    pub fn abs_upper(&self, bits: u32, bindings: &Bindings) -> Result<Dyadic> {
        Ok(self.eval(bits, bindings)?.abs(bits).hi().clone())
    }

    /// Symbols of the element that have no numeric value.
    pub fn unbound_symbols(&self, bindings: &Bindings) -> Vec<String> {
        self.terms
            .iter()
            .filter_map(|(s, _)| match s.kind() {
                SymbolKind::Abstract(n) if bindings.get(n).is_none() => Some(n.clone()),
                _ => None,
            })
            .collect()
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Element) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_element(self))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_element(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn lg(n: i64) -> Element {
        Element::log_rational(&rat(n, 1)).unwrap()
    }

    #[test]
    fn log_six_splits() {
        let six = lg(6);
        assert_eq!(six.terms().len(), 2);
        let two = Symbol::log_prime(2.into()).unwrap();
        assert!(six.coefficient(&two).is_one());
        let z = lg(2).add(&lg(3)).unwrap().sub(&six).unwrap();
        assert!(z.is_trivially_zero());
        assert!(z.is_zero().is_true());
    }

    #[test]
    fn exp_zero_folds() {
        let x = Element::make(
            AlgebraicNumber::zero(),
            vec![(Atom::Exp(AlgebraicNumber::zero()), GaussianRational::from_int(5))],
        )
        .unwrap();
        assert!(!x.has_symbols());
        assert_eq!(x.alg().as_rational(), Some(&rat(5, 1)));
        let y = Element::make(AlgebraicNumber::one(), vec![(Atom::Pi, GaussianRational::zero())]).unwrap();
        assert!(!y.has_symbols() && y.alg().is_one());
    }

    #[test]
    fn log_alg_relation_is_unknown() {
        let s2 = AlgebraicNumber::sqrt_rational(&rat(2, 1)).unwrap();
        let x = Element::log(s2)
            .unwrap()
            .scale(&GaussianRational::from_int(2))
            .unwrap()
            .sub(&lg(2))
            .unwrap();
        match x.is_zero_with(256) {
            TriBool::Unknown(ev) => {
                assert_eq!(ev.reason, UnknownReason::MultiplicativeRelationPossible);
                assert!(ev.enclosure.unwrap().contains_zero());
            }
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn transcendence_verdicts() {
        let e1 = Element::exp(AlgebraicNumber::from_int(1)).unwrap();
        let e2 = Element::exp(AlgebraicNumber::from_int(2)).unwrap();
        let x = e1
            .scale(&GaussianRational::from_int(2))
            .unwrap()
            .add(&e2.scale(&GaussianRational::from_int(3)).unwrap())
            .unwrap()
            .add(&Element::from_gaussian(GaussianRational::from_int(5)))
            .unwrap();
        assert!(matches!(x.transcendence(), Transcendence::Certified));
        let one = Element::from_gaussian(GaussianRational::one());
        assert!(matches!(one.transcendence(), Transcendence::RefutedAlgebraic(v) if v.is_one()));
        match e1.add(&Element::pi()).unwrap().transcendence() {
            Transcendence::Unknown(ev) => assert_eq!(ev.reason, UnknownReason::SchanuelConditional),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eval_identities() {
        let z = lg(2).add(&lg(3)).unwrap();
        let b = z.eval(200, &Bindings::new()).unwrap();
        let six = lg(6).eval(200, &Bindings::new()).unwrap();
        assert!(b.intersects(&six));
        assert!(b.width() <= Dyadic::pow2(-190));
        let e = Element::exp(AlgebraicNumber::one()).unwrap().eval(60, &Bindings::new()).unwrap();
        let (lo, hi) = (rat(271828182845904523, 100000000000000000), rat(271828182845904524, 100000000000000000));
        assert!(e.re.lo().to_rational() > lo && e.re.hi().to_rational() < hi);
        assert!(Element::zero().eval(10, &Bindings::new()).unwrap().is_point());
    }

    #[test]
    fn mixed_nonzero_is_refuted_numerically() {
        let x = Element::exp(AlgebraicNumber::one()).unwrap().sub(&Element::pi()).unwrap();
        assert!(x.is_zero().is_false());
    }
}
