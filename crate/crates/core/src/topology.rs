//! Topological type of a finitely generated group: trivial, `Z`, `Z x Z`, or
//! dense and homeomorphic to `Q`.
//!
//! A finitely generated subgroup of `R^2` is discrete iff its rank equals the
//! real dimension of its span; otherwise it is countable, dense in a line or
//! plane, and without isolated points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::element::{Element, Evidence, TriBool, UnknownReason};
use crate::error::{Error, Result};
use crate::group::{Context, FGGroup, Rank};
use crate::interval::{ComplexBox, Dyadic, Interval, Round};
use crate::rational::{GaussianRational, Rational};
use crate::smallelem::{small_element, SmallElement};
use crate::symbol::{Bindings, SymbolKind};

/// Precision ceiling for certificates.
const MAX_CERT_BITS: u32 = 4096;
/// Enumeration guard for [`min_norm`] cross-checks.
const MAX_ENUMERATION: u128 = 100_000_000;

#[derive(Clone, Debug)]
pub enum SpanDim {
    Dim(usize),
    Unknown(Evidence),
}

impl SpanDim {
    pub fn dim(&self) -> Option<usize> {
        match self {
            SpanDim::Dim(d) => Some(*d),
            SpanDim::Unknown(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum TopologyClass {
    Trivial,
    /// `G = Z * generator`; `min_norm` encloses `|generator|`.
    Z { generator: Element, min_norm: Option<Interval> },
    /// Reduced basis; `min_norm` encloses the shortest nonzero `|g|`.
    ZxZ { basis: [Element; 2], min_norm: Option<Interval> },
    QLike { witness: Option<SmallElement> },
    Unknown(Evidence),
}

impl TopologyClass {
    pub fn tag(&self) -> &'static str {
        match self {
            TopologyClass::Trivial => "Trivial",
            TopologyClass::Z { .. } => "Z",
            TopologyClass::ZxZ { .. } => "ZxZ",
            TopologyClass::QLike { .. } => "QLike",
            TopologyClass::Unknown(_) => "Unknown",
        }
    }

    pub fn min_norm(&self) -> Option<&Interval> {
        match self {
            TopologyClass::Z { min_norm, .. } | TopologyClass::ZxZ { min_norm, .. } => min_norm.as_ref(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: TopologyClass,
    pub rank: Rank,
    pub span: SpanDim,
}

/// `x` lies on the real line through `c e^{iθ}`.
struct Direction {
    c: AlgebraicNumber,
    theta: AlgebraicNumber,
}

/// Imaginary part of the exponent for `exp` symbols, zero for real symbols.
fn phase(kind: &SymbolKind) -> Result<AlgebraicNumber> {
    match kind {
        SymbolKind::Exp(a) if !a.im_is_zero() => {
            let half = Rational::new(BigInt::from(-1), BigInt::from(2));
            a.sub(&a.conj())?.scale(&GaussianRational::new(Rational::zero(), half))
        }
        _ => Ok(AlgebraicNumber::zero()),
    }
}

/// Exact direction of `x` when every part of it points the same way.
///
/// Real symbols (abstract symbols included, which are real by declaration)
/// contribute phase 0; `e^α` contributes `Im α`.
fn direction(x: &Element) -> Result<Option<Direction>> {
    let terms = x.terms();
    let Some((first, c0)) = terms.first() else {
        return Ok(Some(Direction {
            c: x.alg().clone(),
            theta: AlgebraicNumber::zero(),
        }));
    };
    let theta = phase(first.kind())?;
    for (s, _) in &terms[1..] {
        if !phase(s.kind())?.equals(&theta) {
            return Ok(None);
        }
    }
    if !x.alg().is_zero() && !theta.is_zero() {
        return Ok(None);
    }
    for (_, c) in terms {
        if !c.div(c0).expect("nonzero coefficient").is_real() {
            return Ok(None);
        }
    }
    let c = AlgebraicNumber::from_gaussian(c0.clone());
    if !x.alg().is_zero() && !x.alg().div(&c)?.im_is_zero() {
        return Ok(None);
    }
    Ok(Some(Direction { c, theta }))
}

/// Whether two nonzero elements are real multiples of each other.
///
/// Exact when both have a direction: a nonzero algebraic multiple of
/// `e^{iψ}` with `ψ` algebraic and nonzero is never real, since `e^{2iψ}` is
/// transcendental. Otherwise decided numerically when the cross product
/// separates from zero.
pub fn collinear(x: &Element, y: &Element, bindings: &Bindings) -> TriBool {
    if let (Ok(Some(dx)), Ok(Some(dy))) = (direction(x), direction(y)) {
        if !dx.theta.equals(&dy.theta) {
            return TriBool::False;
        }
        if let Ok(w) = dx.c.mul(&dy.c.conj()) {
            return if w.im_is_zero() { TriBool::True } else { TriBool::False };
        }
    }
    let mut ev = Evidence::new(UnknownReason::SchanuelConditional);
    for bits in [64u32, 256, 1024] {
        let (Ok(a), Ok(b)) = (x.eval(bits, bindings), y.eval(bits, bindings)) else {
            break;
        };
        let cross = a.im.mul(&b.re, bits).sub(&a.re.mul(&b.im, bits), bits);
        if !cross.contains_zero() {
            return TriBool::False;
        }
        ev.enclosure = Some(ComplexBox::real(cross));
        ev.precision_bits = bits;
    }
    TriBool::Unknown(ev)
}

/// Real dimension of the span of the generator values.
pub fn span_dim(g: &FGGroup, bindings: &Bindings) -> SpanDim {
    let mut nonzero = Vec::new();
    let mut unsure = Vec::new();
    let mut open: Option<Evidence> = None;
    for x in g.gens() {
        match x.is_zero() {
            TriBool::False => nonzero.push(x),
            TriBool::True => {}
            TriBool::Unknown(ev) => {
                unsure.push(x);
                open = Some(ev);
            }
        }
    }
    let Some((r, rest)) = nonzero.split_first() else {
        return match open {
            Some(ev) => SpanDim::Unknown(ev),
            None => SpanDim::Dim(0),
        };
    };
    let mut open_pair = None;
    for y in rest {
        match collinear(r, y, bindings) {
            TriBool::False => return SpanDim::Dim(2),
            TriBool::True => {}
            TriBool::Unknown(ev) => open_pair = Some(ev),
        }
    }
    // A generator that may be zero only matters if it could leave the line.
    let mut open = open_pair;
    for z in unsure {
        match collinear(r, z, bindings) {
            TriBool::True => {}
            TriBool::False | TriBool::Unknown(_) => {
                open.get_or_insert_with(|| Evidence::new(UnknownReason::SchanuelConditional));
            }
        }
    }
    match open {
        Some(ev) => SpanDim::Unknown(ev),
        None => SpanDim::Dim(1),
    }
}

/// `x = c u` for a Gaussian rational `c`.
fn gaussian_multiple(x: &Element, u: &Element) -> Option<GaussianRational> {
    let c = match u.terms().first() {
        Some((s, cu)) => x.coefficient(s).div(cu)?,
        None => {
            if x.has_symbols() {
                return None;
            }
            x.alg().div(u.alg()).ok()?.as_gaussian()?.clone()
        }
    };
    u.scale(&c).ok()?.equals(x).then_some(c)
}

/// Lagrange reduction of the lattice `Z a + Z b` in `Q(i)`; returns the
/// shortest vector.
fn shortest_gaussian(mut a: GaussianRational, mut b: GaussianRational) -> GaussianRational {
    loop {
        if b.norm_sqr() < a.norm_sqr() {
            std::mem::swap(&mut a, &mut b);
        }
        if b.is_zero() {
            return a;
        }
        let t = (&b * &a.conj()).re / a.norm_sqr();
        // |t| <= 1/2 means reduced; stopping there also breaks exact ties.
        if (&t + &t).abs() <= Rational::one() {
            return a;
        }
        b = &b - &a.scale(&t.round());
    }
}

fn abs_enclosure(x: &Element, prec: u32, bindings: &Bindings) -> Result<Interval> {
    Ok(x.eval(prec, bindings)?.abs(prec))
}

/// Interval Gauss-Lagrange on exact elements, followed by a bounded
/// enumeration that certifies the minimum even when norms tie exactly.
///
/// With Gram entries `N1, N2, D`, every `m b1 + n b2` has squared length at
/// least `(m^2 + n^2) Δ / T` where `Δ = N1 N2 - D^2` and `T = N1 + N2`, so only
/// coefficients inside a small disc can beat the shorter basis vector.
fn lagrange(b1: &Element, b2: &Element, prec: u32, bindings: &Bindings) -> Result<([Element; 2], Interval)> {
    let (mut b1, mut b2) = (b1.clone(), b2.clone());
    let mut prec = prec;
    while prec <= MAX_CERT_BITS {
        for _ in 0..1000 {
            let (v1, v2) = (b1.eval(prec, bindings)?, b2.eval(prec, bindings)?);
            let (n1, n2) = (v1.norm_sqr(prec), v2.norm_sqr(prec));
            if n2.mid() < n1.mid() {
                std::mem::swap(&mut b1, &mut b2);
                continue;
            }
            let dot = v2.re.mul(&v1.re, prec).add(&v2.im.mul(&v1.im, prec), prec);
            let n1m = n1.mid().to_rational();
            if n1m.is_zero() {
                break;
            }
            let mu = (dot.mid().to_rational() / n1m).round().to_integer();
            if mu.is_zero() {
                break;
            }
            b2 = b2.sub(&b1.scale_int(&mu))?;
        }
        let (v1, v2) = (b1.eval(prec, bindings)?, b2.eval(prec, bindings)?);
        let (n1, n2) = (v1.norm_sqr(prec), v2.norm_sqr(prec));
        let dot = v2.re.mul(&v1.re, prec).add(&v2.im.mul(&v1.im, prec), prec);
        let det = n1.mul(&n2, prec).sub(&dot.sqr(prec), prec);
        if !det.lo().is_positive() {
            prec *= 2;
            continue;
        }
        let trace = n1.add(&n2, prec);
        let best = n1.hi().lesser(n2.hi());
        let radius_sqr = best.mul(trace.hi()).div(det.lo(), prec, Round::Up).to_rational();
        let r = radius_sqr.floor().to_integer().sqrt();
        if r > BigInt::from(1000) {
            prec *= 2;
            continue;
        }
        let r = i64::try_from(r).expect("bounded radius");
        let (mut lo, mut hi): (Option<Dyadic>, Option<Dyadic>) = (None, None);
        for m in -r..=r {
            for n in -r..=r {
                if (m == 0 && n == 0) || Rational::from_integer(BigInt::from(m * m + n * n)) > radius_sqr {
                    continue;
                }
                let v = v1
                    .mul_int(&BigInt::from(m), prec)
                    .add(&v2.mul_int(&BigInt::from(n), prec), prec);
                let a = v.abs(prec);
                lo = Some(lo.map_or(a.lo().clone(), |x| x.lesser(a.lo())));
                hi = Some(hi.map_or(a.hi().clone(), |x| x.lesser(a.hi())));
            }
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(Error::Internal("empty certificate enumeration".into()));
        };
        return Ok(([b1, b2], Interval::new(lo, hi)));
    }
    Err(Error::PrecisionExhausted(format!("lattice reduction undecided at {MAX_CERT_BITS} bits")))
}

fn unbound(e: &Error) -> bool {
    matches!(e, Error::UnboundSymbol(_))
}

fn z_certificate(d: &Element, ctx: &Context) -> Result<Option<Interval>> {
    match abs_enclosure(d, ctx.precision, &ctx.bindings) {
        Ok(iv) => Ok(Some(iv)),
        Err(e) if unbound(&e) => Ok(None),
        Err(e) => Err(e),
    }
}

fn zxz_certificate(b1: &Element, b2: &Element, ctx: &Context) -> Result<([Element; 2], Option<Interval>)> {
    if let Some(c) = gaussian_multiple(b2, b1) {
        // Z b1 + Z c b1 = b1 (Z + Z c): reduce exactly in Q(i).
        let s = shortest_gaussian(GaussianRational::one(), c);
        let short = b1.scale(&s)?;
        let other = if short.equals(b1) { b2.clone() } else { b1.clone() };
        let m = match abs_enclosure(&short, ctx.precision, &ctx.bindings) {
            Ok(iv) => Some(iv),
            Err(e) if unbound(&e) => None,
            Err(e) => return Err(e),
        };
        return Ok(([short, other], m));
    }
    match lagrange(b1, b2, ctx.precision, &ctx.bindings) {
        Ok((basis, m)) => Ok((basis, Some(m))),
        Err(e) if unbound(&e) => Ok(([b1.clone(), b2.clone()], None)),
        Err(e) => Err(e),
    }
}

/// Classifies `G` from its rank `r` and span dimension `d`: discrete iff
/// `r = d`, dense otherwise.
pub fn classify(g: &FGGroup, ctx: &Context) -> Result<Classification> {
    let rank = g.rank_q();
    let span = span_dim(g, &ctx.bindings);
    let (lo, hi) = (rank.lower(), rank.upper());
    let (d_lo, d_hi) = match span.dim() {
        Some(d) => (d, d),
        None => (lo.min(1), 2),
    };
    let class = if hi == 0 {
        TopologyClass::Trivial
    } else if hi <= d_lo {
        // span <= rank always, so both equal hi here.
        match g.formal_basis() {
            Some(b) if b.len() == 1 && hi == 1 => TopologyClass::Z {
                min_norm: z_certificate(&b[0], ctx)?,
                generator: b[0].clone(),
            },
            Some(b) if b.len() == 2 && hi == 2 => {
                let (basis, min_norm) = zxz_certificate(&b[0], &b[1], ctx)?;
                TopologyClass::ZxZ { basis, min_norm }
            }
            _ => TopologyClass::Unknown(Evidence::new(UnknownReason::PrecisionLimit)),
        }
    } else if lo > d_hi {
        let witness = match small_element(g, &ctx.eps, ctx.height_cap, &ctx.bindings) {
            Ok(w) => Some(w),
            Err(Error::SearchExhausted(_)) | Err(Error::UnboundSymbol(_)) => None,
            Err(e) => return Err(e),
        };
        TopologyClass::QLike { witness }
    } else {
        let mut ev = match &span {
            SpanDim::Unknown(ev) => ev.clone(),
            SpanDim::Dim(_) => Evidence::new(UnknownReason::SchanuelConditional),
        };
        if let Rank::AtLeast { height, .. } = &rank {
            ev.no_relation_height = Some(height.clone());
        }
        TopologyClass::Unknown(ev)
    };
    Ok(Classification { class, rank, span })
}

/// Enclosure of `min{|g| : g in G, g != 0}` for discrete `G`.
///
/// The certificate is cross-checked against every combination of the
/// generators with coefficients at most `bound`.
pub fn min_norm(g: &FGGroup, bound: u64, ctx: &Context) -> Result<Interval> {
    let cls = classify(g, ctx)?;
    let iv = match &cls.class {
        TopologyClass::Z { min_norm, .. } | TopologyClass::ZxZ { min_norm, .. } => match min_norm {
            Some(iv) => iv.clone(),
            None => {
                let names: Vec<String> = g.gens().iter().flat_map(|x| x.unbound_symbols(&ctx.bindings)).collect();
                return Err(Error::UnboundSymbol(names.join(", ")));
            }
        },
        _ => return Err(Error::NotDiscrete),
    };
    cross_check(g, bound, &iv, ctx)?;
    Ok(iv)
}

fn cross_check(g: &FGGroup, bound: u64, iv: &Interval, ctx: &Context) -> Result<()> {
    let k = g.len();
    let side = 2 * bound as u128 + 1;
    let total = side.checked_pow(k as u32).and_then(|n| n.checked_mul(k as u128));
    match total {
        Some(n) if n <= MAX_ENUMERATION => {}
        _ => return Err(Error::BudgetExceeded(total.unwrap_or(u128::MAX))),
    }
    let prec = ctx.precision;
    let boxes: Vec<ComplexBox> = g.gens().iter().map(|x| x.eval(prec, &ctx.bindings)).collect::<Result<_>>()?;
    let b = bound as i64;
    let mut m = vec![-b; k];
    loop {
        if m.iter().any(|&x| x != 0) {
            let mut acc = ComplexBox::zero();
            for (x, &c) in boxes.iter().zip(&m) {
                if c != 0 {
                    acc = acc.add(&x.mul_int(&BigInt::from(c), prec), prec);
                }
            }
            let a = acc.abs(prec);
            if a.hi() < iv.lo() {
                let mb: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
                if !Element::combination(g.gens(), &mb)?.is_trivially_zero() {
                    return Err(Error::Internal(format!("element {m:?} is shorter than the certified minimum")));
                }
            }
        }
        let mut i = 0;
        while i < k {
            if m[i] < b {
                m[i] += 1;
                break;
            }
            m[i] = -b;
            i += 1;
        }
        if i == k {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_generators;
    use crate::symbol::Binding;

    fn group(src: &str) -> FGGroup {
        FGGroup::new(parse_generators(src).unwrap()).unwrap()
    }

    fn tag(src: &str) -> &'static str {
        classify(&group(src), &Context::default()).unwrap().class.tag()
    }

    #[test]
    fn span_examples() {
        let b = Bindings::new();
        assert_eq!(span_dim(&group("log(2), log(3)"), &b).dim(), Some(1));
        assert_eq!(span_dim(&FGGroup::pair_group("T"), &b).dim(), Some(2));
        assert_eq!(span_dim(&group("exp(i), exp(2*i)"), &b).dim(), Some(2));
        assert_eq!(span_dim(&group("exp(1+i), 3*exp(2+i)"), &b).dim(), Some(1));
        assert_eq!(span_dim(&group("exp(1), i*pi"), &b).dim(), Some(2));
        assert_eq!(span_dim(&FGGroup::trivial(), &b).dim(), Some(0));
    }

    #[test]
    fn trichotomy_examples() {
        assert_eq!(tag("exp(1)"), "Z");
        assert_eq!(tag("T, i*T"), "ZxZ");
        assert_eq!(tag("log(2), log(3)"), "QLike");
        assert_eq!(tag("exp(1), exp(2), exp(3)"), "QLike");
        assert_eq!(tag("exp(i), exp(2*i)"), "ZxZ");
        assert_eq!(tag(""), "Trivial");
        assert_eq!(tag("exp(1), pi"), "Unknown");
        // Rank 3 would need e/pi irrational, which is open.
        assert_eq!(tag("exp(1), pi, i*pi"), "Unknown");
        assert_eq!(tag("exp(1), exp(2), exp(3), pi"), "QLike");
    }

    #[test]
    fn qlike_carries_witness() {
        let c = classify(&group("log(2), log(3)"), &Context::default()).unwrap();
        match c.class {
            TopologyClass::QLike { witness: Some(w) } => {
                assert_eq!(w.coeffs, vec![BigInt::from(-19), BigInt::from(12)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pair_min_norm_is_binding() {
        let ctx = Context {
            bindings: Bindings::new().with("T", Binding::E),
            ..Context::default()
        };
        let iv = min_norm(&FGGroup::pair_group("T"), 20, &ctx).unwrap();
        let e = crate::interval::e_const(300);
        assert!(iv.intersects(&e));
        assert!(iv.width().to_f64() < 1e-60);
        let two_t = group("2*T");
        let iv = min_norm(&two_t, 50, &ctx).unwrap();
        assert!((iv.mid().to_f64() - 2.0 * std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn min_norm_rejects_dense_groups() {
        assert_eq!(min_norm(&group("log(2), log(3)"), 5, &Context::default()).unwrap_err(), Error::NotDiscrete);
    }

    #[test]
    fn exp_lattice_min_norm_matches_generators() {
        let iv = min_norm(&group("exp(i), exp(2*i)"), 30, &Context::default()).unwrap();
        // The generators have length 1 one radian apart, so their difference
        // has length 2 sin(1/2) < 1.
        let expect = 2.0 * 0.5f64.sin();
        assert!((iv.mid().to_f64() - expect).abs() < 1e-12);
    }

    #[test]
    fn skewed_gaussian_lattice_reduces() {
        let ctx = Context {
            bindings: Bindings::new().with("T", Binding::Pi),
            ..Context::default()
        };
        let c = classify(&group("T, 7*T + i*T"), &ctx).unwrap();
        match c.class {
            TopologyClass::ZxZ { basis, min_norm } => {
                assert!(basis.iter().any(|b| b.terms()[0].1.norm_sqr().is_integer()));
                assert!((min_norm.unwrap().mid().to_f64() - std::f64::consts::PI).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_reduction_stops_on_half_ties() {
        // The projection coefficient hits 1/2 exactly during reduction.
        let c = classify(&group("-4/9*pi, 7/5*i*pi - 6*pi"), &Context::default()).unwrap();
        let iv = c.class.min_norm().unwrap();
        assert!((iv.mid().to_f64() - 4.0 * std::f64::consts::PI / 9.0).abs() < 1e-12);
    }
}
