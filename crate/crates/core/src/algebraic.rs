//! Exact complex algebraic numbers.
//!
//! A number is either an explicit Gaussian rational or a root of a squarefree
//! primitive integer polynomial together with an *isolating region*: a box in
//! which the complex Krawczyk operator certifies that the polynomial has
//! exactly one root. Refinement iterates the same operator, so it can never
//! leave the region.
//!
//! Equality and zero tests are decided exactly from the certified regions.
//! Squarefree annihilators are used instead of minimal polynomials, so no
//! factorization over the rationals is needed.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{ComplexBox, Dyadic, Interval, Round};
use crate::poly::{product_poly, sum_poly, IntPoly};
use crate::rational::{GaussianRational, Rational};

/// Refinement budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest precision (bits) any refinement may reach.
    pub max_bits: u32,
    /// Largest number of precision doublings or contraction rounds.
    pub max_rounds: u32,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_bits: 4096,
            max_rounds: 64,
        }
    }
}

struct RootData {
    poly: IntPoly,
    dpoly: IntPoly,
    region: ComplexBox,
    best: Mutex<ComplexBox>,
}

#[derive(Clone)]
enum Repr {
    Exact(GaussianRational),
    Root(Arc<RootData>),
}

/// An exact complex algebraic number.
#[derive(Clone)]
pub struct AlgebraicNumber {
    repr: Repr,
}

/// Complex Krawczyk operator for `p` over `x`.
fn krawczyk(p: &IntPoly, dp: &IntPoly, x: &ComplexBox, prec: u32) -> Option<ComplexBox> {
    let y = x.mid_box();
    let fy = p.eval_box(&y, prec);
    let dfy = dp.eval_box(&y, prec);
    let (yr, yi) = dfy.approx_recip(prec)?;
    let inv = ComplexBox::point(yr, yi);
    let dfx = dp.eval_box(x, prec);
    let one_minus = ComplexBox::one().sub(&inv.mul(&dfx, prec), prec);
    let k = y
        .sub(&inv.mul(&fy, prec), prec)
        .add(&one_minus.mul(&x.sub(&y, prec), prec), prec);
    Some(k)
}

/// `p` has exactly one root in `x` when this returns true.
fn certifies(p: &IntPoly, dp: &IntPoly, x: &ComplexBox, prec: u32) -> bool {
    if x.re.is_point() || x.im.is_point() {
        return false;
    }
    krawczyk(p, dp, x, prec).is_some_and(|k| k.is_interior(x))
}

fn width_log2(b: &ComplexBox) -> i64 {
    let w = b.width();
    if w.is_zero() {
        i64::MIN
    } else {
        w.msb()
    }
}

fn magnitude_log2(b: &ComplexBox) -> i64 {
    b.re.mag().greater(&b.im.mag()).msb().max(0)
}

/// Working precision for boxes of width about `2^-bits` around a point of size `2^mag`.
fn working_prec(bits: i64, mag: i64) -> u32 {
    (bits.max(0) + mag.max(0) + 48).clamp(64, 1 << 20) as u32
}

/// Try to certify a box around an enclosure of a root.
fn isolate_enclosure(p: &IntPoly, dp: &IntPoly, e: &ComplexBox, prec: u32) -> Option<ComplexBox> {
    let floor = Dyadic::pow2(magnitude_log2(e) - prec as i64 / 2);
    let r = e.width().greater(&floor);
    let x = e.inflate(&r);
    let wp = prec.max(working_prec(-width_log2(&x), magnitude_log2(&x)));
    certifies(p, dp, &x, wp).then_some(x)
}

fn exact_box(g: &GaussianRational, bits: u32) -> ComplexBox {
    let mag = |q: &Rational| -> u32 {
        let n = q.numer().bits() as i64 - q.denom().bits() as i64;
        n.max(0) as u32
    };
    let prec = bits + mag(&g.re).max(mag(&g.im)) + 4;
    ComplexBox::from_gaussian(g, prec)
}

/// Nearest multiple of `1/den` to the dyadic `x`.
fn nearest_fraction(x: &Dyadic, den: &BigInt) -> Rational {
    let scaled = x.mul_int(den);
    Rational::new(scaled.round_nearest(), den.clone())
}

impl RootData {
    fn new(poly: IntPoly, region: ComplexBox) -> RootData {
        let dpoly = poly.derivative();
        RootData {
            poly,
            dpoly,
            best: Mutex::new(region.clone()),
            region,
        }
    }

    fn best(&self) -> ComplexBox {
        self.best.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Contract toward a box of width at most `2^-bits`.
    fn refine(&self, bits: i64, limits: &Limits) -> Result<ComplexBox> {
        let mut x = self.best();
        let target = -bits;
        if width_log2(&x) <= target {
            return Ok(x);
        }
        if bits > limits.max_bits as i64 + 64 {
            return Err(Error::PrecisionExhausted(format!(
                "refinement to {bits} bits exceeds the {} bit budget",
                limits.max_bits
            )));
        }
        let mag = magnitude_log2(&x);
        let mut prec = working_prec(bits, mag);
        let mut rounds = 0;
        while width_log2(&x) > target {
            rounds += 1;
            if rounds > limits.max_rounds * 4 {
                return Err(Error::PrecisionExhausted(format!(
                    "root of {} did not contract to 2^-{bits}",
                    self.poly
                )));
            }
            let before = x.width();
            match krawczyk(&self.poly, &self.dpoly, &x, prec).and_then(|k| k.intersect(&x)) {
                Some(n) if n.width().shl(1) <= before => x = n,
                Some(n) => {
                    x = n;
                    prec = prec.saturating_mul(2).min(limits.max_bits * 4 + 256);
                }
                None => {
                    prec = prec.saturating_mul(2).min(limits.max_bits * 4 + 256);
                }
            }
        }
        let mut guard = self.best.lock().unwrap_or_else(|e| e.into_inner());
        if x.width() < guard.width() {
            *guard = x.clone();
        }
        Ok(x)
    }
}

impl AlgebraicNumber {
    pub fn zero() -> AlgebraicNumber {
        AlgebraicNumber::from_gaussian(GaussianRational::zero())
    }

    pub fn one() -> AlgebraicNumber {
        AlgebraicNumber::from_gaussian(GaussianRational::one())
    }

    pub fn i() -> AlgebraicNumber {
        AlgebraicNumber::from_gaussian(GaussianRational::i())
    }

    pub fn from_int(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_gaussian(GaussianRational::from_int(n))
    }

    pub fn from_rational(q: Rational) -> AlgebraicNumber {
        AlgebraicNumber::from_gaussian(GaussianRational::real(q))
    }

    pub fn from_gaussian(g: GaussianRational) -> AlgebraicNumber {
        AlgebraicNumber {
            repr: Repr::Exact(g),
        }
    }

    /// Principal square root of a rational.
    pub fn sqrt_rational(q: &Rational) -> Result<AlgebraicNumber> {
        if q.is_zero() {
            return Ok(AlgebraicNumber::zero());
        }
        let a = q.abs();
        let (n, d) = (a.numer(), a.denom());
        let (sn, sd) = (n.sqrt(), d.sqrt());
        if &(&sn * &sn) == n && &(&sd * &sd) == d {
            let r = Rational::new(sn, sd);
            return Ok(if q.is_negative() {
                AlgebraicNumber::from_gaussian(GaussianRational::new(Rational::zero(), r))
            } else {
                AlgebraicNumber::from_rational(r)
            });
        }
        let bound = a.ceil() + Rational::one();
        let zero = Rational::zero();
        if q.is_negative() {
            // d x^2 + n, root on the positive imaginary axis
            let poly = IntPoly::new(vec![n.clone(), BigInt::zero(), d.clone()]);
            AlgebraicNumber::root_in(&poly, [&zero, &zero, &zero, &bound])
        } else {
            let poly = IntPoly::new(vec![-n.clone(), BigInt::zero(), d.clone()]);
            AlgebraicNumber::root_in(&poly, [&zero, &bound, &zero, &zero])
        }
    }

    /// The unique root of `poly` lying in the rectangle `[re_lo, re_hi] x [im_lo, im_hi]`.
    ///
    /// Roots are counted when their certified enclosures keep meeting the closed
    /// rectangle as precision grows; exactly one must remain.
    pub fn root_in(poly: &IntPoly, rect: [&Rational; 4]) -> Result<AlgebraicNumber> {
        AlgebraicNumber::root_in_with(poly, rect, &Limits::default())
    }

    pub fn root_in_with(poly: &IntPoly, rect: [&Rational; 4], limits: &Limits) -> Result<AlgebraicNumber> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if rect[0] > rect[1] || rect[2] > rect[3] {
            return Err(Error::NotIsolating("box corners out of order".into()));
        }
        let p = poly.squarefree_part();
        if p.degree() == 0 {
            return Err(Error::NotIsolating("constant polynomial has no roots".into()));
        }
        let hull_prec = 128;
        let user = ComplexBox::new(
            Interval::new(
                Dyadic::from_rational(rect[0], hull_prec, Round::Down),
                Dyadic::from_rational(rect[1], hull_prec, Round::Up),
            ),
            Interval::new(
                Dyadic::from_rational(rect[2], hull_prec, Round::Down),
                Dyadic::from_rational(rect[3], hull_prec, Round::Up),
            ),
        );
        let roots = isolate_roots(&p, &user, limits)?;
        let mut bits = 32i64;
        loop {
            let mut hits = Vec::new();
            for r in &roots {
                if r.refine(bits, limits)?.intersects(&user) {
                    hits.push(r);
                }
            }
            match hits.len() {
                0 => return Err(Error::NotIsolating(format!("no root of {p} in the box"))),
                1 => {
                    let data = hits[0];
                    let n = AlgebraicNumber {
                        repr: Repr::Root(Arc::new(RootData {
                            poly: data.poly.clone(),
                            dpoly: data.dpoly.clone(),
                            region: data.region.clone(),
                            best: Mutex::new(data.best()),
                        })),
                    };
                    return n.normalized(limits);
                }
                _ => {}
            }
            bits *= 2;
            if bits > limits.max_bits as i64 {
                return Err(Error::NotIsolating(format!(
                    "{} roots of {p} remain in the box",
                    hits.len()
                )));
            }
        }
    }

    /// Every root of `poly`, each with its own isolating region.
    pub fn roots_of(poly: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = poly.squarefree_part();
        if p.degree() == 0 {
            return Ok(vec![]);
        }
        let b = p.cauchy_bound();
        let bd = Dyadic::from_rational(&b, 64, Round::Up);
        let r = Interval::new(bd.neg(), bd);
        let limits = Limits::default();
        let roots = isolate_roots(&p, &ComplexBox::new(r.clone(), r), &limits)?;
        if roots.len() != p.degree() {
            return Err(Error::Internal(format!(
                "found {} roots of a degree {} polynomial",
                roots.len(),
                p.degree()
            )));
        }
        roots
            .into_iter()
            .map(|d| AlgebraicNumber {
                repr: Repr::Root(Arc::new(d)),
            }
            .normalized(&limits))
            .collect()
    }

    /// Replace a root that is secretly a Gaussian rational by its exact form.
    ///
    /// A Gaussian rational root of an integer polynomial with leading coefficient
    /// `L` has both parts in `(1/2L) Z`, so rounding a narrow enclosure to that grid
    /// yields the only possible candidate.
    fn normalized(self, limits: &Limits) -> Result<AlgebraicNumber> {
        let Repr::Root(data) = &self.repr else {
            return Ok(self);
        };
        let p = &data.poly;
        if p.degree() == 1 {
            let q = Rational::new(-p.coeff(0), p.coeff(1));
            return Ok(AlgebraicNumber::from_rational(q));
        }
        let den = p.lc().abs() * BigInt::from(2);
        let bits = den.bits() as i64 + 4;
        let x = data.refine(bits, limits)?;
        let re = nearest_fraction(&x.re.mid(), &den);
        let im = if x.im.contains_zero() {
            Rational::zero()
        } else {
            nearest_fraction(&x.im.mid(), &den)
        };
        let cand = GaussianRational::new(re, im);
        if data.region.contains_gaussian(&cand) && p.eval_gaussian(&cand).is_zero() {
            return Ok(AlgebraicNumber::from_gaussian(cand));
        }
        Ok(self)
    }

    fn from_certified(poly: IntPoly, region: ComplexBox, limits: &Limits) -> Result<AlgebraicNumber> {
        AlgebraicNumber {
            repr: Repr::Root(Arc::new(RootData::new(poly, region))),
        }
        .normalized(limits)
    }

    pub fn as_gaussian(&self) -> Option<&GaussianRational> {
        match &self.repr {
            Repr::Exact(g) => Some(g),
            Repr::Root(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.as_gaussian().filter(|g| g.is_real()).map(|g| &g.re)
    }

    /// Squarefree annihilating polynomial (primitive, positive leading coefficient).
    pub fn poly(&self) -> IntPoly {
        match &self.repr {
            Repr::Exact(g) => IntPoly::new(g.annihilator()).primitive(),
            Repr::Root(d) => d.poly.clone(),
        }
    }

    /// The isolating region; a point box for Gaussian rationals with dyadic parts.
    pub fn region(&self) -> ComplexBox {
        match &self.repr {
            Repr::Exact(g) => exact_box(g, 64),
            Repr::Root(d) => d.region.clone(),
        }
    }

    pub fn degree(&self) -> usize {
        self.poly().degree()
    }

    /// Enclosure of width at most `2^-bits`.
    pub fn refine(&self, bits: u32) -> Result<ComplexBox> {
        self.refine_with(bits, &Limits::default())
    }

    pub fn refine_with(&self, bits: u32, limits: &Limits) -> Result<ComplexBox> {
        match &self.repr {
            Repr::Exact(g) => Ok(exact_box(g, bits)),
            Repr::Root(d) => d.refine(bits as i64, limits),
        }
    }

    /// Enclosure suitable for interval evaluation at `prec` bits.
    pub fn enclosure(&self, prec: u32) -> ComplexBox {
        self.refine(prec)
            .expect("refinement within the default budget")
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(g) => g.is_zero(),
            // The region holds exactly one root; if 0 is a root inside it, that root is 0.
            Repr::Root(d) => d.poly.coeff(0).is_zero() && d.region.contains_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_gaussian().is_some_and(|g| g.is_one())
    }

    /// Decides `Im(self) = 0`.
    ///
    /// For a root of a real polynomial the conjugate is also a root, so a
    /// conjugation-symmetric box certified to hold a single root proves realness.
    pub fn im_is_zero(&self) -> bool {
        let data = match &self.repr {
            Repr::Exact(g) => return g.im.is_zero(),
            Repr::Root(d) => d,
        };
        let limits = Limits {
            max_bits: 1 << 16,
            max_rounds: 256,
        };
        let mut bits = 32i64;
        loop {
            let x = data
                .refine(bits, &limits)
                .expect("realness decision within budget");
            if !x.im.contains_zero() {
                return false;
            }
            let m = x.im.mag().add(&x.width());
            let sym = ComplexBox::new(x.re.inflate(&x.width()), Interval::symmetric(m));
            let prec = working_prec(bits + 8, magnitude_log2(&sym));
            if certifies(&data.poly, &data.dpoly, &sym, prec) {
                return true;
            }
            bits *= 2;
        }
    }

    pub fn is_real(&self) -> bool {
        self.im_is_zero()
    }

    /// Exact equality.
    pub fn equals(&self, other: &AlgebraicNumber) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => a == b,
            (Repr::Exact(g), Repr::Root(d)) | (Repr::Root(d), Repr::Exact(g)) => {
                d.region.contains_gaussian(g) && d.poly.eval_gaussian(g).is_zero()
            }
            (Repr::Root(a), Repr::Root(b)) => {
                if Arc::ptr_eq(a, b) {
                    return true;
                }
                roots_equal(a, b)
            }
        }
    }

    pub fn neg(&self) -> AlgebraicNumber {
        match &self.repr {
            Repr::Exact(g) => AlgebraicNumber::from_gaussian(-g),
            Repr::Root(d) => AlgebraicNumber {
                repr: Repr::Root(Arc::new(RootData {
                    poly: d.poly.reflect().primitive(),
                    dpoly: d.poly.reflect().primitive().derivative(),
                    region: d.region.neg(),
                    best: Mutex::new(d.best().neg()),
                })),
            },
        }
    }

    pub fn conj(&self) -> AlgebraicNumber {
        match &self.repr {
            Repr::Exact(g) => AlgebraicNumber::from_gaussian(g.conj()),
            Repr::Root(d) => AlgebraicNumber {
                repr: Repr::Root(Arc::new(RootData {
                    poly: d.poly.clone(),
                    dpoly: d.dpoly.clone(),
                    region: d.region.conj(),
                    best: Mutex::new(d.best().conj()),
                })),
            },
        }
    }

    pub fn add(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.add_with(other, &Limits::default())
    }

    pub fn add_with(&self, other: &AlgebraicNumber, limits: &Limits) -> Result<AlgebraicNumber> {
        if let (Some(a), Some(b)) = (self.as_gaussian(), other.as_gaussian()) {
            return Ok(AlgebraicNumber::from_gaussian(a + b));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let poly = match (self.as_rational(), other.as_rational()) {
            (Some(q), None) => other.poly().shift_roots(q),
            (None, Some(q)) => self.poly().shift_roots(q),
            _ => sum_poly(&self.poly(), &other.poly())?,
        };
        combine(self, other, poly, limits, |a, b, p| a.add(b, p))
    }

    pub fn sub(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.mul_with(other, &Limits::default())
    }

    pub fn mul_with(&self, other: &AlgebraicNumber, limits: &Limits) -> Result<AlgebraicNumber> {
        if let (Some(a), Some(b)) = (self.as_gaussian(), other.as_gaussian()) {
            return Ok(AlgebraicNumber::from_gaussian(a * b));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(AlgebraicNumber::zero());
        }
        if self.is_one() {
            return Ok(other.clone());
        }
        if other.is_one() {
            return Ok(self.clone());
        }
        let poly = match (self.as_rational(), other.as_rational()) {
            (Some(q), None) => other.poly().scale_roots(q),
            (None, Some(q)) => self.poly().scale_roots(q),
            _ => product_poly(&self.poly(), &other.poly())?,
        };
        combine(self, other, poly, limits, |a, b, p| a.mul(b, p))
    }

    /// Multiplicative inverse; `DomainError` for zero.
    pub fn recip(&self) -> Result<AlgebraicNumber> {
        if self.is_zero() {
            return Err(Error::DomainError("reciprocal of zero".into()));
        }
        if let Some(g) = self.as_gaussian() {
            return Ok(AlgebraicNumber::from_gaussian(g.inv().expect("nonzero")));
        }
        let mut rev = self.poly().coeffs().to_vec();
        rev.reverse();
        let p = IntPoly::new(rev).primitive();
        let dp = p.derivative();
        let limits = Limits::default();
        let mut prec = 64u32;
        loop {
            let x = self.refine_with(prec, &limits)?;
            if let Some(e) = recip_box(&x, prec + 32) {
                if let Some(region) = isolate_enclosure(&p, &dp, &e, prec + 32) {
                    return AlgebraicNumber::from_certified(p, region, &limits);
                }
            }
            if prec >= limits.max_bits {
                return Err(Error::PrecisionExhausted("could not isolate a reciprocal".into()));
            }
            prec = (prec * 2).min(limits.max_bits);
        }
    }

    pub fn div(&self, other: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.mul(&other.recip()?)
    }

    pub fn scale(&self, g: &GaussianRational) -> Result<AlgebraicNumber> {
        self.mul(&AlgebraicNumber::from_gaussian(g.clone()))
    }

    pub fn mul_int(&self, n: &BigInt) -> AlgebraicNumber {
        self.mul(&AlgebraicNumber::from_rational(Rational::from_integer(n.clone())))
            .expect("integer scaling only transforms the polynomial")
    }

    /// True when `Re > 0`, or `Re = 0` and `Im > 0`.
    pub fn is_positively_oriented(&self) -> bool {
        if let Some(g) = self.as_gaussian() {
            return g.re.is_positive() || (g.re.is_zero() && g.im.is_positive());
        }
        for bits in [16u32, 64, 256] {
            if let Ok(x) = self.refine(bits) {
                if x.re.is_positive() {
                    return true;
                }
                if x.re.is_negative() {
                    return false;
                }
            }
        }
        let twice_re = self
            .add(&self.conj())
            .expect("real part computation within budget");
        if twice_re.is_zero() {
            let mut bits = 16;
            loop {
                let x = self.enclosure(bits);
                if x.im.is_positive() {
                    return true;
                }
                if x.im.is_negative() {
                    return false;
                }
                bits *= 2;
            }
        }
        let mut bits = 256;
        loop {
            let x = twice_re.enclosure(bits);
            if x.re.is_positive() {
                return true;
            }
            if x.re.is_negative() {
                return false;
            }
            bits *= 2;
        }
    }

    /// Deterministic ordering key: midpoints on a `2^-64` grid, then the polynomial.
    pub fn sort_key(&self) -> (Dyadic, Dyadic, Vec<BigInt>) {
        let b = self.enclosure(80);
        (
            b.re.mid().round_to_exp(-64, Round::Down),
            b.im.mid().round_to_exp(-64, Round::Down),
            self.poly().coeffs().to_vec(),
        )
    }

    /// Total order on keys; distinct numbers with equal keys compare by refinement.
    pub fn cmp_key(&self, other: &AlgebraicNumber) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }

    /// JSON-style box encoding `[reLoNum, reLoDen, reHiNum, reHiDen, imLoNum, imLoDen, imHiNum, imHiDen]`.
    pub fn box_rationals(&self) -> [Rational; 4] {
        match &self.repr {
            Repr::Exact(g) => [g.re.clone(), g.re.clone(), g.im.clone(), g.im.clone()],
            Repr::Root(d) => [
                d.region.re.lo().to_rational(),
                d.region.re.hi().to_rational(),
                d.region.im.lo().to_rational(),
                d.region.im.hi().to_rational(),
            ],
        }
    }

    /// Short approximate decimal form for diagnostics.
    pub fn approx_string(&self, digits: usize) -> String {
        let b = self.enclosure((digits as f64 * 3.33) as u32 + 8);
        let re = b.re.mid().to_decimal(digits);
        let im = b.im.mid();
        if im.is_zero() {
            re
        } else {
            format!("{re}{}{}i", if im.is_negative() { "" } else { "+" }, im.to_decimal(digits))
        }
    }
}

fn combine(
    a: &AlgebraicNumber,
    b: &AlgebraicNumber,
    poly: IntPoly,
    limits: &Limits,
    op: impl Fn(&ComplexBox, &ComplexBox, u32) -> ComplexBox,
) -> Result<AlgebraicNumber> {
    let p = poly.squarefree_part();
    if p.degree() > crate::poly::MAX_DEGREE {
        return Err(Error::DegreeOverflow(p.degree()));
    }
    if p.degree() == 1 {
        return Ok(AlgebraicNumber::from_rational(Rational::new(-p.coeff(0), p.coeff(1))));
    }
    let dp = p.derivative();
    let mut prec = 64u32;
    for _ in 0..limits.max_rounds {
        let ea = a.refine_with(prec, limits)?;
        let eb = b.refine_with(prec, limits)?;
        let e = op(&ea, &eb, prec + 32);
        if let Some(region) = isolate_enclosure(&p, &dp, &e, prec + 32) {
            return AlgebraicNumber::from_certified(p, region, limits);
        }
        if prec >= limits.max_bits {
            break;
        }
        prec = (prec * 2).min(limits.max_bits);
    }
    Err(Error::PrecisionExhausted(format!(
        "could not isolate a root of a degree {} result",
        p.degree()
    )))
}

/// `1/z` over a box that excludes zero.
fn recip_box(z: &ComplexBox, prec: u32) -> Option<ComplexBox> {
    let n = z.norm_sqr(prec);
    if !n.is_positive() {
        return None;
    }
    let re = z.re.div(&n, prec).ok()?;
    let im = z.im.neg().div(&n, prec).ok()?;
    Some(ComplexBox::new(re, im))
}

fn roots_equal(a: &RootData, b: &RootData) -> bool {
    let limits = Limits {
        max_bits: 1 << 16,
        max_rounds: 256,
    };
    let same_poly = a.poly == b.poly;
    let g = if same_poly {
        a.poly.clone()
    } else {
        a.poly.gcd(&b.poly)
    };
    if g.degree() == 0 {
        return false;
    }
    let h = a.poly.div_exact(&g).expect("gcd divides");
    let dg = g.derivative();
    let dh = h.derivative();
    let mut a_root_of_g = same_poly || h.degree() == 0;
    let mut bits = 32i64;
    loop {
        let ba = a.refine(bits, &limits).expect("equality decision within budget");
        let bb = b.refine(bits, &limits).expect("equality decision within budget");
        if !ba.intersects(&bb) {
            return false;
        }
        let prec = working_prec(bits, magnitude_log2(&ba));
        if !a_root_of_g {
            // Exactly one of g, h vanishes at a.
            if h.eval_box_centered(&ba, &dh, prec).excludes_zero() {
                a_root_of_g = true;
            } else if g.eval_box_centered(&ba, &dg, prec).excludes_zero() {
                return false;
            }
        }
        if a_root_of_g {
            // a is a root of b's polynomial; it is b iff it lies in b's region.
            if ba.is_subset(&b.region) {
                return true;
            }
            if !ba.intersects(&b.region) {
                return false;
            }
        }
        bits *= 2;
    }
}

/// Subdivision search for all roots of squarefree `p` near `target`.
fn isolate_roots(p: &IntPoly, target: &ComplexBox, limits: &Limits) -> Result<Vec<RootData>> {
    let dp = p.derivative();
    let w = target.width();
    let margin = w.shl(-3).greater(&Dyadic::pow2(-16));
    let search = target.inflate(&margin);
    let sep = p.separation_bound_log2();
    let min_width = sep.saturating_sub(4).max(-(limits.max_bits as i64));
    let mut queue = vec![search];
    let mut found: Vec<RootData> = Vec::new();
    let mut processed = 0usize;
    while let Some(x) = queue.pop() {
        processed += 1;
        if processed > 400_000 {
            return Err(Error::PrecisionExhausted("root subdivision budget exceeded".into()));
        }
        let wl = width_log2(&x);
        let prec = working_prec(-wl + 16, magnitude_log2(&x));
        if p.eval_box_centered(&x, &dp, prec).excludes_zero() {
            continue;
        }
        let grown = x.inflate(&x.width().shl(-2));
        if certifies(p, &dp, &grown, prec) {
            found.push(RootData::new(p.clone(), grown));
            continue;
        }
        if wl < min_width {
            return Err(Error::PrecisionExhausted(format!(
                "could not separate roots of {p} below width 2^{wl}"
            )));
        }
        let (rw, iw) = (x.re.width(), x.im.width());
        if rw >= iw.shl(1) || (rw >= iw && !rw.is_zero() && iw.shl(1) < rw) {
            let m = x.re.mid();
            queue.push(ComplexBox::new(Interval::new(x.re.lo().clone(), m.clone()), x.im.clone()));
            queue.push(ComplexBox::new(Interval::new(m, x.re.hi().clone()), x.im.clone()));
        } else if iw >= rw.shl(1) {
            let m = x.im.mid();
            queue.push(ComplexBox::new(x.re.clone(), Interval::new(x.im.lo().clone(), m.clone())));
            queue.push(ComplexBox::new(x.re.clone(), Interval::new(m, x.im.hi().clone())));
        } else {
            let (mr, mi) = x.mid();
            for (re, im) in [
                (Interval::new(x.re.lo().clone(), mr.clone()), Interval::new(x.im.lo().clone(), mi.clone())),
                (Interval::new(mr.clone(), x.re.hi().clone()), Interval::new(x.im.lo().clone(), mi.clone())),
                (Interval::new(x.re.lo().clone(), mr.clone()), Interval::new(mi.clone(), x.im.hi().clone())),
                (Interval::new(mr, x.re.hi().clone()), Interval::new(mi, x.im.hi().clone())),
            ] {
                queue.push(ComplexBox::new(re, im));
            }
        }
    }
    // Several certified boxes may hold the same root.
    let mut unique: Vec<RootData> = Vec::new();
    'outer: for cand in found {
        let mut bits = 32i64;
        loop {
            let bc = cand.refine(bits, limits)?;
            let mut undecided = false;
            for u in &unique {
                if bc.is_subset(&u.region) {
                    continue 'outer;
                }
                let bu = u.refine(bits, limits)?;
                if bc.intersects(&bu) || bc.intersects(&u.region) {
                    undecided = true;
                }
            }
            if !undecided {
                unique.push(cand);
                continue 'outer;
            }
            bits *= 2;
            if bits > limits.max_bits as i64 {
                return Err(Error::PrecisionExhausted("could not deduplicate roots".into()));
            }
        }
    }
    Ok(unique)
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &AlgebraicNumber) -> bool {
        self.equals(other)
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(g) => write!(f, "{g}"),
            Repr::Root(d) => write!(f, "root({}; ≈{})", d.poly, self.approx_string(12)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sqrt2() -> AlgebraicNumber {
        AlgebraicNumber::root_in(&IntPoly::from_i64(&[-2, 0, 1]), [&rat(1, 1), &rat(2, 1), &rat(0, 1), &rat(0, 1)])
            .unwrap()
    }

    #[test]
    fn make_sqrt2_and_i() {
        let s = sqrt2();
        let b = s.refine(40).unwrap();
        let v = Dyadic::from_rational(&rat(14142135623731, 10000000000000), 80, Round::Down);
        assert!(b.re.inflate(&Dyadic::pow2(-40)).contains(&v));
        let i = AlgebraicNumber::root_in(&IntPoly::from_i64(&[1, 0, 1]), [&rat(-1, 1), &rat(1, 1), &rat(0, 1), &rat(2, 1)]).unwrap();
        assert!(i.equals(&AlgebraicNumber::i()));
    }

    #[test]
    fn quartic_factor_shares_root() {
        let r = AlgebraicNumber::root_in(
            &IntPoly::from_i64(&[-4, 0, 0, 0, 1]),
            [&rat(13, 10), &rat(15, 10), &rat(0, 1), &rat(0, 1)],
        )
        .unwrap();
        assert!(r.equals(&sqrt2()));
        assert!(!r.equals(&sqrt2().neg()));
    }

    #[test]
    fn box_with_two_roots_is_rejected() {
        let err = AlgebraicNumber::root_in(&IntPoly::from_i64(&[-2, 0, 1]), [&rat(-2, 1), &rat(2, 1), &rat(0, 1), &rat(0, 1)]);
        assert!(matches!(err, Err(Error::NotIsolating(_))));
        let none = AlgebraicNumber::root_in(&IntPoly::from_i64(&[-2, 0, 1]), [&rat(2, 1), &rat(3, 1), &rat(0, 1), &rat(0, 1)]);
        assert!(matches!(none, Err(Error::NotIsolating(_))));
        assert!(matches!(
            AlgebraicNumber::root_in(&IntPoly::zero(), [&rat(0, 1), &rat(1, 1), &rat(0, 1), &rat(0, 1)]),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn arithmetic_identities() {
        let s = sqrt2();
        assert!(s.sub(&s).unwrap().is_zero());
        assert!(s.add(&s.neg()).unwrap().is_zero());
        let i = AlgebraicNumber::i();
        assert!(i.mul(&i).unwrap().equals(&AlgebraicNumber::from_int(-1)));
        let two = s.mul(&s).unwrap();
        assert_eq!(two.as_rational(), Some(&rat(2, 1)));
    }

    #[test]
    fn sum_of_surds() {
        let s3 = AlgebraicNumber::sqrt_rational(&rat(3, 1)).unwrap();
        let t = sqrt2().add(&s3).unwrap();
        assert_eq!(t.poly(), IntPoly::from_i64(&[1, 0, -10, 0, 1]));
        assert!(t.is_real());
        let back = t.sub(&s3).unwrap();
        assert!(back.equals(&sqrt2()));
    }

    #[test]
    fn realness() {
        assert!(sqrt2().im_is_zero());
        assert!(!AlgebraicNumber::i().im_is_zero());
        let two_i = AlgebraicNumber::from_gaussian(GaussianRational::new(rat(0, 1), rat(2, 1)));
        assert!(!two_i.sub(&AlgebraicNumber::i()).unwrap().im_is_zero());
        let cube = AlgebraicNumber::roots_of(&IntPoly::from_i64(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(cube.iter().filter(|r| r.im_is_zero()).count(), 1);
    }

    #[test]
    fn refine_widths() {
        let b = sqrt2().refine(50).unwrap();
        assert!(b.width() <= Dyadic::pow2(-50));
        let z = AlgebraicNumber::zero().refine(10).unwrap();
        assert!(z.is_point() && z.contains_zero());
    }

    #[test]
    fn all_roots_of_quartic() {
        let roots = AlgebraicNumber::roots_of(&IntPoly::from_i64(&[-4, 0, 0, 0, 1])).unwrap();
        assert_eq!(roots.len(), 4);
        for (i, a) in roots.iter().enumerate() {
            for (j, b) in roots.iter().enumerate() {
                assert_eq!(a.equals(b), i == j);
            }
        }
    }

    #[test]
    fn reciprocal() {
        let s = sqrt2();
        let r = s.recip().unwrap();
        assert!(r.mul(&s).unwrap().is_one());
        let q = s.mul_int(&BigInt::from(3)).div(&s).unwrap();
        assert_eq!(q.as_rational(), Some(&rat(3, 1)));
        assert!(AlgebraicNumber::zero().recip().is_err());
    }

    #[test]
    fn orientation() {
        assert!(sqrt2().is_positively_oriented());
        assert!(!sqrt2().neg().is_positively_oriented());
        let isq = AlgebraicNumber::sqrt_rational(&rat(-2, 1)).unwrap();
        assert!(isq.is_positively_oriented());
        assert!(!isq.conj().is_positively_oriented());
    }
}
