//! Rigorous interval arithmetic over dyadic endpoints.
//!
//! Every operation rounds outward, so the returned interval (or box) always
//! contains the exact image of its inputs. Precision arguments are mantissa
//! bit counts unless documented otherwise.

mod dyadic;
mod functions;

pub use dyadic::{Dyadic, Round};
pub use functions::{
    e_const, exp_box, exp_real, liouville, ln2, log_interval, pi, GUARD_BITS,
};


use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::GaussianRational;

/// A closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order: {lo:?} > {hi:?}");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Interval {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn zero() -> Interval {
        Interval::point(Dyadic::zero())
    }

    pub fn one() -> Interval {
        Interval::point(Dyadic::one())
    }

    pub fn from_int(n: &BigInt) -> Interval {
        Interval::point(Dyadic::from_int(n.clone()))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rational(q, prec, Round::Down),
            hi: Dyadic::from_rational(q, prec, Round::Up),
        }
    }

    /// `[-r, r]`
    pub fn symmetric(r: Dyadic) -> Interval {
        let r = r.abs();
        Interval { lo: r.neg(), hi: r }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Midpoint, exact.
    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).shl(-1)
    }

    /// Half the width, exact.
    pub fn rad(&self) -> Dyadic {
        self.width().shl(-1)
    }

    /// Largest absolute value.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().greater(&self.hi.abs())
    }

    /// Smallest absolute value.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().lesser(&self.hi.abs())
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Strict containment in the interior of `other`.
    pub fn is_interior(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.greater(&other.lo);
        let hi = self.hi.lesser(&other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.lesser(&other.lo),
            hi: self.hi.greater(&other.hi),
        }
    }

    /// Certainly positive.
    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, other: &Interval, prec: u32) -> Interval {
        Interval {
            lo: self.lo.add(&other.lo).round(prec, Round::Down),
            hi: self.hi.add(&other.hi).round(prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &Interval, prec: u32) -> Interval {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Interval, prec: u32) -> Interval {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    pub fn mul_dyadic(&self, d: &Dyadic, prec: u32) -> Interval {
        self.mul(&Interval::point(d.clone()), prec)
    }

    pub fn mul_int(&self, n: &BigInt, prec: u32) -> Interval {
        let (a, b) = (self.lo.mul_int(n), self.hi.mul_int(n));
        let (lo, hi) = if n.is_negative() { (b, a) } else { (a, b) };
        Interval {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
        }
    }

    pub fn mul_rational(&self, q: &BigRational, prec: u32) -> Interval {
        self.mul(&Interval::from_rational(q, prec + 4), prec)
    }

    pub fn sqr(&self, prec: u32) -> Interval {
        let a = self.mig();
        let b = self.mag();
        Interval {
            lo: a.mul(&a).round(prec, Round::Down),
            hi: b.mul(&b).round(prec, Round::Up),
        }
    }

    /// Division by an interval that excludes zero.
    pub fn div(&self, other: &Interval, prec: u32) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DomainError("interval division by a range containing 0".into()));
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let l = a.div(b, prec, Round::Down);
                let h = a.div(b, prec, Round::Up);
                lo = Some(match lo {
                    Some(x) if x <= l => x,
                    _ => l,
                });
                hi = Some(match hi {
                    Some(x) if x >= h => x,
                    _ => h,
                });
            }
        }
        Ok(Interval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    pub fn div_int(&self, n: &BigInt, prec: u32) -> Interval {
        let d = Dyadic::from_int(n.clone());
        let (a, b) = if n.is_negative() {
            (self.hi.div(&d, prec, Round::Down), self.lo.div(&d, prec, Round::Up))
        } else {
            (self.lo.div(&d, prec, Round::Down), self.hi.div(&d, prec, Round::Up))
        };
        Interval { lo: a, hi: b }
    }

    pub fn sqrt(&self, prec: u32) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::DomainError("square root of a negative range".into()));
        }
        let lo = if self.lo.is_positive() {
            self.lo.sqrt(prec, Round::Down)
        } else {
            Dyadic::zero()
        };
        Ok(Interval {
            lo,
            hi: self.hi.sqrt(prec, Round::Up),
        })
    }

    /// Widen by `r` on both sides.
    pub fn inflate(&self, r: &Dyadic) -> Interval {
        Interval {
            lo: self.lo.sub(r),
            hi: self.hi.add(r),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_decimal(25), self.hi.to_decimal(25))
    }
}

/// A rectangle in the complex plane: real part × imaginary part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> ComplexBox {
        ComplexBox { re, im }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> ComplexBox {
        ComplexBox {
            re: Interval::point(re),
            im: Interval::point(im),
        }
    }

    pub fn real(re: Interval) -> ComplexBox {
        ComplexBox {
            re,
            im: Interval::zero(),
        }
    }

    pub fn zero() -> ComplexBox {
        ComplexBox::real(Interval::zero())
    }

    pub fn one() -> ComplexBox {
        ComplexBox::real(Interval::one())
    }

    pub fn from_gaussian(g: &GaussianRational, prec: u32) -> ComplexBox {
        ComplexBox {
            re: Interval::from_rational(&g.re, prec),
            im: Interval::from_rational(&g.im, prec),
        }
    }

    /// Larger of the two side lengths.
    pub fn width(&self) -> Dyadic {
        self.re.width().greater(&self.im.width())
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    pub fn mid_box(&self) -> ComplexBox {
        ComplexBox::point(self.re.mid(), self.im.mid())
    }

    pub fn is_point(&self) -> bool {
        self.re.is_point() && self.im.is_point()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains_point(&self, re: &Dyadic, im: &Dyadic) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn contains_gaussian(&self, g: &GaussianRational) -> bool {
        self.re.contains_rational(&g.re) && self.im.contains_rational(&g.im)
    }

    pub fn is_subset(&self, other: &ComplexBox) -> bool {
        self.re.is_subset(&other.re) && self.im.is_subset(&other.im)
    }

    pub fn is_interior(&self, other: &ComplexBox) -> bool {
        self.re.is_interior(&other.re) && self.im.is_interior(&other.im)
    }

    pub fn intersects(&self, other: &ComplexBox) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn intersect(&self, other: &ComplexBox) -> Option<ComplexBox> {
        Some(ComplexBox {
            re: self.re.intersect(&other.re)?,
            im: self.im.intersect(&other.im)?,
        })
    }

    pub fn hull(&self, other: &ComplexBox) -> ComplexBox {
        ComplexBox {
            re: self.re.hull(&other.re),
            im: self.im.hull(&other.im),
        }
    }

    pub fn inflate(&self, r: &Dyadic) -> ComplexBox {
        ComplexBox {
            re: self.re.inflate(r),
            im: self.im.inflate(r),
        }
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn add(&self, other: &ComplexBox, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.add(&other.re, prec),
            im: self.im.add(&other.im, prec),
        }
    }

    pub fn sub(&self, other: &ComplexBox, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.sub(&other.re, prec),
            im: self.im.sub(&other.im, prec),
        }
    }

    pub fn mul(&self, other: &ComplexBox, prec: u32) -> ComplexBox {
        let wp = prec + 4;
        let re = self
            .re
            .mul(&other.re, wp)
            .sub(&self.im.mul(&other.im, wp), prec);
        let im = self
            .re
            .mul(&other.im, wp)
            .add(&self.im.mul(&other.re, wp), prec);
        ComplexBox { re, im }
    }

    pub fn sqr(&self, prec: u32) -> ComplexBox {
        let wp = prec + 4;
        let re = self.re.sqr(wp).sub(&self.im.sqr(wp), prec);
        let im = self.re.mul(&self.im, wp).mul_int(&BigInt::from(2), prec);
        ComplexBox { re, im }
    }

    pub fn mul_int(&self, n: &BigInt, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.mul_int(n, prec),
            im: self.im.mul_int(n, prec),
        }
    }

    pub fn mul_real(&self, x: &Interval, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.mul(x, prec),
            im: self.im.mul(x, prec),
        }
    }

    pub fn mul_gaussian(&self, g: &GaussianRational, prec: u32) -> ComplexBox {
        self.mul(&ComplexBox::from_gaussian(g, prec + 8), prec)
    }

    pub fn div_int(&self, n: &BigInt, prec: u32) -> ComplexBox {
        ComplexBox {
            re: self.re.div_int(n, prec),
            im: self.im.div_int(n, prec),
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn norm_sqr(&self, prec: u32) -> Interval {
        self.re.sqr(prec + 4).add(&self.im.sqr(prec + 4), prec)
    }

    /// Enclosure of `|z|`.
    pub fn abs(&self, prec: u32) -> Interval {
        self.norm_sqr(prec + 4)
            .sqrt(prec)
            .expect("norm square is nonnegative")
    }

    /// Certainly excludes zero.
    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// Approximate reciprocal of the midpoint; no rigor is claimed.
    pub fn approx_recip(&self, prec: u32) -> Option<(Dyadic, Dyadic)> {
        let (a, b) = self.mid();
        let n = a.mul(&a).add(&b.mul(&b));
        if n.is_zero() {
            return None;
        }
        Some((
            a.div(&n, prec, Round::Down),
            b.neg().div(&n, prec, Round::Down),
        ))
    }
}

impl fmt::Debug for ComplexBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + i{:?}", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_contains_exact_results() {
        let a = Interval::from_rational(&q(1, 3), 40);
        let b = Interval::from_rational(&q(-2, 7), 40);
        let exact = q(1, 3) * q(-2, 7);
        assert!(a.mul(&b, 30).contains_rational(&exact));
        assert!(a.add(&b, 30).contains_rational(&(q(1, 3) + q(-2, 7))));
        assert!(a.div(&b, 30).unwrap().contains_rational(&(q(1, 3) / q(-2, 7))));
    }

    #[test]
    fn division_by_zero_range_is_domain_error() {
        let a = Interval::one();
        let z = Interval::new(Dyadic::from_i64(-1), Dyadic::from_i64(1));
        assert!(matches!(a.div(&z, 10), Err(Error::DomainError(_))));
    }

    #[test]
    fn complex_product() {
        // (1 + 2i)(3 - i) = 5 + 5i
        let a = ComplexBox::point(Dyadic::from_i64(1), Dyadic::from_i64(2));
        let b = ComplexBox::point(Dyadic::from_i64(3), Dyadic::from_i64(-1));
        let c = a.mul(&b, 30);
        assert!(c.contains_point(&Dyadic::from_i64(5), &Dyadic::from_i64(5)));
        assert!(c.is_point());
        let s = a.sqr(30);
        assert!(s.contains_point(&Dyadic::from_i64(-3), &Dyadic::from_i64(4)));
    }

    #[test]
    fn modulus_enclosure() {
        let z = ComplexBox::point(Dyadic::from_i64(3), Dyadic::from_i64(4));
        let m = z.abs(40);
        assert!(m.contains(&Dyadic::from_i64(5)));
    }
}
