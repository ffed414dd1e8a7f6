//! Elementary functions with explicit truncation bounds.
//!
//! Width contract: for a point argument and precision `prec`, the result has
//! width at most `2^(msb(value) - prec + GUARD_BITS)`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{ComplexBox, Dyadic, Interval, Round};
use crate::error::{Error, Result};

pub const GUARD_BITS: u32 = 8;

fn tail(mag: Dyadic) -> Interval {
    Interval::symmetric(mag)
}

/// Taylor series of exp at a small complex point, then `s` squarings.
fn exp_point_complex(re: &Dyadic, im: &Dyadic, prec: u32) -> ComplexBox {
    if re.is_zero() && im.is_zero() {
        return ComplexBox::one();
    }
    let top = re.msb().max(im.msb());
    let s = (top + 10).max(0) as u32;
    let wp = prec + s + 24;
    let w = ComplexBox::point(re.shl(-(s as i64)), im.shl(-(s as i64)));
    let real = im.is_zero();
    let mut sum = ComplexBox::one();
    let mut term = ComplexBox::one();
    let cutoff = Dyadic::pow2(-(wp as i64) - 4);
    let mut n = 1u64;
    loop {
        term = term.mul(&w, wp).div_int(&BigInt::from(n), wp);
        sum = sum.add(&term, wp);
        let m = term.re.mag().add(&term.im.mag());
        if m < cutoff {
            // Remaining terms are each below |w|/(n+1) < 2^-10 of the last one.
            sum.re = sum.re.add(&tail(m.clone()), wp);
            if !real {
                sum.im = sum.im.add(&tail(m), wp);
            }
            break;
        }
        n += 1;
    }
    for _ in 0..s {
        sum = if real {
            ComplexBox::real(sum.re.sqr(wp))
        } else {
            sum.sqr(wp)
        };
    }
    ComplexBox {
        re: round_out(&sum.re, prec),
        im: round_out(&sum.im, prec),
    }
}

fn round_out(x: &Interval, prec: u32) -> Interval {
    Interval::new(x.lo().round(prec, Round::Down), x.hi().round(prec, Round::Up))
}

/// Enclosure of `exp` over a real interval.
pub fn exp_real(x: &Interval, prec: u32) -> Interval {
    let lo = exp_point_complex(x.lo(), &Dyadic::zero(), prec).re;
    if x.is_point() {
        return lo;
    }
    let hi = exp_point_complex(x.hi(), &Dyadic::zero(), prec).re;
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// Enclosure of `exp` over a complex box.
///
/// Evaluates at the box center and adds the mean-value bound
/// `|exp(z) - exp(c)| <= |z - c| * exp(max Re z)`.
pub fn exp_box(z: &ComplexBox, prec: u32) -> ComplexBox {
    if z.im.is_point() && z.im.lo().is_zero() {
        return ComplexBox::real(exp_real(&z.re, prec));
    }
    let (cr, ci) = z.mid();
    let center = exp_point_complex(&cr, &ci, prec + 4);
    let rho = z.re.rad().add(&z.im.rad());
    if rho.is_zero() {
        return center;
    }
    let bound = exp_real(&Interval::point(z.re.hi().clone()), 32);
    let delta = rho.mul(bound.hi()).round(32, Round::Up);
    center.inflate(&delta)
}

fn atanh_series(z: &Interval, wp: u32) -> Interval {
    // z + z^3/3 + z^5/5 + ... for |z| <= 1/3
    let z2 = z.sqr(wp);
    let mut pow = z.clone();
    let mut sum = z.clone();
    let cutoff = Dyadic::pow2(-(wp as i64) - 4);
    let mut k = 1u64;
    loop {
        pow = pow.mul(&z2, wp);
        k += 2;
        let term = pow.div_int(&BigInt::from(k), wp);
        sum = sum.add(&term, wp);
        let m = pow.mag();
        if m < cutoff {
            // Tail is below |pow| * z^2 / (1 - z^2) < |pow|.
            return sum.add(&tail(m), wp);
        }
    }
}

struct ConstCache(Mutex<Option<(u32, Interval)>>);

impl ConstCache {
    const fn new() -> ConstCache {
        ConstCache(Mutex::new(None))
    }

    fn get(&self, prec: u32, compute: impl FnOnce(u32) -> Interval) -> Interval {
        let mut guard = self.0.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((p, v)) = guard.as_ref() {
            if *p >= prec {
                return round_out(v, prec);
            }
        }
        let v = compute(prec);
        *guard = Some((prec, v.clone()));
        v
    }
}

static LN2: ConstCache = ConstCache::new();
static PI: ConstCache = ConstCache::new();

/// Enclosure of `ln 2` as `2 atanh(1/3)`.
pub fn ln2(prec: u32) -> Interval {
    LN2.get(prec, |prec| {
        let wp = prec + 16;
        let third = Interval::from_rational(&BigRational::new(1.into(), 3.into()), wp);
        round_out(&atanh_series(&third, wp).mul_int(&BigInt::from(2), wp), prec)
    })
}

fn atan_inv(n: u64, wp: u32) -> Interval {
    // atan(1/n) = sum (-1)^j / ((2j+1) n^(2j+1)); alternating, decreasing.
    let inv = Interval::from_rational(&BigRational::new(1.into(), n.into()), wp);
    let inv2 = inv.sqr(wp);
    let mut pow = inv.clone();
    let mut sum = inv;
    let cutoff = Dyadic::pow2(-(wp as i64) - 4);
    let mut k = 1u64;
    let mut sign = 1i64;
    loop {
        pow = pow.mul(&inv2, wp);
        k += 2;
        sign = -sign;
        let term = pow.div_int(&BigInt::from(k as i64 * sign), wp);
        sum = sum.add(&term, wp);
        if pow.mag() < cutoff {
            return sum.add(&tail(pow.mag()), wp);
        }
    }
}

/// Enclosure of π via Machin's formula.
pub fn pi(prec: u32) -> Interval {
    PI.get(prec, |prec| {
        let wp = prec + 16;
        let a = atan_inv(5, wp).mul_int(&BigInt::from(16), wp);
        let b = atan_inv(239, wp).mul_int(&BigInt::from(4), wp);
        round_out(&a.sub(&b, wp), prec)
    })
}

/// Enclosure of Euler's number.
pub fn e_const(prec: u32) -> Interval {
    exp_real(&Interval::one(), prec)
}

fn log_point(x: &Dyadic, prec: u32) -> Interval {
    if *x == Dyadic::one() {
        return Interval::zero();
    }
    let mut k = x.msb() - 1;
    let mut m = x.shl(-k);
    if m > Dyadic::new(BigInt::from(3), -1) {
        m = m.shl(-1);
        k += 1;
    }
    let kbits = 64 - (k.unsigned_abs()).leading_zeros();
    let wp = prec + 16 + kbits;
    let one = Dyadic::one();
    let num = Interval::point(m.sub(&one));
    let den = Interval::point(m.add(&one));
    let z = num.div(&den, wp).expect("m + 1 > 0");
    let mut r = atanh_series(&z, wp).mul_int(&BigInt::from(2), wp);
    if k != 0 {
        r = r.add(&ln2(wp).mul_int(&BigInt::from(k), wp), wp);
    }
    round_out(&r, prec)
}

/// Enclosure of the natural logarithm over a positive real interval.
pub fn log_interval(x: &Interval, prec: u32) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::DomainError(
            "logarithm of a range touching nonpositive reals".into(),
        ));
    }
    let lo = log_point(x.lo(), prec);
    if x.is_point() {
        return Ok(lo);
    }
    let hi = log_point(x.hi(), prec);
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone()))
}

/// Enclosure of `sum_{k>=1} base^(-k!)`.
pub fn liouville(base: u32, prec: u32) -> Interval {
    assert!(base >= 2, "Liouville base must be at least 2");
    let wp = prec + 16;
    let b = BigInt::from(base);
    let mut sum = Interval::zero();
    let mut fact: usize = 1;
    let mut k = 1usize;
    let limit = Dyadic::pow2(-(wp as i64) - 8);
    loop {
        let denom = num_traits::pow(b.clone(), fact);
        let term = BigRational::new(BigInt::one(), denom);
        sum = sum.add(&Interval::from_rational(&term, wp), wp);
        k += 1;
        fact *= k;
        let next = Interval::from_rational(
            &BigRational::new(BigInt::one(), num_traits::pow(b.clone(), fact)),
            16,
        );
        if next.hi() < &limit {
            // Tail after term k is at most twice its first term.
            let t = next.hi().shl(1);
            sum = Interval::new(sum.lo().clone(), sum.hi().add(&t));
            break;
        }
        if fact > 1 << 20 {
            unreachable!("factorial exponent overflow");
        }
    }
    round_out(&sum, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 60 digits, independently known.
    const E_60: &str = "2.718281828459045235360287471352662497757247093699959574966967";
    const PI_60: &str = "3.141592653589793238462643383279502884197169399375105820974944";

    fn dec(s: &str) -> BigRational {
        let (i, f) = s.split_once('.').unwrap();
        let n: BigInt = format!("{i}{f}").parse().unwrap();
        BigRational::new(n, num_traits::pow(BigInt::from(10), f.len()))
    }

    #[test]
    fn exp_of_one_brackets_e() {
        let e = exp_real(&Interval::one(), 180);
        let approx = dec(E_60);
        let slack = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 59));
        assert!(e.lo().to_rational() <= &approx + &slack);
        assert!(e.hi().to_rational() >= &approx - &slack);
        assert!(e.width() <= Dyadic::pow2(2 - 180 + GUARD_BITS as i64));
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = exp_real(&Interval::zero(), 64);
        assert_eq!(e, Interval::one());
    }

    #[test]
    fn pi_brackets() {
        let p = pi(190);
        let approx = dec(PI_60);
        let slack = BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 59));
        assert!(p.lo().to_rational() <= &approx + &slack);
        assert!(p.hi().to_rational() >= &approx - &slack);
    }

    #[test]
    fn log_of_one_contains_zero() {
        assert!(log_interval(&Interval::one(), 64).unwrap().contains_zero());
    }

    #[test]
    fn log_rejects_nonpositive() {
        let x = Interval::new(Dyadic::from_i64(-1), Dyadic::from_i64(2));
        assert!(log_interval(&x, 32).is_err());
    }

    #[test]
    fn exp_of_i_pi_is_minus_one() {
        let p = pi(120);
        let z = ComplexBox::new(Interval::zero(), p);
        let w = exp_box(&z, 100);
        assert!(w.contains_point(&Dyadic::from_i64(-1), &Dyadic::zero()));
        assert!(w.width() < Dyadic::pow2(-90));
    }

    #[test]
    fn liouville_value() {
        // 0.110001000000000000000001...
        let l = liouville(10, 100);
        let approx = BigRational::new(110001.into(), 1000000.into());
        assert!(l.contains_rational(&(approx + BigRational::new(1.into(), num_traits::pow(BigInt::from(10), 24)))));
    }
}
