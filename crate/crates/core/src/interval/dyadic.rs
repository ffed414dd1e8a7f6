use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for inexact dyadic operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// A dyadic rational `mant * 2^exp`, kept with an odd mantissa (or zero).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn shr_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let d = BigInt::one() << s;
    match dir {
        Round::Down => m.div_floor(&d),
        Round::Up => -((-m).div_floor(&d)),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Dyadic {
        Dyadic::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// `2^e`
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic::new(BigInt::one(), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Position of the leading bit: `2^(msb-1) <= |x| < 2^msb`. Zero maps to `i64::MIN`.
    pub fn msb(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, n: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * n, self.exp)
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    /// Round to at most `prec` mantissa bits in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), self.exp + s as i64)
    }

    /// Round to a multiple of `2^e` in the given direction.
    pub fn round_to_exp(&self, e: i64, dir: Round) -> Dyadic {
        if self.exp >= e {
            return self.clone();
        }
        Dyadic::new(shr_round(&self.mant, (e - self.exp) as u64, dir), e)
    }

    /// Quotient `self / other` rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale the numerator so the integer quotient carries prec+2 bits.
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as usize;
        let (mut q, r) = num.div_rem(&other.mant);
        if !r.is_zero() {
            // Truncated division; adjust toward the requested direction.
            let negative = num.is_negative() != other.mant.is_negative();
            match dir {
                Round::Down if negative => q -= 1,
                Round::Up if !negative => q += 1,
                _ => {}
            }
        }
        Dyadic::new(q, self.exp - other.exp - shift).round(prec, dir)
    }

    pub fn div_int(&self, n: &BigInt, prec: u32, dir: Round) -> Dyadic {
        self.div(&Dyadic::from_int(n.clone()), prec, dir)
    }

    /// Square root of a nonnegative dyadic, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "square root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut e = self.exp;
        let mut m = self.mant.clone();
        // Want at least 2*prec+4 bits in m and even exponent.
        let want = 2 * prec as i64 + 4;
        let have = m.bits() as i64;
        let mut shift = (want - have).max(0);
        if (e - shift) % 2 != 0 {
            shift += 1;
        }
        m <<= shift as usize;
        e -= shift;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let s = if !exact && dir == Round::Up { s + 1 } else { s };
        Dyadic::new(s, e / 2).round(prec, dir)
    }

    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Dyadic {
        let n = Dyadic::from_int(q.numer().clone());
        let d = Dyadic::from_int(q.denom().clone());
        if q.denom().is_one() {
            return n.round(prec, dir);
        }
        n.div(&d, prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let r = self.round(60, Round::Down);
        let m = r.mant.to_f64().unwrap_or(f64::NAN);
        if r.exp > 2000 {
            return if m > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
        if r.exp < -2000 {
            return 0.0;
        }
        m * 2f64.powi(r.exp as i32)
    }

    /// Floor as an integer.
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            shr_round(&self.mant, (-self.exp) as u64, Round::Down)
        }
    }

    /// Nearest integer, ties toward positive infinity.
    pub fn round_nearest(&self) -> BigInt {
        self.add(&Dyadic::pow2(-1)).floor()
    }

    pub fn lesser(&self, other: &Dyadic) -> Dyadic {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn greater(&self, other: &Dyadic) -> Dyadic {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Decimal rendering with `digits` significant fractional digits (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        let q = self.to_rational();
        rational_to_decimal(&q, digits)
    }
}

pub(crate) fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let int_part = scaled.div_floor(&scale);
    let frac = &scaled - &int_part * &scale;
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Dyadic) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Dyadic) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rounding_is_directed() {
        let third_lo = Dyadic::from_rational(&q(1, 3), 20, Round::Down);
        let third_hi = Dyadic::from_rational(&q(1, 3), 20, Round::Up);
        assert!(third_lo.to_rational() < q(1, 3));
        assert!(third_hi.to_rational() > q(1, 3));
        assert!(third_hi.sub(&third_lo).to_rational() <= q(1, 1 << 20));

        let neg_lo = Dyadic::from_rational(&q(-1, 3), 20, Round::Down);
        assert!(neg_lo.to_rational() < q(-1, 3));
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_i64(2);
        let lo = two.sqrt(64, Round::Down);
        let hi = two.sqrt(64, Round::Up);
        assert!(lo.mul(&lo) < two);
        assert!(hi.mul(&hi) > two);
        let four = Dyadic::from_i64(4);
        assert_eq!(four.sqrt(10, Round::Up), Dyadic::from_i64(2));
    }

    #[test]
    fn floor_and_nearest() {
        let x = Dyadic::from_rational(&q(-5, 2), 10, Round::Down);
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.round_nearest(), BigInt::from(-2));
        assert_eq!(Dyadic::from_i64(7).floor(), BigInt::from(7));
    }

    #[test]
    fn ordering_across_exponents() {
        let a = Dyadic::new(BigInt::from(3), -1);
        let b = Dyadic::from_i64(1);
        assert!(a > b);
        assert!(a.neg() < b.neg());
        assert_eq!(Dyadic::new(BigInt::from(4), 0), Dyadic::from_i64(4));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Dyadic::new(BigInt::from(-3), -2).to_decimal(3), "-0.750");
        assert_eq!(Dyadic::from_i64(12).to_decimal(0), "12");
    }
}
