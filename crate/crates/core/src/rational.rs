//! Rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `a + b i` with `a, b` rational.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> GaussianRational {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> GaussianRational {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> GaussianRational {
        GaussianRational::real(rat_int(n))
    }

    pub fn from_bigint(n: BigInt) -> GaussianRational {
        GaussianRational::real(Rational::from_integer(n))
    }

    pub fn i() -> GaussianRational {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> GaussianRational {
        GaussianRational::default()
    }

    pub fn one() -> GaussianRational {
        GaussianRational::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> GaussianRational {
        GaussianRational::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -&self.im / &n))
    }

    pub fn div(&self, other: &GaussianRational) -> Option<GaussianRational> {
        other.inv().map(|v| self * &v)
    }

    pub fn scale(&self, q: &Rational) -> GaussianRational {
        GaussianRational::new(&self.re * q, &self.im * q)
    }

    /// Least common multiple of the two denominators.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Monic-free integer polynomial (low to high) with this number as a root.
    pub fn annihilator(&self) -> Vec<BigInt> {
        if self.im.is_zero() {
            // d x - n
            return vec![-self.re.numer().clone(), self.re.denom().clone()];
        }
        // x^2 - 2 re x + |z|^2, cleared.
        let b = -(&self.re * Rational::from_integer(BigInt::from(2)));
        let c = self.norm_sqr();
        let l = b.denom().lcm(c.denom());
        let lr = Rational::from_integer(l.clone());
        vec![(c * &lr).to_integer(), (b * &lr).to_integer(), l]
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-&self.re, -&self.im)
    }
}

fn fmt_rat(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for GaussianRational {
    /// `3`, `-1/2`, `2i`, `-i`, `1/2+3i`, `1-1/3i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |q: &Rational| -> String {
            if q.is_one() {
                "i".to_string()
            } else if (-q).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rat(q))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_part(&self.im)),
            (false, false) => {
                let im = im_part(&self.im.abs());
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{}", fmt_rat(&self.re), sign, im)
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    fmt_rat(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_int(3).to_string(), "3");
        assert_eq!(GaussianRational::i().to_string(), "i");
        assert_eq!((-&GaussianRational::i()).to_string(), "-i");
        let z = GaussianRational::new(rat(1, 2), rat(-1, 3));
        assert_eq!(z.to_string(), "1/2-1/3i");
    }

    #[test]
    fn inverse_and_annihilator() {
        let z = GaussianRational::new(rat(1, 2), rat(3, 4));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        // annihilator vanishes at z
        let p = z.annihilator();
        let mut acc = GaussianRational::zero();
        for c in p.iter().rev() {
            acc = &(&acc * &z) + &GaussianRational::from_bigint(c.clone());
        }
        assert!(acc.is_zero());
    }
}
