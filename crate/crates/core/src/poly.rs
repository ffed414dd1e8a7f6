//! Dense univariate polynomials with integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::interval::{ComplexBox, Dyadic, Interval};
use crate::rational::GaussianRational;

/// Coefficients from low to high degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigInt) -> IntPoly {
        IntPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> IntPoly {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `p(-x)`
    pub fn reflect(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Integer polynomial vanishing at `q * r` for every root `r` (q != 0).
    pub fn scale_roots(&self, q: &BigRational) -> IntPoly {
        // p(x / q) * num^d, with q = num/den: sum c_i x^i den^i num^(d-i)
        let d = self.degree();
        let (num, den) = (q.numer(), q.denom());
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * num_traits::pow(den.clone(), i) * num_traits::pow(num.clone(), d - i))
                .collect(),
        )
        .primitive()
    }

    /// Integer polynomial vanishing at `r + q` for every root `r`.
    pub fn shift_roots(&self, q: &BigRational) -> IntPoly {
        // p(x - q) with q = n/m, cleared by m^d: work with P(y) = m^d p(y/m), y = m x - n.
        let d = self.degree();
        let (n, m) = (q.numer(), q.denom());
        // Coefficients of m^d p(y/m) in y.
        let scaled: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(m.clone(), d - i))
            .collect();
        // Substitute y = m x - n via Horner.
        let lin = IntPoly::new(vec![-n.clone(), m.clone()]);
        let mut acc = IntPoly::zero();
        for c in scaled.iter().rev() {
            acc = acc.mul(&lin).add(&IntPoly::constant(c.clone()));
        }
        acc.primitive()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_gaussian(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &GaussianRational::from_bigint(c.clone());
        }
        acc
    }

    /// Horner enclosure over a complex box.
    pub fn eval_box(&self, z: &ComplexBox, prec: u32) -> ComplexBox {
        let mut acc = ComplexBox::zero();
        let real_arg = z.im.is_point() && z.im.lo().is_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z, prec);
            acc.re = acc.re.add(&Interval::from_int(c), prec);
            if real_arg {
                acc.im = Interval::zero();
            }
        }
        acc
    }

    /// Centered-form enclosure `p(c) + p'(Z)(Z - c)`, usually much tighter than Horner.
    pub fn eval_box_centered(&self, z: &ComplexBox, dp: &IntPoly, prec: u32) -> ComplexBox {
        let c = z.mid_box();
        let pc = self.eval_box(&c, prec);
        let dz = dp.eval_box(z, prec);
        let h = z.sub(&c, prec);
        let centered = pc.add(&dz.mul(&h, prec), prec);
        let horner = self.eval_box(z, prec);
        centered.intersect(&horner).unwrap_or(centered)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        assert!(!b.is_zero());
        let mut r = self.clone();
        let db = b.degree();
        let lb = b.lc();
        while !r.is_zero() && r.degree() >= db {
            let k = r.degree() - db;
            let lr = r.lc();
            let mut shifted = vec![BigInt::zero(); k];
            shifted.extend(b.coeffs.iter().map(|c| c * &lr));
            r = r.scale(&lb).sub(&IntPoly::new(shifted));
        }
        r
    }

    /// Exact division; `None` when `other` does not divide `self` over the integers.
    pub fn div_exact(&self, other: &IntPoly) -> Option<IntPoly> {
        assert!(!other.is_zero());
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < other.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let db = other.degree();
        let lb = other.lc();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for k in (0..q.len()).rev() {
            let top = r[k + db].clone();
            if top.is_zero() {
                continue;
            }
            let (qk, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in other.coeffs.iter().enumerate() {
                r[k + j] -= &qk * c;
            }
            q[k] = qk;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Primitive greatest common divisor.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree() <= 1 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive();
        }
        self.primitive()
            .div_exact(&g)
            .expect("gcd divides polynomial")
            .primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.degree() <= 1 || self.gcd(&self.derivative()).degree() == 0
    }

    /// Cauchy bound: every root has modulus below the returned value.
    pub fn cauchy_bound(&self) -> BigRational {
        let lc = self.lc().abs();
        let m = self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigRational::one() + BigRational::new(m, lc)
    }

    /// `log2` of Mahler's lower bound on the minimal distance between distinct roots
    /// of a squarefree polynomial: `sqrt(3) d^(-(d+2)/2) ||p||_2^(1-d)`. Returned
    /// rounded down, so `2^bound` is itself a valid separation bound.
    pub fn separation_bound_log2(&self) -> i64 {
        let d = self.degree() as f64;
        if d < 2.0 {
            return i64::MAX;
        }
        let norm2: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        // log2 ||p||_2 rounded up
        let ln = (norm2.bits() as f64) / 2.0 + 1.0;
        let v = 0.5 * 3f64.log2() - (d + 2.0) / 2.0 * d.log2() - (d - 1.0) * ln;
        v.floor() as i64 - 1
    }
}

impl fmt::Display for IntPoly {
    /// `x^2 - 2`, `3x^4 + x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 {
                String::new()
            } else {
                a.to_string()
            };
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Fraction-free (Bareiss) determinant.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let (m, n) = (a.degree(), b.degree());
    if m == 0 {
        return num_traits::pow(a.lc(), n);
    }
    if n == 0 {
        return num_traits::pow(b.lc(), m);
    }
    let size = m + n;
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (i, c) in a.coeffs.iter().rev().enumerate() {
            rows[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.coeffs.iter().rev().enumerate() {
            rows[n + r][r + i] = c.clone();
        }
    }
    det_bareiss(rows)
}

/// Newton interpolation through `(x_i, y_i)`; result must have integer coefficients.
pub fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Result<IntPoly> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let denom = BigRational::from_integer(&xs[i] - &xs[i - j]);
            dd[i] = (&dd[i] - &dd[i - 1]) / denom;
        }
    }
    // Expand Newton form.
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // acc = acc * (x - x_i) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for (k, c) in acc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += c;
            }
            next[k] -= c * BigRational::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        acc = next;
    }
    let mut out = Vec::with_capacity(n);
    for c in acc {
        if !c.is_integer() {
            return Err(Error::Internal("interpolated resultant is not integral".into()));
        }
        out.push(c.to_integer());
    }
    Ok(IntPoly::new(out))
}

/// Maximal resultant degree accepted by the composition routines.
pub const MAX_DEGREE: usize = 4096;

fn compose_resultant(
    p: &IntPoly,
    q: &IntPoly,
    inner: impl Fn(&BigInt) -> IntPoly,
) -> Result<IntPoly> {
    let d = p.degree() * q.degree();
    if d > MAX_DEGREE {
        return Err(Error::DegreeOverflow(d));
    }
    let xs: Vec<BigInt> = (0..=d as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs.iter().map(|x| resultant(p, &inner(x))).collect();
    interpolate_integer(&xs, &ys)
}

/// Polynomial whose roots are all sums `a + b` of roots of `p` and `q`.
pub fn sum_poly(p: &IntPoly, q: &IntPoly) -> Result<IntPoly> {
    // Res_y(p(y), q(x - y))
    compose_resultant(p, q, |x| {
        let lin = IntPoly::new(vec![x.clone(), BigInt::from(-1)]);
        let mut acc = IntPoly::zero();
        for c in q.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&IntPoly::constant(c.clone()));
        }
        acc
    })
}

/// Polynomial whose roots are all products `a b` of roots of `p` and `q`.
pub fn product_poly(p: &IntPoly, q: &IntPoly) -> Result<IntPoly> {
    // Res_y(p(y), y^deg q * q(x / y))
    let dq = q.degree();
    compose_resultant(p, q, |x| {
        let mut c = vec![BigInt::zero(); dq + 1];
        for (k, qk) in q.coeffs.iter().enumerate() {
            c[dq - k] = qk * num_traits::pow(x.clone(), k);
        }
        IntPoly::new(c)
    })
}

/// Is `x` a root of `p`, and is `p` the zero polynomial at `x` over dyadics.
pub fn vanishes_at_dyadic(p: &IntPoly, re: &Dyadic, im: &Dyadic) -> bool {
    p.eval_gaussian(&GaussianRational::new(re.to_rational(), im.to_rational()))
        .is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+2)
        let a = p(&[1, -2, 1]).mul(&p(&[2, 1]));
        assert_eq!(a.squarefree_part(), p(&[-1, 1]).mul(&p(&[2, 1])).primitive());
        assert!(!a.is_squarefree());
        let g = p(&[-4, 0, 0, 0, 1]).gcd(&p(&[-2, 0, 1]));
        assert_eq!(g, p(&[-2, 0, 1]));
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - 2, x - 5) = 2 - 5 up to sign convention; here det [[1,-2],[1,-5]] = -3
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-5, 1])).abs(), BigInt::from(3));
        assert!(resultant(&p(&[-2, 0, 1]), &p(&[-4, 0, 0, 0, 1])).is_zero());
    }

    #[test]
    fn sum_of_square_roots() {
        // sqrt2 + sqrt3 satisfies x^4 - 10x^2 + 1
        let s = sum_poly(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap();
        assert_eq!(s.squarefree_part(), p(&[1, 0, -10, 0, 1]));
    }

    #[test]
    fn product_of_roots() {
        // sqrt2 * sqrt3 roots of x^2 - 6 (with multiplicity)
        let s = product_poly(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap();
        assert_eq!(s.squarefree_part(), p(&[-6, 0, 1]));
    }

    #[test]
    fn shift_and_scale() {
        // roots of x^2 - 2 shifted by 1/2: (x - 1/2)^2 - 2 = x^2 - x - 7/4 -> 4x^2 - 4x - 7
        let q = BigRational::new(1.into(), 2.into());
        assert_eq!(p(&[-2, 0, 1]).shift_roots(&q), p(&[-7, -4, 4]));
        // roots scaled by 3: x^2 - 18
        let t = BigRational::from_integer(3.into());
        assert_eq!(p(&[-2, 0, 1]).scale_roots(&t), p(&[-18, 0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-4, 0, 0, 0, 1]).to_string(), "x^4 - 4");
        assert_eq!(p(&[1, -1, 3]).to_string(), "3x^2 - x + 1");
    }
}
