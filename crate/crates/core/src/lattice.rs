//! Integer lattice kernels: row Hermite normal form with transform, integer
//! solving, and integral LLL reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

pub type IntVec = Vec<BigInt>;

/// `H = U A` with `U` unimodular and `H` in row Hermite form.
#[derive(Clone, Debug)]
pub struct Hermite {
    /// Nonzero rows of `H`, one per pivot.
    pub h: Vec<IntVec>,
    /// Full transform; rows `rank..` span the left kernel of `A`.
    pub u: Vec<IntVec>,
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{m in Z^k : m A = 0}`.
    pub fn kernel(&self) -> Vec<IntVec> {
        self.u[self.rank()..].to_vec()
    }

    /// Some `m` with `m A = b`, or `None` if `b` is not in the row lattice.
    pub fn solve(&self, b: &[BigInt]) -> Option<IntVec> {
        let r = self.rank();
        let mut rest = b.to_vec();
        let mut y = vec![BigInt::zero(); r];
        for (j, &c) in self.pivots.iter().enumerate() {
            let (q, rem) = rest[c].div_rem(&self.h[j][c]);
            if !rem.is_zero() {
                return None;
            }
            for (x, hv) in rest.iter_mut().zip(&self.h[j]) {
                *x -= &q * hv;
            }
            y[j] = q;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        let k = self.u.len();
        let mut m = vec![BigInt::zero(); k];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for (mi, ui) in m.iter_mut().zip(&self.u[j]) {
                *mi += yj * ui;
            }
        }
        Some(m)
    }
}

fn row_sub_mul(a: &mut [BigInt], b: &[BigInt], q: &BigInt) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= q * y;
    }
}

/// Row Hermite normal form of a `k x n` integer matrix.
pub fn hermite(a: &[IntVec], ncols: usize) -> Hermite {
    let k = a.len();
    let mut rows: Vec<IntVec> = a.to_vec();
    let mut u: Vec<IntVec> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == k {
            break;
        }
        loop {
            let best = (r..k)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
            let Some(p) = best else { break };
            rows.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..k {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                row_sub_mul(&mut tail[0], &head[r], &q);
                let (uh, ut) = u.split_at_mut(i);
                row_sub_mul(&mut ut[0], &uh[r], &q);
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            rows[r].iter_mut().for_each(|x| *x = -&*x);
            u[r].iter_mut().for_each(|x| *x = -&*x);
        }
        for i in 0..r {
            let q = rows[i][col].div_floor(&rows[r][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(r);
            row_sub_mul(&mut head[i], &tail[0], &q);
            let (uh, ut) = u.split_at_mut(r);
            row_sub_mul(&mut uh[i], &ut[0], &q);
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Hermite { h: rows, u, pivots }
}

/// Scales each column of a rational matrix (plus optional extra rows) to integers.
///
/// Returns the integer rows and the per-column multipliers.
pub fn clear_denominators(rows: &[Vec<Rational>], ncols: usize) -> (Vec<IntVec>, Vec<BigInt>) {
    let mut scale = vec![BigInt::one(); ncols];
    for row in rows {
        for (s, q) in scale.iter_mut().zip(row) {
            *s = s.lcm(q.denom());
        }
    }
    let out = rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&scale)
                .map(|(q, s)| (q * Rational::from_integer(s.clone())).to_integer())
                .collect()
        })
        .collect();
    (out, scale)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `n / d`, `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// Result of integral LLL.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub basis: Vec<IntVec>,
    /// `d_0 = 1, d_i = det(Gram of the first i vectors)`.
    pub d: Vec<BigInt>,
}

impl Reduced {
    /// `min_i |b_i*|^2` as a rational.
    pub fn min_gs_norm_sqr(&self) -> Rational {
        (1..self.d.len())
            .map(|i| Rational::new(self.d[i].clone(), self.d[i - 1].clone()))
            .min()
            .unwrap_or_else(Rational::zero)
    }
}

/// Integral LLL with `delta = 99/100` on linearly independent rows.
///
/// Returns `None` if the rows are dependent.
pub fn lll(basis: &[IntVec]) -> Option<Reduced> {
    let n = basis.len();
    if n == 0 {
        return Some(Reduced {
            basis: vec![],
            d: vec![BigInt::one()],
        });
    }
    // 1-indexed: b[1..=n], d[0..=n], lambda[k][j] for j < k.
    let mut b: Vec<IntVec> = std::iter::once(vec![]).chain(basis.iter().cloned()).collect();
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[1], &b[1]);
    if d[1].is_zero() {
        return None;
    }
    let (mut k, mut kmax) = (2usize, 1usize);
    let (p, q) = (BigInt::from(99), BigInt::from(100));

    let red = |k: usize, l: usize, b: &mut Vec<IntVec>, lam: &mut Vec<Vec<BigInt>>, d: &Vec<BigInt>| {
        if (&lam[k][l] * BigInt::from(2)).abs() > d[l] {
            let r = round_div(&lam[k][l], &d[l]);
            let bl = b[l].clone();
            row_sub_mul(&mut b[k], &bl, &r);
            lam[k][l] -= &r * &d[l];
            for i in 1..l {
                let t = &r * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return None;
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &mut lam, &d);
            let l2 = &lam[k][k - 1] * &lam[k][k - 1];
            if &q * (&d[k] * &d[k - 2] + &l2) < &p * &d[k - 1] * &d[k - 1] {
                // swap k, k-1
                b.swap(k, k - 1);
                for j in 1..k - 1 {
                    let t = lam[k][j].clone();
                    lam[k][j] = lam[k - 1][j].clone();
                    lam[k - 1][j] = t;
                }
                let la = lam[k][k - 1].clone();
                let bb = (&d[k - 2] * &d[k] + &la * &la) / &d[k - 1];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k] * &lam[i][k - 1] - &la * &t) / &d[k - 1];
                    lam[i][k - 1] = (&bb * &t + &la * &lam[i][k]) / &d[k];
                }
                d[k - 1] = bb;
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut b, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    b.remove(0);
    Some(Reduced { basis: b, d })
}

/// Infinity norm.
pub fn height(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<IntVec> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul_row(v: &[BigInt], a: &[IntVec]) -> IntVec {
        let n = a[0].len();
        (0..n).map(|c| v.iter().zip(a).map(|(x, r)| x * &r[c]).sum()).collect()
    }

    #[test]
    fn hermite_kernel_and_solve() {
        let a = m(&[&[2, 4], &[4, 8], &[1, 1]]);
        let h = hermite(&a, 2);
        assert_eq!(h.rank(), 2);
        let ker = h.kernel();
        assert_eq!(ker.len(), 1);
        assert!(mul_row(&ker[0], &a).iter().all(|x| x.is_zero()));
        let b: IntVec = vec![BigInt::from(3), BigInt::from(5)];
        let sol = h.solve(&b).unwrap();
        assert_eq!(mul_row(&sol, &a), b);
        assert!(h.solve(&[BigInt::from(1), BigInt::from(2)]).is_none());
    }

    #[test]
    fn hermite_is_unimodular_transform() {
        let a = m(&[&[5], &[6]]);
        let h = hermite(&a, 1);
        assert_eq!(h.h, m(&[&[1]]));
        for (row, urow) in h.h.iter().zip(&h.u) {
            assert_eq!(&mul_row(urow, &a), row);
        }
    }

    #[test]
    fn lll_finds_short_vector() {
        // Relation 12 log 3 - 19 log 2 ~ 0 shows up as a short row.
        let c = 1_000_000f64;
        let rows = m(&[
            &[1, 0, (c * 2f64.ln()).round() as i64],
            &[0, 1, (c * 3f64.ln()).round() as i64],
        ]);
        let r = lll(&rows).unwrap();
        let first = &r.basis[0];
        assert!(height(&first[..2]) <= BigInt::from(700));
        assert!(r.min_gs_norm_sqr() > Rational::zero());
    }

    #[test]
    fn lll_rejects_dependent_rows() {
        assert!(lll(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
