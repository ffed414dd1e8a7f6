//! Exhaustive reference searches over coefficient boxes `|m_j| <= M`.
//!
//! Deliberately naive and independent of the lattice code: coordinates come
//! straight from canonical elements, and values from interval evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::FGGroup;
use crate::interval::{ComplexBox, Dyadic, Interval};
use crate::rational::Rational;
use crate::symbol::{Bindings, Family, Symbol};

/// Largest `k (2M+1)^k` accepted.
pub const BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteMembership {
    Yes(Vec<BigInt>),
    NotFoundUpTo(u64),
}

fn check_budget(k: usize, m: u64) -> Result<()> {
    let side = 2 * m as u128 + 1;
    let total = side.checked_pow(k as u32).and_then(|n| n.checked_mul(k as u128));
    match total {
        Some(n) if n <= BUDGET => Ok(()),
        Some(n) => Err(Error::BudgetExceeded(n)),
        None => Err(Error::BudgetExceeded(u128::MAX)),
    }
}

/// Integer coordinates of generators (and an optional target), one row each.
struct Frame {
    rows: Vec<Vec<i128>>,
    target: Vec<i128>,
    /// Algebraic parts are not all Gaussian, so zero coordinates do not
    /// settle equality and an exact replay is needed.
    replay_alg: bool,
    /// Coordinates are faithful: one concrete family at most, no `log` of an
    /// irrational argument.
    faithful: bool,
}

fn frame(gens: &[Element], x: Option<&Element>) -> Result<Frame> {
    let all: Vec<&Element> = gens.iter().chain(x).collect();
    let mut symbols: Vec<Symbol> = Vec::new();
    for e in &all {
        for (s, _) in e.terms() {
            if !symbols.contains(s) {
                symbols.push(s.clone());
            }
        }
    }
    let gaussian = all.iter().all(|e| e.alg().as_gaussian().is_some());
    let coords = |e: &Element| -> Vec<Rational> {
        let mut row = Vec::new();
        for s in &symbols {
            let c = e.coefficient(s);
            row.push(c.re);
            row.push(c.im);
        }
        if gaussian {
            let g = e.alg().as_gaussian().expect("checked gaussian");
            row.push(g.re.clone());
            row.push(g.im.clone());
        }
        row
    };
    let raw: Vec<Vec<Rational>> = all.iter().map(|e| coords(e)).collect();
    let ncols = raw.first().map_or(0, |r| r.len());
    let mut scale = vec![BigInt::one(); ncols];
    for row in &raw {
        for (s, q) in scale.iter_mut().zip(row) {
            *s = s.lcm(q.denom());
        }
    }
    let to_int = |row: &Vec<Rational>| -> Result<Vec<i128>> {
        row.iter()
            .zip(&scale)
            .map(|(q, s)| {
                (q * Rational::from_integer(s.clone()))
                    .to_integer()
                    .to_i128()
                    .filter(|v| v.abs() < 1i128 << 80)
                    .ok_or_else(|| Error::Unsupported("coordinates too large for enumeration".into()))
            })
            .collect()
    };
    let mut rows = raw.iter().map(to_int).collect::<Result<Vec<_>>>()?;
    let target = match x {
        Some(_) => rows.pop().expect("target row"),
        None => vec![0; ncols],
    };
    let mut concrete: Option<Family> = None;
    let mut faithful = true;
    for e in &all {
        for (s, _) in e.terms() {
            if s.is_log_alg() {
                faithful = false;
            }
            let f = s.family();
            if matches!(f, Family::Abstract(_)) {
                continue;
            }
            match &concrete {
                None => concrete = Some(f),
                Some(g) if *g != f => faithful = false,
                _ => {}
            }
        }
    }
    Ok(Frame {
        rows,
        target,
        replay_alg: !gaussian,
        faithful,
    })
}

fn to_big(m: &[i64]) -> Vec<BigInt> {
    m.iter().map(|&v| BigInt::from(v)).collect()
}

/// Searches `m` with `|m_j| <= bound` and `sum m_j g_j = x`.
///
/// Enumerates all coordinates but one and solves the last: exactly from the
/// symbol coordinates when it has any, otherwise by rounding the algebraic
/// residual. Non-Gaussian algebraic parts are screened by interval
/// enclosures and then replayed exactly.
pub fn brute_member(g: &FGGroup, x: &Element, bound: u64) -> Result<BruteMembership> {
    let gens = g.gens();
    let k = gens.len();
    check_budget(k, bound)?;
    let f = frame(gens, Some(x))?;
    let ncols = f.target.len();
    let b = bound as i64;
    const WP: u32 = 160;
    let alg: Vec<ComplexBox> = gens.iter().map(|y| y.alg().enclosure(WP)).collect();
    let exact_pivot = (0..k).rev().find(|&j| f.rows[j].iter().any(|&v| v != 0));
    let solve = exact_pivot.or_else(|| {
        if f.replay_alg {
            (0..k).rev().find(|&j| alg[j].excludes_zero())
        } else {
            None
        }
    });
    let free: Vec<usize> = (0..k).filter(|&j| Some(j) != solve).collect();
    let pivot_col = exact_pivot.map(|p| f.rows[p].iter().position(|&v| v != 0).expect("nonzero row"));

    let mut m = vec![0i64; k];
    let mut residual = f.target.clone();
    let mut alg_res = x.alg().enclosure(WP);
    for &j in &free {
        m[j] = -b;
        for c in 0..ncols {
            residual[c] += b as i128 * f.rows[j][c];
        }
        alg_res = alg_res.add(&alg[j].mul_int(&BigInt::from(b), WP), WP);
    }
    let fits = |q: i128| q.abs() <= b as i128;
    loop {
        let q = match (solve, pivot_col) {
            (Some(p), Some(c0)) => {
                let gp = &f.rows[p];
                let r = residual[c0];
                (r % gp[c0] == 0)
                    .then(|| r / gp[c0])
                    .filter(|&q| fits(q) && (0..ncols).all(|c| residual[c] == q * gp[c]))
            }
            (Some(p), None) => {
                // Real part of alg_res / alg_p, rounded.
                let (rr, ri) = (alg_res.re.to_f64(), alg_res.im.to_f64());
                let (pr, pi) = (alg[p].re.to_f64(), alg[p].im.to_f64());
                let t = (rr * pr + ri * pi) / (pr * pr + pi * pi);
                Some(t.round() as i128).filter(|&q| fits(q) && residual.iter().all(|&v| v == 0))
            }
            _ => residual.iter().all(|&v| v == 0).then_some(0),
        };
        if let Some(q) = q {
            if let Some(p) = solve {
                m[p] = q as i64;
            }
            let plausible = !f.replay_alg || {
                let shift = solve.map_or(ComplexBox::zero(), |p| alg[p].mul_int(&BigInt::from(q), WP));
                alg_res.sub(&shift, WP).contains_zero()
            };
            if plausible {
                let mb = to_big(&m);
                if !f.replay_alg || Element::combination(gens, &mb)?.equals(x) {
                    return Ok(BruteMembership::Yes(mb));
                }
            }
        }
        // Odometer step over the free coordinates.
        let mut i = 0;
        while i < free.len() {
            let j = free[i];
            if m[j] < b {
                m[j] += 1;
                for c in 0..ncols {
                    residual[c] -= f.rows[j][c];
                }
                if f.replay_alg {
                    alg_res = alg_res.sub(&alg[j], WP);
                }
                break;
            }
            m[j] = -b;
            for c in 0..ncols {
                residual[c] += 2 * b as i128 * f.rows[j][c];
            }
            if f.replay_alg {
                alg_res = alg_res.add(&alg[j].mul_int(&BigInt::from(2 * b), WP), WP);
            }
            i += 1;
        }
        if i == free.len() {
            return Ok(BruteMembership::NotFoundUpTo(bound));
        }
    }
}

/// Visits every nonzero `m` in the box with the enclosure of `|sum m_j g_j|`,
/// skipping combinations that are exactly zero or not certainly nonzero.
fn enumerate_nonzero(
    g: &FGGroup,
    bound: u64,
    prec: u32,
    bindings: &Bindings,
    mut visit: impl FnMut(&[i64], &ComplexBox, Interval),
) -> Result<()> {
    let gens = g.gens();
    let k = gens.len();
    check_budget(k, bound)?;
    let f = frame(gens, None)?;
    let ncols = f.target.len();
    let boxes: Vec<ComplexBox> = gens.iter().map(|x| x.eval(prec + 16, bindings)).collect::<Result<_>>()?;
    let b = bound as i64;
    let mut m = vec![-b; k];
    let mut acc = ComplexBox::zero();
    let mut coords = vec![0i128; ncols];
    let two_b = BigInt::from(2 * b);
    let wp = prec + 32;
    for (j, v) in boxes.iter().enumerate() {
        acc = acc.sub(&v.mul_int(&BigInt::from(b), wp), wp);
        for c in 0..ncols {
            coords[c] -= b as i128 * f.rows[j][c];
        }
    }
    loop {
        if m.iter().any(|&v| v != 0) {
            let formally_zero = coords.iter().all(|&v| v == 0)
                && (!f.replay_alg || Element::combination(gens, &to_big(&m))?.is_trivially_zero());
            if !formally_zero && (f.faithful || acc.excludes_zero()) {
                visit(&m, &acc, acc.abs(prec));
            }
        }
        let mut i = 0;
        while i < k {
            if m[i] < b {
                m[i] += 1;
                acc = acc.add(&boxes[i], wp);
                for c in 0..ncols {
                    coords[c] += f.rows[i][c];
                }
                break;
            }
            m[i] = -b;
            acc = acc.sub(&boxes[i].mul_int(&two_b, wp), wp);
            for c in 0..ncols {
                coords[c] -= 2 * b as i128 * f.rows[i][c];
            }
            i += 1;
        }
        if i == k {
            return Ok(());
        }
    }
}

/// Shortest nonzero combination in the box, with an enclosure of the
/// minimum. Ties go to the lexicographically largest coefficient vector.
pub fn brute_min_norm(g: &FGGroup, bound: u64, prec: u32, bindings: &Bindings) -> Result<(Vec<BigInt>, Interval)> {
    let mut best_hi: Option<Dyadic> = None;
    let mut pool: Vec<(Vec<i64>, Interval)> = Vec::new();
    enumerate_nonzero(g, bound, prec, bindings, |m, _, a| {
        if best_hi.as_ref().is_some_and(|h| a.lo() > h) {
            return;
        }
        if best_hi.as_ref().is_none_or(|h| a.hi() < h) {
            best_hi = Some(a.hi().clone());
            let h = a.hi().clone();
            pool.retain(|(_, b)| b.lo() <= &h);
        }
        pool.push((m.to_vec(), a));
    })?;
    let Some(hi) = best_hi else {
        return Err(Error::DomainError("no nonzero element in the box".into()));
    };
    let lo = pool.iter().map(|(_, a)| a.lo().clone()).reduce(|x, y| x.lesser(&y)).expect("nonempty pool");
    let (m, _) = pool.iter().max_by(|a, b| a.0.cmp(&b.0)).expect("nonempty pool");
    Ok((to_big(m), Interval::new(lo, hi)))
}

/// A certified nonzero combination with `|value| < eps`: least height first,
/// then smallest value, then a value pointing right (or up).
pub fn brute_small(
    g: &FGGroup,
    eps: &Rational,
    bound: u64,
    prec: u32,
    bindings: &Bindings,
) -> Result<Option<(Vec<BigInt>, Interval)>> {
    let mut best: Option<(i64, Dyadic, bool, Vec<i64>, Interval)> = None;
    enumerate_nonzero(g, bound, prec, bindings, |m, v, a| {
        if a.hi().to_rational() >= *eps {
            return;
        }
        let h = m.iter().map(|x| x.abs()).max().unwrap_or(0);
        let pointing = v.re.is_positive() || (v.re.contains_zero() && v.im.is_positive());
        let key = (h, a.mid(), !pointing);
        let better = match &best {
            None => true,
            Some((bh, bm, bp, _, _)) => key < (*bh, bm.clone(), *bp),
        };
        if better {
            best = Some((key.0, key.1, key.2, m.to_vec(), a));
        }
    })?;
    Ok(best.map(|(_, _, _, m, a)| (to_big(&m), a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_generators};
    use crate::rational::rat;
    use crate::symbol::Binding;

    fn group(src: &str) -> FGGroup {
        FGGroup::new(parse_generators(src).unwrap()).unwrap()
    }

    #[test]
    fn member_rational_multiples() {
        let g = group("1/2*T, 3/5*T");
        let x = parse_element("1/10*T").unwrap();
        match brute_member(&g, &x, 10).unwrap() {
            BruteMembership::Yes(m) => assert_eq!(Element::combination(g.gens(), &m).unwrap(), x),
            other => panic!("{other:?}"),
        }
        let y = parse_element("1/20*T").unwrap();
        assert_eq!(brute_member(&g, &y, 10).unwrap(), BruteMembership::NotFoundUpTo(10));
    }

    #[test]
    fn member_needs_replay_for_surds() {
        let g = group("sqrt(2), exp(1)");
        let x = parse_element("3*sqrt(2) - exp(1)").unwrap();
        assert_eq!(
            brute_member(&g, &x, 5).unwrap(),
            BruteMembership::Yes(vec![BigInt::from(3), BigInt::from(-1)])
        );
    }

    #[test]
    fn budget_guard() {
        let g = group("exp(1), exp(2), exp(3), exp(4), exp(5)");
        assert!(matches!(brute_member(&g, &Element::zero(), 100), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn pair_min_norm() {
        let b = Bindings::new().with("T", Binding::E);
        let (m, iv) = brute_min_norm(&FGGroup::pair_group("T"), 30, 128, &b).unwrap();
        assert_eq!(m, vec![BigInt::from(1), BigInt::from(0)]);
        assert!(iv.intersects(&crate::interval::e_const(128)));
    }

    #[test]
    fn small_log_combination() {
        let (m, iv) = brute_small(&group("log(2), log(3)"), &rat(1, 50), 25, 128, &Bindings::new())
            .unwrap()
            .unwrap();
        assert_eq!(m, vec![BigInt::from(-19), BigInt::from(12)]);
        assert!((iv.mid().to_f64() - 0.013_551_3).abs() < 1e-6);
    }
}
