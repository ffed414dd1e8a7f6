//! Small nonzero group elements and integer relation search, both driven by
//! LLL on `[e_j | round(C Re v_j) | round(C Im v_j)]`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::element::{Element, TriBool};
use crate::error::{Error, Result};
use crate::group::FGGroup;
use crate::interval::{ComplexBox, Dyadic, Interval};
use crate::lattice::{self, IntVec};
use crate::rational::Rational;
use crate::symbol::Bindings;

/// Scale guard between working precision and the scale factor.
const GUARD_BITS: i64 = 32;
/// Largest scale exponent tried by [`small_element`].
const MAX_SCALE_BITS: i64 = 4096;

#[derive(Clone, Debug)]
pub struct RelationSearchReport {
    /// Height bound that was asked for.
    pub height: BigInt,
    /// No relation with entries at most this large exists. Equal to `height`
    /// unless the precision was too low to exclude the full range.
    pub excluded_height: BigInt,
    pub precision_bits: u32,
    pub relation: Option<Vec<BigInt>>,
    /// The relation was replayed symbolically.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct SmallElement {
    pub element: Element,
    pub coeffs: Vec<BigInt>,
    pub enclosure: ComplexBox,
    /// Enclosure of `|value|`.
    pub abs: Interval,
    pub precision_bits: u32,
}

struct Scaled {
    rows: Vec<IntVec>,
    /// Bound on `|round(C v_j) - C v_j|` per value column.
    err: Rational,
    value_cols: usize,
}

fn scaled_rows(boxes: &[ComplexBox], cbits: i64) -> Scaled {
    let k = boxes.len();
    let real = boxes.iter().all(|b| b.im.lo().is_zero() && b.im.hi().is_zero());
    let mut maxrad = Dyadic::zero();
    let rows = boxes
        .iter()
        .enumerate()
        .map(|(j, b)| {
            maxrad = maxrad.greater(&b.re.rad()).greater(&b.im.rad());
            let mut row: IntVec = (0..k).map(|i| BigInt::from((i == j) as i64)).collect();
            row.push(b.re.mid().shl(cbits).round_nearest());
            if !real {
                row.push(b.im.mid().shl(cbits).round_nearest());
            }
            row
        })
        .collect();
    Scaled {
        rows,
        err: Rational::new(BigInt::one(), BigInt::from(2)) + maxrad.shl(cbits).to_rational(),
        value_cols: if real { 1 } else { 2 },
    }
}

fn magnitude_bits(boxes: &[ComplexBox]) -> i64 {
    boxes
        .iter()
        .map(|b| {
            let m = b.re.mag().greater(&b.im.mag());
            if m.is_zero() {
                0
            } else {
                m.msb().max(0)
            }
        })
        .max()
        .unwrap_or(0)
}

fn normalize_sign(m: &mut [BigInt]) {
    if m.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        m.iter_mut().for_each(|x| *x = -&*x);
    }
}

/// Largest integer `h` with `h^2 < x`, for `x > 0`.
fn strict_isqrt(x: &Rational) -> BigInt {
    let n = x.floor().to_integer();
    if x.is_integer() {
        if n.is_positive() {
            (n - 1u32).sqrt()
        } else {
            BigInt::zero()
        }
    } else {
        n.max(BigInt::zero()).sqrt()
    }
}

pub fn relation_search(values: &[Element], height: &BigInt, bits: u32) -> RelationSearchReport {
    relation_search_with(values, height, bits, &Bindings::new())
}

/// Looks for `m` with `sum m_j v_j = 0` and `|m_j| <= height`.
///
/// A reported relation always has an enclosure containing zero; it is
/// certified only when the exact zero test agrees. When nothing is found the
/// report carries a height below which relations are provably absent.
pub fn relation_search_with(values: &[Element], height: &BigInt, bits: u32, bindings: &Bindings) -> RelationSearchReport {
    let k = values.len();
    let mut report = RelationSearchReport {
        height: height.clone(),
        excluded_height: height.clone(),
        precision_bits: bits,
        relation: None,
        certified: false,
    };
    if k == 0 {
        return report;
    }
    for (j, v) in values.iter().enumerate() {
        if v.is_zero().is_true() {
            report.relation = Some((0..k).map(|i| BigInt::from((i == j) as i64)).collect());
            report.certified = true;
            report.excluded_height = BigInt::zero();
            return report;
        }
    }
    let boxes: Option<Vec<ComplexBox>> = values.iter().map(|v| v.eval(bits, bindings).ok()).collect();
    let Some(boxes) = boxes else {
        return formal_relation(values, report);
    };
    let cbits = (bits as i64 - GUARD_BITS - magnitude_bits(&boxes)).max(8);
    let scaled = scaled_rows(&boxes, cbits);
    let Some(reduced) = lattice::lll(&scaled.rows) else {
        report.excluded_height = BigInt::zero();
        return report;
    };
    let mut rows = reduced.basis.clone();
    rows.sort_by_key(|r| lattice::height(&r[..k]));
    for row in &rows {
        let mut m = row[..k].to_vec();
        if &lattice::height(&m) > height {
            break;
        }
        let Ok(x) = Element::combination(values, &m) else { continue };
        let Ok(b) = x.eval(bits, bindings) else { continue };
        if !b.contains_zero() {
            continue;
        }
        let certified = match x.is_zero() {
            TriBool::True => true,
            TriBool::False => continue,
            TriBool::Unknown(_) => false,
        };
        normalize_sign(&mut m);
        report.relation = Some(m);
        report.certified = certified;
        report.excluded_height = BigInt::zero();
        return report;
    }
    // A relation m of height H gives a lattice vector of squared length at
    // most k H^2 + cols (k H err)^2, which must reach the first minimum.
    let kq = Rational::from_integer(BigInt::from(k));
    let cols = Rational::from_integer(BigInt::from(scaled.value_cols));
    let denom = &kq + cols * &kq * &kq * &scaled.err * &scaled.err;
    let bound = strict_isqrt(&(reduced.min_gs_norm_sqr() / denom));
    report.excluded_height = bound.min(height.clone());
    report
}

/// Exact relation search on formal coordinates, for values without numeric
/// bindings.
fn formal_relation(values: &[Element], mut report: RelationSearchReport) -> RelationSearchReport {
    report.precision_bits = 0;
    report.excluded_height = BigInt::zero();
    let Ok(g) = FGGroup::new(values.to_vec()) else { return report };
    if !g.is_complete() {
        return report;
    }
    if g.symbol_kernel().is_empty() {
        report.excluded_height = report.height.clone();
        return report;
    }
    let found = g
        .symbol_kernel()
        .iter()
        .zip(g.kernel_values())
        .filter(|(_, v)| v.is_zero())
        .map(|(k, _)| k.clone())
        .min_by_key(|k| lattice::height(k));
    if let Some(mut m) = found {
        if lattice::height(&m) <= report.height {
            normalize_sign(&mut m);
            report.relation = Some(m);
            report.certified = true;
        }
    }
    report
}

fn log2_ceil_recip(eps: &Rational) -> i64 {
    let r = (Rational::one() / eps).ceil().to_integer();
    r.bits() as i64
}

fn certified_nonzero(x: &Element, b: &ComplexBox) -> bool {
    match x.is_zero() {
        TriBool::False => true,
        TriBool::True => false,
        TriBool::Unknown(_) => b.excludes_zero(),
    }
}

fn check_candidate(
    g: &FGGroup,
    m: &[BigInt],
    eps: &Rational,
    prec: u32,
    bindings: &Bindings,
) -> Result<Option<SmallElement>> {
    let x = Element::combination(g.gens(), m)?;
    if x.is_trivially_zero() {
        return Ok(None);
    }
    let b = x.eval(prec, bindings)?;
    let abs = b.abs(prec);
    if abs.hi().to_rational() >= *eps || !certified_nonzero(&x, &b) {
        return Ok(None);
    }
    let positive = b.re.is_positive() || (b.re.contains_zero() && b.im.is_positive());
    let negative = b.re.is_negative() || (b.re.contains_zero() && b.im.is_negative());
    let flip = if positive || negative {
        negative
    } else {
        m.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative())
    };
    Ok(Some(if flip {
        SmallElement {
            element: x.neg(),
            coeffs: m.iter().map(|c| -c).collect(),
            enclosure: b.neg(),
            abs,
            precision_bits: prec,
        }
    } else {
        SmallElement {
            element: x,
            coeffs: m.to_vec(),
            enclosure: b,
            abs,
            precision_bits: prec,
        }
    }))
}

fn better(a: &SmallElement, b: &SmallElement) -> bool {
    let (ha, hb) = (lattice::height(&a.coeffs), lattice::height(&b.coeffs));
    ha < hb || (ha == hb && a.abs.hi() < b.abs.hi())
}

/// A nonzero element of `G` with `|value| < eps` and coefficients at most
/// `height_cap`, among those the search reaches.
///
/// Failure means the budget ran out. It says nothing about discreteness.
pub fn small_element(g: &FGGroup, eps: &Rational, height_cap: u64, bindings: &Bindings) -> Result<SmallElement> {
    if !eps.is_positive() {
        return Err(Error::DomainError("eps must be positive".into()));
    }
    let k = g.len();
    let cap = BigInt::from(height_cap);
    let c0 = log2_ceil_recip(eps) + 2;
    let mut best: Option<SmallElement> = None;
    for j in 0..k {
        let m: IntVec = (0..k).map(|i| BigInt::from((i == j) as i64)).collect();
        if let Some(s) = check_candidate(g, &m, eps, (c0 + 64) as u32, bindings)? {
            if best.as_ref().is_none_or(|b| better(&s, b)) {
                best = Some(s);
            }
        }
    }
    if let Some(b) = best {
        return Ok(b);
    }
    if k < 2 {
        return Err(Error::SearchExhausted(height_cap));
    }
    let coarse: Vec<ComplexBox> = g.gens().iter().map(|x| x.eval(64, bindings)).collect::<Result<_>>()?;
    let mag = magnitude_bits(&coarse);
    let mut c = c0;
    while c <= MAX_SCALE_BITS {
        let prec = (c + mag + 64) as u32;
        let boxes: Vec<ComplexBox> = g.gens().iter().map(|x| x.eval(prec, bindings)).collect::<Result<_>>()?;
        let scaled = scaled_rows(&boxes, c);
        let Some(reduced) = lattice::lll(&scaled.rows) else {
            return Err(Error::Internal("scaled generator rows are dependent".into()));
        };
        let basis: Vec<IntVec> = reduced.basis.iter().map(|r| r[..k].to_vec()).collect();
        let mut candidates: BTreeSet<IntVec> = BTreeSet::new();
        for m in &basis {
            candidates.insert(m.clone());
        }
        let head = &basis[..basis.len().min(6)];
        for (i, a) in head.iter().enumerate() {
            for b in &head[i + 1..] {
                candidates.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
                candidates.insert(a.iter().zip(b).map(|(x, y)| x - y).collect());
            }
        }
        for m in candidates {
            if m.iter().all(|x| x.is_zero()) || lattice::height(&m) > cap {
                continue;
            }
            if let Some(s) = check_candidate(g, &m, eps, prec, bindings)? {
                if best.as_ref().is_none_or(|b| better(&s, b)) {
                    best = Some(s);
                }
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        if basis.iter().all(|m| lattice::height(m) > cap) {
            break;
        }
        c += (c / 2).max(16);
    }
    Err(Error::SearchExhausted(height_cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_generators;
    use crate::rational::rat;

    fn group(src: &str) -> FGGroup {
        FGGroup::new(parse_generators(src).unwrap()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn finds_log_relation() {
        let vals = parse_generators("log(2), log(3), log(6)").unwrap();
        // Canonicalization already splits log 6; relation search must still see it.
        let r = relation_search(&vals, &BigInt::from(10), 128);
        assert_eq!(r.relation, Some(ints(&[1, 1, -1])));
        assert!(r.certified);
    }

    #[test]
    fn excludes_relations_for_e_and_pi() {
        let vals = parse_generators("exp(1), pi").unwrap();
        let r = relation_search(&vals, &BigInt::from(1_000_000), 512);
        assert!(r.relation.is_none());
        assert_eq!(r.excluded_height, BigInt::from(1_000_000));
    }

    #[test]
    fn low_precision_weakens_the_bound() {
        let vals = parse_generators("exp(1), pi").unwrap();
        let r = relation_search(&vals, &BigInt::from(1_000_000), 48);
        assert!(r.relation.is_none() || !r.certified);
        assert!(r.excluded_height < BigInt::from(1_000_000));
    }

    #[test]
    fn single_abstract_value_has_no_relation() {
        let vals = parse_generators("T").unwrap();
        let r = relation_search(&vals, &BigInt::from(100), 64);
        assert!(r.relation.is_none());
        assert_eq!(r.excluded_height, BigInt::from(100));
    }

    #[test]
    fn small_element_log_pair() {
        let g = group("log(2), log(3)");
        let s = small_element(&g, &rat(1, 50), 1_000_000, &Bindings::new()).unwrap();
        assert_eq!(s.coeffs, ints(&[-19, 12]));
        assert!(s.abs.hi().to_f64() < 0.0136 && s.abs.lo().to_f64() > 0.0135);
    }

    #[test]
    fn small_generator_wins() {
        let g = group("log(101/100), log(2)");
        let s = small_element(&g, &rat(1, 100), 1000, &Bindings::new()).unwrap();
        assert_eq!(s.coeffs, ints(&[1, 0]));
    }

    #[test]
    fn discrete_groups_exhaust() {
        let g = group("exp(1)");
        assert_eq!(
            small_element(&g, &rat(1, 10), 1000, &Bindings::new()).unwrap_err(),
            Error::SearchExhausted(1000)
        );
        let g = group("exp(i), exp(2*i)");
        assert!(matches!(
            small_element(&g, &rat(1, 10), 1000, &Bindings::new()),
            Err(Error::SearchExhausted(1000))
        ));
    }
}
