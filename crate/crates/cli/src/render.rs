//! JSON rendering of library results.

use num_bigint::BigInt;
use serde_json::{json, Value};
use tgroups::interval::{ComplexBox, Interval};
use tgroups::parse::{format_algebraic, format_element};
use tgroups::{Evidence, Rank, Rational, SmallElement, SpanDim};

/// Digits after the decimal point in enclosure endpoints.
const DIGITS: usize = 40;

pub fn int(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn decimal(q: &Rational, up: bool) -> String {
    let scale = Rational::from_integer(BigInt::from(10).pow(DIGITS as u32));
    let s = q * &scale;
    let n = if up { s.ceil() } else { s.floor() }.to_integer();
    let neg = n < BigInt::from(0);
    let digits = format!("{:0>width$}", n.magnitude().to_string(), width = DIGITS + 1);
    let (head, tail) = digits.split_at(digits.len() - DIGITS);
    let tail = tail.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}")
    } else {
        format!("{sign}{head}.{tail}")
    }
}

/// `[lo, hi]` rounded outward to decimal strings.
pub fn interval(iv: &Interval) -> Value {
    json!([decimal(&iv.lo().to_rational(), false), decimal(&iv.hi().to_rational(), true)])
}

pub fn complex_box(b: &ComplexBox) -> Value {
    json!({ "re": interval(&b.re), "im": interval(&b.im) })
}

pub fn evidence(e: &Evidence) -> Value {
    json!({
        "reason": e.reason.tag(),
        "precision_bits": e.precision_bits,
        "no_relation_height": e.no_relation_height.as_ref().map(int),
        "enclosure": e.enclosure.as_ref().map(complex_box),
    })
}

pub fn small(s: &SmallElement) -> Value {
    json!({
        "element": format_element(&s.element),
        "coeffs": ints(&s.coeffs),
        "abs": interval(&s.abs),
        "value": complex_box(&s.enclosure),
    })
}

pub fn rank(r: &Rank) -> Value {
    match r {
        Rank::Exact(n) => json!({ "exact": n }),
        Rank::AtLeast { lower, upper, height } => json!({
            "lower": lower,
            "upper": upper,
            "no_relation_height": int(height),
        }),
    }
}

pub fn span(s: &SpanDim) -> Value {
    match s {
        SpanDim::Dim(d) => json!(d),
        SpanDim::Unknown(_) => json!("unknown"),
    }
}

pub fn algebraic(a: &tgroups::AlgebraicNumber) -> Value {
    json!(format_algebraic(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tgroups::rational::rat;

    #[test]
    fn outward_decimals() {
        assert_eq!(decimal(&rat(1, 3), false), "0.3333333333333333333333333333333333333333");
        assert_eq!(decimal(&rat(1, 3), true), "0.3333333333333333333333333333333333333334");
        assert_eq!(decimal(&rat(-1, 3), false), "-0.3333333333333333333333333333333333333334");
        assert_eq!(decimal(&rat(5, 2), true), "2.5");
        assert_eq!(decimal(&rat(-7, 1), true), "-7");
    }
}
