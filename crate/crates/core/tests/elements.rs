use num_bigint::BigInt;
use proptest::prelude::*;

use tgroups::parse::{format_element, parse_element};
use tgroups::{Atom, Bindings, Element, SymbolKind, Transcendence, TriBool};

/// Atoms whose families admit exact zero tests.
const COMPLETE: &[&str] = &["log(2)", "log(3)", "log(6)", "log(5/4)", "exp(1)", "exp(-1/2)", "exp(i)", "exp(sqrt(2))", "pi", "1", "i", "sqrt(2)"];

const MIXED: &[&str] = &["T", "T2", "log(sqrt(2))", "root(x^3 - 2; 1, 2, -1, 1)"];

fn pool(srcs: &[&str]) -> Vec<Element> {
    srcs.iter().map(|s| parse_element(s).unwrap()).collect()
}

fn combo(atoms: &[Element], coeffs: &[i64]) -> Element {
    let m: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    Element::combination(&atoms[..m.len()], &m).unwrap()
}

fn complete_element() -> impl Strategy<Value = Element> {
    prop::collection::vec(-3i64..=3, COMPLETE.len()).prop_map(|c| combo(&pool(COMPLETE), &c))
}

fn any_element() -> impl Strategy<Value = Element> {
    let all: Vec<&str> = COMPLETE.iter().chain(MIXED).copied().collect();
    prop::collection::vec(-3i64..=3, all.len()).prop_map(move |c| combo(&pool(&all), &c))
}

fn rebuild(x: &Element) -> Element {
    let atoms = x
        .terms()
        .iter()
        .map(|(s, c)| {
            let a = match s.kind() {
                SymbolKind::Exp(a) => Atom::Exp(a.clone()),
                SymbolKind::LogPrime(p) => Atom::Log(tgroups::AlgebraicNumber::from_rational(p.clone().into())),
                SymbolKind::LogAlg(a) => Atom::Log(a.clone()),
                SymbolKind::Pi => Atom::Pi,
                SymbolKind::Abstract(n) => Atom::Abstract(n.clone()),
            };
            (a, c.clone())
        })
        .collect();
    Element::make(x.alg().clone(), atoms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_idempotent(x in any_element()) {
        let y = rebuild(&x);
        prop_assert_eq!(format_element(&y), format_element(&x));
        prop_assert!(y.equals(&x));
    }

    #[test]
    fn printer_round_trips(x in any_element()) {
        let text = format_element(&x);
        let back = parse_element(&text).unwrap();
        prop_assert!(back.equals(&x), "{} reparsed as {}", text, format_element(&back));
    }

    #[test]
    fn torsion_free(x in any_element(), n in 1i64..=20) {
        let a = x.is_zero();
        let b = x.scale_int(&BigInt::from(n)).is_zero();
        prop_assert!(a.same_tag(&b), "{:?} vs {:?}", a, b);
    }

    #[test]
    fn zero_test_agrees_with_enclosures(x in complete_element()) {
        let b = Bindings::new();
        match x.is_zero() {
            TriBool::True => {
                for bits in [64u32, 256, 1024] {
                    prop_assert!(x.eval(bits, &b).unwrap().contains_zero());
                }
            }
            TriBool::False => {
                prop_assert!([64u32, 256, 1024].iter().any(|&bits| !x.eval(bits, &b).unwrap().contains_zero()));
            }
            TriBool::Unknown(_) => prop_assert!(false, "complete element undecided: {}", x),
        }
    }

    #[test]
    fn transcendence_verdicts_are_sound(x in any_element()) {
        match x.transcendence() {
            Transcendence::Certified => prop_assert!(x.is_zero().is_false()),
            Transcendence::RefutedAlgebraic(v) => {
                prop_assert!(x.terms().is_empty());
                prop_assert!(x.alg().equals(&v));
            }
            Transcendence::Unknown(_) => {}
        }
    }

    #[test]
    fn enclosures_refine_consistently(x in complete_element()) {
        let b = Bindings::new();
        let boxes: Vec<_> = [32u32, 128, 512].iter().map(|&bits| x.eval(bits, &b).unwrap()).collect();
        prop_assert!(boxes[0].intersects(&boxes[1]) && boxes[1].intersects(&boxes[2]));
    }
}

#[test]
fn canonical_zeros() {
    for src in ["log(6) - log(2) - log(3)", "log(4) - 2*log(2)", "sqrt(8) - 2*sqrt(2)", "exp(1) - exp(2/2)"] {
        let x = parse_element(src).unwrap();
        assert!(x.is_trivially_zero(), "{src}");
        assert!(x.is_zero().is_true());
    }
}
