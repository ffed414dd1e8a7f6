//! Finitely generated subgroups `gp{g_1, ..., g_k}` of `(C, +)`.
//!
//! Every generator is written in formal coordinates: real and imaginary parts
//! of each symbol coefficient, plus the algebraic part. Those coordinates are
//! exact (two elements are equal iff their coordinates are) as long as the
//! symbols come from at most one concrete family and no `log` of an irrational
//! argument appears. Such systems are called complete below.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::element::{Element, Evidence, TriBool, UnknownReason};
use crate::error::{Error, Result};
use crate::lattice::{self, clear_denominators, hermite, IntVec};
use crate::parse;
use crate::rational::{GaussianRational, Rational};
use crate::smallelem::relation_search_with;
use crate::symbol::{Bindings, Family, Symbol};

/// Tunables shared by the group, topology and search layers.
#[derive(Clone, Debug)]
pub struct Context {
    pub bindings: Bindings,
    /// Working precision for enclosures and certificates.
    pub precision: u32,
    /// Height up to which relation search backs an unknown verdict.
    pub height: BigInt,
    pub relation_bits: u32,
    /// Witness threshold for non-discrete groups.
    pub eps: Rational,
    pub height_cap: u64,
}

impl Default for Context {
    fn default() -> Context {
        Context {
            bindings: Bindings::new(),
            precision: 256,
            height: BigInt::from(1_000_000),
            relation_bits: 512,
            eps: Rational::new(BigInt::one(), BigInt::from(50)),
            height_cap: 1_000_000_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Certified,
    /// `sum coeffs_j g_j = value`, a nonzero algebraic number.
    Refuted { coeffs: Vec<BigInt>, value: AlgebraicNumber },
    UnknownConditional {
        reason: UnknownReason,
        /// Relations among the generator values up to this height are excluded.
        no_relation_height: BigInt,
        precision_bits: u32,
    },
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::UnknownConditional { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub enum Membership {
    Yes(Vec<BigInt>),
    No,
    Unknown(Evidence),
}

#[derive(Clone, Debug)]
pub enum Cyclicity {
    /// `a = coeffs[0] * generator`, `b = coeffs[1] * generator`.
    Cyclic { generator: Element, coeffs: [BigInt; 2] },
    NotCyclic,
    Unknown(Evidence),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rank {
    Exact(usize),
    /// The rank lies in `lower..=upper`; no integer relation of height at most
    /// `height` holds among a formally independent subset of generators.
    AtLeast { lower: usize, upper: usize, height: BigInt },
}

impl Rank {
    pub fn exact(&self) -> Option<usize> {
        match self {
            Rank::Exact(r) => Some(*r),
            Rank::AtLeast { .. } => None,
        }
    }

    pub fn lower(&self) -> usize {
        match self {
            Rank::Exact(r) => *r,
            Rank::AtLeast { lower, .. } => *lower,
        }
    }

    pub fn upper(&self) -> usize {
        match self {
            Rank::Exact(r) => *r,
            Rank::AtLeast { upper, .. } => *upper,
        }
    }
}

/// Whether formal coordinates of these elements are faithful.
pub fn is_complete<'a>(elems: impl IntoIterator<Item = &'a Element>) -> bool {
    let mut concrete: Option<Family> = None;
    for x in elems {
        for (s, _) in x.terms() {
            if s.is_log_alg() {
                return false;
            }
            let f = s.family();
            if matches!(f, Family::Abstract(_)) {
                continue;
            }
            match &concrete {
                None => concrete = Some(f),
                Some(g) if *g == f => {}
                Some(_) => return false,
            }
        }
    }
    true
}

fn symbol_coords(x: &Element, symbols: &[Symbol]) -> Option<Vec<Rational>> {
    if x.terms().iter().any(|(s, _)| !symbols.contains(s)) {
        return None;
    }
    let mut row = Vec::with_capacity(2 * symbols.len());
    for s in symbols {
        let c = x.coefficient(s);
        row.push(c.re);
        row.push(c.im);
    }
    Some(row)
}

/// `sum m_j a_j`.
pub(crate) fn alg_combination(alg: &[AlgebraicNumber], m: &[BigInt]) -> Result<AlgebraicNumber> {
    let mut acc = AlgebraicNumber::zero();
    for (a, k) in alg.iter().zip(m) {
        if !k.is_zero() && !a.is_zero() {
            acc = acc.add(&a.mul_int(k))?;
        }
    }
    Ok(acc)
}

fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    Rational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// A `Z`-basis of the subgroup of `C` generated by the given algebraic
/// numbers, when it can be decided.
fn alg_module_basis(ws: &[AlgebraicNumber]) -> Result<Option<Vec<AlgebraicNumber>>> {
    let nz: Vec<&AlgebraicNumber> = ws.iter().filter(|w| !w.is_zero()).collect();
    if nz.is_empty() {
        return Ok(Some(vec![]));
    }
    if nz.iter().all(|w| w.as_gaussian().is_some()) {
        let rows: Vec<Vec<Rational>> = nz
            .iter()
            .map(|w| {
                let g = w.as_gaussian().expect("checked");
                vec![g.re.clone(), g.im.clone()]
            })
            .collect();
        let (ints, scale) = clear_denominators(&rows, 2);
        let h = hermite(&ints, 2);
        return Ok(Some(
            h.h.iter()
                .map(|r| {
                    AlgebraicNumber::from_gaussian(GaussianRational::new(
                        Rational::new(r[0].clone(), scale[0].clone()),
                        Rational::new(r[1].clone(), scale[1].clone()),
                    ))
                })
                .collect(),
        ));
    }
    // Classes of values with rational ratios; two classes are independent.
    let mut classes: Vec<(&AlgebraicNumber, Rational)> = Vec::new();
    'outer: for w in nz {
        for (rep, g) in classes.iter_mut() {
            if let Some(q) = w.div(rep)?.as_rational() {
                *g = rational_gcd(g, q);
                continue 'outer;
            }
        }
        if classes.len() == 2 {
            return Ok(None);
        }
        classes.push((w, Rational::one()));
    }
    classes
        .into_iter()
        .map(|(rep, g)| rep.scale(&GaussianRational::real(g)))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

#[derive(Debug)]
struct Coords {
    symbols: Vec<Symbol>,
    /// Rows: generators; columns: `Re c_s, Im c_s` for each symbol `s`.
    sym: Vec<Vec<Rational>>,
    alg: Vec<AlgebraicNumber>,
    gaussian: bool,
    complete: bool,
    sym_rank: usize,
    /// Combinations whose symbol parts form a basis of the symbol row space.
    pivots: Vec<IntVec>,
    /// LLL-reduced basis of the symbol kernel.
    kernel: Vec<IntVec>,
    /// Algebraic value of each kernel vector.
    kernel_values: Vec<AlgebraicNumber>,
    /// `Z`-basis of the kernel values, when decidable.
    alg_basis: Option<Vec<AlgebraicNumber>>,
}

impl Coords {
    fn new(gens: &[Element]) -> Result<Coords> {
        let mut symbols: Vec<Symbol> = Vec::new();
        for g in gens {
            for (s, _) in g.terms() {
                if !symbols.contains(s) {
                    symbols.push(s.clone());
                }
            }
        }
        symbols.sort();
        let sym: Vec<Vec<Rational>> = gens
            .iter()
            .map(|g| symbol_coords(g, &symbols).expect("symbols collected from generators"))
            .collect();
        let alg: Vec<AlgebraicNumber> = gens.iter().map(|g| g.alg().clone()).collect();
        let ncols = 2 * symbols.len();
        let (ints, _) = clear_denominators(&sym, ncols);
        let h = hermite(&ints, ncols);
        let raw_kernel = h.kernel();
        let kernel = match lattice::lll(&raw_kernel) {
            Some(r) => r.basis,
            None => raw_kernel,
        };
        let kernel_values = kernel
            .iter()
            .map(|k| alg_combination(&alg, k))
            .collect::<Result<Vec<_>>>()?;
        let alg_basis = alg_module_basis(&kernel_values)?;
        Ok(Coords {
            gaussian: alg.iter().all(|a| a.as_gaussian().is_some()),
            complete: is_complete(gens),
            sym_rank: h.rank(),
            pivots: h.u[..h.rank()].to_vec(),
            symbols,
            sym,
            alg,
            kernel,
            kernel_values,
            alg_basis,
        })
    }

    fn full_row(&self, sym: &[Rational], alg: &GaussianRational) -> Vec<Rational> {
        let mut row = sym.to_vec();
        row.push(alg.re.clone());
        row.push(alg.im.clone());
        row
    }
}

/// A finitely generated additive group. Immutable; adding a generator builds
/// a new group with fresh caches.
pub struct FGGroup {
    gens: Vec<Element>,
    coords: Coords,
    verdict: OnceLock<Verdict>,
    rank: OnceLock<Rank>,
}

impl Clone for FGGroup {
    fn clone(&self) -> FGGroup {
        FGGroup::new(self.gens.clone()).expect("rebuilding an existing group")
    }
}

impl fmt::Debug for FGGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FGGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gp{{{}}}", parse::format_generators(&self.gens))
    }
}

impl FGGroup {
    /// An empty generator list gives the trivial group.
    pub fn new(gens: Vec<Element>) -> Result<FGGroup> {
        let coords = Coords::new(&gens)?;
        Ok(FGGroup {
            gens,
            coords,
            verdict: OnceLock::new(),
            rank: OnceLock::new(),
        })
    }

    pub fn trivial() -> FGGroup {
        FGGroup::new(vec![]).expect("empty group")
    }

    /// `gp{e^α : α in Ω}` for distinct nonzero algebraic `α`.
    pub fn exp_group(omega: &[AlgebraicNumber]) -> Result<FGGroup> {
        for (i, a) in omega.iter().enumerate() {
            if a.is_zero() {
                return Err(Error::ZeroExponent);
            }
            if omega[..i].iter().any(|b| b.equals(a)) {
                return Err(Error::DuplicateExponent(parse::format_algebraic(a)));
            }
        }
        let gens = omega.iter().map(|a| Element::exp(a.clone())).collect::<Result<Vec<_>>>()?;
        FGGroup::new(gens)
    }

    /// `gp{log a : a in args}` for positive real algebraic `a`.
    pub fn log_group(args: &[AlgebraicNumber]) -> Result<FGGroup> {
        let mut gens = Vec::with_capacity(args.len());
        for a in args {
            let positive = match a.as_rational() {
                Some(q) => q.is_positive(),
                None => a.is_real() && a.is_positively_oriented(),
            };
            if !positive {
                return Err(Error::NonPositiveLogArgument(parse::format_algebraic(a)));
            }
            gens.push(Element::log(a.clone())?);
        }
        FGGroup::new(gens)
    }

    pub fn log_group_rational(args: &[Rational]) -> Result<FGGroup> {
        let args: Vec<AlgebraicNumber> = args.iter().map(|q| AlgebraicNumber::from_rational(q.clone())).collect();
        FGGroup::log_group(&args)
    }

    /// `gp{T, iT}` for an abstract symbol `T`.
    pub fn pair_group(name: &str) -> FGGroup {
        let t = Element::abstract_named(name);
        let it = t.scale(&GaussianRational::i()).expect("scaling a symbol");
        FGGroup::new(vec![t, it]).expect("two abstract generators")
    }

    pub fn with_generator(&self, g: Element) -> Result<FGGroup> {
        let mut gens = self.gens.clone();
        gens.push(g);
        FGGroup::new(gens)
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Symbol basis, in canonical order.
    pub fn symbols(&self) -> &[Symbol] {
        &self.coords.symbols
    }

    pub fn is_complete(&self) -> bool {
        self.coords.complete
    }

    /// All algebraic parts are Gaussian rationals.
    pub fn is_gaussian(&self) -> bool {
        self.coords.gaussian
    }

    /// Exact coordinate matrix. Two columns per symbol, plus two for the
    /// algebraic part when every algebraic part is a Gaussian rational.
    pub fn coordinate_matrix(&self) -> Vec<Vec<Rational>> {
        let c = &self.coords;
        c.sym
            .iter()
            .zip(&c.alg)
            .map(|(row, a)| match a.as_gaussian() {
                Some(g) if c.gaussian => c.full_row(row, g),
                _ => row.clone(),
            })
            .collect()
    }

    /// Integer relations among the symbol parts of the generators.
    pub fn symbol_kernel(&self) -> &[IntVec] {
        &self.coords.kernel
    }

    pub fn certify(&self) -> Verdict {
        self.verdict
            .get_or_init(|| {
                let ctx = Context::default();
                self.certify_with(&ctx.height, ctx.relation_bits)
            })
            .clone()
    }

    /// Transcendence verdict for the whole group.
    ///
    /// Kernel vectors of the symbol coordinates are the only way a formal
    /// combination can lose all its symbols; if one of them carries a
    /// nonzero algebraic value the group is refuted outright.
    pub fn certify_with(&self, height: &BigInt, bits: u32) -> Verdict {
        let c = &self.coords;
        let mut best: Option<(BigInt, &IntVec, &AlgebraicNumber)> = None;
        for (k, v) in c.kernel.iter().zip(&c.kernel_values) {
            if v.is_zero() {
                continue;
            }
            let h = lattice::height(k);
            if best.as_ref().is_none_or(|(bh, _, _)| h < *bh) {
                best = Some((h, k, v));
            }
        }
        if let Some((_, k, v)) = best {
            let (coeffs, value) = if v.is_positively_oriented() {
                (k.clone(), v.clone())
            } else {
                (k.iter().map(|x| -x).collect(), v.neg())
            };
            return Verdict::Refuted { coeffs, value };
        }
        let families: Vec<Family> = {
            let mut f: Vec<Family> = self.gens.iter().flat_map(|g| g.families()).collect();
            f.sort();
            f.dedup();
            f
        };
        let log_alg = c.symbols.iter().any(|s| s.is_log_alg());
        if families.len() <= 1 && (!log_alg || c.alg.iter().all(|a| a.is_zero())) {
            return Verdict::Certified;
        }
        let reason = if log_alg && families.len() == 1 {
            UnknownReason::MultiplicativeRelationPossible
        } else {
            UnknownReason::SchanuelConditional
        };
        let values = self.independent_subset();
        let report = relation_search_with(&values, height, bits, &Bindings::new());
        Verdict::UnknownConditional {
            reason,
            no_relation_height: if report.relation.is_some() { BigInt::zero() } else { report.excluded_height },
            precision_bits: report.precision_bits,
        }
    }

    /// Generators whose symbol parts are linearly independent, chosen greedily.
    fn independent_subset(&self) -> Vec<Element> {
        let c = &self.coords;
        let ncols = 2 * c.symbols.len();
        let mut chosen: Vec<Element> = Vec::new();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (g, row) in self.gens.iter().zip(&c.sym) {
            rows.push(row.clone());
            let (ints, _) = clear_denominators(&rows, ncols);
            if hermite(&ints, ncols).rank() == rows.len() {
                chosen.push(g.clone());
            } else {
                rows.pop();
            }
        }
        chosen
    }

    /// Decides `x in G`. `Yes` always carries a replayable witness; `No` is
    /// only reported when the coordinates are faithful.
    pub fn member(&self, x: &Element) -> Membership {
        match self.member_inner(x) {
            Ok(m) => m,
            Err(_) => Membership::Unknown(Evidence::new(UnknownReason::PrecisionLimit)),
        }
    }

    fn member_inner(&self, x: &Element) -> Result<Membership> {
        let c = &self.coords;
        let complete = c.complete && is_complete(self.gens.iter().chain(std::iter::once(x)));
        let undecided = || {
            let log_alg = self.gens.iter().chain(std::iter::once(x)).any(|g| g.terms().iter().any(|(s, _)| s.is_log_alg()));
            Membership::Unknown(Evidence::new(if log_alg {
                UnknownReason::MultiplicativeRelationPossible
            } else {
                UnknownReason::SchanuelConditional
            }))
        };
        let negative = |complete: bool| if complete { Membership::No } else { undecided() };
        let Some(xsym) = symbol_coords(x, &c.symbols) else {
            return Ok(negative(complete));
        };
        let k = self.gens.len();
        let ncols = 2 * c.symbols.len();

        if let (true, Some(xa)) = (c.gaussian, x.alg().as_gaussian()) {
            let mut rows: Vec<Vec<Rational>> = c
                .sym
                .iter()
                .zip(&c.alg)
                .map(|(row, a)| c.full_row(row, a.as_gaussian().expect("gaussian group")))
                .collect();
            rows.push(c.full_row(&xsym, xa));
            let (ints, _) = clear_denominators(&rows, ncols + 2);
            let h = hermite(&ints[..k], ncols + 2);
            return Ok(match h.solve(&ints[k]) {
                Some(m) => self.confirm(x, m)?,
                None => negative(complete),
            });
        }

        let mut rows = c.sym.clone();
        rows.push(xsym);
        let (ints, _) = clear_denominators(&rows, ncols);
        let h = hermite(&ints[..k], ncols);
        let Some(m0) = h.solve(&ints[k]) else {
            return Ok(negative(complete));
        };
        let residual = x.alg().sub(&alg_combination(&c.alg, &m0)?)?;
        if residual.is_zero() {
            return self.confirm(x, m0);
        }
        if c.kernel_values.iter().all(|v| v.is_zero()) {
            return Ok(negative(complete));
        }
        if c.kernel.len() == 1 {
            let t = residual.div(&c.kernel_values[0])?;
            return Ok(match t.as_rational() {
                Some(q) if q.is_integer() => {
                    let t = q.to_integer();
                    let m = m0.iter().zip(&c.kernel[0]).map(|(a, b)| a + &t * b).collect();
                    self.confirm(x, m)?
                }
                _ => negative(complete),
            });
        }
        // The kernel values span more than one rational class: look for the
        // residual numerically, then replay exactly.
        let mut vals: Vec<Element> = c.kernel_values.iter().cloned().map(Element::from_alg).collect();
        vals.push(Element::from_alg(residual));
        let r = relation_search_with(&vals, &BigInt::from(10u64.pow(12)), 1024, &Bindings::new());
        if let (Some(rel), true) = (&r.relation, r.certified) {
            let last = &rel[rel.len() - 1];
            if last.abs().is_one() {
                let mut m = m0;
                for (kv, ci) in c.kernel.iter().zip(rel) {
                    let n = -(ci * last);
                    for (a, b) in m.iter_mut().zip(kv) {
                        *a += &n * b;
                    }
                }
                return self.confirm(x, m);
            }
        }
        Ok(undecided())
    }

    fn confirm(&self, x: &Element, m: Vec<BigInt>) -> Result<Membership> {
        if Element::combination(&self.gens, &m)?.equals(x) {
            Ok(Membership::Yes(m))
        } else {
            Err(Error::Internal("membership witness failed replay".into()))
        }
    }

    /// Rank of `G` as an abelian group.
    pub fn rank_q(&self) -> Rank {
        self.rank.get_or_init(|| self.compute_rank(true)).clone()
    }

    fn compute_rank(&self, search: bool) -> Rank {
        let c = &self.coords;
        let alg_rank = c.alg_basis.as_ref().map(|b| b.len());
        if c.complete {
            if let Some(r) = alg_rank {
                return Rank::Exact(c.sym_rank + r);
            }
        }
        let upper = c.sym_rank + alg_rank.unwrap_or(c.kernel.len());
        if !search {
            return Rank::AtLeast { lower: 0, upper, height: BigInt::zero() };
        }
        let mut lower = 0;
        let mut subsets: Vec<Vec<Element>> = Vec::new();
        for fam in [Family::Exp, Family::Log, Family::Pi] {
            let sub: Vec<Element> = self
                .gens
                .iter()
                .filter(|g| g.terms().iter().all(|(s, _)| !s.is_log_alg() && (s.is_abstract() || s.family() == fam)))
                .cloned()
                .collect();
            subsets.push(sub);
        }
        for sub in subsets {
            if sub.is_empty() {
                continue;
            }
            if let Ok(g) = FGGroup::new(sub) {
                if let Rank::Exact(r) = g.compute_rank(false) {
                    lower = lower.max(r);
                }
            }
        }
        if lower == 0 && self.gens.iter().any(|g| g.is_zero().is_false()) {
            lower = 1;
        }
        if lower == upper {
            return Rank::Exact(lower);
        }
        let ctx = Context::default();
        let report = relation_search_with(&self.independent_subset(), &ctx.height, ctx.relation_bits, &Bindings::new());
        Rank::AtLeast {
            lower,
            upper,
            height: if report.relation.is_some() { BigInt::zero() } else { report.excluded_height },
        }
    }

    /// A `Z`-basis of `G`, exact whenever the rank is.
    pub fn z_basis(&self) -> Option<Vec<Element>> {
        self.rank_q().exact()?;
        self.formal_basis()
    }

    /// Basis of the formal coordinate lattice. A true basis whenever the
    /// rank equals the formal rank.
    pub(crate) fn formal_basis(&self) -> Option<Vec<Element>> {
        let c = &self.coords;
        let mut out = Vec::new();
        for u in &c.pivots {
            out.push(Element::combination(&self.gens, u).ok()?);
        }
        for a in c.alg_basis.as_ref()? {
            out.push(Element::from_alg(a.clone()));
        }
        Some(out)
    }

    /// Algebraic values of the symbol kernel basis.
    pub(crate) fn kernel_values(&self) -> &[AlgebraicNumber] {
        &self.coords.kernel_values
    }
}

/// Leading coefficient used to fix signs: first symbol coefficient, else the
/// algebraic part.
fn leading_positive(x: &Element) -> bool {
    match x.terms().first() {
        Some((_, c)) => c.re.is_positive() || (c.re.is_zero() && c.im.is_positive()),
        None => x.alg().is_positively_oriented(),
    }
}

/// Whether `gp{a, b}` is cyclic, with a generator when it is.
pub fn is_cyclic_pair(a: &Element, b: &Element) -> Result<Cyclicity> {
    for x in [a, b] {
        match x.is_zero() {
            TriBool::True => return Err(Error::ZeroInput),
            TriBool::Unknown(ev) => return Ok(Cyclicity::Unknown(ev)),
            TriBool::False => {}
        }
    }
    let g = FGGroup::new(vec![a.clone(), b.clone()])?;
    let c = &g.coords;
    let relation: Option<IntVec> = match c.kernel.len() {
        0 => None,
        1 => c.kernel_values[0].is_zero().then(|| c.kernel[0].clone()),
        _ => a
            .alg()
            .div(b.alg())?
            .as_rational()
            .map(|q| vec![q.denom().clone(), -q.numer()]),
    };
    let Some(k) = relation else {
        if c.complete {
            return Ok(Cyclicity::NotCyclic);
        }
        return Ok(numeric_independence(a, b));
    };
    // k0 a + k1 b = 0 with gcd(k0, k1) = 1, so a/k1 generates both.
    let inv = GaussianRational::real(Rational::new(BigInt::one(), k[1].clone()));
    let mut d = a.scale(&inv)?;
    let mut coeffs = [k[1].clone(), -&k[0]];
    if !leading_positive(&d) {
        d = d.neg();
        coeffs = [-&coeffs[0], -&coeffs[1]];
    }
    if !d.scale_int(&coeffs[0]).equals(a) || !d.scale_int(&coeffs[1]).equals(b) {
        return Err(Error::Internal("cyclic generator failed replay".into()));
    }
    Ok(Cyclicity::Cyclic { generator: d, coeffs })
}

/// Non-collinear values are `Q`-independent; anything else stays open.
fn numeric_independence(a: &Element, b: &Element) -> Cyclicity {
    let bindings = Bindings::new();
    let mut ev = Evidence::new(UnknownReason::SchanuelConditional);
    for bits in [64u32, 256, 1024] {
        let (Ok(x), Ok(y)) = (a.eval(bits, &bindings), b.eval(bits, &bindings)) else {
            break;
        };
        let cross = x.im.mul(&y.re, bits).sub(&x.re.mul(&y.im, bits), bits);
        if !cross.contains_zero() {
            return Cyclicity::NotCyclic;
        }
        ev.enclosure = Some(x.mul(&y.conj(), bits));
        ev.precision_bits = bits;
    }
    Cyclicity::Unknown(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, parse_generators};
    use crate::rational::rat;

    fn group(src: &str) -> FGGroup {
        FGGroup::new(parse_generators(src).unwrap()).unwrap()
    }

    fn el(src: &str) -> Element {
        parse_element(src).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn constructors_validate_input() {
        let one = AlgebraicNumber::one();
        assert_eq!(FGGroup::exp_group(&[one.clone(), one.clone()]).unwrap_err(), Error::DuplicateExponent("1".into()));
        assert_eq!(FGGroup::exp_group(&[AlgebraicNumber::zero()]).unwrap_err(), Error::ZeroExponent);
        assert!(matches!(
            FGGroup::log_group_rational(&[rat(-2, 1)]),
            Err(Error::NonPositiveLogArgument(_))
        ));
        let g = FGGroup::exp_group(&[one, AlgebraicNumber::from_int(2)]).unwrap();
        assert_eq!(g.to_string(), "gp{exp(1), exp(2)}");
        assert_eq!(FGGroup::pair_group("T").to_string(), "gp{T, i*T}");
    }

    #[test]
    fn coordinates_reconstruct_generators() {
        let g = group("1/2*T + 3, (2-i)*T - i");
        let m = g.coordinate_matrix();
        assert_eq!(m[0], vec![rat(1, 2), rat(0, 1), rat(3, 1), rat(0, 1)]);
        assert_eq!(m[1], vec![rat(2, 1), rat(-1, 1), rat(0, 1), rat(-1, 1)]);
    }

    #[test]
    fn refutes_translate_pair() {
        match group("T, T + 1").certify() {
            Verdict::Refuted { coeffs, value } => {
                assert_eq!(coeffs, ints(&[-1, 1]));
                assert!(value.is_one());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn certifies_single_families() {
        for src in ["exp(1), exp(2), exp(3)", "log(2), log(3), log(6)", "pi, 2*pi + 0", "T, i*T", ""] {
            assert!(matches!(group(src).certify(), Verdict::Certified), "{src}");
        }
    }

    #[test]
    fn refuted_witness_is_irrational_when_needed() {
        let g = group("exp(1) + sqrt(2), 2*exp(1)");
        match g.certify() {
            Verdict::Refuted { coeffs, value } => {
                let sum = Element::combination(g.gens(), &coeffs).unwrap();
                assert!(!sum.has_symbols());
                assert!(sum.alg().equals(&value));
                assert!(value.equals(&AlgebraicNumber::sqrt_rational(&rat(8, 1)).unwrap()));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn mixed_families_stay_open() {
        match group("exp(1), pi").certify() {
            Verdict::UnknownConditional { reason, no_relation_height, .. } => {
                assert_eq!(reason, UnknownReason::SchanuelConditional);
                assert!(no_relation_height >= BigInt::from(1_000_000));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn membership_examples() {
        let g = group("1/2*T, 3/5*T");
        match g.member(&el("1/10*T")) {
            Membership::Yes(m) => assert_eq!(Element::combination(g.gens(), &m).unwrap(), el("1/10*T")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(group("exp(1)").member(&el("3*exp(1)")), Membership::Yes(m) if m == ints(&[3])));
        assert!(matches!(group("exp(1), exp(2)").member(&el("exp(3)")), Membership::No));
        assert!(matches!(group("exp(1)").member(&el("1/2*exp(1)")), Membership::No));
        assert!(matches!(group("exp(1)").member(&el("pi")), Membership::Unknown(_)));
    }

    #[test]
    fn membership_with_irrational_parts() {
        let g = group("exp(1) + sqrt(2), exp(1)");
        assert!(matches!(g.member(&el("3*sqrt(2)")), Membership::Yes(m) if m == ints(&[3, -3])));
        assert!(matches!(g.member(&el("sqrt(3)")), Membership::No));
        assert!(matches!(g.member(&el("1/2*sqrt(2)")), Membership::No));
    }

    #[test]
    fn cyclic_pairs() {
        match is_cyclic_pair(&el("1/2*T"), &el("3/5*T")).unwrap() {
            Cyclicity::Cyclic { generator, coeffs } => {
                assert_eq!(generator, el("1/10*T"));
                assert_eq!(coeffs, [BigInt::from(5), BigInt::from(6)]);
            }
            c => panic!("{c:?}"),
        }
        assert!(matches!(is_cyclic_pair(&el("exp(1)"), &el("exp(2)")).unwrap(), Cyclicity::NotCyclic));
        assert!(matches!(is_cyclic_pair(&el("exp(1)"), &el("pi")).unwrap(), Cyclicity::Unknown(_)));
        assert!(matches!(is_cyclic_pair(&el("exp(1)"), &el("i*pi")).unwrap(), Cyclicity::NotCyclic));
        assert_eq!(is_cyclic_pair(&el("0"), &el("T")).unwrap_err(), Error::ZeroInput);
        match is_cyclic_pair(&el("sqrt(8)"), &el("-sqrt(2)")).unwrap() {
            Cyclicity::Cyclic { generator, coeffs } => {
                assert_eq!(generator, el("sqrt(2)"));
                assert_eq!(coeffs, [BigInt::from(2), BigInt::from(-1)]);
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn ranks() {
        assert_eq!(group("exp(1), exp(2), exp(3)").rank_q(), Rank::Exact(3));
        assert_eq!(group("log(2), log(3), log(6)").rank_q(), Rank::Exact(2));
        assert_eq!(FGGroup::trivial().rank_q(), Rank::Exact(0));
        assert_eq!(group("sqrt(2), sqrt(8), 1").rank_q(), Rank::Exact(2));
        match group("exp(1), pi").rank_q() {
            Rank::AtLeast { lower, upper, height } => {
                assert_eq!((lower, upper), (1, 2));
                assert!(height >= BigInt::from(1_000_000));
            }
            r => panic!("{r:?}"),
        }
        assert_eq!(group("exp(1), pi, 2*pi").rank_q(), Rank::AtLeast { lower: 1, upper: 2, height: BigInt::from(1_000_000) });
    }

    #[test]
    fn z_basis_spans_group() {
        let g = group("2*T, 3*T, T + i*T, i*T");
        let b = g.z_basis().unwrap();
        assert_eq!(b.len(), 2);
        for x in g.gens() {
            assert!(matches!(FGGroup::new(b.clone()).unwrap().member(x), Membership::Yes(_)));
        }
    }
}
