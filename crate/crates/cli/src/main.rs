//! `tg`: decide and classify finitely generated additive subgroups of C.

mod render;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use tgroups::parse::{format_element, parse_element, parse_generators, ParseError};
use tgroups::{
    brute_member, brute_min_norm, brute_small, classify, is_cyclic_pair, relation_search_with, small_element, Binding,
    Bindings, BruteMembership, Context, Cyclicity, Element, Error, FGGroup, Membership, Rational, TopologyClass,
    Verdict,
};

use render::{evidence, int, interval, ints};

#[derive(Parser, Debug)]
#[command(name = "tg", version, about = "Topology and certificates for finitely generated subgroups of C")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug)]
struct Opts {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
    /// Height bound for relation searches.
    #[arg(long, global = true, default_value = "1000000")]
    height: BigInt,
    /// Threshold for small elements, e.g. 1/50, 0.001 or 1e-6.
    #[arg(long, global = true, default_value = "1/50")]
    eps: String,
    /// Numeric value for an abstract symbol, e.g. T=e.
    #[arg(long = "bind", global = true, value_name = "NAME=e|pi|liouville")]
    binds: Vec<String>,
    /// Coefficient box for `sample` and the oracle.
    #[arg(long, global = true, default_value_t = 5)]
    coeff_bound: u64,
    /// Compact JSON (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Decide whether the generators are Z-linearly independent.
    Certify { group: String },
    /// Topological type of the group: Z, ZxZ or dense (QLike).
    Classify { group: String },
    /// Decide membership of an element.
    Member { group: String, element: String },
    /// Decide whether two elements generate a cyclic group.
    Cyclic { a: String, b: String },
    /// Find a nonzero element of absolute value below --eps.
    Small { group: String },
    /// Search an integer relation among values up to --height.
    Relations { values: String },
    /// Lattice points sum m_j g_j with |m_j| <= --coeff-bound.
    Sample { group: String },
    /// Exhaustive reference searches.
    #[command(hide = true, subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    Member { group: String, element: String },
    MinNorm { group: String },
    Small { group: String },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    position: Option<(usize, usize)>,
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure {
            code: 2,
            kind: if e.is_semantic() { "semantic" } else { "parse" },
            message: e.to_string(),
            position: Some((e.line, e.col)),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match e {
            Error::PrecisionExhausted(_) => (3, "precision_exhausted"),
            Error::SearchExhausted(_) => (3, "search_exhausted"),
            Error::BudgetExceeded(_) => (3, "budget_exceeded"),
            Error::Internal(_) => (1, "internal"),
            _ => (2, "domain"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
            position: None,
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: 2,
        kind: "usage",
        message,
        position: None,
    }
}

type Out = Result<Map<String, Value>, Failure>;

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn group(src: &str) -> Result<FGGroup, Failure> {
    Ok(FGGroup::new(parse_generators(src)?)?)
}

fn element(src: &str) -> Result<Element, Failure> {
    Ok(parse_element(src)?)
}

/// Accepts anything the element grammar reads as a positive rational, plus `1e-6` style.
fn parse_eps(src: &str) -> Result<Rational, Failure> {
    let bad = || usage(format!("--eps expects a positive rational, got {src:?}"));
    let (mant, exp) = match src.split_once(['e', 'E']) {
        Some((m, x)) if !m.is_empty() && x.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit()) => {
            (m, x.parse::<i32>().map_err(|_| bad())?)
        }
        _ => (src, 0),
    };
    let x = parse_element(mant)?;
    let q = match x.alg().as_gaussian() {
        Some(g) if x.terms().is_empty() && g.is_real() => g.re.clone(),
        _ => return Err(bad()),
    };
    let ten = Rational::from_integer(BigInt::from(10));
    let q = q * num_pow(&ten, exp);
    if q <= Rational::from_integer(BigInt::from(0)) {
        return Err(bad());
    }
    Ok(q)
}

fn num_pow(x: &Rational, e: i32) -> Rational {
    let p = Rational::from_integer(x.to_integer().pow(e.unsigned_abs()));
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn context(opts: &Opts) -> Result<Context, Failure> {
    let mut bindings = Bindings::new();
    for b in &opts.binds {
        let (name, value) = b
            .split_once('=')
            .ok_or_else(|| usage(format!("--bind expects NAME=VALUE, got {b:?}")))?;
        let v = Binding::parse(value.trim())
            .ok_or_else(|| usage(format!("unknown binding {value:?}; expected e, pi or liouville")))?;
        bindings.bind(name.trim(), v);
    }
    Ok(Context {
        bindings,
        precision: opts.precision.max(16),
        height: opts.height.clone(),
        relation_bits: opts.precision.max(16) * 2,
        eps: parse_eps(&opts.eps)?,
        ..Context::default()
    })
}

fn certify(src: &str, ctx: &Context) -> Out {
    let g = group(src)?;
    let v = g.certify_with(&ctx.height, ctx.relation_bits);
    let mut out = obj(json!({ "verdict": v.tag(), "witness": null, "reason": null, "no_relation_height": null }));
    match &v {
        Verdict::Certified => {}
        Verdict::Refuted { coeffs, value } => {
            out.insert("witness".into(), json!({ "coeffs": ints(coeffs), "value": render::algebraic(value) }));
        }
        Verdict::UnknownConditional {
            reason,
            no_relation_height,
            precision_bits,
        } => {
            out.insert("reason".into(), json!(reason.tag()));
            out.insert("no_relation_height".into(), int(no_relation_height));
            out.insert(
                "evidence".into(),
                json!({ "reason": reason.tag(), "no_relation_height": int(no_relation_height), "precision_bits": precision_bits }),
            );
        }
    }
    Ok(out)
}

fn classify_cmd(src: &str, ctx: &Context) -> Out {
    let g = group(src)?;
    let c = classify(&g, ctx)?;
    let witness = match &c.class {
        TopologyClass::Trivial => Value::Null,
        TopologyClass::Z { generator, .. } => json!({ "generator": format_element(generator) }),
        TopologyClass::ZxZ { basis, .. } => json!({ "basis": basis.iter().map(format_element).collect::<Vec<_>>() }),
        TopologyClass::QLike { witness } => witness.as_ref().map_or(Value::Null, render::small),
        TopologyClass::Unknown(_) => Value::Null,
    };
    let mut out = obj(json!({
        "class": c.class.tag(),
        "min_norm": c.class.min_norm().map(interval),
        "witness": witness,
        "rank": render::rank(&c.rank),
        "span_dim": render::span(&c.span),
    }));
    if let TopologyClass::Unknown(e) = &c.class {
        out.insert("evidence".into(), evidence(e));
    }
    Ok(out)
}

fn member(gsrc: &str, xsrc: &str) -> Out {
    let g = group(gsrc)?;
    let x = element(xsrc)?;
    Ok(match g.member(&x) {
        Membership::Yes(m) => obj(json!({ "verdict": "yes", "witness": { "coeffs": ints(&m) } })),
        Membership::No => obj(json!({ "verdict": "no", "witness": null })),
        Membership::Unknown(e) => obj(json!({ "verdict": "unknown", "witness": null, "evidence": evidence(&e) })),
    })
}

fn cyclic(asrc: &str, bsrc: &str) -> Out {
    let a = element(asrc)?;
    let b = element(bsrc)?;
    Ok(match is_cyclic_pair(&a, &b)? {
        Cyclicity::Cyclic { generator, coeffs } => obj(json!({
            "verdict": "cyclic",
            "cyclic": true,
            "generator": format_element(&generator),
            "witness": { "multiples": ints(&coeffs) },
        })),
        Cyclicity::NotCyclic => obj(json!({ "verdict": "not_cyclic", "cyclic": false, "generator": null, "witness": null })),
        Cyclicity::Unknown(e) => obj(json!({
            "verdict": "unknown",
            "cyclic": null,
            "generator": null,
            "witness": null,
            "evidence": evidence(&e),
        })),
    })
}

fn small(src: &str, ctx: &Context) -> Out {
    let g = group(src)?;
    let s = small_element(&g, &ctx.eps, ctx.height_cap, &ctx.bindings)?;
    let mut out = obj(json!({ "verdict": "found", "witness": render::small(&s) }));
    out.insert("precision_bits".into(), json!(s.precision_bits));
    Ok(out)
}

fn relations(src: &str, ctx: &Context) -> Out {
    let values = parse_generators(src)?;
    let r = relation_search_with(&values, &ctx.height, ctx.relation_bits, &ctx.bindings);
    let mut out = obj(json!({
        "verdict": if r.relation.is_some() { "relation" } else { "none" },
        "witness": r.relation.as_ref().map(|m| json!({ "coeffs": ints(m), "certified": r.certified })),
        "height": int(&r.height),
        "excluded_height": int(&r.excluded_height),
    }));
    out.insert("precision_bits".into(), json!(r.precision_bits));
    Ok(out)
}

fn sample(src: &str, ctx: &Context, bound: u64) -> Out {
    let g = group(src)?;
    let k = g.len() as u32;
    let side = 2 * bound as u128 + 1;
    let total = side.checked_pow(k).filter(|&n| n <= 1_000_000);
    let Some(total) = total else {
        return Err(Error::BudgetExceeded(side.saturating_pow(k)).into());
    };
    let boxes = g
        .gens()
        .iter()
        .map(|x| x.eval(ctx.precision, &ctx.bindings).map(|b| (b.re.to_f64(), b.im.to_f64())))
        .collect::<Result<Vec<_>, _>>()?;
    let b = bound as i64;
    let mut points = Vec::with_capacity(total as usize);
    let mut m = vec![-b; k as usize];
    loop {
        let (re, im) = m
            .iter()
            .zip(&boxes)
            .fold((0.0, 0.0), |(re, im), (&c, &(x, y))| (re + c as f64 * x, im + c as f64 * y));
        points.push(json!({ "coeffs": m, "re": re, "im": im }));
        let Some(i) = m.iter().position(|&c| c < b) else { break };
        m[i] += 1;
        m[..i].iter_mut().for_each(|c| *c = -b);
    }
    Ok(obj(json!({ "count": points.len(), "points": points })))
}

fn oracle(cmd: &OracleCmd, ctx: &Context, bound: u64) -> Out {
    Ok(match cmd {
        OracleCmd::Member { group: gsrc, element: xsrc } => {
            let g = group(gsrc)?;
            let x = element(xsrc)?;
            match brute_member(&g, &x, bound)? {
                BruteMembership::Yes(m) => obj(json!({ "verdict": "yes", "witness": { "coeffs": ints(&m) } })),
                BruteMembership::NotFoundUpTo(b) => obj(json!({ "verdict": "not_found", "witness": null, "bound": b })),
            }
        }
        OracleCmd::MinNorm { group: gsrc } => {
            let g = group(gsrc)?;
            let (m, iv) = brute_min_norm(&g, bound, ctx.precision, &ctx.bindings)?;
            obj(json!({ "verdict": "found", "witness": { "coeffs": ints(&m), "abs": interval(&iv) }, "bound": bound }))
        }
        OracleCmd::Small { group: gsrc } => {
            let g = group(gsrc)?;
            match brute_small(&g, &ctx.eps, bound, ctx.precision, &ctx.bindings)? {
                Some((m, iv)) => obj(json!({ "verdict": "found", "witness": { "coeffs": ints(&m), "abs": interval(&iv) }, "bound": bound })),
                None => obj(json!({ "verdict": "not_found", "witness": null, "bound": bound })),
            }
        }
    })
}

fn run(cli: &Cli) -> Out {
    let ctx = context(&cli.opts)?;
    let bound = cli.opts.coeff_bound;
    let mut out = match &cli.cmd {
        Cmd::Certify { group } => certify(group, &ctx),
        Cmd::Classify { group } => classify_cmd(group, &ctx),
        Cmd::Member { group, element } => member(group, element),
        Cmd::Cyclic { a, b } => cyclic(a, b),
        Cmd::Small { group } => small(group, &ctx),
        Cmd::Relations { values } => relations(values, &ctx),
        Cmd::Sample { group } => sample(group, &ctx, bound),
        Cmd::Oracle(o) => oracle(o, &ctx, bound),
    }?;
    out.entry("precision_bits").or_insert(json!(ctx.precision));
    out.entry("evidence").or_insert(Value::Null);
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (mut doc, code) = match run(&cli) {
        Ok(out) => (out, 0),
        Err(f) => {
            let mut err = obj(json!({ "kind": f.kind, "message": f.message }));
            if let Some((line, col)) = f.position {
                err.insert("line".into(), json!(line));
                err.insert("column".into(), json!(col));
            }
            eprintln!("tg: {}", f.message);
            (obj(json!({ "error": err, "precision_bits": cli.opts.precision, "evidence": null })), f.code)
        }
    };
    doc.insert("schema".into(), json!("tg/1"));
    doc.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
    let doc = Value::Object(doc);
    let text = if cli.opts.pretty {
        serde_json::to_string_pretty(&doc)
    } else {
        serde_json::to_string(&doc)
    };
    println!("{}", text.expect("JSON values serialize"));
    ExitCode::from(code)
}
