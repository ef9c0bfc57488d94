//! Text and JSON forms of monomials and characters.
//!
//! Monomials are written as concatenated factors `Y[i,p]^e`; whitespace is
//! ignored, a missing exponent means 1 and the empty product is `1`.

use serde_json::{json, Value};

use crate::cartan::{CartanData, LieType, Node};
use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::monomial::{Monomial, Var};
use crate::order::depth_below;
use crate::torus::{PointedElement, TorusElement};
use crate::twisted::{FoldingDatum, TwistedElement, TwistedPointed};

/// Splits `s` into `(label, p, e)` triples for factors named `prefix[label,p]`.
pub fn parse_factors(s: &str, prefix: &str) -> Result<Vec<(i64, i32, i32)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "1" {
        return Ok(Vec::new());
    }
    if s.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix(prefix)
            .and_then(|r| r.strip_prefix('['))
            .ok_or_else(|| Error::Parse(format!("expected `{prefix}[` at `{rest}`")))?;
        let close = body.find(']').ok_or_else(|| Error::Parse(format!("unclosed bracket in `{rest}`")))?;
        let (i, p) = body[..close]
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected `i,p` in `{}`", &body[..close])))?;
        let i: i64 = i.parse().map_err(|_| Error::Parse(format!("bad node `{i}`")))?;
        let p: i32 = p.parse().map_err(|_| Error::Parse(format!("bad spectral index `{p}`")))?;
        rest = &body[close + 1..];
        let mut e = 1;
        if let Some(r) = rest.strip_prefix('^') {
            let end = r
                .char_indices()
                .find(|&(k, c)| !(c.is_ascii_digit() || (k == 0 && (c == '-' || c == '+'))))
                .map_or(r.len(), |(k, _)| k);
            e = r[..end].parse().map_err(|_| Error::Parse(format!("bad exponent at `{r}`")))?;
            rest = &r[end..];
        }
        out.push((i, p, e));
    }
    Ok(out)
}

/// Parses a monomial over `ty` with nodes labelled `1..=n`.
pub fn parse_monomial(s: &str, ty: LieType) -> Result<Monomial> {
    let f = parse_factors(s, "Y")?;
    let mut factors = Vec::with_capacity(f.len());
    for (i, p, e) in f {
        if i < 1 || i > ty.rank as i64 {
            return Err(Error::InvalidNode { node: i, ty: ty.to_string() });
        }
        factors.push((Var::new(i as Node, p), e));
    }
    Ok(Monomial::from_factors(factors))
}

/// Parses a monomial whose first index is a signed label of `fd`.
pub fn parse_signed_monomial(s: &str, fd: &FoldingDatum, prefix: &str) -> Result<Monomial> {
    let mut factors = Vec::new();
    for (label, p, e) in parse_factors(s, prefix)? {
        factors.push((Var::new(fd.from_label(label)?, p), e));
    }
    Ok(Monomial::from_factors(factors))
}

/// Renders `m` with the given variable prefix and node labels.
pub fn format_monomial_with(m: &Monomial, prefix: &str, label: impl Fn(Node) -> i64) -> String {
    if m.is_one() {
        return "1".into();
    }
    let mut s = String::new();
    for (v, e) in m.factors() {
        s.push_str(&format!("{prefix}[{},{}]", label(v.node), v.p));
        if e != 1 {
            s.push_str(&format!("^{e}"));
        }
    }
    s
}

/// Canonical presentation order: the top first, then by depth below the top,
/// then by monomial order. Monomials not below the top go last.
pub fn presentation_order<'a, I>(cartan: &CartanData, top: &Monomial, monomials: I) -> Vec<&'a Monomial>
where
    I: IntoIterator<Item = &'a Monomial>,
{
    let mut keyed: Vec<(u64, &Monomial)> = monomials
        .into_iter()
        .map(|m| (depth_below(cartan, m, top).unwrap_or(u64::MAX), m))
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, m)| m).collect()
}

fn cartan_json(ty: LieType) -> Value {
    json!({ "family": ty.family.letter().to_string(), "rank": ty.rank })
}

/// JSON form with `c` as `[[halfExp, coeff], ...]`, or an integer when `t1`.
pub fn pointed_json(cartan: &CartanData, x: &PointedElement, t1: bool) -> Value {
    let terms: Vec<Value> = presentation_order(cartan, x.top(), x.body().monomials())
        .into_iter()
        .map(|m| {
            let c = x.coeff(m);
            let c = if t1 {
                json!(c.ev_t1())
            } else {
                Value::Array(c.terms().iter().map(|&(h, k)| json!([h, k])).collect())
            };
            json!({ "m": m.to_string(), "c": c })
        })
        .collect();
    json!({ "cartan": cartan_json(cartan.lie_type()), "top": x.top().to_string(), "terms": terms })
}

/// One `monomial  coefficient` line per term, in presentation order.
pub fn pointed_text(cartan: &CartanData, x: &PointedElement, t1: bool) -> String {
    let mut s = String::new();
    for m in presentation_order(cartan, x.top(), x.body().monomials()) {
        let c = x.coeff(m);
        let c = if t1 { c.ev_t1().to_string() } else { c.to_string() };
        s.push_str(&format!("{m}  {c}\n"));
    }
    s
}

fn twisted_label(fd: &FoldingDatum, signed: bool) -> impl Fn(Node) -> i64 + '_ {
    move |i| if signed { fd.label(i) } else { i as i64 }
}

/// JSON form of a twisted character with `Yo[i,p]` keys.
pub fn twisted_json(fd: &FoldingDatum, x: &TwistedPointed, signed: bool) -> Value {
    let label = twisted_label(fd, signed);
    let terms: Vec<Value> = presentation_order(fd.cartan(), x.top(), x.body().terms().keys())
        .into_iter()
        .map(|m| json!({ "m": format_monomial_with(m, "Yo", &label), "c": x.body().coeff(m) }))
        .collect();
    json!({
        "cartan": cartan_json(fd.lie_type()),
        "orbit": true,
        "top": format_monomial_with(x.top(), "Yo", &label),
        "terms": terms,
    })
}

pub fn twisted_text(fd: &FoldingDatum, x: &TwistedPointed, signed: bool) -> String {
    let label = twisted_label(fd, signed);
    let mut s = String::new();
    for m in presentation_order(fd.cartan(), x.top(), x.body().terms().keys()) {
        s.push_str(&format!("{}  {}\n", format_monomial_with(m, "Yo", &label), x.body().coeff(m)));
    }
    s
}

fn json_terms(v: &Value) -> Result<&Vec<Value>> {
    v["terms"].as_array().ok_or_else(|| Error::Parse("missing `terms` array".into()))
}

fn json_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    v[key].as_str().ok_or_else(|| Error::Parse(format!("missing string `{key}`")))
}

fn json_int(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Parse(format!("expected an integer, got {v}")))
}

/// Inverse of [`pointed_json`]; accepts both coefficient forms.
pub fn pointed_from_json(cartan: &CartanData, v: &Value) -> Result<PointedElement> {
    let ty = cartan.lie_type();
    let mut body = TorusElement::zero(ty);
    for t in json_terms(v)? {
        let m = parse_monomial(json_str(t, "m")?, ty)?;
        let c = match &t["c"] {
            Value::Array(pairs) => {
                let mut c = Vec::with_capacity(pairs.len());
                for pair in pairs {
                    match pair.as_array().map(Vec::as_slice) {
                        Some([h, k]) => c.push((json_int(h)? as i32, json_int(k)?)),
                        _ => return Err(Error::Parse(format!("bad coefficient term {pair}"))),
                    }
                }
                HalfLaurent::from_pairs(c)
            }
            other => HalfLaurent::constant(json_int(other)?),
        };
        body.add_term(m, &c);
    }
    PointedElement::new(cartan, parse_monomial(json_str(v, "top")?, ty)?, body)
}

/// Inverse of [`twisted_json`].
pub fn twisted_from_json(fd: &FoldingDatum, v: &Value, signed: bool) -> Result<TwistedPointed> {
    let parse = |s: &str| -> Result<Monomial> {
        if signed {
            parse_signed_monomial(s, fd, "Yo")
        } else {
            let f = parse_factors(s, "Yo")?;
            parse_monomial(&format_raw(&f), fd.lie_type())
        }
    };
    let mut body = TwistedElement::zero(fd.lie_type());
    for t in json_terms(v)? {
        body.add_term(parse(json_str(t, "m")?)?, json_int(&t["c"])?);
    }
    TwistedPointed::new(fd, parse(json_str(v, "top")?)?, body)
}

fn format_raw(f: &[(i64, i32, i32)]) -> String {
    if f.is_empty() {
        return "1".into();
    }
    f.iter().map(|(i, p, e)| format!("Y[{i},{p}]^{e}")).collect()
}
