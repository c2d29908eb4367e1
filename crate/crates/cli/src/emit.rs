//! Plain, LaTeX and JSON renderings of command output, and the JSON decoder.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use kdv_core::ring::{Mono, Poly, Rat, RatFun, Var};
use kdv_core::{ExpFun, Exponent, Mat2};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value as Json};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Latex,
    Json,
}

/// One row of a check table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRow {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

impl CheckStatus {
    fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Value {
    Rat(RatFun),
    Exp(ExpFun),
    Matrix(Mat2),
    Text(String),
    Int(i64),
    List(Vec<Value>),
    Table(Vec<CheckRow>),
}

impl From<RatFun> for Value {
    fn from(q: RatFun) -> Value {
        Value::Rat(q)
    }
}

impl From<Poly> for Value {
    fn from(p: Poly) -> Value {
        Value::Rat(RatFun::from_poly(p))
    }
}

impl From<ExpFun> for Value {
    fn from(e: ExpFun) -> Value {
        match e.as_rational() {
            Some(q) => Value::Rat(q),
            None => Value::Exp(e),
        }
    }
}

impl From<Mat2> for Value {
    fn from(m: Mat2) -> Value {
        Value::Matrix(m)
    }
}

/// A labelled output item. `key` is the plain/JSON name, `tex` the LaTeX one.
#[derive(Debug, Clone)]
pub struct Item {
    pub key: String,
    pub tex: String,
    pub value: Value,
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn push(&mut self, key: impl Into<String>, tex: impl Into<String>, value: impl Into<Value>) {
        self.items.push(Item { key: key.into(), tex: tex.into(), value: value.into() });
    }

    pub fn text(&mut self, key: &str, text: impl Into<String>) {
        self.push(key, format!("\\mathrm{{{}}}", key.replace('_', "\\_")), Value::Text(text.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.items.iter().find(|i| i.key == key).map(|i| &i.value)
    }

    /// Failing rows across every table in the document.
    pub fn failures(&self) -> usize {
        fn count(v: &Value) -> usize {
            match v {
                Value::Table(rows) => rows.iter().filter(|r| r.status == CheckStatus::Fail).count(),
                Value::List(vs) => vs.iter().map(count).sum(),
                _ => 0,
            }
        }
        self.items.iter().map(|i| count(&i.value)).sum()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => self.plain(),
            Format::Latex => self.latex(),
            Format::Json => serde_json::to_string_pretty(&self.json()).expect("JSON values serialize") + "\n",
        }
    }

    fn plain(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match &item.value {
                Value::Table(rows) => {
                    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
                    for r in rows {
                        let _ = writeln!(out, "{:<width$}  {}  {}", r.name, r.status.label(), r.detail);
                    }
                }
                Value::List(vs) => {
                    for (i, v) in vs.iter().enumerate() {
                        let _ = writeln!(out, "{}[{i}] = {}", item.key, plain_value(v));
                    }
                }
                v => {
                    let _ = writeln!(out, "{} = {}", item.key, plain_value(v));
                }
            }
        }
        out
    }

    fn latex(&self) -> String {
        let mut out = String::from("\\begin{align*}\n");
        for item in &self.items {
            match &item.value {
                Value::Table(rows) => {
                    for r in rows {
                        let _ = writeln!(out, "&\\text{{{}}} && \\text{{{}}} \\\\", r.name.replace('_', "\\_"), r.status.label());
                    }
                }
                Value::List(vs) => {
                    for (i, v) in vs.iter().enumerate() {
                        let _ = writeln!(out, "{}[{i}] &= {} \\\\", item.tex, latex_value(v));
                    }
                }
                v => {
                    let _ = writeln!(out, "{} &= {} \\\\", item.tex, latex_value(v));
                }
            }
        }
        out.push_str("\\end{align*}\n");
        out
    }

    pub fn json(&self) -> Json {
        let mut map = Map::new();
        for item in &self.items {
            map.insert(item.key.clone(), json_value(&item.value));
        }
        Json::Object(map)
    }
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::Rat(q) => q.to_string(),
        Value::Exp(e) => e.to_string(),
        Value::Matrix(m) => m.to_string(),
        Value::Text(s) => s.clone(),
        Value::Int(k) => k.to_string(),
        Value::List(vs) => format!("[{}]", vs.iter().map(plain_value).collect::<Vec<_>>().join(", ")),
        Value::Table(rows) => rows.iter().map(|r| format!("{}: {}", r.name, r.status.label())).collect::<Vec<_>>().join("; "),
    }
}

fn latex_value(v: &Value) -> String {
    match v {
        Value::Rat(q) => latex_ratfun(q),
        Value::Exp(e) => latex_expfun(e),
        Value::Matrix(m) => format!(
            "\\begin{{pmatrix}} {} & {} \\\\ {} & {} \\end{{pmatrix}}",
            latex_expfun(&m.a11),
            latex_expfun(&m.a12),
            latex_expfun(&m.a21),
            latex_expfun(&m.a22)
        ),
        Value::Text(s) => format!("\\text{{{}}}", s.replace('_', "\\_")),
        Value::Int(k) => k.to_string(),
        Value::List(vs) => format!("\\left[{}\\right]", vs.iter().map(latex_value).collect::<Vec<_>>().join(",\\ ")),
        Value::Table(_) => plain_value(v),
    }
}

// ---------- LaTeX ----------

pub fn latex_var(v: Var) -> String {
    let name = v.name();
    let indexed = |prefix: &str, tex: &str| name.strip_prefix(prefix).map(|j| format!("{tex}{{{j}}}"));
    match name.as_str() {
        "lambda" => "\\lambda".into(),
        "mu" => "\\mu".into(),
        "nu" => "\\nu".into(),
        "E0" => "E_0".into(),
        "mu0" => "\\mu_0".into(),
        "nu0" => "\\nu_0".into(),
        _ => indexed("taup_", "\\tau^{+}_")
            .or_else(|| indexed("taum_", "\\tau^{-}_"))
            .or_else(|| indexed("tau_", "\\tau_"))
            .or_else(|| indexed("c_", "c_"))
            .unwrap_or(name),
    }
}

fn latex_mono(m: &Mono) -> String {
    let mut parts = Vec::new();
    for &(v, e) in m.pairs() {
        let base = latex_var(v);
        // `\tau_{2}^{3}` reads badly; brace indexed bases before raising.
        let base = if e > 1 && base.contains('_') { format!("{{{base}}}") } else { base };
        parts.push(if e == 1 { base } else { format!("{base}^{{{e}}}") });
    }
    parts.join(" ")
}

fn latex_rat(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

pub fn latex_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = latex_mono(m);
        if m.is_one() {
            out.push_str(&latex_rat(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            let _ = write!(out, "{} {}", latex_rat(&a), mono);
        }
    }
    out
}

pub fn latex_ratfun(q: &RatFun) -> String {
    if q.den().is_one() {
        latex_poly(q.num())
    } else {
        format!("\\frac{{{}}}{{{}}}", latex_poly(q.num()), latex_poly(q.den()))
    }
}

fn latex_expfun(e: &ExpFun) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let exponent = e.exponent().map(|ex| latex_ratfun(&ex.as_ratfun()));
    let parts: Vec<String> = e
        .terms()
        .iter()
        .map(|(&k, q)| {
            let body = latex_ratfun(q);
            match (k, &exponent) {
                (0, _) | (_, None) => body,
                (1, Some(l)) => format!("e^{{{l}}}\\left({body}\\right)"),
                (-1, Some(l)) => format!("e^{{-\\left({l}\\right)}}\\left({body}\\right)"),
                (k, Some(l)) => format!("e^{{{k}\\left({l}\\right)}}\\left({body}\\right)"),
            }
        })
        .collect();
    parts.join(" + ")
}

// ---------- JSON ----------

fn rat_json(c: &Rat) -> (Json, Json) {
    (Json::String(c.numer().to_string()), Json::String(c.denom().to_string()))
}

fn poly_json(p: &Poly, vars: &[Var]) -> Json {
    Json::Array(
        p.terms()
            .iter()
            .map(|(m, c)| {
                let (n, d) = rat_json(c);
                json!([n, d, vars.iter().map(|&v| m.exp(v)).collect::<Vec<_>>()])
            })
            .collect(),
    )
}

/// `{"vars": [...], "num": [[n, d, [exps]], ...], "den": [...]}`.
pub fn ratfun_json(q: &RatFun) -> Json {
    let vars = q.vars();
    json!({
        "vars": vars.iter().map(|v| v.name()).collect::<Vec<_>>(),
        "num": poly_json(q.num(), &vars),
        "den": poly_json(q.den(), &vars),
    })
}

/// Rational entries serialize as plain rational functions; exponential ones
/// add the level, the exponent and the terms keyed by multiple.
pub fn expfun_json(e: &ExpFun) -> Json {
    let Some(ex) = e.exponent() else {
        return ratfun_json(&e.as_rational().expect("no exponent means rational"));
    };
    let terms: Map<String, Json> = e.terms().iter().map(|(k, q)| (k.to_string(), ratfun_json(q))).collect();
    json!({
        "level": ex.level(),
        "lambda": ratfun_json(ex.lambda()),
        "offset": ratfun_json(ex.offset()),
        "terms": terms,
    })
}

fn matrix_json(m: &Mat2) -> Json {
    json!([[expfun_json(&m.a11), expfun_json(&m.a12)], [expfun_json(&m.a21), expfun_json(&m.a22)]])
}

fn json_value(v: &Value) -> Json {
    match v {
        Value::Rat(q) => ratfun_json(q),
        Value::Exp(e) => expfun_json(e),
        Value::Matrix(m) => matrix_json(m),
        Value::Text(s) => Json::String(s.clone()),
        Value::Int(k) => json!(k),
        Value::List(vs) => Json::Array(vs.iter().map(json_value).collect()),
        Value::Table(rows) => Json::Array(rows.iter().map(|r| json!({"check": r.name, "status": r.status.label(), "detail": r.detail})).collect()),
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(format!("malformed JSON value: {}", msg.into()))
}

fn decode_int(v: &Json) -> CliResult<BigInt> {
    let s = v.as_str().ok_or_else(|| bad("coefficient must be a decimal string"))?;
    BigInt::from_str(s).map_err(|_| bad(format!("`{s}` is not an integer")))
}

fn decode_poly(v: &Json, vars: &[Var]) -> CliResult<Poly> {
    let terms = v.as_array().ok_or_else(|| bad("term list expected"))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let [n, d, exps] = t.as_array().map(Vec::as_slice).ok_or_else(|| bad("term must be an array"))? else {
            return Err(bad("term must have three fields"));
        };
        let (n, d) = (decode_int(n)?, decode_int(d)?);
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        let exps = exps.as_array().ok_or_else(|| bad("exponent vector expected"))?;
        if exps.len() != vars.len() {
            return Err(bad("exponent vector length differs from vars"));
        }
        let pairs = vars.iter().zip(exps).map(|(&v, e)| e.as_u64().and_then(|e| u32::try_from(e).ok()).map(|e| (v, e)).ok_or_else(|| bad("exponent must be a small non-negative integer")));
        out.push((Mono::from_pairs(pairs.collect::<CliResult<Vec<_>>>()?), Rat::new(n, d)));
    }
    Ok(Poly::from_terms(out))
}

pub fn decode_ratfun(v: &Json) -> CliResult<RatFun> {
    let names = v.get("vars").and_then(Json::as_array).ok_or_else(|| bad("missing vars"))?;
    let vars = names
        .iter()
        .map(|n| n.as_str().and_then(Var::parse).ok_or_else(|| bad(format!("unknown variable {n}"))))
        .collect::<CliResult<Vec<_>>>()?;
    let num = decode_poly(v.get("num").ok_or_else(|| bad("missing num"))?, &vars)?;
    let den = decode_poly(v.get("den").ok_or_else(|| bad("missing den"))?, &vars)?;
    Ok(RatFun::new(num, den)?)
}

pub fn decode_expfun(v: &Json) -> CliResult<ExpFun> {
    let Some(terms) = v.get("terms") else {
        return Ok(ExpFun::rational(decode_ratfun(v)?));
    };
    let level = v.get("level").and_then(Json::as_u64).and_then(|l| u32::try_from(l).ok()).ok_or_else(|| bad("missing level"))?;
    let lambda = decode_ratfun(v.get("lambda").ok_or_else(|| bad("missing lambda"))?)?;
    let offset = decode_ratfun(v.get("offset").ok_or_else(|| bad("missing offset"))?)?;
    let ex = Arc::new(Exponent::with_offset(level, lambda, offset));
    let mut parsed = BTreeMap::new();
    for (k, q) in terms.as_object().ok_or_else(|| bad("terms must be an object"))? {
        let k: i64 = k.parse().map_err(|_| bad(format!("term key `{k}` is not an integer")))?;
        parsed.insert(k, decode_ratfun(q)?);
    }
    Ok(ExpFun::from_terms(Some(ex), parsed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kdv_core::ring::parse_ratfun;

    fn rf(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn latex_forms() {
        assert_eq!(latex_ratfun(&rf("6*x*(x^3 - 6*t)/(x^3 + 3*t)^2")), "\\frac{6 x^{4} - 36 x t}{x^{6} + 6 x^{3} t + 9 t^{2}}");
        assert_eq!(latex_ratfun(&rf("lambda^2*taup_2 - x/2")), "\\lambda^{2} \\tau^{+}_{2} - \\frac{1}{2} x");
        assert_eq!(latex_var(Var::c(3)), "c_{3}");
        assert_eq!(latex_ratfun(&rf("tau_2^2")), "{\\tau_{2}}^{2}");
    }

    #[test]
    fn json_round_trip() {
        for s in ["0", "1", "-3/7", "6*x*(x^3 - 6*t)/(x^3 + 3*t)^2", "lambda^2*taum_3 + c_1/(E0 - x)"] {
            let q = rf(s);
            assert_eq!(decode_ratfun(&ratfun_json(&q)).unwrap(), q);
        }
        let ex = Arc::new(Exponent::symbolic(1));
        let e = ExpFun::from_terms(Some(ex), [(1, rf("(lambda*x - 1)/x")), (-1, rf("x")), (0, rf("2"))]);
        let text = serde_json::to_string(&expfun_json(&e)).unwrap();
        assert_eq!(decode_expfun(&serde_json::from_str(&text).unwrap()).unwrap(), e);
    }

    #[test]
    fn rejects_malformed_json() {
        assert!(decode_ratfun(&json!({"vars": ["y"], "num": [], "den": []})).is_err());
        assert!(decode_ratfun(&json!({"vars": [], "num": [["1", "0", []]], "den": [["1", "1", []]]})).is_err());
    }
}
