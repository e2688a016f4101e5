//! JSON problem files, schema version 1.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "space": {"variant": "Sequence", "r": "inf", "d": 2},
//!   "p": 2,
//!   "terms": [{"n": 2, "x": [[3, 0], [0, -1]]}],
//!   "sampler": {"seed": 7, "samples": 20000},
//!   "search": {"restarts": 2}
//! }
//! ```
//!
//! Only `space` is required. Complex numbers are `[re, im]` pairs; an
//! element of `FunctionLr` is a list of `{"exponents": [..], "c": [re, im]}`.
//! `r` may be the string `"inf"`. Validation errors carry a JSON pointer to
//! the offending value.

use std::collections::BTreeMap;
use std::fmt;

use dirichlet_ruc::constants::SearchConfig;
use dirichlet_ruc::dirichlet::DirichletPolynomial;
use dirichlet_ruc::random::SamplerConfig;
use dirichlet_ruc::spaces::{Element, SpaceSpec, TrigPolynomial};
use dirichlet_ruc::Complex64;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// A rejected problem file: JSON pointer plus reason.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl ValidationError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "/" } else { &self.path };
        write!(f, "{path}: {}", self.message)
    }
}

impl std::error::Error for ValidationError {}

type VResult<T> = Result<T, ValidationError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub polynomial: DirichletPolynomial,
    pub p: Option<f64>,
    pub sampler: SamplerConfig,
    /// Whether the file set `sampler.seed` explicitly.
    pub seed_in_file: bool,
    pub search: Option<SearchConfig>,
}

impl Problem {
    pub fn space(&self) -> &SpaceSpec {
        self.polynomial.space()
    }

    /// Coefficients in increasing order of `n`.
    pub fn elements(&self) -> Vec<Element> {
        self.polynomial.terms().map(|(_, x)| x.clone()).collect()
    }
}

fn expect_object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> VResult<&'a Map<String, Value>> {
    let obj = v
        .as_object()
        .ok_or_else(|| ValidationError::new(path, "expected an object"))?;
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ValidationError::new(
                format!("{path}/{}", escape(key)),
                format!("unknown field, expected one of {}", allowed.join(", ")),
            ));
        }
    }
    Ok(obj)
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> VResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| ValidationError::new(path, format!("missing field `{key}`")))
}

fn uint(v: &Value, path: &str) -> VResult<u64> {
    v.as_u64()
        .ok_or_else(|| ValidationError::new(path, "expected a non-negative integer"))
}

fn positive(v: &Value, path: &str) -> VResult<usize> {
    match uint(v, path)? {
        0 => Err(ValidationError::new(path, "must be at least 1")),
        n => usize::try_from(n).map_err(|_| ValidationError::new(path, "too large")),
    }
}

fn exponent_r(v: &Value, path: &str) -> VResult<f64> {
    let r = match v {
        Value::String(s) if matches!(s.as_str(), "inf" | "infinity") => f64::INFINITY,
        Value::Number(n) => n.as_f64().unwrap_or(f64::NAN),
        _ => return Err(ValidationError::new(path, "expected a number or \"inf\"")),
    };
    if !(r >= 1.0) {
        return Err(ValidationError::new(path, format!("r = {r} is below 1")));
    }
    Ok(r)
}

fn parse_space(v: &Value) -> VResult<SpaceSpec> {
    let path = "/space";
    let obj = v
        .as_object()
        .ok_or_else(|| ValidationError::new(path, "expected an object"))?;
    let variant = required(obj, "variant", path)?
        .as_str()
        .ok_or_else(|| ValidationError::new("/space/variant", "expected a string"))?;
    let space = match variant {
        "Sequence" => {
            let obj = expect_object(v, path, &["variant", "r", "d"])?;
            SpaceSpec::Sequence {
                r: exponent_r(required(obj, "r", path)?, "/space/r")?,
                d: positive(required(obj, "d", path)?, "/space/d")?,
            }
        }
        "Hilbert" | "Sup" => {
            let obj = expect_object(v, path, &["variant", "d"])?;
            let d = positive(required(obj, "d", path)?, "/space/d")?;
            if variant == "Hilbert" {
                SpaceSpec::Hilbert { d }
            } else {
                SpaceSpec::Sup { d }
            }
        }
        "FunctionLr" => {
            let obj = expect_object(v, path, &["variant", "r", "k"])?;
            SpaceSpec::FunctionLr {
                r: exponent_r(required(obj, "r", path)?, "/space/r")?,
                k: positive(required(obj, "k", path)?, "/space/k")?,
            }
        }
        other => {
            return Err(ValidationError::new(
                "/space/variant",
                format!("unknown variant `{other}`, expected Sequence, Hilbert, Sup or FunctionLr"),
            ))
        }
    };
    space
        .validate()
        .map_err(|e| ValidationError::new(path, e.to_string()))?;
    Ok(space)
}

fn complex(v: &Value, path: &str) -> VResult<Complex64> {
    let bad = || ValidationError::new(path, "expected a complex number as [re, im]");
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(Complex64::new(
            re.as_f64().ok_or_else(bad)?,
            im.as_f64().ok_or_else(bad)?,
        )),
        _ => Err(bad()),
    }
}

fn parse_element(space: &SpaceSpec, v: &Value, path: &str) -> VResult<Element> {
    let items = v
        .as_array()
        .ok_or_else(|| ValidationError::new(path, "expected an array"))?;
    match *space {
        SpaceSpec::FunctionLr { k, .. } => {
            let mut poly = TrigPolynomial::new(k);
            for (i, t) in items.iter().enumerate() {
                let tp = format!("{path}/{i}");
                let obj = expect_object(t, &tp, &["exponents", "c"])?;
                let ep = format!("{tp}/exponents");
                let beta = required(obj, "exponents", &tp)?
                    .as_array()
                    .ok_or_else(|| ValidationError::new(&ep, "expected an array of integers"))?
                    .iter()
                    .enumerate()
                    .map(|(j, b)| {
                        b.as_i64()
                            .ok_or_else(|| ValidationError::new(format!("{ep}/{j}"), "expected an integer"))
                    })
                    .collect::<VResult<Vec<i64>>>()?;
                if beta.len() != k {
                    return Err(ValidationError::new(
                        ep,
                        format!("expected {k} exponents, got {}", beta.len()),
                    ));
                }
                let c = complex(required(obj, "c", &tp)?, &format!("{tp}/c"))?;
                poly.add_term(beta, c)
                    .map_err(|e| ValidationError::new(&tp, e.to_string()))?;
            }
            Ok(Element::Trig(poly))
        }
        _ => {
            let d = space.dim().expect("coordinate space");
            if items.len() != d {
                return Err(ValidationError::new(
                    path,
                    format!("expected {d} coordinates, got {}", items.len()),
                ));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, c)| complex(c, &format!("{path}/{i}")))
                .collect::<VResult<Vec<_>>>()
                .map(Element::Coords)
        }
    }
}

fn typed<T: DeserializeOwned>(v: &Value, path: &str) -> VResult<T> {
    serde_path_to_error::deserialize(v.clone()).map_err(|e| {
        let mut p = path.to_string();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Map { key } | Segment::Enum { variant: key } => {
                    p.push('/');
                    p.push_str(&escape(key));
                }
                Segment::Seq { index } => p.push_str(&format!("/{index}")),
                Segment::Unknown => {}
            }
        }
        ValidationError::new(p, e.into_inner().to_string())
    })
}

/// Parses and validates a problem file.
pub fn parse_problem(text: &[u8]) -> VResult<Problem> {
    let root: Value = serde_json::from_slice(text)
        .map_err(|e| ValidationError::new("", format!("invalid JSON: {e}")))?;
    let obj = expect_object(&root, "", &["schema", "space", "p", "terms", "sampler", "search"])?;
    if let Some(s) = obj.get("schema") {
        if s.as_u64() != Some(SCHEMA_VERSION) {
            return Err(ValidationError::new(
                "/schema",
                format!("unsupported schema {s}, expected {SCHEMA_VERSION}"),
            ));
        }
    }
    let space = parse_space(required(obj, "space", "")?)?;
    let p = match obj.get("p") {
        None => None,
        Some(v) => {
            let p = v
                .as_f64()
                .ok_or_else(|| ValidationError::new("/p", "expected a number"))?;
            if !(p >= 1.0) {
                return Err(ValidationError::new("/p", format!("p = {p} is below 1")));
            }
            Some(p)
        }
    };
    let mut polynomial = DirichletPolynomial::new(space.clone())
        .map_err(|e| ValidationError::new("/space", e.to_string()))?;
    if let Some(terms) = obj.get("terms") {
        let terms = terms
            .as_array()
            .ok_or_else(|| ValidationError::new("/terms", "expected an array"))?;
        let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
        for (i, t) in terms.iter().enumerate() {
            let tp = format!("/terms/{i}");
            let tobj = expect_object(t, &tp, &["n", "x"])?;
            let np = format!("{tp}/n");
            let n = uint(required(tobj, "n", &tp)?, &np)?;
            if n == 0 {
                return Err(ValidationError::new(np, "n must be at least 1"));
            }
            if let Some(first) = seen.insert(n, i) {
                return Err(ValidationError::new(
                    np,
                    format!("duplicate n = {n}, first given at /terms/{first}"),
                ));
            }
            let x = parse_element(&space, required(tobj, "x", &tp)?, &format!("{tp}/x"))?;
            polynomial
                .insert(n, x)
                .map_err(|e| ValidationError::new(&tp, e.to_string()))?;
        }
    }
    let (sampler, seed_in_file) = match obj.get("sampler") {
        None => (SamplerConfig::default(), false),
        Some(v) => {
            let cfg: SamplerConfig = typed(v, "/sampler")?;
            cfg.validate()
                .map_err(|e| ValidationError::new("/sampler", e.to_string()))?;
            (cfg, v.get("seed").is_some())
        }
    };
    let search = match obj.get("search") {
        None => None,
        Some(v) => {
            let s: SearchConfig = typed(v, "/search")?;
            s.validate()
                .map_err(|e| ValidationError::new("/search", e.to_string()))?;
            Some(s)
        }
    };
    Ok(Problem {
        polynomial,
        p,
        sampler,
        seed_in_file,
        search,
    })
}

fn pair(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn r_value(r: f64) -> Value {
    if r.is_infinite() {
        json!("inf")
    } else {
        json!(r)
    }
}

fn space_value(space: &SpaceSpec) -> Value {
    match *space {
        SpaceSpec::Sequence { r, d } => json!({"variant": "Sequence", "r": r_value(r), "d": d}),
        SpaceSpec::Hilbert { d } => json!({"variant": "Hilbert", "d": d}),
        SpaceSpec::Sup { d } => json!({"variant": "Sup", "d": d}),
        SpaceSpec::FunctionLr { r, k } => json!({"variant": "FunctionLr", "r": r_value(r), "k": k}),
    }
}

fn element_value(x: &Element) -> Value {
    match x {
        Element::Coords(v) => Value::Array(v.iter().copied().map(pair).collect()),
        Element::Trig(t) => Value::Array(
            t.terms()
                .map(|(beta, c)| json!({"exponents": beta, "c": pair(c)}))
                .collect(),
        ),
    }
}

/// Serializes a problem in the same schema; `parse_problem` inverts it.
pub fn problem_to_json(problem: &Problem) -> Value {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("space".into(), space_value(problem.space()));
    if let Some(p) = problem.p {
        obj.insert("p".into(), json!(p));
    }
    let terms: Vec<Value> = problem
        .polynomial
        .terms()
        .map(|(n, x)| json!({"n": n, "x": element_value(x)}))
        .collect();
    obj.insert("terms".into(), Value::Array(terms));
    let mut sampler = serde_json::to_value(&problem.sampler).expect("sampler serializes");
    if !problem.seed_in_file {
        sampler.as_object_mut().expect("object").remove("seed");
    }
    obj.insert("sampler".into(), sampler);
    if let Some(s) = &problem.search {
        obj.insert("search".into(), serde_json::to_value(s).expect("search serializes"));
    }
    Value::Object(obj)
}
