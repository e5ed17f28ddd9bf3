//! File formats and JSON reports.
//!
//! Planes: one JSON object per line, `{"a": [..], "b": ..}`. Polynomials:
//! `{"n": .., "k": .., "coeffs": [{"S": [..], "c": [..]}]}` with 1-based,
//! strictly increasing indices. Rationals are JSON integers or `"p/q"`
//! strings in lowest terms.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::cube::{CoverFamily, CoverReport, CubePoint, Hyperplane};
use crate::error::{Error, Result};
use crate::fourier::MultilinearPoly;
use crate::interpolation::InterpolationScheme;
use crate::kernel::KernelCertificate;
use crate::rational::{self, Rational};
use crate::search::SearchOutcome;
use crate::subsets::indices_of;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Integers stay JSON numbers when they fit in `i64`; everything else is a string.
pub fn rational_to_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(v) = rational::to_i64(r.numer()) {
            return json!(v);
        }
    }
    Value::String(rational::format(r))
}

pub fn rational_from_json(v: &Value, line: usize) -> Result<Rational> {
    match v {
        Value::Number(num) => {
            if let Some(i) = num.as_i64() {
                Ok(rational::int(i))
            } else if let Some(u) = num.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                Err(parse_err(line, format!("{num} is not an integer; write fractions as \"p/q\"")))
            }
        }
        Value::String(s) => {
            let r = rational::parse(s).ok_or_else(|| parse_err(line, format!("bad rational {s:?}")))?;
            if let Some((p, q)) = s.split_once('/') {
                let (p, q) = (p.trim(), q.trim());
                let lowest = p.parse::<num_bigint::BigInt>().ok().zip(q.parse::<num_bigint::BigInt>().ok())
                    .is_some_and(|(p, q)| q.is_positive() && p.gcd(&q).is_one());
                if !lowest {
                    return Err(parse_err(line, format!("{s:?} is not in lowest terms")));
                }
            }
            Ok(r)
        }
        other => Err(parse_err(line, format!("expected a rational, found {other}"))),
    }
}

pub fn plane_to_json(p: &Hyperplane) -> Value {
    json!({
        "a": p.coefficients().iter().map(rational_to_json).collect::<Vec<_>>(),
        "b": rational_to_json(p.offset()),
    })
}

/// One line per plane, newline-terminated.
pub fn write_planes(family: &CoverFamily) -> String {
    family
        .planes()
        .iter()
        .map(|p| plane_to_json(p).to_string() + "\n")
        .collect()
}

fn parse_plane(v: &Value, line: usize) -> Result<Hyperplane> {
    let obj = v.as_object().ok_or_else(|| parse_err(line, "expected a JSON object"))?;
    if let Some(key) = obj.keys().find(|k| *k != "a" && *k != "b") {
        return Err(parse_err(line, format!("unexpected key {key:?}")));
    }
    let a = obj
        .get("a")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(line, "missing array \"a\""))?
        .iter()
        .map(|x| rational_from_json(x, line))
        .collect::<Result<Vec<_>>>()?;
    let b = rational_from_json(obj.get("b").ok_or_else(|| parse_err(line, "missing \"b\""))?, line)?;
    Hyperplane::new(a, b).map_err(|_| parse_err(line, "\"a\" must be nonempty"))
}

/// Parses a plane file; blank lines are skipped and errors carry 1-based line numbers.
pub fn parse_planes(text: &str) -> Result<CoverFamily> {
    let mut planes: Vec<Hyperplane> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(raw).map_err(|e| parse_err(line, e.to_string()))?;
        let p = parse_plane(&v, line)?;
        if let Some(first) = planes.first() {
            if first.n() != p.n() {
                return Err(Error::LineDimension {
                    line,
                    expected: first.n(),
                    found: p.n(),
                });
            }
        }
        planes.push(p);
    }
    CoverFamily::new(planes)
}

pub fn point_to_json(p: CubePoint) -> Value {
    json!(p.coords())
}

pub fn report_to_json(r: &CoverReport) -> Value {
    json!({
        "n": r.n,
        "covered": r.covered,
        "num_uncovered": r.num_uncovered,
        "uncovered_sample": r.uncovered_sample.iter().map(|p| point_to_json(*p)).collect::<Vec<_>>(),
        "per_plane_counts": r.per_plane_counts,
    })
}

pub fn subset_to_json(mask: u32) -> Value {
    json!(indices_of(mask).iter().map(|i| i + 1).collect::<Vec<_>>())
}

/// Parses 1-based, strictly increasing indices into a mask.
pub fn subset_from_indices(indices: &[usize], n: usize, line: usize) -> Result<u32> {
    let mut mask = 0u32;
    let mut prev = 0usize;
    for &i in indices {
        if i == 0 || i > n {
            return Err(parse_err(line, format!("index {i} outside 1..={n}")));
        }
        if i <= prev {
            return Err(parse_err(line, "indices must be strictly increasing"));
        }
        prev = i;
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

pub fn poly_to_json(p: &MultilinearPoly) -> Value {
    let coeffs: Vec<Value> = p
        .terms()
        .map(|(s, c)| {
            json!({
                "S": subset_to_json(s),
                "c": c.iter().map(rational_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "n": p.n(), "k": p.k(), "coeffs": coeffs })
}

/// Parses the polynomial format; errors report line 1 since the document is one value.
pub fn parse_poly(text: &str) -> Result<MultilinearPoly> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let field = |name: &str| {
        v.get(name)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| parse_err(1, format!("missing integer {name:?}")))
    };
    let n = field("n")?;
    let k = field("k")?;
    if n == 0 || n > 31 {
        return Err(parse_err(1, format!("n = {n} out of range")));
    }
    if k == 0 {
        return Err(parse_err(1, "k must be at least 1"));
    }
    let terms = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err(1, "missing array \"coeffs\""))?;
    let mut coeffs: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
    for (t, term) in terms.iter().enumerate() {
        let at = |msg: String| parse_err(1, format!("coeffs[{t}]: {msg}"));
        let idx: Vec<usize> = term
            .get("S")
            .and_then(Value::as_array)
            .ok_or_else(|| at("missing array \"S\"".into()))?
            .iter()
            .map(|x| x.as_u64().map(|i| i as usize).ok_or_else(|| at("indices must be integers".into())))
            .collect::<Result<_>>()?;
        let s = subset_from_indices(&idx, n, 1).map_err(|e| at(e.to_string()))?;
        let c: Vec<Rational> = term
            .get("c")
            .and_then(Value::as_array)
            .ok_or_else(|| at("missing array \"c\"".into()))?
            .iter()
            .map(|x| rational_from_json(x, 1))
            .collect::<Result<_>>()?;
        if c.len() != k {
            return Err(at(format!("expected {k} components, found {}", c.len())));
        }
        if coeffs.insert(s, c).is_some() {
            return Err(at("duplicate subset".into()));
        }
    }
    MultilinearPoly::new(n, k, coeffs)
}

pub fn scheme_to_json(s: &InterpolationScheme) -> Value {
    let layout = s.layout();
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    json!({
        "n": s.n(),
        "m": s.m(),
        "d": s.d(),
        "S": subset_to_json(s.subset()),
        "chunks": layout.chunks().iter().map(|c| one_based(c)).collect::<Vec<_>>(),
        "extra": one_based(layout.extra()),
        "rest": one_based(layout.rest()),
        "atoms": s.atoms().iter().map(|a| json!({
            "x": point_to_json(a.point),
            "weight": rational_to_json(&a.weight),
            "sign": a.sign,
        })).collect::<Vec<_>>(),
    })
}

pub fn kernel_to_json(c: &KernelCertificate) -> Value {
    json!({
        "n": c.n,
        "d": c.d,
        "rows": c.rows,
        "cols": c.cols,
        "nullity": c.nullity,
        "expects_trivial_kernel": c.expects_trivial_kernel,
        "consistent": c.consistent(),
    })
}

pub fn outcome_to_json(o: &SearchOutcome) -> Value {
    json!({
        "status": o.status.as_str(),
        "family": o.family.as_ref().map(|f| f.planes().iter().map(plane_to_json).collect::<Vec<_>>()),
        "nodes_explored": o.nodes_explored,
        "candidate_pool_size": o.candidate_pool_size,
        "exhausted_up_to": o.exhausted_up_to,
    })
}
