//! Exact values to and from JSON. Integers that fit in an `i64` are JSON
//! numbers; larger ones are decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use weilmotive::{CyclotomicNumber, ExactPolynomial, WeilCurve};

pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// `[[num, den], ...]` in the power basis of the number's level.
pub fn cyclo_coeffs_json(c: &CyclotomicNumber) -> Value {
    Value::Array(
        c.coeffs()
            .iter()
            .map(|q| json!([int_json(q.numer()), int_json(q.denom())]))
            .collect(),
    )
}

pub fn cyclo_json(c: &CyclotomicNumber) -> Value {
    json!({ "level": c.level(), "coeffs": cyclo_coeffs_json(c) })
}

pub fn cyclo_from_json(v: &Value) -> Option<CyclotomicNumber> {
    let level = v.get("level")?.as_u64()?;
    let coeffs = v.get("coeffs")?.as_array()?;
    let raw = coeffs
        .iter()
        .map(|pair| {
            let pair = pair.as_array()?;
            if pair.len() != 2 {
                return None;
            }
            let num = int_from_json(&pair[0])?;
            let den = int_from_json(&pair[1])?;
            if den == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(num, den))
        })
        .collect::<Option<Vec<_>>>()?;
    let x = CyclotomicNumber::reduce(level, &raw).ok()?;
    // only canonical encodings are accepted
    (x.coeffs() == raw.as_slice()).then_some(x)
}

/// `{"level", "degree", "coeffs": [per power of the variable, ascending]}`.
pub fn poly_json(poly: &ExactPolynomial) -> Value {
    let level = poly.level();
    json!({
        "level": level,
        "degree": poly.degree(),
        "coeffs": poly
            .coeffs()
            .iter()
            .map(|c| cyclo_coeffs_json(&c.lift(level).expect("common level")))
            .collect::<Vec<_>>(),
    })
}

pub fn curve_json(curve: &WeilCurve) -> Value {
    json!({
        "e": curve.e(),
        "f": curve.f(),
        "gamma": rational_string(curve.gamma()),
        "delta": rational_string(curve.delta()),
        "genus": curve.genus(),
    })
}
