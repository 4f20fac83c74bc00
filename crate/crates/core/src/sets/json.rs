//! JSON schema for set descriptions.
//!
//! Reals are written as decimal strings with 17 significant digits so that
//! every parameter round-trips bit for bit; parsing accepts strings or plain
//! JSON numbers. Box bounds may be `"inf"` / `"-inf"`.

use serde_json::{json, Map, Value};

use super::{HalfspaceRow, PiecewiseSet, SetDescription};
use crate::error::{Error, Result};
use crate::vector::DenseVector;

pub fn real_to_json(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::String("inf".into())
    } else if x == f64::NEG_INFINITY {
        Value::String("-inf".into())
    } else {
        Value::String(format!("{x:.16e}"))
    }
}

pub fn vector_to_json(v: &DenseVector) -> Value {
    Value::Array(v.iter().map(|&x| real_to_json(x)).collect())
}

fn reals_to_json(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| real_to_json(x)).collect())
}

pub fn set_to_json(s: &SetDescription) -> Value {
    match s {
        SetDescription::Halfspace { normal, offset } | SetDescription::Hyperplane { normal, offset } => {
            json!({"type": s.type_tag(), "normal": vector_to_json(normal), "offset": real_to_json(*offset)})
        }
        SetDescription::Ball { center, radius } => {
            json!({"type": "ball", "center": vector_to_json(center), "radius": real_to_json(*radius)})
        }
        SetDescription::Box { lower, upper } => {
            json!({"type": "box", "lower": reals_to_json(lower), "upper": reals_to_json(upper)})
        }
        SetDescription::HPolyhedron { rows } => json!({
            "type": "hpoly",
            "rows": rows.iter().map(|r| json!({"normal": vector_to_json(&r.normal), "offset": real_to_json(r.offset)})).collect::<Vec<_>>(),
        }),
        SetDescription::Motzkin { points, rays } => json!({
            "type": "motzkin",
            "points": points.iter().map(vector_to_json).collect::<Vec<_>>(),
            "rays": rays.iter().map(vector_to_json).collect::<Vec<_>>(),
        }),
        SetDescription::Translate { inner, shift } => {
            json!({"type": "translate", "inner": set_to_json(inner), "shift": vector_to_json(shift)})
        }
        SetDescription::Intersection { members } => {
            json!({"type": "intersection", "members": members.iter().map(set_to_json).collect::<Vec<_>>()})
        }
        SetDescription::BallSum { inner, radius } => {
            json!({"type": "ballsum", "inner": set_to_json(inner), "radius": real_to_json(*radius)})
        }
    }
}

pub fn set_to_json_string(s: &SetDescription) -> String {
    serde_json::to_string_pretty(&set_to_json(s)).expect("json values serialize")
}

pub fn piecewise_to_json(p: &PiecewiseSet) -> Value {
    json!({"type": "union", "pieces": p.pieces.iter().map(set_to_json).collect::<Vec<_>>()})
}

fn perr(pointer: &str, message: impl Into<String>) -> Error {
    Error::Parse { pointer: if pointer.is_empty() { "/".into() } else { pointer.into() }, message: message.into() }
}

/// Re-labels validation failures with their JSON pointer.
fn as_parse_error(e: Error) -> Error {
    match e {
        Error::Validation { field, message } => perr(&field, message),
        Error::Dimension { expected, found, context } => {
            perr(&context, format!("dimension mismatch: expected {expected}, got {found}"))
        }
        other => other,
    }
}

pub(crate) fn parse_real(v: &Value, at: &str) -> Result<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| perr(at, "number out of range"))?,
        Value::String(s) => s.trim().parse::<f64>().map_err(|_| perr(at, format!("not a real: {s:?}")))?,
        _ => return Err(perr(at, "expected a real (number or decimal string)")),
    };
    if x.is_nan() {
        return Err(perr(at, "NaN is not allowed"));
    }
    Ok(x)
}

fn parse_finite(v: &Value, at: &str) -> Result<f64> {
    let x = parse_real(v, at)?;
    if !x.is_finite() {
        return Err(perr(at, "must be finite"));
    }
    Ok(x)
}

fn parse_reals(v: &Value, at: &str) -> Result<Vec<f64>> {
    let arr = v.as_array().ok_or_else(|| perr(at, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| parse_real(x, &format!("{at}/{i}"))).collect()
}

pub(crate) fn parse_vector(v: &Value, at: &str) -> Result<DenseVector> {
    let arr = v.as_array().ok_or_else(|| perr(at, "expected an array"))?;
    if arr.is_empty() {
        return Err(perr(at, "vector must have dimension >= 1"));
    }
    let xs = arr
        .iter()
        .enumerate()
        .map(|(i, x)| parse_finite(x, &format!("{at}/{i}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(DenseVector::from_vec(xs))
}

fn parse_vectors(v: &Value, at: &str) -> Result<Vec<DenseVector>> {
    let arr = v.as_array().ok_or_else(|| perr(at, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| parse_vector(x, &format!("{at}/{i}"))).collect()
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, at: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| perr(&format!("{at}/{name}"), "missing field"))
}

fn parse_raw(v: &Value, at: &str) -> Result<SetDescription> {
    let obj = v.as_object().ok_or_else(|| perr(at, "expected an object"))?;
    let tag = field(obj, "type", at)?.as_str().ok_or_else(|| perr(&format!("{at}/type"), "expected a string"))?;
    let sub = |name: &str| format!("{at}/{name}");
    Ok(match tag {
        "halfspace" | "hyperplane" => {
            let normal = parse_vector(field(obj, "normal", at)?, &sub("normal"))?;
            let offset = parse_finite(field(obj, "offset", at)?, &sub("offset"))?;
            if tag == "halfspace" {
                SetDescription::Halfspace { normal, offset }
            } else {
                SetDescription::Hyperplane { normal, offset }
            }
        }
        "ball" => SetDescription::Ball {
            center: parse_vector(field(obj, "center", at)?, &sub("center"))?,
            radius: parse_finite(field(obj, "radius", at)?, &sub("radius"))?,
        },
        "box" => SetDescription::Box {
            lower: parse_reals(field(obj, "lower", at)?, &sub("lower"))?,
            upper: parse_reals(field(obj, "upper", at)?, &sub("upper"))?,
        },
        "hpoly" => {
            let rows_at = sub("rows");
            let rows = field(obj, "rows", at)?.as_array().ok_or_else(|| perr(&rows_at, "expected an array"))?;
            let mut out = Vec::with_capacity(rows.len());
            for (i, r) in rows.iter().enumerate() {
                let here = format!("{rows_at}/{i}");
                let o = r.as_object().ok_or_else(|| perr(&here, "expected an object"))?;
                out.push(HalfspaceRow {
                    normal: parse_vector(field(o, "normal", &here)?, &format!("{here}/normal"))?,
                    offset: parse_finite(field(o, "offset", &here)?, &format!("{here}/offset"))?,
                });
            }
            SetDescription::HPolyhedron { rows: out }
        }
        "motzkin" => SetDescription::Motzkin {
            points: parse_vectors(field(obj, "points", at)?, &sub("points"))?,
            rays: match obj.get("rays") {
                Some(r) => parse_vectors(r, &sub("rays"))?,
                None => Vec::new(),
            },
        },
        "translate" => SetDescription::Translate {
            inner: Box::new(parse_raw(field(obj, "inner", at)?, &sub("inner"))?),
            shift: parse_vector(field(obj, "shift", at)?, &sub("shift"))?,
        },
        "intersection" => {
            let m_at = sub("members");
            let arr = field(obj, "members", at)?.as_array().ok_or_else(|| perr(&m_at, "expected an array"))?;
            SetDescription::Intersection {
                members: arr
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse_raw(m, &format!("{m_at}/{i}")))
                    .collect::<Result<Vec<_>>>()?,
            }
        }
        "ballsum" => SetDescription::BallSum {
            inner: Box::new(parse_raw(field(obj, "inner", at)?, &sub("inner"))?),
            radius: parse_finite(field(obj, "radius", at)?, &sub("radius"))?,
        },
        other => return Err(perr(&sub("type"), format!("unknown set type {other:?}"))),
    })
}

pub fn set_from_value(v: &Value) -> Result<SetDescription> {
    parse_raw(v, "")?.validate().map_err(as_parse_error)
}

/// Parses and validates a set description.
pub fn parse_set_json(text: &str) -> Result<SetDescription> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr("", format!("invalid JSON: {e}")))?;
    set_from_value(&v)
}

/// Parses either a `union` of pieces or a single convex set.
pub fn parse_piecewise_json(text: &str) -> Result<PiecewiseSet> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr("", format!("invalid JSON: {e}")))?;
    piecewise_from_value(&v)
}

pub fn piecewise_from_value(v: &Value) -> Result<PiecewiseSet> {
    if v.get("type").and_then(Value::as_str) == Some("union") {
        let arr = v.get("pieces").and_then(Value::as_array).ok_or_else(|| perr("/pieces", "expected an array"))?;
        let pieces = arr
            .iter()
            .enumerate()
            .map(|(i, p)| parse_raw(p, &format!("/pieces/{i}")))
            .collect::<Result<Vec<_>>>()?;
        PiecewiseSet::new(pieces).map_err(as_parse_error)
    } else {
        Ok(PiecewiseSet { pieces: vec![set_from_value(v)?] })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let b = parse_set_json(r#"{"type":"ball","center":[0,0],"radius":1}"#).unwrap();
        assert!(matches!(b, SetDescription::Ball { radius, .. } if radius == 1.0));
        let m = parse_set_json(r#"{"type":"motzkin","points":[[0,0]],"rays":[[1,0],[1,1]]}"#).unwrap();
        assert!(matches!(m, SetDescription::Motzkin { ref rays, .. } if rays.len() == 2));
    }

    #[test]
    fn inverted_box_points_at_upper() {
        let e = parse_set_json(r#"{"type":"box","lower":[0,0],"upper":[-1,1]}"#).unwrap_err();
        match e {
            Error::Parse { pointer, .. } => assert_eq!(pointer, "/upper"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_carry_pointers() {
        let cases = [
            (r#"{"type":"blob"}"#, "/type"),
            (r#"{"type":"ball","center":[0,0]}"#, "/radius"),
            (r#"{"type":"motzkin","points":[[0,0],[1]]}"#, "/points/1"),
            (r#"{"type":"intersection","members":[{"type":"ball","center":[0],"radius":"x"}]}"#, "/members/0/radius"),
        ];
        for (text, ptr) in cases {
            match parse_set_json(text).unwrap_err() {
                Error::Parse { pointer, .. } => assert_eq!(pointer, ptr, "{text}"),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn bit_exact_round_trip() {
        let s = SetDescription::Intersection {
            members: vec![
                SetDescription::Box { lower: vec![f64::NEG_INFINITY, 0.1], upper: vec![1.0 / 3.0, f64::INFINITY] },
                SetDescription::BallSum {
                    inner: Box::new(SetDescription::Motzkin {
                        points: vec![DenseVector::from_slice(&[std::f64::consts::PI, -1e-300])],
                        rays: vec![DenseVector::from_slice(&[2.0f64.sqrt(), 5e-324])],
                    }),
                    radius: 0.7,
                },
            ],
        };
        let text = set_to_json_string(&s);
        assert_eq!(parse_set_json(&text).unwrap(), s);
    }
}
