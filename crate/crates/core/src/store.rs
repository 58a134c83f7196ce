//! Versioned JSON persistence for [`ModelParams`].
//!
//! Keys appear in a fixed order and every float is written with 17
//! significant digits, so save → load → save reproduces the file byte for
//! byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const FORMAT_VERSION: u64 = 1;

/// Conventional file extension.
pub const EXTENSION: &str = "mmj";

fn push_f64(out: &mut String, v: f64) {
    write!(out, "{v:.16e}").unwrap();
}

fn push_array<'a>(out: &mut String, values: impl Iterator<Item = &'a f64>) {
    out.push('[');
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        push_f64(out, *v);
    }
    out.push(']');
}

/// Row-major flattening.
fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    m.transpose().iter().copied().collect()
}

pub fn to_json_string(model: &ModelParams, store_b: bool) -> Result<String> {
    model.validate()?;
    let mut s = String::with_capacity(4096);
    s.push_str("{\n");
    writeln!(s, "  \"format_version\": {FORMAT_VERSION},").unwrap();
    writeln!(s, "  \"n\": {},", model.n_inputs()).unwrap();
    writeln!(s, "  \"p\": {},", model.n_outputs()).unwrap();
    writeln!(s, "  \"M\": {},", model.n_inducing()).unwrap();
    writeln!(s, "  \"N\": {},", model.n_samples).unwrap();
    for (key, v) in [("nu", model.nu), ("sigma2", model.sigma2), ("sigma_x2", model.sigma_x2)] {
        write!(s, "  \"{key}\": ").unwrap();
        push_f64(&mut s, v);
        s.push_str(",\n");
    }
    s.push_str("  \"w\": ");
    push_array(&mut s, model.w.iter());
    s.push_str(",\n  \"a\": ");
    push_array(&mut s, row_major(&model.a).iter());
    s.push_str(",\n  \"alpha\": ");
    push_array(&mut s, row_major(&model.alpha).iter());
    match (&model.b, store_b) {
        (Some(b), true) => {
            s.push_str(",\n  \"B\": ");
            push_array(&mut s, row_major(b).iter());
        }
        (None, true) => {
            return Err(Error::Validation("B requested but the model does not carry it".into()));
        }
        _ => {}
    }
    s.push_str("\n}\n");
    Ok(s)
}

fn parse_err(key: &str, message: impl Into<String>) -> Error {
    Error::Parse { key: key.into(), message: message.into() }
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(key, "missing"))
}

fn get_usize(obj: &Map<String, Value>, key: &str) -> Result<usize> {
    get(obj, key)?.as_u64().map(|v| v as usize).ok_or_else(|| parse_err(key, "expected a non-negative integer"))
}

fn get_f64(obj: &Map<String, Value>, key: &str) -> Result<f64> {
    get(obj, key)?.as_f64().ok_or_else(|| parse_err(key, "expected a number"))
}

fn get_vec(obj: &Map<String, Value>, key: &str, len: usize) -> Result<Vec<f64>> {
    let arr = get(obj, key)?.as_array().ok_or_else(|| parse_err(key, "expected an array"))?;
    if arr.len() != len {
        return Err(parse_err(key, format!("expected {len} numbers, found {}", arr.len())));
    }
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            match v {
                Value::String(t) => non_finite(t),
                _ => v.as_f64(),
            }
            .ok_or_else(|| parse_err(key, format!("element {i} is not a number")))
        })
        .collect()
}

fn non_finite(token: &str) -> Option<f64> {
    match token {
        "NaN" => Some(f64::NAN),
        "Infinity" => Some(f64::INFINITY),
        "-Infinity" => Some(f64::NEG_INFINITY),
        _ => None,
    }
}

/// Quotes the bare `NaN` / `Infinity` / `-Infinity` tokens that some JSON
/// writers emit, so such files load and then fail validation instead of
/// failing to parse.
fn quote_non_finite(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 16);
    let mut in_string = false;
    let mut escaped = false;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        if in_string {
            out.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if c == '"' {
            in_string = true;
        }
        let token = ["-Infinity", "Infinity", "NaN"].into_iter().find(|t| rest.starts_with(t));
        if let Some(t) = token {
            out.push('"');
            out.push_str(t);
            out.push('"');
            rest = &rest[t.len()..];
        } else {
            out.push(c);
            rest = &rest[c.len_utf8()..];
        }
    }
    out
}

pub fn from_json_str(text: &str) -> Result<ModelParams> {
    let root: Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(e) => serde_json::from_str(&quote_non_finite(text)).map_err(|_| parse_err("<document>", e.to_string()))?,
    };
    let obj = root.as_object().ok_or_else(|| parse_err("<document>", "expected a JSON object"))?;
    let version = get(obj, "format_version")?
        .as_u64()
        .ok_or_else(|| parse_err("format_version", "expected a non-negative integer"))?;
    if version != FORMAT_VERSION {
        return Err(Error::Version(version));
    }
    let n = get_usize(obj, "n")?;
    let p = get_usize(obj, "p")?;
    let m = get_usize(obj, "M")?;
    let n_samples = get_usize(obj, "N")?;
    let nu = get_f64(obj, "nu")?;
    let sigma2 = get_f64(obj, "sigma2")?;
    let sigma_x2 = get_f64(obj, "sigma_x2")?;
    let w = get_vec(obj, "w", n)?;
    let a = DMatrix::from_row_slice(m, n, &get_vec(obj, "a", m * n)?);
    let alpha = DMatrix::from_row_slice(m, p, &get_vec(obj, "alpha", m * p)?);
    let b = match obj.get("B") {
        Some(_) => Some(DMatrix::from_row_slice(m, n_samples, &get_vec(obj, "B", m * n_samples)?)),
        None => None,
    };
    ModelParams::new(alpha, w, a, sigma2, sigma_x2, b, nu, n_samples)
}

pub fn save(model: &ModelParams, path: &Path, store_b: bool) -> Result<()> {
    let text = to_json_string(model, store_b)?;
    fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn load(path: &Path) -> Result<ModelParams> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(with_b: bool) -> ModelParams {
        let a = DMatrix::from_row_slice(2, 2, &[0.1, -0.2, 1.0 / 3.0, 2.0]);
        let alpha = DMatrix::from_row_slice(2, 1, &[std::f64::consts::PI, -1e-300]);
        let b = with_b.then(|| DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.5]));
        ModelParams::new(alpha, vec![0.25, 1.0], a, 1.0, 0.01, b, 5.0, 3).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let model = sample(true);
        let text = to_json_string(&model, true).unwrap();
        let back = from_json_str(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(to_json_string(&back, true).unwrap(), text);
    }

    #[test]
    fn b_is_optional() {
        let text = to_json_string(&sample(true), false).unwrap();
        assert!(!text.contains("\"B\""));
        let back = from_json_str(&text).unwrap();
        assert!(back.b.is_none());
        assert!(to_json_string(&back, true).is_err());
    }

    #[test]
    fn corrupt_files_name_the_key() {
        let text = to_json_string(&sample(false), false).unwrap();
        let broken = text.replace("\"alpha\": [", "\"alpha\": [\"x\", ");
        match from_json_str(&broken) {
            Err(Error::Parse { key, .. }) => assert_eq!(key, "alpha"),
            other => panic!("unexpected {other:?}"),
        }
        let missing = text.replace("\"sigma2\"", "\"sigma_2\"");
        match from_json_str(&missing) {
            Err(Error::Parse { key, .. }) => assert_eq!(key, "sigma2"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(from_json_str("{not json"), Err(Error::Parse { .. })));
    }

    #[test]
    fn rejects_versions_and_invalid_models() {
        let text = to_json_string(&sample(false), false).unwrap();
        let v99 = text.replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(matches!(from_json_str(&v99), Err(Error::Version(99))));
        let low_nu = text.replace("\"nu\": 5.0000000000000000e0", "\"nu\": 1.5");
        assert!(matches!(from_json_str(&low_nu), Err(Error::Validation(_))));
        let nan = text.replace("\"alpha\": [", "\"alpha\": [NaN, ").replacen("3.1415926535897931e0, ", "", 1);
        assert!(matches!(from_json_str(&nan), Err(Error::Validation(_))), "{:?}", from_json_str(&nan));
        let quoted =
            text.replace("\"alpha\": [", "\"alpha\": [\"Infinity\", ").replacen("3.1415926535897931e0, ", "", 1);
        assert!(matches!(from_json_str(&quoted), Err(Error::Validation(_))));
    }

    proptest! {
        #[test]
        fn any_finite_model_round_trips(values in proptest::collection::vec(-1e12f64..1e12, 7), w in 0.0f64..100.0) {
            let a = DMatrix::from_row_slice(2, 1, &values[0..2]);
            let alpha = DMatrix::from_row_slice(2, 2, &values[2..6]);
            let model = ModelParams::new(alpha, vec![w], a, values[6].abs() + 1e-3, 0.01, None, 7.5, 4).unwrap();
            let text = to_json_string(&model, false).unwrap();
            let back = from_json_str(&text).unwrap();
            prop_assert_eq!(&back, &model);
            prop_assert_eq!(to_json_string(&back, false).unwrap(), text);
        }
    }
}
