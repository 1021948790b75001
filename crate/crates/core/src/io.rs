//! Configuration files and number formatting.
//!
//! A configuration is stored as JSON:
//! `{"field": "C", "d": 4, "K": 2, "N": 3, "blocks": [[[re, im], ...], ...]}`
//! with each block's d·K entries listed row-major. Real configurations store
//! plain numbers instead of pairs. Numbers carry 17 significant digits, which
//! round-trips every f64 exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Field};
use crate::linalg::CMatrix;

/// `x` with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn config_to_json(config: &Configuration) -> String {
    let (d, k) = (config.d(), config.k());
    let mut out = String::new();
    let _ = write!(
        out,
        "{{\n  \"field\": \"{}\",\n  \"d\": {d},\n  \"K\": {k},\n  \"N\": {},\n  \"blocks\": [",
        config.field().short_name(),
        config.n()
    );
    for idx in 0..config.n() {
        let block = config.block(idx);
        out.push_str(if idx == 0 { "\n    [" } else { ",\n    [" });
        let mut first = true;
        for i in 0..d {
            for j in 0..k {
                if !first {
                    out.push_str(", ");
                }
                first = false;
                let z = block[(i, j)];
                match config.field() {
                    Field::Real => out.push_str(&fmt17(z.re)),
                    Field::Complex => {
                        let _ = write!(out, "[{}, {}]", fmt17(z.re), fmt17(z.im));
                    }
                }
            }
        }
        out.push(']');
    }
    out.push_str("\n  ]\n}\n");
    out
}

fn get_usize(obj: &serde_json::Map<String, Value>, key: &str) -> Result<usize> {
    let v = obj
        .get(key)
        .ok_or_else(|| Error::parse(format!("field `{key}`"), "missing"))?;
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(format!("field `{key}`"), format!("expected a nonnegative integer, got {v}")))
}

fn entry(v: &Value, field: Field, ctx: impl Fn() -> String) -> Result<Complex64> {
    let num = |x: &Value| {
        x.as_f64()
            .ok_or_else(|| Error::parse(ctx(), format!("expected a number, got {x}")))
    };
    match (field, v) {
        (Field::Real, Value::Number(_)) => Ok(Complex64::new(num(v)?, 0.0)),
        (Field::Real, Value::Array(a)) if a.len() == 1 => Ok(Complex64::new(num(&a[0])?, 0.0)),
        (_, Value::Array(a)) if a.len() == 2 => Ok(Complex64::new(num(&a[0])?, num(&a[1])?)),
        _ => Err(Error::parse(
            ctx(),
            format!("expected {} entry, got {v}", match field {
                Field::Real => "a real",
                Field::Complex => "an [re, im]",
            }),
        )),
    }
}

pub fn config_from_json(text: &str) -> Result<Configuration> {
    let root: Value = serde_json::from_str(text).map_err(|e| Error::parse("configuration JSON", e))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::parse("configuration JSON", "top level is not an object"))?;
    let field: Field = obj
        .get("field")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::parse("field `field`", "missing or not a string"))?
        .parse()
        .map_err(|e: Error| Error::parse("field `field`", e))?;
    let d = get_usize(obj, "d")?;
    let k = get_usize(obj, "K")?;
    let n = get_usize(obj, "N")?;
    let blocks = obj
        .get("blocks")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("field `blocks`", "missing or not an array"))?;
    if blocks.len() != n {
        return Err(Error::parse("field `blocks`", format!("N = {n} but {} blocks given", blocks.len())));
    }
    let mut frames = Vec::with_capacity(n);
    for (b, block) in blocks.iter().enumerate() {
        let entries = block
            .as_array()
            .ok_or_else(|| Error::parse(format!("blocks[{b}]"), "not an array"))?;
        if entries.len() != d * k {
            return Err(Error::parse(
                format!("blocks[{b}]"),
                format!("expected d*K = {} entries, got {}", d * k, entries.len()),
            ));
        }
        let mut m = CMatrix::zeros(d, k);
        for (idx, v) in entries.iter().enumerate() {
            m[(idx / k, idx % k)] = entry(v, field, || format!("blocks[{b}][{idx}]"))?;
        }
        frames.push(m);
    }
    Configuration::from_blocks(field, &frames).map_err(|e| Error::parse("configuration", e))
}

pub fn write_config(path: &Path, config: &Configuration) -> Result<()> {
    fs::write(path, config_to_json(config))?;
    Ok(())
}

pub fn read_config(path: &Path) -> Result<Configuration> {
    let text = fs::read_to_string(path)?;
    config_from_json(&text).map_err(|e| match e {
        Error::Parse { context, message } => Error::Parse {
            context: format!("{}: {context}", path.display()),
            message,
        },
        other => other,
    })
}
