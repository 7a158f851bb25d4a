//! JSON rendering of exact values. Integers print as plain integers; other
//! scalars carry both the exact term list and a float approximation.

use mtcdef::homspace::{words_to_string, Morphism};
use mtcdef::linalg::Matrix;
use mtcdef::CycScalar;
use serde_json::{json, Value};

pub fn scalar(x: &CycScalar) -> Value {
    if let Some(v) = x.as_integer() {
        return json!(v);
    }
    let z = x.to_float();
    json!({
        "exact": serde_json::to_value(x.to_json()).expect("scalar json"),
        "float": [round(z.re), round(z.im)],
    })
}

fn round(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar).collect())).collect())
}

pub fn morphism(f: &Morphism) -> Value {
    let mut blocks = serde_json::Map::new();
    for (c, b) in f.blocks() {
        blocks.insert(c.to_string(), matrix(b));
    }
    json!({
        "dom": words_to_string(&f.dom),
        "cod": words_to_string(&f.cod),
        "blocks": blocks,
    })
}

pub fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}
