pub mod correlate;
pub mod grid;
pub mod poly;
pub mod simulate;
pub mod verify;

use mop_core::exact::{RatPoly, Rational, ScaledConstant};
use serde_json::{json, Value};

pub fn rational_strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

pub fn poly_json(p: &RatPoly) -> Value {
    json!(rational_strings(p.coeffs()))
}

pub fn scaled_json(c: &ScaledConstant) -> Value {
    json!({
        "rational": c.r.to_string(),
        "half_power_of_two_pi": c.half_pow_two_pi,
        "exp_argument": c.exp_arg.to_string(),
        "value": c.to_f64(),
    })
}
