use std::process::ExitCode;

use num_rational::BigRational;
use serde_json::Value;
use turan_core::constructions::DensityValue;
use turan_core::rational::{format_float, format_rational};

use crate::Format;

/// What a command produced: human-readable lines, the same content as
/// JSON, and whether every check passed.
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub ok: bool,
}

impl Report {
    pub fn ok(lines: Vec<String>, json: Value) -> Self {
        Report { lines, json, ok: true }
    }

    pub fn emit(self, format: Format) -> ExitCode {
        match format {
            Format::Text => {
                for l in &self.lines {
                    println!("{l}");
                }
            }
            Format::Structured => println!("{}", serde_json::to_string_pretty(&self.json).expect("json")),
        }
        if self.ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

/// `p/q`, with the denominator dropped for integers.
pub fn rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format_rational(x)
    }
}

pub fn density(v: &DensityValue) -> String {
    match v {
        DensityValue::Exact(x) => rational(x),
        DensityValue::Float { value, error } => format_float(*value, *error),
    }
}

pub fn density_json(v: &DensityValue) -> Value {
    match v {
        DensityValue::Exact(x) => serde_json::json!({ "exact": true, "value": rational(x) }),
        DensityValue::Float { value, error } => serde_json::json!({ "exact": false, "value": value, "error": error }),
    }
}
