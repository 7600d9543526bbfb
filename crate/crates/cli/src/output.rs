use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Adds `schema_version` and `command` to a JSON object.
pub fn document(command: &str, body: Value) -> Value {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(target), Value::Object(source)) = (&mut doc, body) {
        target.extend(source);
    }
    doc
}

pub fn write_json(w: &mut dyn Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)
}
