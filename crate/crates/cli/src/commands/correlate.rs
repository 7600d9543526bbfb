use std::io::Write;

use mop_core::kernels::{build_kernel, correlation_det, correlation_det_with};
use serde_json::json;

use crate::args::{Format, Job};
use crate::error::CliError;
use crate::output::{document, float, open, write_json};

pub fn run(job: &Job, conjugated: bool) -> Result<(), CliError> {
    let format = job.format_or(Format::Text, &[Format::Text, Format::Json])?;
    let spec = job.spec()?;
    let points = job.points.clone().ok_or_else(|| CliError::Usage("--points is required".into()))?;
    if points.is_empty() {
        return Err(CliError::Usage("--points must not be empty".into()));
    }
    let model = build_kernel(&spec)?;
    let det = if conjugated {
        for &x in &points {
            model.eval_conjugated(x, x)?;
        }
        correlation_det_with(&points, |x, y| model.eval_conjugated(x, y).expect("points validated"))
    } else {
        correlation_det(&model, &points)?
    };
    let mut w = open(job.out.as_deref())?;
    match format {
        Format::Json => {
            let doc = document(
                "correlate",
                json!({ "spec": spec.to_string(), "points": points, "conjugated": conjugated, "determinant": det }),
            );
            write_json(&mut *w, &doc)?;
        }
        _ => writeln!(w, "{}", float(det))?,
    }
    w.flush()?;
    Ok(())
}
