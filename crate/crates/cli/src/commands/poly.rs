use std::io::Write;

use serde_json::json;

use crate::args::{Format, Job};
use crate::error::CliError;
use crate::output::{document, open, write_json};

use super::{poly_json, rational_strings, scaled_json};

pub fn run(job: &Job) -> Result<(), CliError> {
    let format = job.format_or(Format::Text, &[Format::Text, Format::Json])?;
    let spec = job.spec()?;
    let p = spec.type2();
    let q = spec.type1()?;
    let mut w = open(job.out.as_deref())?;
    match format {
        Format::Json => {
            let terms: Vec<_> = q
                .terms()
                .iter()
                .map(|t| {
                    json!({
                        "component": t.k + 1,
                        "prefactor": scaled_json(&t.prefactor),
                        "coefficients": poly_json(&t.poly),
                    })
                })
                .collect();
            let doc = document(
                "poly",
                json!({
                    "family": spec.family().to_string(),
                    "params": rational_strings(spec.params()),
                    "n": spec.n().parts(),
                    "p": spec.p(),
                    "type2": poly_json(&p),
                    "type1": terms,
                }),
            );
            write_json(&mut *w, &doc)?;
        }
        _ => {
            writeln!(w, "{spec}")?;
            writeln!(w, "P = {p}")?;
            writeln!(w, "P coefficients (ascending): [{}]", rational_strings(p.coeffs()).join(", "))?;
            for t in q.terms() {
                writeln!(
                    w,
                    "A_{} = {} with prefactor {}; coefficients [{}]",
                    t.k + 1,
                    t.poly,
                    t.prefactor,
                    rational_strings(t.poly.coeffs()).join(", ")
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
