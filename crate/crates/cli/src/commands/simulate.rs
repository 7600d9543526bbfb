use std::io::Write;

use mop_core::kernels::build_kernel;
use mop_core::rmt::{compare_density, sample, BinSpec, DensityComparison, EnsembleConfig, Verdict};
use mop_core::FamilySpec;
use serde_json::{json, Value};

use crate::args::{Format, Job};
use crate::error::CliError;
use crate::output::{document, float, open, write_json};

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn stats(spec: &FamilySpec, cfg: &EnsembleConfig, c: &DensityComparison) -> Value {
    json!({
        "spec": spec.to_string(),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "bins": { "lo": cfg.bins.lo, "hi": cfg.bins.hi, "count": cfg.bins.count },
        "chi_square": c.chi_square,
        "dof": c.dof,
        "included_bins": c.included_bins,
        "quantile_99": finite_or_null(c.quantile_99),
        "verdict": c.verdict.as_str(),
    })
}

pub fn run(job: &Job) -> Result<(), CliError> {
    let format = job.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let spec = job.spec()?;
    let cfg = match job.grid {
        Some((_, Some(_))) => return Err(CliError::Usage("simulate takes a one-dimensional bin grid".into())),
        Some((x, None)) => {
            EnsembleConfig::with_bins(spec.clone(), job.samples, job.seed, BinSpec::new(x.min, x.max, x.count)?)?
        }
        None => EnsembleConfig::new(spec.clone(), job.samples, job.seed)?,
    };
    let model = build_kernel(&spec)?;
    let batch = sample(&cfg)?;
    let c = compare_density(&batch, &model, &cfg)?;
    let summary = stats(&spec, &cfg, &c);

    let mut w = open(job.out.as_deref())?;
    match format {
        Format::Json => {
            let bins: Vec<_> = (0..c.centers.len())
                .map(|i| {
                    json!({
                        "center": c.centers[i], "empirical": c.empirical[i], "predicted": c.predicted[i],
                        "std_error": c.std_errors[i], "observed": c.observed[i], "expected": c.expected[i],
                    })
                })
                .collect();
            let mut doc = document("simulate", summary);
            doc["histogram"] = json!(bins);
            write_json(&mut *w, &doc)?;
        }
        _ => {
            writeln!(w, "center,empirical,predicted,std_error,observed,expected")?;
            for i in 0..c.centers.len() {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    float(c.centers[i]),
                    float(c.empirical[i]),
                    float(c.predicted[i]),
                    float(c.std_errors[i]),
                    c.observed[i],
                    float(c.expected[i])
                )?;
            }
            w.flush()?;
            drop(w);
            let doc = document("simulate", summary);
            // Keep the CSV stream clean: the stats go to stdout only when the CSV went to a file.
            if job.out.is_some() {
                write_json(&mut std::io::stdout().lock(), &doc)?;
            } else {
                write_json(&mut std::io::stderr().lock(), &doc)?;
            }
            return verdict_status(&c);
        }
    }
    w.flush()?;
    verdict_status(&c)
}

fn verdict_status(c: &DensityComparison) -> Result<(), CliError> {
    match c.verdict {
        Verdict::Reject => Err(CliError::Verification(format!(
            "chi-square {:.3} exceeds the 99% quantile {:.3} ({} dof)",
            c.chi_square, c.quantile_99, c.dof
        ))),
        Verdict::Pass | Verdict::InsufficientSamples => Ok(()),
    }
}
