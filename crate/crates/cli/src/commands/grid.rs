use std::io::Write;

use mop_core::exact::ChainStrategy;
use mop_core::kernels::{build_kernel, default_geometry, kernel_report, SumKernel};
use mop_core::{Family, FamilySpec, KernelValueReport};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{Axis, Format, Job};
use crate::error::CliError;
use crate::output::{document, float, open, write_json};

fn axes(job: &Job) -> Result<(Axis, Option<Axis>), CliError> {
    job.grid.ok_or_else(|| CliError::Usage("--grid is required".into()))
}

fn check_support(spec: &FamilySpec, axis: &Axis) -> Result<(), CliError> {
    if spec.family() == Family::Laguerre && axis.min <= 0.0 {
        return Err(CliError::Usage(format!("Laguerre grids must be positive, got minimum {}", axis.min)));
    }
    Ok(())
}

pub fn run_kernel(job: &Job) -> Result<(), CliError> {
    let format = job.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let spec = job.spec()?;
    let (xa, ya) = axes(job)?;
    let ya = ya.unwrap_or(xa);
    check_support(&spec, &xa)?;
    check_support(&spec, &ya)?;
    let model = build_kernel(&spec)?;
    let sum = SumKernel::new(&spec, &spec.n().chain(ChainStrategy::RoundRobin))?;
    let geometry = default_geometry(&spec);
    let (xs, ys) = (xa.points(), ya.points());
    let cells: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let rows: Vec<KernelValueReport> = cells
        .par_iter()
        .map(|&(x, y)| kernel_report(&model, &sum, x, y, job.nodes, &geometry))
        .collect::<Result<_, _>>()?;

    let mut w = open(job.out.as_deref())?;
    match format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "x": r.x, "y": r.y, "cd": r.cd_value, "sum": r.sum_value,
                        "contour": r.contour_value, "contour_imag": r.contour_imag,
                        "abs_cd_sum": r.cd_sum_discrepancy, "abs_cd_contour": r.cd_contour_discrepancy,
                    })
                })
                .collect();
            let doc = document("kernel", json!({ "spec": spec.to_string(), "nodes": job.nodes, "rows": rows }));
            write_json(&mut *w, &doc)?;
        }
        _ => {
            writeln!(w, "x,y,cd,sum,contour,|cd-contour|")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    float(r.x),
                    float(r.y),
                    float(r.cd_value),
                    float(r.sum_value),
                    float(r.contour_value),
                    float(r.cd_contour_discrepancy)
                )?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn run_density(job: &Job) -> Result<(), CliError> {
    let format = job.format_or(Format::Csv, &[Format::Csv, Format::Json])?;
    let spec = job.spec()?;
    let (xa, ya) = axes(job)?;
    if ya.is_some() {
        return Err(CliError::Usage("density takes a one-dimensional grid".into()));
    }
    check_support(&spec, &xa)?;
    let model = build_kernel(&spec)?;
    let xs = xa.points();
    let values: Vec<f64> = xs.par_iter().map(|&x| model.diagonal(x)).collect::<Result<_, _>>()?;
    let mut w = open(job.out.as_deref())?;
    match format {
        Format::Json => {
            let rows: Vec<_> = xs.iter().zip(&values).map(|(x, d)| json!({ "x": x, "density": d })).collect();
            write_json(&mut *w, &document("density", json!({ "spec": spec.to_string(), "rows": rows })))?;
        }
        _ => {
            writeln!(w, "x,density")?;
            for (x, d) in xs.iter().zip(&values) {
                writeln!(w, "{},{}", float(*x), float(*d))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
