use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mop_core::exact::{parse_rational, MultiIndex, Rational};
use mop_core::{Family, FamilySpec, HermiteSpec, LaguerreSpec};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "mop", version, about = "Multiple Hermite/Laguerre polynomials, kernels and ensemble checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the exact type II polynomial and type I polynomials.
    Poly(CommonArgs),
    /// Run the exact and numerical verification suites.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Run the standard sweep of the selected family (both when no family is given).
        #[arg(long)]
        sweep: bool,
        /// Perturb the type II polynomial before checking it.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Kernel values on a 2-D grid in all three forms.
    Kernel(CommonArgs),
    /// One-point function K(x, x) on a 1-D grid.
    Density(CommonArgs),
    /// Monte Carlo eigenvalue histogram against K(x, x) / |n|.
    Simulate(CommonArgs),
    /// Correlation determinant det[K(x_i, x_j)] at the given points.
    Correlate {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated points.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        points: Option<Vec<f64>>,
        /// Use the conjugated kernel x^p y^-p K(x, y).
        #[arg(long)]
        conjugated: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON job file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated rationals such as `1,-1/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Comma-separated multi-index components.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub n: Option<Vec<i64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// `xmin:xmax:count[,ymin:ymax:count]`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

/// A rational given either as a string such as `"-3/2"` or as an integer.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalField {
    Text(String),
    Int(i64),
}

/// The job file format; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub family: Option<String>,
    pub m: Option<usize>,
    pub a: Option<Vec<RationalField>>,
    pub beta: Option<Vec<RationalField>>,
    pub n: Option<Vec<i64>>,
    pub p: Option<i64>,
    pub grid: Option<String>,
    pub nodes: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub points: Option<Vec<f64>>,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

fn field_to_string(f: &RationalField) -> String {
    match f {
        RationalField::Text(s) => s.clone(),
        RationalField::Int(i) => i.to_string(),
    }
}

/// One axis of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

fn parse_axis(text: &str) -> Result<Axis, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(CliError::Usage(format!("grid axis {text:?} must be xmin:xmax:count")));
    };
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("invalid grid bound {s:?}")))
    };
    let (min, max) = (num(lo)?, num(hi)?);
    let count: usize = count.trim().parse().map_err(|_| CliError::Usage(format!("invalid grid count {count:?}")))?;
    if count == 0 || !(min.is_finite() && max.is_finite()) || min > max || (count > 1 && min == max) {
        return Err(CliError::Usage(format!("empty grid range {text:?}")));
    }
    Ok(Axis { min, max, count })
}

/// Parses `xmin:xmax:count[,ymin:ymax:count]`.
pub fn parse_grid(text: &str) -> Result<(Axis, Option<Axis>), CliError> {
    let mut axes = text.split(',');
    let x = parse_axis(axes.next().unwrap_or(""))?;
    let y = axes.next().map(parse_axis).transpose()?;
    if axes.next().is_some() {
        return Err(CliError::Usage("grid takes at most two axes".into()));
    }
    Ok((x, y))
}

/// Flags merged over the job file and validated.
#[derive(Debug, Clone, Default)]
pub struct Job {
    pub family: Option<Family>,
    pub params: Option<Vec<Rational>>,
    pub n: Option<Vec<usize>>,
    pub p: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
    pub nodes: usize,
    pub samples: usize,
    pub grid: Option<(Axis, Option<Axis>)>,
    pub tolerance: Option<f64>,
    pub points: Option<Vec<f64>>,
}

pub const DEFAULT_NODES: usize = 512;
pub const DEFAULT_SAMPLES: usize = 200_000;

impl Job {
    pub fn resolve(args: &CommonArgs, points: Option<Vec<f64>>) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => JobConfig::load(path)?,
            None => JobConfig::default(),
        };
        let family = args
            .family
            .clone()
            .or(file.family)
            .map(|f| f.parse::<Family>().map_err(|e| CliError::Usage(e.to_string())))
            .transpose()?;
        let list = |flag: &Option<String>, field: &Option<Vec<RationalField>>| -> Option<Vec<String>> {
            match flag {
                Some(s) => Some(s.split(',').map(|t| t.trim().to_string()).collect()),
                None => field.as_ref().map(|v| v.iter().map(field_to_string).collect()),
            }
        };
        let a = list(&args.a, &file.a);
        let beta = list(&args.beta, &file.beta);
        let raw = match family {
            Some(Family::Hermite) => {
                if beta.is_some() {
                    return Err(CliError::Usage("--beta is a Laguerre parameter; use --a".into()));
                }
                a
            }
            Some(Family::Laguerre) => {
                if a.is_some() {
                    return Err(CliError::Usage("--a is a Hermite parameter; use --beta".into()));
                }
                beta
            }
            None => a.or(beta),
        };
        let params = raw
            .map(|v| {
                v.iter()
                    .map(|s| parse_rational(s).map_err(|e| CliError::Usage(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let n = args
            .n
            .clone()
            .or(file.n)
            .map(|v| {
                v.into_iter()
                    .map(|x| {
                        usize::try_from(x)
                            .map_err(|_| CliError::Usage(format!("multi-index components must be non-negative, got {x}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let p = args.p.or(file.p).unwrap_or(0);
        let p = usize::try_from(p).map_err(|_| CliError::Usage(format!("p must be non-negative, got {p}")))?;
        if family == Some(Family::Hermite) && p != 0 {
            return Err(CliError::Usage("p applies to the Laguerre family only".into()));
        }
        if let (Some(m), Some(params)) = (file.m, &params) {
            if m != params.len() {
                return Err(CliError::Usage(format!("m = {m} but {} parameters given", params.len())));
            }
        }
        let grid = args.grid.clone().or(file.grid).map(|g| parse_grid(&g)).transpose()?;
        let nodes = args.nodes.or(file.nodes).unwrap_or(DEFAULT_NODES);
        let samples = args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        Ok(Job {
            family,
            params,
            n,
            p,
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format),
            seed: args.seed.or(file.seed).unwrap_or(0),
            nodes,
            samples,
            grid,
            tolerance: args.tolerance.or(file.tolerance),
            points: points.or(file.points),
        })
    }

    /// The parameter set described by the job.
    pub fn spec(&self) -> Result<FamilySpec, CliError> {
        let family = self.family.ok_or_else(|| CliError::Usage("--family is required".into()))?;
        let params = self.params.clone().ok_or_else(|| {
            CliError::Usage(match family {
                Family::Hermite => "--a is required".into(),
                Family::Laguerre => "--beta is required".into(),
            })
        })?;
        let n = self.n.clone().ok_or_else(|| CliError::Usage("--n is required".into()))?;
        let n = MultiIndex::new(n).map_err(|e| CliError::Usage(e.to_string()))?;
        let spec: FamilySpec = match family {
            Family::Hermite => HermiteSpec::new(params, n).map(Into::into),
            Family::Laguerre => LaguerreSpec::new(params, n, self.p).map(Into::into),
        }
        .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }

    pub fn format_or(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            return Err(CliError::Usage(format!("format {f:?} is not supported by this command")));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let (x, y) = parse_grid("-1:1:3,0.5:2:4").unwrap();
        assert_eq!(x.points(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(y.unwrap().count, 4);
        assert_eq!(parse_grid("0:1:1").unwrap().0.points(), vec![0.0]);
        for bad in ["0:1:0", "1:0:3", "0:0:2", "0:1", "a:1:2", "0:1:2,0:1:2,0:1:2"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_rejects_unknown_fields() {
        assert!(serde_json::from_str::<JobConfig>(r#"{"family": "hermite", "colour": 1}"#).is_err());
        let c: JobConfig = serde_json::from_str(r#"{"family": "laguerre", "beta": ["1/2", 3], "n": [1, 2]}"#).unwrap();
        assert_eq!(c.beta.unwrap().len(), 2);
    }
}
