use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::hermite::HermiteSpec;
use crate::laguerre::LaguerreSpec;
use crate::exact::to_f64;
use crate::quad::{line_rule_nodes, pairwise_sum, Circle, WeightKind, MAX_LINE_NODES};

pub const DEFAULT_CONTOUR_NODES: usize = 512;
pub const MAX_CONTOUR_NODES: usize = 8192;

/// Contours for the double integral representation of the kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourGeometry {
    /// Vertical line `Re s = line_abscissa` and a circle around the `a_k`.
    Hermite { line_abscissa: f64, center: f64, radius: f64 },
    /// Circle `|s| = sigma_radius` around the origin and a circle around the `beta_k`.
    Laguerre { sigma_radius: f64, gamma_center: f64, gamma_radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: f64,
    /// Imaginary part of the quadrature sum; zero in exact arithmetic.
    pub imag: f64,
    /// Trapezoid nodes used on the circle(s).
    pub nodes: usize,
}

fn span(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

pub fn default_geometry(spec: &FamilySpec) -> ContourGeometry {
    let (lo, hi) = span(&spec.params_f64());
    match spec {
        FamilySpec::Hermite(_) => ContourGeometry::Hermite {
            line_abscissa: lo - 2.0,
            center: 0.5 * (lo + hi),
            radius: 0.5 * (hi - lo) + 1.0,
        },
        FamilySpec::Laguerre(_) => ContourGeometry::Laguerre {
            sigma_radius: 0.5 * lo,
            gamma_center: 0.5 * (lo + hi),
            gamma_radius: 0.5 * (hi - lo) + 0.25 * lo,
        },
    }
}

impl ContourGeometry {
    pub fn validate(&self, spec: &FamilySpec) -> Result<()> {
        let params = spec.params_f64();
        let (lo, _) = span(&params);
        match (*self, spec) {
            (ContourGeometry::Hermite { line_abscissa, center, radius }, FamilySpec::Hermite(_)) => {
                if radius.is_nan() || radius <= 0.0 {
                    return Err(Error::Geometry(format!("circle radius must be positive, got {radius}")));
                }
                if line_abscissa >= center - radius {
                    return Err(Error::Geometry(format!(
                        "line Re s = {line_abscissa} meets the circle |t - {center}| = {radius}"
                    )));
                }
                if let Some(a) = params.iter().find(|&&a| (a - center).abs() >= radius) {
                    return Err(Error::Geometry(format!("a = {a} is not inside the circle")));
                }
                Ok(())
            }
            (ContourGeometry::Laguerre { sigma_radius, gamma_center, gamma_radius }, FamilySpec::Laguerre(_)) => {
                if !(sigma_radius > 0.0 && sigma_radius < lo) {
                    return Err(Error::Geometry(format!(
                        "Sigma radius {sigma_radius} must lie in (0, min beta = {lo})"
                    )));
                }
                if gamma_radius.is_nan() || gamma_radius <= 0.0 {
                    return Err(Error::Geometry(format!("Gamma radius must be positive, got {gamma_radius}")));
                }
                if let Some(b) = params.iter().find(|&&b| (b - gamma_center).abs() >= gamma_radius) {
                    return Err(Error::Geometry(format!("beta = {b} is not inside Gamma")));
                }
                if gamma_center - gamma_radius <= sigma_radius {
                    return Err(Error::Geometry("Sigma and Gamma intersect or Gamma contains 0".into()));
                }
                Ok(())
            }
            _ => Err(Error::FamilyMismatch("geometry does not match the family of the spec".into())),
        }
    }
}

fn check_point(x: f64, y: f64) -> Result<()> {
    if x.is_finite() && y.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite arguments ({x}, {y})")))
    }
}

/// `prod_k (z - c_k)^{n_k}`.
fn source_poly(z: Complex64, centers: &[f64], n: &[usize]) -> Complex64 {
    centers.iter().zip(n).fold(Complex64::new(1.0, 0.0), |acc, (&c, &nk)| acc * (z - c).powu(nk as u32))
}

/// Sums `sum_l sum_j f_l g_j / (s_l - t_j)`.
fn double_sum(left: &[(Complex64, Complex64)], right: &[(Complex64, Complex64)]) -> Complex64 {
    let rows: Vec<Complex64> = left
        .iter()
        .map(|&(s, f)| {
            if f == Complex64::new(0.0, 0.0) {
                return f;
            }
            let inner: Vec<Complex64> = right.iter().map(|&(t, g)| g / (s - t)).collect();
            f * pairwise_sum(&inner)
        })
        .collect();
    pairwise_sum(&rows)
}

/// Hermite kernel from its double integral: the line direction uses the
/// Gauss rule for `e^{-u^2/2}` with `min(nodes, 512)` points, the circle the
/// `nodes`-point trapezoid rule.
pub fn eval_contour_hermite(
    spec: &HermiteSpec,
    x: f64,
    y: f64,
    nodes: usize,
    geometry: &ContourGeometry,
) -> Result<ContourValue> {
    check_point(x, y)?;
    let fam = FamilySpec::Hermite(spec.clone());
    geometry.validate(&fam)?;
    let ContourGeometry::Hermite { line_abscissa: sigma, center, radius } = *geometry else {
        unreachable!("validated above");
    };
    let circle = Circle::new(Complex64::new(center, 0.0), radius, nodes)?;
    let rule = line_rule_nodes(WeightKind::Gaussian, nodes.min(MAX_LINE_NODES))?;
    let a = fam.params_f64();
    let n = spec.n().parts();
    let shift = sigma - x;
    let base = 0.5 * shift * shift;
    let left: Vec<(Complex64, Complex64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| {
            let s = Complex64::new(sigma, u);
            let phase = Complex64::new(base, u * shift).exp();
            (s, w * phase * source_poly(s, &a, n))
        })
        .collect();
    let right: Vec<(Complex64, Complex64)> = circle
        .nodes_and_weights()
        .into_iter()
        .map(|(t, wt)| {
            let d = t - y;
            (t, wt * (-0.5 * d * d).exp() / source_poly(t, &a, n))
        })
        .collect();
    // ds = i du and two factors of 1 / (2 pi i).
    let total = double_sum(&left, &right) * Complex64::new(0.0, 1.0 / (-4.0 * std::f64::consts::PI.powi(2)));
    Ok(ContourValue { value: total.re, imag: total.im, nodes })
}

/// Laguerre kernel in its contour form `x^p y^{-p} K(x, y)` from the double
/// trapezoid rule with `nodes` points on each circle.
pub fn eval_contour_laguerre(
    spec: &LaguerreSpec,
    x: f64,
    y: f64,
    nodes: usize,
    geometry: &ContourGeometry,
) -> Result<ContourValue> {
    check_point(x, y)?;
    let fam = FamilySpec::Laguerre(spec.clone());
    geometry.validate(&fam)?;
    let ContourGeometry::Laguerre { sigma_radius, gamma_center, gamma_radius } = *geometry else {
        unreachable!("validated above");
    };
    let sigma = Circle::new(Complex64::new(0.0, 0.0), sigma_radius, nodes)?;
    let gamma = Circle::new(Complex64::new(gamma_center, 0.0), gamma_radius, nodes)?;
    let beta: Vec<f64> = spec.beta().iter().map(to_f64).collect();
    let n = spec.n().parts();
    let power = (spec.n().weight() + spec.p()) as i32;
    let left: Vec<(Complex64, Complex64)> = sigma
        .nodes_and_weights()
        .into_iter()
        .map(|(s, w)| (s, w * (x * s).exp() * s.powi(-power) * source_poly(s, &beta, n)))
        .collect();
    let right: Vec<(Complex64, Complex64)> = gamma
        .nodes_and_weights()
        .into_iter()
        .map(|(t, w)| (t, w * (-y * t).exp() * t.powi(power) / source_poly(t, &beta, n)))
        .collect();
    let total = double_sum(&left, &right) / Complex64::new(0.0, std::f64::consts::TAU).powi(2);
    Ok(ContourValue { value: total.re, imag: total.im, nodes })
}

pub fn eval_contour(
    spec: &FamilySpec,
    x: f64,
    y: f64,
    nodes: usize,
    geometry: &ContourGeometry,
) -> Result<ContourValue> {
    match spec {
        FamilySpec::Hermite(h) => eval_contour_hermite(h, x, y, nodes, geometry),
        FamilySpec::Laguerre(l) => eval_contour_laguerre(l, x, y, nodes, geometry),
    }
}

/// Doubles the circle node count from [`DEFAULT_CONTOUR_NODES`] until two
/// successive values differ by less than `tol`, up to `cap` nodes.
pub fn eval_contour_adaptive(
    spec: &FamilySpec,
    x: f64,
    y: f64,
    geometry: &ContourGeometry,
    tol: f64,
    cap: usize,
) -> Result<ContourValue> {
    let mut nodes = DEFAULT_CONTOUR_NODES.min(cap);
    let mut current = eval_contour(spec, x, y, nodes, geometry)?;
    let mut delta = f64::INFINITY;
    while nodes < cap {
        nodes = (nodes * 2).min(cap);
        let next = eval_contour(spec, x, y, nodes, geometry)?;
        delta = (next.value - current.value).hypot(next.imag - current.imag);
        current = next;
        if delta < tol {
            return Ok(current);
        }
    }
    Err(Error::NonConvergence { best_re: current.value, best_im: current.imag, delta, nodes })
}
