//! Quadrature primitives: trapezoid rules on circles and Gauss rules for the
//! Gaussian weight `e^{-u^2/2}` on the line and the exponential weight
//! `e^{-beta u}` on the half-line.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::ops::Add;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_LINE_NODES: usize = 512;

/// Counterclockwise circle discretised by `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

/// The line `abscissa + i R`, traversed upwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalLine {
    pub abscissa: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourSpec {
    Circle(Circle),
    VerticalLine(VerticalLine),
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < 16 || !nodes.is_multiple_of(2) {
        return Err(Error::InvalidRule(format!("contour node count must be even and >= 16, got {nodes}")));
    }
    Ok(())
}

impl Circle {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        check_nodes(nodes)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("circle radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius, nodes })
    }

    pub fn with_nodes(&self, nodes: usize) -> Result<Self> {
        Self::new(self.center, self.radius, nodes)
    }

    /// Nodes `z_j` and the matching trapezoid weights `(2 pi i / N)(z_j - c)`,
    /// so that `sum_j w_j f(z_j)` approximates `oint f(z) dz`.
    pub fn nodes_and_weights(&self) -> Vec<(Complex64, Complex64)> {
        let scale = Complex64::new(0.0, TAU / self.nodes as f64);
        (0..self.nodes)
            .map(|j| {
                let offset = Complex64::from_polar(self.radius, TAU * j as f64 / self.nodes as f64);
                (self.center + offset, scale * offset)
            })
            .collect()
    }
}

impl VerticalLine {
    pub fn new(abscissa: f64, nodes: usize) -> Result<Self> {
        check_nodes(nodes)?;
        if nodes > MAX_LINE_NODES {
            return Err(Error::InvalidRule(format!("line rules support at most {MAX_LINE_NODES} nodes")));
        }
        Ok(Self { abscissa, nodes })
    }
}

impl ContourSpec {
    pub fn nodes(&self) -> usize {
        match self {
            ContourSpec::Circle(c) => c.nodes,
            ContourSpec::VerticalLine(l) => l.nodes,
        }
    }
}

/// Pairwise (cascade) summation; rounding error grows like `O(log n)`.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    const BLOCK: usize = 8;
    if values.len() <= BLOCK {
        return values.iter().fold(T::default(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `oint f(z) dz` over a counterclockwise circle by the `N`-point trapezoid rule.
pub fn trapezoid_circle<F>(f: F, circle: &Circle) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let terms: Vec<Complex64> = circle.nodes_and_weights().into_iter().map(|(z, w)| w * f(z)).collect();
    pairwise_sum(&terms)
}

/// `int_{sigma - i inf}^{sigma + i inf} e^{(s - sigma)^2/2} g(s) ds` by the
/// Gauss rule for `e^{-u^2/2}` with `s = sigma + i u`.
pub fn gaussian_line_integral<G>(g: G, line: &VerticalLine) -> Result<Complex64>
where
    G: Fn(Complex64) -> Complex64,
{
    let rule = line_rule_nodes(WeightKind::Gaussian, line.nodes)?;
    let terms: Vec<Complex64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| g(Complex64::new(line.abscissa, u)) * w)
        .collect();
    Ok(Complex64::i() * pairwise_sum(&terms))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightKind {
    /// `e^{-u^2/2}` on the real line.
    Gaussian,
    /// `e^{-rate u}` on `(0, inf)`.
    Exponential { rate: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineRule {
    pub kind: WeightKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl LineRule {
    /// `sum_i w_i f(x_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).collect();
        pairwise_sum(&terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum BaseKind {
    Hermite,
    Laguerre,
}

type RuleTable = Arc<(Vec<f64>, Vec<f64>)>;

fn rule_cache() -> &'static Mutex<HashMap<(BaseKind, usize), RuleTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(BaseKind, usize), RuleTable>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss rule with `n` nodes for the given weight.
///
/// Nodes are isolated by Sturm-sequence bisection on the Jacobi matrix of the
/// three-term recurrence, then polished by Newton iteration on the (rescaled)
/// recurrence itself.
pub fn line_rule_nodes(kind: WeightKind, n: usize) -> Result<LineRule> {
    if n == 0 || n > MAX_LINE_NODES {
        return Err(Error::InvalidRule(format!("node count must be in 1..={MAX_LINE_NODES}, got {n}")));
    }
    let base = match kind {
        WeightKind::Gaussian => BaseKind::Hermite,
        WeightKind::Exponential { rate } => {
            if !(rate > 0.0 && rate.is_finite()) {
                return Err(Error::NonPositiveRate(rate.to_string()));
            }
            BaseKind::Laguerre
        }
    };
    let table = {
        let mut cache = rule_cache().lock().unwrap_or_else(|e| e.into_inner());
        cache.entry((base, n)).or_insert_with(|| Arc::new(compute_rule(base, n))).clone()
    };
    let (nodes, weights) = match kind {
        WeightKind::Gaussian => (table.0.clone(), table.1.clone()),
        WeightKind::Exponential { rate } => (
            table.0.iter().map(|x| x / rate).collect(),
            table.1.iter().map(|w| w / rate).collect(),
        ),
    };
    Ok(LineRule { kind, nodes, weights })
}

/// Jacobi matrix entries: diagonal `a_k` and squared off-diagonal `b_k^2`
/// (coupling rows `k - 1` and `k`).
fn jacobi_entries(base: BaseKind, k: usize) -> (f64, f64) {
    let kf = k as f64;
    match base {
        BaseKind::Hermite => (0.0, kf),
        BaseKind::Laguerre => (2.0 * kf + 1.0, kf * kf),
    }
}

/// Number of eigenvalues of the `n x n` Jacobi matrix below `x`.
fn sturm_count(base: BaseKind, n: usize, x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for k in 0..n {
        let (a, b2) = jacobi_entries(base, k);
        d = if k == 0 { a - x } else { a - x - b2 / d };
        if d == 0.0 {
            d = -f64::EPSILON * (a.abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// `(v_n, v_{n-1}, log_scale)` with the true values `v * e^{log_scale}`.
fn recurrence(base: BaseKind, n: usize, x: f64) -> (f64, f64, f64) {
    const BIG: f64 = 1e100;
    let (mut prev, mut cur) = match base {
        BaseKind::Hermite => (1.0, x),
        BaseKind::Laguerre => (1.0, 1.0 - x),
    };
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let mut log_scale = 0.0;
    for k in 1..n {
        let kf = k as f64;
        let next = match base {
            // orthonormal probabilists' Hermite
            BaseKind::Hermite => (x * cur - kf.sqrt() * prev) / (kf + 1.0).sqrt(),
            BaseKind::Laguerre => ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0),
        };
        prev = cur;
        cur = next;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            log_scale += BIG.ln();
        }
    }
    (cur, prev, log_scale)
}

/// `ln sum_{k<n} p_k(x)^2` for the orthonormal polynomials of the weight; the
/// Gauss weight at a node is the total mass divided by this sum.
fn log_christoffel_sum(base: BaseKind, n: usize, x: f64) -> f64 {
    const BIG: f64 = 1e100;
    let (mut prev, mut cur) = match base {
        BaseKind::Hermite => (1.0, x),
        BaseKind::Laguerre => (1.0, 1.0 - x),
    };
    if n == 1 {
        return 0.0;
    }
    let mut sum = 1.0 + cur * cur;
    let mut log_scale = 0.0;
    for k in 1..n - 1 {
        let kf = k as f64;
        let next = match base {
            BaseKind::Hermite => (x * cur - kf.sqrt() * prev) / (kf + 1.0).sqrt(),
            BaseKind::Laguerre => ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0),
        };
        prev = cur;
        cur = next;
        sum += cur * cur;
        if cur.abs() > BIG {
            cur /= BIG;
            prev /= BIG;
            sum /= BIG * BIG;
            log_scale += BIG.ln();
        }
    }
    sum.ln() + 2.0 * log_scale
}

fn newton_step(base: BaseKind, n: usize, x: f64) -> f64 {
    let (pn, pm, _) = recurrence(base, n, x);
    let nf = n as f64;
    match base {
        BaseKind::Hermite => pn / (nf.sqrt() * pm),
        BaseKind::Laguerre => pn * x / (nf * (pn - pm)),
    }
}

fn compute_rule(base: BaseKind, n: usize) -> (Vec<f64>, Vec<f64>) {
    // Gershgorin bounds.
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..n {
        let (a, b2) = jacobi_entries(base, k);
        let left = if k > 0 { b2.sqrt() } else { 0.0 };
        let right = if k + 1 < n { jacobi_entries(base, k + 1).1.sqrt() } else { 0.0 };
        lo = lo.min(a - left - right);
        hi = hi.max(a + left + right);
    }
    lo -= 1.0;
    hi += 1.0;

    let mut nodes = Vec::with_capacity(n);
    let mut floor = lo;
    for i in 0..n {
        let (mut a, mut b) = (floor, hi);
        for _ in 0..300 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(base, n, mid) > i {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
                break;
            }
        }
        let mut x = 0.5 * (a + b);
        for _ in 0..4 {
            let step = newton_step(base, n, x);
            if !step.is_finite() {
                break;
            }
            let candidate = x - step;
            // Stay inside the (slightly widened) bisection bracket.
            let slack = 16.0 * f64::EPSILON * x.abs().max(1.0);
            if candidate < a - slack || candidate > b + slack {
                break;
            }
            x = candidate;
            if step.abs() <= f64::EPSILON * x.abs().max(1e-300) {
                break;
            }
        }
        floor = a;
        nodes.push(x);
    }

    let total_mass: f64 = match base {
        BaseKind::Hermite => TAU.sqrt(),
        BaseKind::Laguerre => 1.0,
    };
    let weights = nodes.iter().map(|&x| (total_mass.ln() - log_christoffel_sum(base, n, x)).exp()).collect();
    (nodes, weights)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive {
    pub value: Complex64,
    /// `|value_{2N} - value_N|` at the last doubling.
    pub delta: f64,
    pub nodes: usize,
}

/// Trapezoid rule on a circle with node doubling until two successive values
/// differ by less than `tol`, starting from the circle's own node count.
pub fn adaptive_double<F>(f: F, circle: &Circle, tol: f64, cap: usize) -> Result<Adaptive>
where
    F: Fn(Complex64) -> Complex64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidRule(format!("tolerance must be positive, got {tol}")));
    }
    let mut nodes = circle.nodes;
    let mut value = trapezoid_circle(&f, circle);
    let mut delta = f64::INFINITY;
    while nodes < cap {
        let next_nodes = (nodes * 2).min(cap);
        let next = trapezoid_circle(&f, &circle.with_nodes(next_nodes)?);
        delta = (next - value).norm();
        value = next;
        nodes = next_nodes;
        if delta < tol {
            return Ok(Adaptive { value, delta, nodes });
        }
    }
    Err(Error::NonConvergence { best_re: value.re, best_im: value.im, delta, nodes })
}
