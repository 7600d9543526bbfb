use crate::error::{Error, Result};
use crate::exact::{MultiIndex, Rational};
use crate::family::{Family, FamilySpec};
use crate::quad::{line_rule_nodes, pairwise_sum, WeightKind};

use super::model::KernelModel;

/// Residuals of the Hermite identity
/// `(d/dx + d/dy) K = (x - y) K - P(x) Q(y) = -sum_k n_k P_{n-e_k}(x) Q_{n+e_k}(y)`
/// with the left side from central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DxDyResidual {
    pub h: f64,
    pub against_top: f64,
    pub against_neighbors: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DxDyRichardson {
    pub coarse: DxDyResidual,
    pub fine: DxDyResidual,
    /// `coarse / fine` for each residual; close to 4 for a second-order scheme.
    pub ratio_top: f64,
    pub ratio_neighbors: f64,
}

fn require_hermite(model: &KernelModel) -> Result<()> {
    if model.family() != Family::Hermite {
        return Err(Error::FamilyMismatch("the dx + dy identity holds for the Hermite family only".into()));
    }
    Ok(())
}

pub fn check_dxdy_identity(model: &KernelModel, x: f64, y: f64, h: f64) -> Result<DxDyResidual> {
    require_hermite(model)?;
    if h.is_nan() || h <= 0.0 {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    let k = |u: f64, v: f64| model.cd_unchecked(u, v);
    let d = (k(x + h, y) - k(x - h, y) + k(x, y + h) - k(x, y - h)) / (2.0 * h);
    let top = (x - y) * k(x, y) - model.top_product(x, y);
    Ok(DxDyResidual {
        h,
        against_top: (d - top).abs(),
        against_neighbors: (d + model.neighbor_sum(x, y)).abs(),
    })
}

/// Residuals at `h` and `h / 2` and their ratios.
pub fn dxdy_richardson(model: &KernelModel, x: f64, y: f64, h: f64) -> Result<DxDyRichardson> {
    let coarse = check_dxdy_identity(model, x, y, h)?;
    let fine = check_dxdy_identity(model, x, y, 0.5 * h)?;
    Ok(DxDyRichardson {
        coarse,
        fine,
        ratio_top: coarse.against_top / fine.against_top,
        ratio_neighbors: coarse.against_neighbors / fine.against_neighbors,
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .expect("non-empty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = row[col] / pivot_row[col];
            if factor != 0.0 {
                for (r, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *r -= factor * p;
                }
            }
        }
    }
    det
}

/// `det[f(x_i, x_j)]`.
pub fn correlation_det_with<F: Fn(f64, f64) -> f64>(points: &[f64], kernel: F) -> f64 {
    let m = points.iter().map(|&x| points.iter().map(|&y| kernel(x, y)).collect()).collect();
    determinant(m)
}

/// Point correlation `det[K(x_i, x_j)]`.
pub fn correlation_det(model: &KernelModel, points: &[f64]) -> Result<f64> {
    for &x in points {
        model.eval_cd(x, x)?;
    }
    Ok(correlation_det_with(points, |x, y| model.cd_unchecked(x, y)))
}

/// The exact matrix `int p_i(x) q_j(x) dx` with `p_i = P_{n_i}` and
/// `q_j = Q_{n_{j+1}}` along `chain`.
pub fn check_biorthogonality(spec: &FamilySpec, chain: &[MultiIndex]) -> Result<Vec<Vec<Rational>>> {
    spec.n().validate_chain(chain)?;
    spec.check_distinct()?;
    let len = chain.len() - 1;
    let ps = chain[..len]
        .iter()
        .map(|n| Ok(spec.with_index(n.clone())?.type2()))
        .collect::<Result<Vec<_>>>()?;
    let qs = chain[1..]
        .iter()
        .map(|n| spec.with_index(n.clone())?.type1())
        .collect::<Result<Vec<_>>>()?;
    ps.iter()
        .map(|p| qs.iter().map(|q| q.integrate_rational(p)).collect())
        .collect()
}

/// `int K(x, x) dx` over the support by a Gauss rule with `nodes` points:
/// the Gaussian rule for Hermite, the exponential rule with rate `min beta`
/// for Laguerre.
pub fn trace_integral(model: &KernelModel, nodes: usize) -> Result<f64> {
    let (rule, weight): (_, Box<dyn Fn(f64) -> f64>) = match model.family() {
        Family::Hermite => (line_rule_nodes(WeightKind::Gaussian, nodes)?, Box::new(|u: f64| 0.5 * u * u)),
        Family::Laguerre => {
            let rate = model.spec().params_f64().into_iter().fold(f64::INFINITY, f64::min);
            (line_rule_nodes(WeightKind::Exponential { rate }, nodes)?, Box::new(move |u: f64| rate * u))
        }
    };
    let terms: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&u, &w)| {
            let k = model.cd_unchecked(u, u);
            if w == 0.0 || k == 0.0 {
                0.0
            } else {
                // Divide the weight back out in log space to avoid overflow.
                k.signum() * (k.abs().ln() + w.ln() + weight(u)).exp()
            }
        })
        .collect();
    Ok(pairwise_sum(&terms))
}
