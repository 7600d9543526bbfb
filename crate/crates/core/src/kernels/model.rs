use crate::error::{Error, Result};
use crate::exact::{CompiledForm, FloatPoly, LinearForm, MultiIndex, RatPoly, Rational, to_f64};
use crate::family::{Family, FamilySpec};

use super::contour::{eval_contour, ContourGeometry};

/// Below this separation the quotient `N(x, y) / (x - y)` is replaced by its
/// diagonal expansion.
pub const DIAGONAL_THRESHOLD: f64 = 1e-8;

/// `P_{n - e_k}` and `Q_{n + e_k}` for one component `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub p_lower: RatPoly,
    pub q_upper: LinearForm,
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    ratio: f64,
    p_lower: FloatPoly,
    q_upper: CompiledForm,
}

/// Everything needed to evaluate the Christoffel-Darboux kernel
/// `(x - y) K(x, y) = P_n(x) Q_n(y) - sum_k (h_n^(k) / h_{n-e_k}^(k)) P_{n-e_k}(x) Q_{n+e_k}(y)`.
#[derive(Debug, Clone)]
pub struct KernelModel {
    spec: FamilySpec,
    p_top: RatPoly,
    q_top: LinearForm,
    neighbors: Vec<Neighbor>,
    ratios: Vec<Rational>,
    p_top_f: FloatPoly,
    q_top_f: CompiledForm,
    terms: Vec<CompiledTerm>,
}

/// Builds the kernel for `spec`. Every component of `n` must be positive so
/// that `n - e_k` exists; the h-ratios obtained from exact moments are checked
/// against their closed forms.
pub fn build_kernel(spec: &FamilySpec) -> Result<KernelModel> {
    spec.check_distinct()?;
    let n = spec.n();
    if let Some(k) = n.parts().iter().position(|&nk| nk == 0) {
        return Err(Error::DegenerateIndex { k });
    }
    let p_top = spec.type2();
    let q_top = spec.type1()?;
    let mut neighbors = Vec::with_capacity(spec.m());
    let mut ratios = Vec::with_capacity(spec.m());
    for k in 0..spec.m() {
        let lower = spec.with_index(n.decrement(k)?)?;
        let upper = spec.with_index(n.increment(k)?)?;
        let p_lower = lower.type2();
        let q_upper = upper.type1()?;
        let ratio = spec.h(k, &p_top)?.ratio(&lower.h(k, &p_lower)?)?;
        let expected = spec.expected_h_ratio(k)?;
        if ratio.as_rational() != Some(&expected) {
            return Err(Error::RatioMismatch { k, expected: expected.to_string(), found: ratio.to_string() });
        }
        neighbors.push(Neighbor { p_lower, q_upper });
        ratios.push(expected);
    }
    let terms = neighbors
        .iter()
        .zip(&ratios)
        .map(|(nb, r)| CompiledTerm {
            ratio: to_f64(r),
            p_lower: nb.p_lower.to_float(),
            q_upper: nb.q_upper.compile(),
        })
        .collect();
    Ok(KernelModel {
        spec: spec.clone(),
        p_top_f: p_top.to_float(),
        q_top_f: q_top.compile(),
        p_top,
        q_top,
        neighbors,
        ratios,
        terms,
    })
}

impl KernelModel {
    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn p_top(&self) -> &RatPoly {
        &self.p_top
    }

    pub fn q_top(&self) -> &LinearForm {
        &self.q_top
    }

    pub fn neighbors(&self) -> &[Neighbor] {
        &self.neighbors
    }

    /// Exact `h_n^(k) / h_{n-e_k}^(k)` per component.
    pub fn ratios(&self) -> &[Rational] {
        &self.ratios
    }

    fn check_domain(&self, x: f64, y: f64) -> Result<()> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!("non-finite arguments ({x}, {y})")));
        }
        if self.family() == Family::Laguerre && (x <= 0.0 || y <= 0.0) {
            return Err(Error::Domain(format!("Laguerre kernel needs x, y > 0, got ({x}, {y})")));
        }
        Ok(())
    }

    /// `P_n(x) Q_n(y)`.
    pub fn top_product(&self, x: f64, y: f64) -> f64 {
        self.p_top_f.eval(x) * self.q_top_f.eval(y)
    }

    /// `sum_k c_k P_{n-e_k}(x) Q_{n+e_k}(y)` with `c_k` the exact h-ratio.
    pub fn neighbor_sum(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|t| t.ratio * t.p_lower.eval(x) * t.q_upper.eval(y)).sum()
    }

    /// Christoffel-Darboux value `K(x, y)`.
    pub fn eval_cd(&self, x: f64, y: f64) -> Result<f64> {
        self.check_domain(x, y)?;
        Ok(self.cd_unchecked(x, y))
    }

    pub(crate) fn cd_unchecked(&self, x: f64, y: f64) -> f64 {
        let d = x - y;
        if d.abs() >= DIAGONAL_THRESHOLD {
            return (self.top_product(x, y) - self.neighbor_sum(x, y)) / d;
        }
        // N(x, y) = (x - y) K(x, y), so K = N_x - (x - y) N_xx / 2 + O((x - y)^2).
        let qy = self.q_top_f.eval(y);
        let (_, p1, p2) = self.p_top_f.eval_with_derivatives(x);
        let (mut nx, mut nxx) = (p1 * qy, p2 * qy);
        for t in &self.terms {
            let q = t.ratio * t.q_upper.eval(y);
            let (_, l1, l2) = t.p_lower.eval_with_derivatives(x);
            nx -= l1 * q;
            nxx -= l2 * q;
        }
        nx - 0.5 * d * nxx
    }

    /// One-point function `K(x, x)`.
    pub fn diagonal(&self, x: f64) -> Result<f64> {
        self.eval_cd(x, x)
    }

    /// `x^p y^{-p} K(x, y)`: the form in which the Laguerre double contour
    /// integral reproduces the kernel. Identical to `eval_cd` when `p = 0`.
    pub fn eval_conjugated(&self, x: f64, y: f64) -> Result<f64> {
        let k = self.eval_cd(x, y)?;
        let p = self.spec.p() as i32;
        Ok(if p == 0 { k } else { (x / y).powi(p) * k })
    }
}

/// The biorthogonal sum `sum_j p_j(x) q_j(y)` with `p_j = P_{n_j}` and
/// `q_j = Q_{n_{j+1}}` along a chain, precompiled for repeated evaluation.
#[derive(Debug, Clone)]
pub struct SumKernel {
    family: Family,
    pairs: Vec<(FloatPoly, CompiledForm)>,
}

impl SumKernel {
    pub fn new(spec: &FamilySpec, chain: &[MultiIndex]) -> Result<Self> {
        spec.n().validate_chain(chain)?;
        spec.check_distinct()?;
        let pairs = chain
            .windows(2)
            .map(|w| {
                let p = spec.with_index(w[0].clone())?.type2();
                let q = spec.with_index(w[1].clone())?.type1()?;
                Ok((p.to_float(), q.compile()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { family: spec.family(), pairs })
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if self.family == Family::Laguerre && (x <= 0.0 || y <= 0.0) {
            return Err(Error::Domain(format!("Laguerre kernel needs x, y > 0, got ({x}, {y})")));
        }
        Ok(self.pairs.iter().map(|(p, q)| p.eval(x) * q.eval(y)).sum())
    }
}

pub fn eval_sum(spec: &FamilySpec, chain: &[MultiIndex], x: f64, y: f64) -> Result<f64> {
    SumKernel::new(spec, chain)?.eval(x, y)
}

/// Kernel values at one point in all three forms.
///
/// For Laguerre the contour integral equals `x^p y^{-p} K(x, y)`; the
/// contour discrepancy is measured against that conjugated value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValueReport {
    pub x: f64,
    pub y: f64,
    pub cd_value: f64,
    pub sum_value: f64,
    pub contour_value: f64,
    pub contour_imag: f64,
    pub cd_sum_discrepancy: f64,
    pub cd_contour_discrepancy: f64,
}

pub fn kernel_report(
    model: &KernelModel,
    sum: &SumKernel,
    x: f64,
    y: f64,
    nodes: usize,
    geometry: &ContourGeometry,
) -> Result<KernelValueReport> {
    let cd_value = model.eval_cd(x, y)?;
    let sum_value = sum.eval(x, y)?;
    let contour = eval_contour(model.spec(), x, y, nodes, geometry)?;
    let cd_conj = model.eval_conjugated(x, y)?;
    Ok(KernelValueReport {
        x,
        y,
        cd_value,
        sum_value,
        contour_value: contour.value,
        contour_imag: contour.imag,
        cd_sum_discrepancy: (cd_value - sum_value).abs(),
        cd_contour_discrepancy: (cd_conj - contour.value).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ChainStrategy};
    use crate::hermite::HermiteSpec;
    use crate::laguerre::LaguerreSpec;

    fn herm(a: &[i64], n: &[usize]) -> FamilySpec {
        HermiteSpec::new(a.iter().map(|&x| int(x)).collect(), MultiIndex::new(n.to_vec()).unwrap())
            .unwrap()
            .into()
    }

    fn lag(b: &[i64], n: &[usize], p: usize) -> FamilySpec {
        LaguerreSpec::new(b.iter().map(|&x| int(x)).collect(), MultiIndex::new(n.to_vec()).unwrap(), p)
            .unwrap()
            .into()
    }

    #[test]
    fn build_examples() {
        let k = build_kernel(&herm(&[0], &[1])).unwrap();
        assert_eq!(k.ratios(), &[int(1)]);
        let k = build_kernel(&herm(&[1, -1], &[1, 1])).unwrap();
        assert_eq!(k.ratios(), &[int(1), int(1)]);
        assert_eq!(k.p_top(), &RatPoly::from_ints(&[-2, 0, 1]));
        let k = build_kernel(&lag(&[1], &[1], 0)).unwrap();
        assert_eq!(k.ratios(), &[int(1)]);
        assert_eq!(build_kernel(&herm(&[1, -1], &[1, 0])).unwrap_err(), Error::DegenerateIndex { k: 1 });
    }

    #[test]
    fn cd_examples() {
        let k = build_kernel(&herm(&[0], &[1])).unwrap();
        let v = k.eval_cd(0.0, 0.0).unwrap();
        assert!((v - 1.0 / std::f64::consts::TAU.sqrt()).abs() < 1e-15);
        let k = build_kernel(&lag(&[1], &[1], 0)).unwrap();
        assert!((k.eval_cd(1.0, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        assert!(k.eval_cd(0.0, 1.0).is_err());
        assert!(k.eval_cd(1.0, -1.0).is_err());
    }

    #[test]
    fn cd_numerator_is_antisymmetric_in_form() {
        let k = build_kernel(&herm(&[1, -1], &[2, 1])).unwrap();
        for (x, y) in [(0.3, -0.4), (1.7, 0.2), (-2.0, 1.1)] {
            let a = k.eval_cd(x, y).unwrap() * (x - y);
            let b = k.top_product(x, y) - k.neighbor_sum(x, y);
            assert!((a - b).abs() < 1e-15);
            // N(y, x) is the numerator with the arguments swapped.
            let c = k.eval_cd(y, x).unwrap() * (y - x);
            let d = k.top_product(y, x) - k.neighbor_sum(y, x);
            assert!((c - d).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_branch_is_continuous() {
        let k = build_kernel(&herm(&[1, -1], &[2, 1])).unwrap();
        for x in [-1.3, 0.0, 0.9] {
            let on = k.eval_cd(x, x).unwrap();
            let h = 1e-4;
            let avg = 0.5 * (k.eval_cd(x, x + h).unwrap() + k.eval_cd(x, x - h).unwrap());
            assert!((on - avg).abs() < 1e-7, "{on} {avg}");
            let below = k.eval_cd(x, x + 0.99 * DIAGONAL_THRESHOLD).unwrap();
            let above = k.eval_cd(x, x + 1.01 * DIAGONAL_THRESHOLD).unwrap();
            assert!((below - above).abs() < 1e-7, "{below} {above}");
        }
    }

    #[test]
    fn sum_examples() {
        let s = herm(&[0], &[1]);
        let chain = s.n().chain(ChainStrategy::RoundRobin);
        let v = eval_sum(&s, &chain, 0.0, 0.0).unwrap();
        assert!((v - 1.0 / std::f64::consts::TAU.sqrt()).abs() < 1e-15);

        let s = herm(&[1, -1], &[1, 1]);
        let a = SumKernel::new(&s, &s.n().chain(ChainStrategy::RoundRobin)).unwrap();
        let b = SumKernel::new(&s, &s.n().chain(ChainStrategy::LexicographicFirst)).unwrap();
        let k = build_kernel(&s).unwrap();
        let mut state = 17u64;
        for _ in 0..20 {
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 * 6.0 - 3.0
            };
            let (x, y) = (next(), next());
            let (va, vb) = (a.eval(x, y).unwrap(), b.eval(x, y).unwrap());
            assert!((va - vb).abs() <= 1e-12);
            assert!((va - k.eval_cd(x, y).unwrap()).abs() <= 1e-10);
        }
        let mut bad = s.n().chain(ChainStrategy::RoundRobin);
        bad.pop();
        assert!(eval_sum(&s, &bad, 0.0, 0.0).is_err());
    }
}
