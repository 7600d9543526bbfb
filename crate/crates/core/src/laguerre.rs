//! Multiple Laguerre polynomials: weights `x^p e^{-beta_k x}` on `(0, inf)`.
//!
//! Component indices `k` are zero-based throughout.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, gamma_expectation, FormTerm, LinearForm, MultiIndex, PolySeries, RatPoly, Rational,
    ScaledConstant, Weight,
};

/// Eigenvalues `beta_1..beta_m > 0` of the inverse covariance, their
/// multiplicities `n`, and the integer exponent `p >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaguerreSpec {
    beta: Vec<Rational>,
    n: MultiIndex,
    p: usize,
}

impl LaguerreSpec {
    pub fn new(beta: Vec<Rational>, n: MultiIndex, p: usize) -> Result<Self> {
        if beta.len() != n.len() {
            return Err(Error::LengthMismatch { expected: n.len(), found: beta.len() });
        }
        if let Some(b) = beta.iter().find(|b| !b.is_positive()) {
            return Err(Error::NonPositiveRate(b.to_string()));
        }
        Ok(Self { beta, n, p })
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn n(&self) -> &MultiIndex {
        &self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn m(&self) -> usize {
        self.beta.len()
    }

    pub fn with_index(&self, n: MultiIndex) -> Result<Self> {
        Self::new(self.beta.clone(), n, self.p)
    }

    pub fn check_distinct(&self) -> Result<()> {
        for i in 0..self.beta.len() {
            for j in i + 1..self.beta.len() {
                if self.beta[i] == self.beta[j] {
                    return Err(Error::SingularExpansion { i, j });
                }
            }
        }
        Ok(())
    }

    /// `prod_k (-beta_k)^{n_k}`.
    fn signed_beta_product(&self) -> Rational {
        self.beta
            .iter()
            .zip(self.n.parts())
            .fold(Rational::one(), |acc, (b, &nk)| acc * num_traits::pow(-b.clone(), nk))
    }

    /// `n_k (|n| + p) / beta_k^2`, the ratio `h_n^(k) / h_{n - e_k}^(k)`.
    pub fn expected_h_ratio(&self, k: usize) -> Result<Rational> {
        if k >= self.m() {
            return Err(Error::ComponentOutOfRange { k, m: self.m() });
        }
        let bk = &self.beta[k];
        Ok(Rational::from_integer((self.n.get(k) * (self.n.weight() + self.p)).into()) / (bk * bk))
    }
}

/// Type II multiple Laguerre polynomial, monic of degree `|n|`.
///
/// The only residue of `e^{xs} s^{-|n|-p-1} prod (s - beta_k)^{n_k}` inside the
/// small circle is at `s = 0`, so
/// `P(x) = C sum_{j=p}^{|n|+p} x^{j-p} / j! [s^{|n|+p-j}] prod (s - beta_k)^{n_k}`
/// with `C = (|n| + p)! / prod (-beta_k)^{n_k}`.
pub fn laguerre_type2(spec: &LaguerreSpec) -> RatPoly {
    let total = spec.n.weight();
    let p = spec.p;
    let mut s_poly = RatPoly::one();
    for (b, &nk) in spec.beta.iter().zip(spec.n.parts()) {
        s_poly = &s_poly * &RatPoly::linear_root(b).pow(nk);
    }
    let c = Rational::from_integer(factorial(total + p)) / spec.signed_beta_product();
    let coeffs = (p..=total + p)
        .map(|j| &c * s_poly.coeff(total + p - j) / Rational::from_integer(factorial(j)))
        .collect();
    RatPoly::new(coeffs)
}

/// Type I multiple Laguerre polynomials as a linear form with rational
/// coefficients:
/// `A_k(x) = -prod(-beta_l)^{n_l} / (|n|+p-1)! * [t^{n_k-1}] e^{-x t} (beta_k + t)^{|n|+p-1} prod_{l != k} (beta_k - beta_l + t)^{-n_l}`.
pub fn laguerre_type1(spec: &LaguerreSpec) -> Result<LinearForm> {
    spec.check_distinct()?;
    let total = spec.n.weight();
    let p = spec.p;
    let mut terms = Vec::with_capacity(spec.m());
    for k in 0..spec.m() {
        let bk = &spec.beta[k];
        let nk = spec.n.get(k);
        let weight = Weight::Laguerre { beta: bk.clone(), p };
        if nk == 0 {
            terms.push(FormTerm { k, prefactor: ScaledConstant::one(), poly: RatPoly::zero(), weight });
            continue;
        }
        let order = nk - 1;
        let top = total + p - 1;
        let neg_x = -&RatPoly::x();
        let mut series = PolySeries::exp_linear_quadratic(&neg_x, &Rational::zero(), order)
            .mul(&PolySeries::binomial_power(bk, top, order))?;
        for (l, (bl, &nl)) in spec.beta.iter().zip(spec.n.parts()).enumerate() {
            if l == k || nl == 0 {
                continue;
            }
            let inv = PolySeries::binomial_inverse(&(bk - bl), nl, order)
                .map_err(|_| Error::SingularExpansion { i: k.min(l), j: k.max(l) })?;
            series = series.mul(&inv)?;
        }
        let scale = -spec.signed_beta_product() / Rational::from_integer(factorial(top));
        terms.push(FormTerm {
            k,
            prefactor: ScaledConstant::one(),
            poly: series.coeff_at(order).scale(&scale),
            weight,
        });
    }
    LinearForm::new(terms)
}

/// `h_n^(k) = int_0^inf P(x) x^{n_k + p} e^{-beta_k x} dx`.
pub fn laguerre_h(spec: &LaguerreSpec, k: usize, p_poly: &RatPoly) -> Result<Rational> {
    if k >= spec.m() {
        return Err(Error::ComponentOutOfRange { k, m: spec.m() });
    }
    gamma_expectation(p_poly, spec.n.get(k) + spec.p, &spec.beta[k])
}

/// `int_0^inf P(x) x^{j+p} e^{-beta_k x} dx` for every `k` and `j < n_k`.
pub fn verify_laguerre_type2(p_poly: &RatPoly, spec: &LaguerreSpec) -> Result<Vec<Rational>> {
    let mut out = Vec::with_capacity(spec.n.weight());
    for (b, &nk) in spec.beta.iter().zip(spec.n.parts()) {
        for j in 0..nk {
            out.push(gamma_expectation(p_poly, j + spec.p, b)?);
        }
    }
    Ok(out)
}

/// `(int_0^inf x^j Q(x) dx)_{j < |n|}`.
pub fn verify_laguerre_type1(q: &LinearForm, spec: &LaguerreSpec) -> Result<Vec<Rational>> {
    if q.terms().len() != spec.m() {
        return Err(Error::LengthMismatch { expected: spec.m(), found: q.terms().len() });
    }
    q.moments(spec.n.weight())
}

pub fn eval_q_laguerre(q: &LinearForm, x: f64) -> f64 {
    q.eval(x)
}
