use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::RatPoly;
use super::rational::{factorial, Rational};
use crate::error::{Error, Result};

/// Truncated power series `sum_{j <= T} c_j(x) t^j` in a local variable `t`,
/// with coefficients in `Q[x]`.
///
/// Residues of the integrands in the type I and type II representations are
/// coefficients of such series, so the whole residue calculus reduces to
/// `mul` and `coeff_at`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySeries {
    coeffs: Vec<RatPoly>,
}

impl PolySeries {
    /// Builds a series of order `order`, truncating or zero-padding `coeffs`.
    pub fn new(mut coeffs: Vec<RatPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, RatPoly::zero());
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![RatPoly::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RatPoly] {
        &self.coeffs
    }

    /// Coefficient of `t^j`; zero for `j` beyond the truncation order.
    pub fn coeff_at(&self, j: usize) -> RatPoly {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    /// Truncated Cauchy product; every term of order above `T` is dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let t = self.order();
        let mut out = vec![RatPoly::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(t + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// `(c + t)^n` for `n >= 0`, truncated at `order`.
    pub fn binomial_power(c: &Rational, n: usize, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut binom = BigInt::one();
        for j in 0..=order.min(n) {
            if j > 0 {
                binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j);
            }
            let cpow = num_traits::pow(c.clone(), n - j);
            coeffs.push(RatPoly::constant(cpow * Rational::from_integer(binom.clone())));
        }
        Self::new(coeffs, order)
    }

    /// `(c + t)^{-n}` for `n >= 1`, truncated at `order`:
    /// `sum_j (-1)^j binom(n + j - 1, j) c^{-n-j} t^j`.
    pub fn binomial_inverse(c: &Rational, n: usize, order: usize) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroExpansionPoint);
        }
        let inv = c.recip();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut binom = BigInt::one();
        let mut inv_pow = num_traits::pow(inv.clone(), n);
        for j in 0..=order {
            if j > 0 {
                binom = binom * BigInt::from(n + j - 1) / BigInt::from(j);
                inv_pow *= &inv;
            }
            let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
            coeffs.push(RatPoly::constant(sign * Rational::from_integer(binom.clone()) * &inv_pow));
        }
        Ok(Self::new(coeffs, order))
    }

    /// `exp(alpha(x) t + gamma t^2)`, truncated at `order`:
    /// `c_j = sum_{i + 2l = j} alpha^i / i! * gamma^l / l!`.
    pub fn exp_linear_quadratic(alpha: &RatPoly, gamma: &Rational, order: usize) -> Self {
        let alpha_pows: Vec<RatPoly> = std::iter::successors(Some(RatPoly::one()), |p| Some(p * alpha))
            .take(order + 1)
            .collect();
        let coeffs = (0..=order)
            .map(|j| {
                let mut c = RatPoly::zero();
                for l in 0..=j / 2 {
                    let i = j - 2 * l;
                    let scalar = num_traits::pow(gamma.clone(), l)
                        / Rational::from_integer(factorial(i) * factorial(l));
                    if !scalar.is_zero() {
                        c = &c + &alpha_pows[i].scale(&scalar);
                    }
                }
                c
            })
            .collect();
        Self::new(coeffs, order)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::SeriesOrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }
}
