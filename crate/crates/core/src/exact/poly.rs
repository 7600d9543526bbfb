use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{to_f64, Rational};

/// Dense univariate polynomial over the rationals, coefficients in ascending
/// degree. Trailing zeros are never stored, so the zero polynomial has an
/// empty coefficient list and `degree() == None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1, Rational::one())
    }

    /// `c x^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x - c`.
    pub fn linear_root(c: &Rational) -> Self {
        Self::new(vec![-c.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        // Horner in the ring Q[x]: p(x + c) = (...(a_d (x+c) + a_{d-1})(x+c) + ...)
        let step = Self::new(vec![c.clone(), Rational::one()]);
        let mut acc = Self::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * &step) + &Self::constant(a.clone());
        }
        acc
    }

    /// `p(x)^k`.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn to_float(&self) -> FloatPoly {
        FloatPoly { coeffs: self.coeffs.iter().map(to_f64).collect() }
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mag = a.abs();
            match (first, a.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                _ if unit => {}
                _ if mag.is_integer() => write!(f, "{mag}")?,
                _ => write!(f, "({mag})")?,
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Double-precision image of a [`RatPoly`] for fast evaluation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FloatPoly {
    coeffs: Vec<f64>,
}

impl FloatPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn eval_complex(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.coeffs.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `(p(x), p'(x), p''(x))` in one Horner pass.
    pub fn eval_with_derivatives(&self, x: f64) -> (f64, f64, f64) {
        let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            d2 = d2 * x + 2.0 * d1;
            d1 = d1 * x + p;
            p = p * x + a;
        }
        (p, d1, d2)
    }
}
