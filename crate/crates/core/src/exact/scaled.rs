use std::fmt;

use num_traits::{One, Zero};

use super::rational::{to_f64, Rational};
use crate::error::{Error, Result};

/// An exact value of the form `r * (2 pi)^(h/2) * e^q` with rational `r`, `q`
/// and integer `h`.
///
/// Hermite normalisation constants and type I prefactors all have this shape,
/// so products and ratios stay exact; sums are only allowed when the
/// transcendental parts agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScaledConstant {
    pub r: Rational,
    pub half_pow_two_pi: i64,
    pub exp_arg: Rational,
}

impl ScaledConstant {
    pub fn new(r: Rational, half_pow_two_pi: i64, exp_arg: Rational) -> Self {
        Self { r, half_pow_two_pi, exp_arg }
    }

    pub fn rational(r: Rational) -> Self {
        Self::new(r, 0, Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn zero_like(&self) -> Self {
        Self::new(Rational::zero(), self.half_pow_two_pi, self.exp_arg.clone())
    }

    /// `Some(r)` when the value is a plain rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.r.is_zero() || (self.half_pow_two_pi == 0 && self.exp_arg.is_zero()) {
            Some(&self.r)
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.r * &other.r,
            self.half_pow_two_pi + other.half_pow_two_pi,
            &self.exp_arg + &other.exp_arg,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.r * c, self.half_pow_two_pi, self.exp_arg.clone())
    }

    /// Exact ratio `self / other`.
    pub fn ratio(&self, other: &Self) -> Result<Self> {
        if other.r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(
            &self.r / &other.r,
            self.half_pow_two_pi - other.half_pow_two_pi,
            &self.exp_arg - &other.exp_arg,
        ))
    }

    /// Sum of two constants sharing the same `(h, q)`. A zero summand is
    /// compatible with anything.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.r.is_zero() {
            return Ok(self.clone());
        }
        if self.r.is_zero() {
            return Ok(other.clone());
        }
        if self.half_pow_two_pi != other.half_pow_two_pi || self.exp_arg != other.exp_arg {
            return Err(Error::IncompatibleScaledSum);
        }
        Ok(Self::new(&self.r + &other.r, self.half_pow_two_pi, self.exp_arg.clone()))
    }

    /// `(2 pi)^(h/2)` in double precision.
    pub fn two_pi_power(h: i64) -> f64 {
        let two_pi = std::f64::consts::TAU;
        let whole = two_pi.powi((h.div_euclid(2)) as i32);
        if h.rem_euclid(2) == 1 {
            whole * two_pi.sqrt()
        } else {
            whole
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mut v = to_f64(&self.r);
        if self.half_pow_two_pi != 0 {
            v *= Self::two_pi_power(self.half_pow_two_pi);
        }
        if !self.exp_arg.is_zero() {
            v *= to_f64(&self.exp_arg).exp();
        }
        v
    }
}

impl fmt::Display for ScaledConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)?;
        if self.half_pow_two_pi != 0 {
            write!(f, " * (2pi)^({}/2)", self.half_pow_two_pi)?;
        }
        if !self.exp_arg.is_zero() {
            write!(f, " * exp({})", self.exp_arg)?;
        }
        Ok(())
    }
}
