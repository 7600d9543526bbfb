use num_traits::Zero;

use super::moments::{gamma_expectation, gaussian_expectation};
use super::poly::{FloatPoly, RatPoly};
use super::rational::{to_f64, Rational};
use super::scaled::ScaledConstant;
use crate::error::{Error, Result};
use crate::family::Family;

/// Weight attached to one term of a linear form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `e^{-x^2/2 + a x}` on the real line.
    Hermite { a: Rational },
    /// `x^p e^{-beta x}` on `(0, inf)`.
    Laguerre { beta: Rational, p: usize },
}

impl Weight {
    pub fn family(&self) -> Family {
        match self {
            Weight::Hermite { .. } => Family::Hermite,
            Weight::Laguerre { .. } => Family::Laguerre,
        }
    }

    /// Exact `int f(x) w(x) dx` for a polynomial `f`.
    pub fn integrate(&self, f: &RatPoly) -> Result<ScaledConstant> {
        match self {
            Weight::Hermite { a } => {
                // x = u + a turns the weight into e^{a^2/2} e^{-u^2/2}.
                let e = gaussian_expectation(f, a);
                Ok(ScaledConstant::new(e, 1, a * a / Rational::from_integer(2.into())))
            }
            Weight::Laguerre { beta, p } => {
                Ok(ScaledConstant::rational(gamma_expectation(f, *p, beta)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormTerm {
    /// Zero-based component index `k`.
    pub k: usize,
    pub prefactor: ScaledConstant,
    pub poly: RatPoly,
    pub weight: Weight,
}

/// A type I linear form `Q(x) = sum_k prefactor_k * poly_k(x) * w_k(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    terms: Vec<FormTerm>,
}

impl LinearForm {
    pub fn new(terms: Vec<FormTerm>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        };
        let family = first.weight.family();
        if terms.iter().any(|t| t.weight.family() != family) {
            return Err(Error::FamilyMismatch("linear form mixes weight families".into()));
        }
        Ok(Self { terms })
    }

    pub fn family(&self) -> Family {
        self.terms[0].weight.family()
    }

    pub fn terms(&self) -> &[FormTerm] {
        &self.terms
    }

    /// The polynomial multiplying `w_k`, with the exact prefactor applied when
    /// it is rational.
    pub fn term(&self, k: usize) -> Option<&FormTerm> {
        self.terms.iter().find(|t| t.k == k)
    }

    /// Exact `int f(x) Q(x) dx`. Fails if the per-term transcendental parts do
    /// not line up, which means the form is not a valid type I object.
    pub fn integrate_against(&self, f: &RatPoly) -> Result<ScaledConstant> {
        let mut acc = ScaledConstant::rational(Rational::zero());
        for t in &self.terms {
            if t.poly.is_zero() || t.prefactor.is_zero() {
                continue;
            }
            let integral = t.weight.integrate(&(f * &t.poly))?;
            acc = acc.checked_add(&t.prefactor.mul(&integral))?;
        }
        Ok(acc)
    }

    /// Exact rational value of `int f(x) Q(x) dx`.
    pub fn integrate_rational(&self, f: &RatPoly) -> Result<Rational> {
        let v = self.integrate_against(f)?;
        v.as_rational().cloned().ok_or_else(|| Error::NotRational(v.to_string()))
    }

    /// `(int x^j Q(x) dx)_{j = 0..len}` as exact rationals.
    pub fn moments(&self, len: usize) -> Result<Vec<Rational>> {
        (0..len)
            .map(|j| self.integrate_rational(&RatPoly::monomial(j, Rational::from_integer(1.into()))))
            .collect()
    }

    pub fn compile(&self) -> CompiledForm {
        CompiledForm {
            terms: self
                .terms
                .iter()
                .filter(|t| !t.poly.is_zero() && !t.prefactor.is_zero())
                .map(CompiledTerm::new)
                .collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.compile().eval(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum CompiledWeight {
    /// `exp(-(x - a)^2 / 2 + offset)`.
    Hermite { a: f64, offset: f64 },
    /// `x^p exp(-beta x + offset)`.
    Laguerre { beta: f64, p: i32, offset: f64 },
}

#[derive(Debug, Clone, PartialEq)]
struct CompiledTerm {
    poly: FloatPoly,
    weight: CompiledWeight,
}

impl CompiledTerm {
    fn new(t: &FormTerm) -> Self {
        let pref = &t.prefactor;
        let scale = ScaledConstant::two_pi_power(pref.half_pow_two_pi);
        let coeffs = t.poly.coeffs().iter().map(|c| to_f64(&(c * &pref.r)) * scale).collect();
        let weight = match &t.weight {
            Weight::Hermite { a } => {
                // e^q e^{-x^2/2 + a x} = e^{-(x-a)^2/2} e^{q + a^2/2}
                let offset = &pref.exp_arg + a * a / Rational::from_integer(2.into());
                CompiledWeight::Hermite { a: to_f64(a), offset: to_f64(&offset) }
            }
            Weight::Laguerre { beta, p } => CompiledWeight::Laguerre {
                beta: to_f64(beta),
                p: *p as i32,
                offset: to_f64(&pref.exp_arg),
            },
        };
        Self { poly: FloatPoly::new(coeffs), weight }
    }

    fn eval(&self, x: f64) -> f64 {
        let w = match self.weight {
            CompiledWeight::Hermite { a, offset } => (-(x - a) * (x - a) / 2.0 + offset).exp(),
            CompiledWeight::Laguerre { beta, p, offset } => x.powi(p) * (-beta * x + offset).exp(),
        };
        self.poly.eval(x) * w
    }
}

/// Float evaluator for a [`LinearForm`], precomputed once.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompiledForm {
    terms: Vec<CompiledTerm>,
}

impl CompiledForm {
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }
}
