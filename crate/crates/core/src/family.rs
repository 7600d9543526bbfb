use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{to_f64, LinearForm, MultiIndex, RatPoly, Rational, ScaledConstant};
use crate::hermite::{self, HermiteSpec};
use crate::laguerre::{self, LaguerreSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hermite,
    Laguerre,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hermite => "hermite",
            Family::Laguerre => "laguerre",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermite" => Ok(Family::Hermite),
            "laguerre" => Ok(Family::Laguerre),
            other => Err(Error::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// A Hermite or Laguerre parameter set, so kernel and ensemble code can be
/// written once for both families.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Hermite(HermiteSpec),
    Laguerre(LaguerreSpec),
}

impl From<HermiteSpec> for FamilySpec {
    fn from(s: HermiteSpec) -> Self {
        FamilySpec::Hermite(s)
    }
}

impl From<LaguerreSpec> for FamilySpec {
    fn from(s: LaguerreSpec) -> Self {
        FamilySpec::Laguerre(s)
    }
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::Hermite(_) => Family::Hermite,
            FamilySpec::Laguerre(_) => Family::Laguerre,
        }
    }

    pub fn n(&self) -> &MultiIndex {
        match self {
            FamilySpec::Hermite(s) => s.n(),
            FamilySpec::Laguerre(s) => s.n(),
        }
    }

    pub fn m(&self) -> usize {
        self.n().len()
    }

    /// Exponent `p` of the Laguerre weight; zero for Hermite.
    pub fn p(&self) -> usize {
        match self {
            FamilySpec::Hermite(_) => 0,
            FamilySpec::Laguerre(s) => s.p(),
        }
    }

    /// `a_k` (Hermite) or `beta_k` (Laguerre).
    pub fn params(&self) -> &[Rational] {
        match self {
            FamilySpec::Hermite(s) => s.a(),
            FamilySpec::Laguerre(s) => s.beta(),
        }
    }

    pub fn params_f64(&self) -> Vec<f64> {
        self.params().iter().map(to_f64).collect()
    }

    pub fn with_index(&self, n: MultiIndex) -> Result<Self> {
        Ok(match self {
            FamilySpec::Hermite(s) => FamilySpec::Hermite(s.with_index(n)?),
            FamilySpec::Laguerre(s) => FamilySpec::Laguerre(s.with_index(n)?),
        })
    }

    pub fn check_distinct(&self) -> Result<()> {
        match self {
            FamilySpec::Hermite(s) => s.check_distinct(),
            FamilySpec::Laguerre(s) => s.check_distinct(),
        }
    }

    pub fn type2(&self) -> RatPoly {
        match self {
            FamilySpec::Hermite(s) => hermite::hermite_type2(s),
            FamilySpec::Laguerre(s) => laguerre::laguerre_type2(s),
        }
    }

    pub fn type1(&self) -> Result<LinearForm> {
        match self {
            FamilySpec::Hermite(s) => hermite::hermite_type1(s),
            FamilySpec::Laguerre(s) => laguerre::laguerre_type1(s),
        }
    }

    /// Moment-based `h_n^(k)` for the given type II polynomial.
    pub fn h(&self, k: usize, p: &RatPoly) -> Result<ScaledConstant> {
        match self {
            FamilySpec::Hermite(s) => hermite::hermite_h_from_moments(s, k, p),
            FamilySpec::Laguerre(s) => Ok(ScaledConstant::rational(laguerre::laguerre_h(s, k, p)?)),
        }
    }

    /// Closed-form `h_n^(k) / h_{n - e_k}^(k)`: `n_k` for Hermite and
    /// `n_k (|n| + p) / beta_k^2` for Laguerre.
    pub fn expected_h_ratio(&self, k: usize) -> Result<Rational> {
        match self {
            FamilySpec::Hermite(s) => {
                if k >= s.m() {
                    return Err(Error::ComponentOutOfRange { k, m: s.m() });
                }
                Ok(Rational::from_integer(s.n().get(k).into()))
            }
            FamilySpec::Laguerre(s) => s.expected_h_ratio(k),
        }
    }

    pub fn verify_type2(&self, p: &RatPoly) -> Result<Vec<Rational>> {
        match self {
            FamilySpec::Hermite(s) => Ok(hermite::verify_hermite_type2(p, s)),
            FamilySpec::Laguerre(s) => laguerre::verify_laguerre_type2(p, s),
        }
    }

    pub fn verify_type1(&self, q: &LinearForm) -> Result<Vec<Rational>> {
        match self {
            FamilySpec::Hermite(s) => hermite::verify_hermite_type1(q, s),
            FamilySpec::Laguerre(s) => laguerre::verify_laguerre_type1(q, s),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self.params().iter().map(ToString::to_string).collect();
        match self {
            FamilySpec::Hermite(s) => write!(f, "hermite a=({}) n={}", params.join(","), s.n()),
            FamilySpec::Laguerre(s) => {
                write!(f, "laguerre beta=({}) p={} n={}", params.join(","), s.p(), s.n())
            }
        }
    }
}
