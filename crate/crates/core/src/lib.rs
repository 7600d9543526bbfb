//! Multiple Hermite and multiple Laguerre polynomials of types I and II,
//! built in exact rational arithmetic, together with the correlation kernels
//! of the Gaussian ensemble with external source and the complex Wishart
//! ensemble.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: multi-indices, rational polynomials, truncated power series
//!   with polynomial coefficients, scaled transcendental constants and the
//!   exact Gaussian/Gamma moment engines.
//! * [`hermite`] and [`laguerre`]: constructors for the type II polynomial
//!   `P_n` and the type I linear form `Q_n`, the normalisation constants
//!   `h_n^(k)` and exact verification of the orthogonality conditions.
//! * [`quad`]: trapezoid rules on circles and Gauss rules for the Gaussian and
//!   exponential weights.
//! * [`kernels`]: the Christoffel-Darboux kernel, the biorthogonal sum and the
//!   double contour integrals, plus identity checks.
//! * [`rmt`]: Monte Carlo sampling of the two matrix ensembles with a Jacobi
//!   eigensolver and histogram comparison against `K(x, x)`.

pub mod error;
pub mod exact;
pub mod family;
pub mod hermite;
pub mod kernels;
pub mod laguerre;
pub mod quad;
pub mod rmt;

pub use error::{Error, Result};
pub use exact::{
    gamma_moment, gaussian_moment, ChainStrategy, LinearForm, MultiIndex, PolySeries, RatPoly,
    Rational, ScaledConstant, Weight,
};
pub use family::{Family, FamilySpec};
pub use hermite::HermiteSpec;
pub use kernels::{KernelModel, KernelValueReport};
pub use laguerre::LaguerreSpec;
