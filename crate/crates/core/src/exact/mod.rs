//! Exact arithmetic foundation.

mod linear_form;
mod moments;
mod multi_index;
mod poly;
mod rational;
mod scaled;
mod series;

pub use linear_form::{CompiledForm, FormTerm, LinearForm, Weight};
pub use moments::{gamma_expectation, gamma_moment, gaussian_expectation, gaussian_moment};
pub use multi_index::{ChainStrategy, MultiIndex};
pub use poly::{FloatPoly, RatPoly};
pub use rational::{
    double_factorial, factorial, int, parse_rational, parse_rational_list, rat, rationalize,
    to_f64, Rational, RATIONALIZE_MAX_DENOMINATOR,
};
pub use scaled::ScaledConstant;
pub use series::PolySeries;
