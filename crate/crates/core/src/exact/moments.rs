use num_traits::{Signed, Zero};

use super::poly::RatPoly;
use super::rational::{double_factorial, factorial, Rational};
use crate::error::{Error, Result};

/// `E[u^j]` for a standard Gaussian `u`: zero for odd `j`, `(j - 1)!!` for even `j`.
pub fn gaussian_moment(j: usize) -> Rational {
    if j % 2 == 1 {
        Rational::zero()
    } else {
        Rational::from_integer(double_factorial(j as i64 - 1))
    }
}

/// `int_0^inf x^j e^{-beta x} dx = j! / beta^{j+1}`.
pub fn gamma_moment(j: usize, beta: &Rational) -> Result<Rational> {
    if !beta.is_positive() {
        return Err(Error::NonPositiveRate(beta.to_string()));
    }
    Ok(Rational::from_integer(factorial(j)) / num_traits::pow(beta.clone(), j + 1))
}

/// `E[p(u + shift)]` for a standard Gaussian `u`, i.e.
/// `(2 pi)^{-1/2} int p(x) e^{-(x - shift)^2 / 2} dx`.
pub fn gaussian_expectation(p: &RatPoly, shift: &Rational) -> Rational {
    p.shift(shift)
        .coeffs()
        .iter()
        .enumerate()
        .step_by(2)
        .map(|(j, c)| c * gaussian_moment(j))
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// `int_0^inf p(x) x^offset e^{-beta x} dx`.
pub fn gamma_expectation(p: &RatPoly, offset: usize, beta: &Rational) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (j, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += c * gamma_moment(j + offset, beta)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_moment(0), int(1));
        assert_eq!(gaussian_moment(1), int(0));
        assert_eq!(gaussian_moment(4), int(3));
    }

    #[test]
    fn gaussian_recurrence() {
        for j in (2..=40).step_by(2) {
            assert_eq!(gaussian_moment(j), int(j as i64 - 1) * gaussian_moment(j - 2));
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_moment(0, &int(1)).unwrap(), int(1));
        assert_eq!(gamma_moment(1, &int(1)).unwrap(), int(1));
        assert_eq!(gamma_moment(3, &int(2)).unwrap(), rat(6, 16));
        assert!(gamma_moment(1, &int(0)).is_err());
        assert!(gamma_moment(1, &int(-1)).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        for beta in [rat(1, 2), int(1), int(3), rat(7, 3)] {
            for j in 1..=40 {
                let lhs = gamma_moment(j, &beta).unwrap();
                let rhs = int(j as i64) / &beta * gamma_moment(j - 1, &beta).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn expectations() {
        // E[(u + 1)^2] = 2
        let p = RatPoly::from_ints(&[0, 0, 1]);
        assert_eq!(gaussian_expectation(&p, &int(1)), int(2));
        // int (x - 1) x e^{-x} = 2! - 1! = 1
        let q = RatPoly::from_ints(&[-1, 1]);
        assert_eq!(gamma_expectation(&q, 1, &int(1)).unwrap(), int(1));
    }
}
