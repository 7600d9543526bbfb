//! Multiple Hermite polynomials: weights `w_k(x) = e^{-x^2/2 + a_k x}`.
//!
//! Component indices `k` are zero-based throughout.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, gaussian_expectation, gaussian_moment, rationalize, FormTerm, LinearForm,
    MultiIndex, PolySeries, RatPoly, Rational, ScaledConstant, Weight, RATIONALIZE_MAX_DENOMINATOR,
};

/// Eigenvalues `a_1..a_m` of the external source together with their
/// multiplicities `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HermiteSpec {
    a: Vec<Rational>,
    n: MultiIndex,
}

impl HermiteSpec {
    pub fn new(a: Vec<Rational>, n: MultiIndex) -> Result<Self> {
        if a.len() != n.len() {
            return Err(Error::LengthMismatch { expected: n.len(), found: a.len() });
        }
        Ok(Self { a, n })
    }

    /// Float parameters are rationalised by continued fractions with
    /// denominators bounded by [`RATIONALIZE_MAX_DENOMINATOR`].
    pub fn from_floats(a: &[f64], n: MultiIndex) -> Result<Self> {
        let a = a
            .iter()
            .map(|&x| rationalize(x, RATIONALIZE_MAX_DENOMINATOR))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a, n)
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn n(&self) -> &MultiIndex {
        &self.n
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    /// Same source eigenvalues, different multi-index.
    pub fn with_index(&self, n: MultiIndex) -> Result<Self> {
        Self::new(self.a.clone(), n)
    }

    /// Fails with the first coinciding pair.
    pub fn check_distinct(&self) -> Result<()> {
        for i in 0..self.a.len() {
            for j in i + 1..self.a.len() {
                if self.a[i] == self.a[j] {
                    return Err(Error::SingularExpansion { i, j });
                }
            }
        }
        Ok(())
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k >= self.m() {
            return Err(Error::ComponentOutOfRange { k, m: self.m() });
        }
        Ok(())
    }
}

fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

/// Type II multiple Hermite polynomial `P_n`, monic of degree `|n|`.
///
/// With `s = x + i u` the line integral becomes `E[prod_k (x - a_k + i u)^{n_k}]`
/// over a standard Gaussian `u`; expanding the product in `v = i u` gives
/// `P(x) = sum_{j even} (-1)^{j/2} (j - 1)!! c_j(x)`.
pub fn hermite_type2(spec: &HermiteSpec) -> RatPoly {
    let total = spec.n.weight();
    let mut product = PolySeries::one(total);
    for (a, &nk) in spec.a.iter().zip(spec.n.parts()) {
        if nk == 0 {
            continue;
        }
        let factor = PolySeries::new(vec![RatPoly::linear_root(a), RatPoly::one()], total);
        for _ in 0..nk {
            product = product.mul(&factor).expect("equal orders");
        }
    }
    let mut p = RatPoly::zero();
    for j in (0..=total).step_by(2) {
        let mut w = gaussian_moment(j);
        if (j / 2) % 2 == 1 {
            w = -w;
        }
        p = &p + &product.coeff_at(j).scale(&w);
    }
    p
}

/// Type I multiple Hermite polynomials as a linear form.
///
/// Term `k` carries the prefactor `e^{-a_k^2/2} / ((n_k - 1)! sqrt(2 pi))` and
/// the polynomial `(n_k - 1)! [t^{n_k - 1}] e^{(x - a_k) t - t^2/2} prod_{l != k} (a_k - a_l + t)^{-n_l}`,
/// which is the residue at `t = a_k` after factoring out the weight.
pub fn hermite_type1(spec: &HermiteSpec) -> Result<LinearForm> {
    spec.check_distinct()?;
    let mut terms = Vec::with_capacity(spec.m());
    for k in 0..spec.m() {
        let ak = &spec.a[k];
        let nk = spec.n.get(k);
        let exp_arg = -(ak * ak) * half();
        let weight = Weight::Hermite { a: ak.clone() };
        if nk == 0 {
            terms.push(FormTerm {
                k,
                prefactor: ScaledConstant::new(Rational::one(), -1, exp_arg),
                poly: RatPoly::zero(),
                weight,
            });
            continue;
        }
        let order = nk - 1;
        let alpha = RatPoly::linear_root(ak);
        let mut series = PolySeries::exp_linear_quadratic(&alpha, &-half(), order);
        for (l, (al, &nl)) in spec.a.iter().zip(spec.n.parts()).enumerate() {
            if l == k || nl == 0 {
                continue;
            }
            let inv = PolySeries::binomial_inverse(&(ak - al), nl, order)
                .map_err(|_| Error::SingularExpansion { i: k.min(l), j: k.max(l) })?;
            series = series.mul(&inv)?;
        }
        let fact = Rational::from_integer(factorial(order));
        terms.push(FormTerm {
            k,
            prefactor: ScaledConstant::new(fact.recip(), -1, exp_arg),
            poly: series.coeff_at(order).scale(&fact),
            weight,
        });
    }
    LinearForm::new(terms)
}

/// Closed form `h_n^(k) = sqrt(2 pi) n_k! e^{a_k^2/2} prod_{l != k} (a_k - a_l)^{n_l}`.
pub fn hermite_h(spec: &HermiteSpec, k: usize) -> Result<ScaledConstant> {
    spec.check_k(k)?;
    let ak = &spec.a[k];
    let mut r = Rational::from_integer(factorial(spec.n.get(k)));
    for (l, (al, &nl)) in spec.a.iter().zip(spec.n.parts()).enumerate() {
        if l != k {
            r *= num_traits::pow(ak - al, nl);
        }
    }
    Ok(ScaledConstant::new(r, 1, ak * ak * half()))
}

/// `h_n^(k) = int P(x) x^{n_k} w_k(x) dx` evaluated by exact Gaussian moments.
pub fn hermite_h_from_moments(spec: &HermiteSpec, k: usize, p: &RatPoly) -> Result<ScaledConstant> {
    spec.check_k(k)?;
    let ak = &spec.a[k];
    let integrand = p * &RatPoly::monomial(spec.n.get(k), Rational::one());
    Ok(ScaledConstant::new(gaussian_expectation(&integrand, ak), 1, ak * ak * half()))
}

/// `int P(x) x^j w_k(x) dx / (sqrt(2 pi) e^{a_k^2/2})` for every `k` and
/// `j < n_k`, in component-major order. All entries vanish for the true `P_n`.
pub fn verify_hermite_type2(p: &RatPoly, spec: &HermiteSpec) -> Vec<Rational> {
    let mut out = Vec::with_capacity(spec.n.weight());
    for (ak, &nk) in spec.a.iter().zip(spec.n.parts()) {
        for j in 0..nk {
            let integrand = p * &RatPoly::monomial(j, Rational::one());
            out.push(gaussian_expectation(&integrand, ak));
        }
    }
    out
}

/// `(int x^j Q(x) dx)_{j < |n|}`; equals `(0, ..., 0, 1)` for the true `Q_n`.
pub fn verify_hermite_type1(q: &LinearForm, spec: &HermiteSpec) -> Result<Vec<Rational>> {
    if q.terms().len() != spec.m() {
        return Err(Error::LengthMismatch { expected: spec.m(), found: q.terms().len() });
    }
    q.moments(spec.n.weight())
}

/// Float value of a Hermite linear form; every term is evaluated as
/// `A_k(x) e^{-(x - a_k)^2 / 2 + offset}` so the large factors `e^{a_k x}` and
/// `e^{-a_k^2/2}` never appear separately.
pub fn eval_q_hermite(q: &LinearForm, x: f64) -> f64 {
    q.eval(x)
}

/// Target vector `(0, ..., 0, 1)` of length `len`.
pub fn unit_condition_vector(len: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    if let Some(last) = v.last_mut() {
        *last = Rational::one();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn spec(a: &[i64], n: &[usize]) -> HermiteSpec {
        HermiteSpec::new(a.iter().map(|&x| int(x)).collect(), MultiIndex::new(n.to_vec()).unwrap())
            .unwrap()
    }

    #[test]
    fn type2_examples() {
        assert_eq!(hermite_type2(&spec(&[0], &[2])), RatPoly::from_ints(&[-1, 0, 1]));
        let s = HermiteSpec::new(vec![rat(3, 7)], MultiIndex::new(vec![1]).unwrap()).unwrap();
        assert_eq!(hermite_type2(&s), RatPoly::new(vec![rat(-3, 7), int(1)]));
        assert_eq!(hermite_type2(&spec(&[1, -1], &[1, 1])), RatPoly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn type1_examples() {
        let q = hermite_type1(&spec(&[0], &[1])).unwrap();
        let inv_sqrt = 1.0 / std::f64::consts::TAU.sqrt();
        assert!((eval_q_hermite(&q, 0.0) - inv_sqrt).abs() < 1e-16);
        assert_eq!(q.terms()[0].poly, RatPoly::one());

        let q = hermite_type1(&spec(&[0], &[2])).unwrap();
        // A_1 = x / sqrt(2 pi): prefactor 1/1! and poly x.
        assert_eq!(q.terms()[0].poly, RatPoly::x());
        assert_eq!(q.terms()[0].prefactor, ScaledConstant::new(int(1), -1, int(0)));
        assert_eq!(eval_q_hermite(&q, 0.0), 0.0);

        let s = spec(&[1, -1], &[1, 1]);
        let q = hermite_type1(&s).unwrap();
        assert_eq!(q.terms()[0].poly, RatPoly::constant(rat(1, 2)));
        assert_eq!(q.terms()[1].poly, RatPoly::constant(rat(-1, 2)));
        assert_eq!(verify_hermite_type1(&q, &s).unwrap(), vec![int(0), int(1)]);
        assert!(eval_q_hermite(&q, 0.0).abs() < 1e-17);
    }

    #[test]
    fn type1_rejects_coincident_points() {
        assert_eq!(
            hermite_type1(&spec(&[1, 1], &[1, 1])),
            Err(Error::SingularExpansion { i: 0, j: 1 })
        );
    }

    #[test]
    fn h_examples() {
        let s = spec(&[0], &[1]);
        assert_eq!(hermite_h(&s, 0).unwrap(), ScaledConstant::new(int(1), 1, int(0)));
        let s = spec(&[1, -1], &[1, 1]);
        let h = hermite_h(&s, 0).unwrap();
        assert_eq!(h, ScaledConstant::new(int(2), 1, rat(1, 2)));
        assert!((h.to_f64() - 2.0 * std::f64::consts::TAU.sqrt() * 0.5f64.exp()).abs() < 1e-14);
        let p = hermite_type2(&s);
        assert_eq!(hermite_h_from_moments(&s, 0, &p).unwrap(), h);
        assert_eq!(
            hermite_h_from_moments(&spec(&[0], &[1]), 0, &RatPoly::x()).unwrap(),
            ScaledConstant::new(int(1), 1, int(0))
        );
        assert!(hermite_h(&s, 2).is_err());
    }

    #[test]
    fn type2_residuals() {
        let s = spec(&[0], &[2]);
        assert_eq!(verify_hermite_type2(&RatPoly::from_ints(&[-1, 0, 1]), &s), vec![int(0), int(0)]);
        let s = spec(&[1, -1], &[1, 1]);
        assert_eq!(verify_hermite_type2(&RatPoly::from_ints(&[-2, 0, 1]), &s), vec![int(0), int(0)]);
        let wrong = verify_hermite_type2(&RatPoly::from_ints(&[-1, 0, 1]), &s);
        assert!(wrong.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn type1_degree_one_moment() {
        let s = spec(&[0], &[2]);
        assert_eq!(verify_hermite_type1(&hermite_type1(&s).unwrap(), &s).unwrap(), vec![int(0), int(1)]);
        assert_eq!(
            verify_hermite_type1(&hermite_type1(&spec(&[0], &[1])).unwrap(), &spec(&[0], &[1])).unwrap(),
            vec![int(1)]
        );
    }

    #[test]
    fn reduces_to_classical_hermite() {
        let mut prev = RatPoly::one();
        let mut cur = RatPoly::x();
        assert_eq!(hermite_type2(&spec(&[0], &[0])), prev);
        for j in 1..=7 {
            assert_eq!(hermite_type2(&spec(&[0], &[j])), cur);
            let next = &(&RatPoly::x() * &cur) - &prev.scale(&int(j as i64));
            prev = std::mem::replace(&mut cur, next);
        }
    }

    #[test]
    fn float_evaluation_vs_exact_terms() {
        let s = HermiteSpec::new(vec![rat(1, 3), rat(-5, 4), int(2)], MultiIndex::new(vec![2, 1, 2]).unwrap())
            .unwrap();
        let q = hermite_type1(&s).unwrap();
        for xr in [rat(-3, 2), rat(1, 5), int(1), rat(7, 3)] {
            let x = crate::exact::to_f64(&xr);
            let mut reference = 0.0;
            for t in q.terms() {
                let Weight::Hermite { a } = &t.weight else { unreachable!() };
                let exact = t.poly.eval(&xr) * &t.prefactor.r;
                let af = crate::exact::to_f64(a);
                reference += crate::exact::to_f64(&exact) / std::f64::consts::TAU.sqrt()
                    * (-(x - af) * (x - af) / 2.0).exp();
            }
            let v = eval_q_hermite(&q, x);
            assert!((v - reference).abs() <= 1e-13 * reference.abs().max(1e-300), "{v} vs {reference}");
        }
    }

    fn arb_spec() -> impl Strategy<Value = HermiteSpec> {
        (1usize..=3)
            .prop_flat_map(|m| {
                (
                    proptest::collection::vec((-6i64..=6, 1i64..=3), m),
                    proptest::collection::vec(0usize..=4, m),
                )
            })
            .prop_filter_map("weight <= 7, distinct a", |(a, n)| {
                if n.iter().sum::<usize>() > 7 {
                    return None;
                }
                let a: Vec<Rational> = a.into_iter().map(|(p, q)| rat(p, q)).collect();
                let s = HermiteSpec::new(a, MultiIndex::new(n).ok()?).ok()?;
                s.check_distinct().ok()?;
                Some(s)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn monic_orthogonal_and_normalised(s in arb_spec()) {
            let p = hermite_type2(&s);
            prop_assert!(p.is_monic());
            prop_assert_eq!(p.degree(), Some(s.n().weight()));
            prop_assert!(verify_hermite_type2(&p, &s).iter().all(Zero::is_zero));
            if s.n().weight() > 0 {
                let q = hermite_type1(&s).unwrap();
                prop_assert_eq!(verify_hermite_type1(&q, &s).unwrap(), unit_condition_vector(s.n().weight()));
                for t in q.terms() {
                    let nk = s.n().get(t.k);
                    prop_assert!(t.poly.degree().is_none_or(|d| d < nk));
                }
            }
            for k in 0..s.m() {
                prop_assert_eq!(hermite_h(&s, k).unwrap(), hermite_h_from_moments(&s, k, &p).unwrap());
                if s.n().get(k) > 0 {
                    let lower = s.with_index(s.n().decrement(k).unwrap()).unwrap();
                    let ratio = hermite_h(&s, k).unwrap().ratio(&hermite_h(&lower, k).unwrap()).unwrap();
                    prop_assert_eq!(ratio, ScaledConstant::rational(int(s.n().get(k) as i64)));
                }
            }
        }

        #[test]
        fn confluent_points_merge(c in -4i64..=4, n1 in 0usize..=4, n2 in 0usize..=4) {
            let split = spec(&[c, c], &[n1, n2]);
            let merged = spec(&[c], &[n1 + n2]);
            prop_assert_eq!(hermite_type2(&split), hermite_type2(&merged));
        }

        #[test]
        fn permutation_equivariance(s in arb_spec()) {
            prop_assume!(s.m() >= 2 && s.n().weight() > 0);
            let mut a = s.a().to_vec();
            let mut n = s.n().parts().to_vec();
            a.swap(0, 1);
            n.swap(0, 1);
            let t = HermiteSpec::new(a, MultiIndex::new(n).unwrap()).unwrap();
            prop_assert_eq!(hermite_type2(&s), hermite_type2(&t));
            let qs = hermite_type1(&s).unwrap();
            let qt = hermite_type1(&t).unwrap();
            prop_assert_eq!(&qs.terms()[0].poly, &qt.terms()[1].poly);
            prop_assert_eq!(&qs.terms()[1].poly, &qt.terms()[0].poly);
        }
    }
}
