use mop_core::exact::{int, rat, ChainStrategy, MultiIndex, Rational};
use mop_core::kernels::{build_kernel, check_biorthogonality, default_geometry, eval_contour, SumKernel};
use mop_core::{FamilySpec, HermiteSpec, LaguerreSpec};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn positive_index(m: usize) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(1usize..=2, m).prop_map(|v| MultiIndex::new(v).unwrap())
}

fn hermite_spec() -> impl Strategy<Value = FamilySpec> {
    (1usize..=3)
        .prop_flat_map(|m| (proptest::sample::subsequence((-4i64..=4).collect::<Vec<_>>(), m), positive_index(m)))
        .prop_map(|(a, n)| HermiteSpec::new(a.into_iter().map(|v| rat(v, 2)).collect(), n).unwrap().into())
}

fn laguerre_spec() -> impl Strategy<Value = FamilySpec> {
    (1usize..=3)
        .prop_flat_map(|m| {
            (proptest::sample::subsequence(vec![(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)], m), positive_index(m), 0usize..=2)
        })
        .prop_map(|(b, n, p)| {
            let beta: Vec<Rational> = b.into_iter().map(|(u, v)| rat(u, v)).collect();
            LaguerreSpec::new(beta, n, p).unwrap().into()
        })
}

fn any_spec() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![hermite_spec(), laguerre_spec()]
}

fn point(spec: &FamilySpec, u: f64) -> f64 {
    match spec {
        FamilySpec::Hermite(_) => 4.0 * u - 2.0,
        FamilySpec::Laguerre(_) => 0.2 + 3.0 * u,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cd_equals_sum_for_both_chains(spec in any_spec(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (x, y) = (point(&spec, u), point(&spec, v));
        let model = build_kernel(&spec).unwrap();
        let cd = model.eval_cd(x, y).unwrap();
        let a = SumKernel::new(&spec, &spec.n().chain(ChainStrategy::RoundRobin)).unwrap().eval(x, y).unwrap();
        let b = SumKernel::new(&spec, &spec.n().chain(ChainStrategy::LexicographicFirst)).unwrap().eval(x, y).unwrap();
        let scale = 1.0 + a.abs();
        prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {}", a, b);
        prop_assert!((cd - a).abs() <= 1e-9 * scale, "{} vs {}", cd, a);
    }

    #[test]
    fn contour_reproduces_conjugated_cd(spec in any_spec(), u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (x, y) = (point(&spec, u), point(&spec, v));
        let model = build_kernel(&spec).unwrap();
        let c = eval_contour(&spec, x, y, 512, &default_geometry(&spec)).unwrap();
        let expected = model.eval_conjugated(x, y).unwrap();
        prop_assert!((c.value - expected).abs() <= 1e-7 * (1.0 + expected.abs()), "{} vs {}", c.value, expected);
        prop_assert!(c.imag.abs() <= 1e-7 * (1.0 + expected.abs()));
    }

    #[test]
    fn biorthogonality_is_exact(spec in any_spec()) {
        let m = check_biorthogonality(&spec, &spec.n().chain(ChainStrategy::LexicographicFirst)).unwrap();
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let ok = if i == j { v.is_one() } else { v.is_zero() };
                prop_assert!(ok, "entry ({}, {}) = {}", i, j, v);
            }
        }
    }
}

#[test]
fn degenerate_index_is_rejected() {
    let s: FamilySpec = HermiteSpec::new(vec![int(0), int(1)], MultiIndex::new(vec![0, 2]).unwrap()).unwrap().into();
    assert!(matches!(build_kernel(&s), Err(mop_core::Error::DegenerateIndex { k: 0 })));
}
