use mop_core::exact::{int, MultiIndex};
use mop_core::rmt::{sample, EnsembleConfig};
use mop_core::{FamilySpec, HermiteSpec, LaguerreSpec};

fn moments(v: &[f64], center: f64) -> [f64; 3] {
    let n = v.len() as f64;
    let mut m = [0.0; 3];
    for &x in v {
        let d = x - center;
        m[0] += d / n;
        m[1] += d * d / n;
        m[2] += d.powi(4) / n;
    }
    m
}

/// Checks `E[d] = 0`, `E[d^2] = var` and `E[d^4] = 3 var^2` at four standard
/// errors for a Gaussian variable `d`.
#[test]
fn gaussian_diagonal_marginal() {
    let spec: FamilySpec = HermiteSpec::new(vec![int(1)], MultiIndex::new(vec![1]).unwrap()).unwrap().into();
    let cfg = EnsembleConfig::new(spec, 100_000, 11).unwrap();
    let x: Vec<f64> = sample(&cfg).unwrap().into_iter().map(|e| e[0]).collect();
    let [m1, m2, m4] = moments(&x, 1.0);
    let n = x.len() as f64;
    assert!(m1.abs() <= 4.0 * (1.0 / n).sqrt(), "{m1}");
    assert!((m2 - 1.0).abs() <= 4.0 * (2.0 / n).sqrt(), "{m2}");
    assert!((m4 - 3.0).abs() <= 4.0 * ((105.0 - 9.0) / n).sqrt(), "{m4}");
}

/// With one row, `M = sum_j |X_j|^2` is Gamma distributed with shape `1 + p`
/// and rate `beta`.
#[test]
fn wishart_marginal() {
    for p in 0..=2 {
        let spec: FamilySpec = LaguerreSpec::new(vec![int(2)], MultiIndex::new(vec![1]).unwrap(), p).unwrap().into();
        let cfg = EnsembleConfig::new(spec, 100_000, 12).unwrap();
        let x: Vec<f64> = sample(&cfg).unwrap().into_iter().map(|e| e[0]).collect();
        let n = x.len() as f64;
        let k = (1 + p) as f64;
        let mean = k / 2.0;
        let var = k / 4.0;
        let [m1, m2, _] = moments(&x, mean);
        assert!(m1.abs() <= 4.0 * (var / n).sqrt(), "p={p}: {m1}");
        // Var of (x - mean)^2 is mu_4 - var^2 with mu_4 = 3 k (k + 2) / beta^4.
        let mu4 = 3.0 * k * (k + 2.0) / 16.0;
        assert!((m2 - var).abs() <= 4.0 * ((mu4 - var * var) / n).sqrt(), "p={p}: {m2}");
    }
}

#[test]
fn equal_seeds_agree_across_runs() {
    let spec: FamilySpec = HermiteSpec::new(vec![int(1), int(-1)], MultiIndex::new(vec![2, 1]).unwrap()).unwrap().into();
    let cfg = EnsembleConfig::new(spec, 2_000, 99).unwrap();
    let a = sample(&cfg).unwrap();
    let b = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| sample(&cfg).unwrap());
    assert_eq!(a, b);
}
