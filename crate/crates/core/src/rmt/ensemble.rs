use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec};

use super::matrix::{hermitian_eigenvalues, HermitianMatrix, MAX_EIGEN_DIM};

/// Histogram range `[lo, hi)` split into `count` equal bins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl BinSpec {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) || count == 0 {
            return Err(Error::Domain(format!("invalid bin range [{lo}, {hi}) with {count} bins")));
        }
        Ok(Self { lo, hi, count })
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.count as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.width()
    }

    pub fn index(&self, x: f64) -> Option<usize> {
        if !(x >= self.lo && x < self.hi) {
            return None;
        }
        Some((((x - self.lo) / self.width()) as usize).min(self.count - 1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    pub spec: FamilySpec,
    pub samples: usize,
    pub seed: u64,
    pub bins: BinSpec,
}

pub const DEFAULT_BIN_COUNT: usize = 60;

impl EnsembleConfig {
    /// Configuration with a bin range covering the eigenvalue support with a
    /// wide margin.
    pub fn new(spec: FamilySpec, samples: usize, seed: u64) -> Result<Self> {
        let dim = spec.n().weight();
        let params = spec.params_f64();
        let (lo, hi) = params.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        let bins = match spec.family() {
            Family::Hermite => {
                let margin = 2.0 * (dim as f64).sqrt() + 3.0;
                BinSpec::new(lo - margin, hi + margin, DEFAULT_BIN_COUNT)?
            }
            Family::Laguerre => {
                let top = (2 * (dim + spec.p()) + 10) as f64 / lo;
                BinSpec::new(0.0, top, DEFAULT_BIN_COUNT)?
            }
        };
        Self::with_bins(spec, samples, seed, bins)
    }

    pub fn with_bins(spec: FamilySpec, samples: usize, seed: u64, bins: BinSpec) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        let dim = spec.n().weight();
        if dim == 0 || dim > MAX_EIGEN_DIM {
            return Err(Error::MatrixTooLarge(dim));
        }
        Ok(Self { spec, samples, seed, bins })
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn dim(&self) -> usize {
        self.spec.n().weight()
    }

    /// Parameters repeated according to the multi-index.
    fn expanded_params(&self) -> Vec<f64> {
        self.spec
            .params_f64()
            .into_iter()
            .zip(self.spec.n().parts())
            .flat_map(|(v, &k)| std::iter::repeat_n(v, k))
            .collect()
    }

    fn rng(&self, sample: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(sample as u64);
        rng
    }
}

fn complex_normal(rng: &mut ChaCha8Rng, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

fn gue_sample(cfg: &EnsembleConfig, a: &[f64], index: usize) -> Vec<f64> {
    let n = a.len();
    let mut rng = cfg.rng(index);
    let mut m = HermitianMatrix::zeros(n);
    for (i, &ai) in a.iter().enumerate() {
        let d: f64 = rng.sample(StandardNormal);
        m.set_hermitian(i, i, Complex64::new(d + ai, 0.0));
        for j in i + 1..n {
            m.set_hermitian(i, j, complex_normal(&mut rng, 1.0));
        }
    }
    hermitian_eigenvalues(&m).expect("Hermitian by construction")
}

fn wishart_sample(cfg: &EnsembleConfig, beta: &[f64], index: usize) -> Vec<f64> {
    let n = beta.len();
    let cols = n + cfg.spec.p();
    let mut rng = cfg.rng(index);
    let x: Vec<Vec<Complex64>> = beta
        .iter()
        .map(|&b| (0..cols).map(|_| complex_normal(&mut rng, 1.0 / b)).collect())
        .collect();
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let z: Complex64 = x[i].iter().zip(&x[j]).map(|(u, v)| u * v.conj()).sum();
            m.set_hermitian(i, j, z);
        }
    }
    hermitian_eigenvalues(&m).expect("Hermitian by construction")
}

/// Eigenvalues of `M = H + A` with `H` from the Gaussian unitary ensemble
/// `e^{-Tr H^2 / 2}` and `A = diag(a_k)` repeated `n_k` times. Sample `i`
/// uses stream `i` of the seeded generator.
pub fn sample_gue_source(cfg: &EnsembleConfig) -> Result<Vec<Vec<f64>>> {
    if cfg.family() != Family::Hermite {
        return Err(Error::FamilyMismatch("GUE sampling needs a Hermite spec".into()));
    }
    let a = cfg.expanded_params();
    Ok((0..cfg.samples).into_par_iter().map(|i| gue_sample(cfg, &a, i)).collect())
}

/// Eigenvalues of `M = X X^H` where row `i` of the `n x (n + p)` matrix `X`
/// has independent complex Gaussian entries of variance `1 / beta_i`.
pub fn sample_wishart(cfg: &EnsembleConfig) -> Result<Vec<Vec<f64>>> {
    if cfg.family() != Family::Laguerre {
        return Err(Error::FamilyMismatch("Wishart sampling needs a Laguerre spec".into()));
    }
    let beta = cfg.expanded_params();
    Ok((0..cfg.samples).into_par_iter().map(|i| wishart_sample(cfg, &beta, i)).collect())
}

pub fn sample(cfg: &EnsembleConfig) -> Result<Vec<Vec<f64>>> {
    match cfg.family() {
        Family::Hermite => sample_gue_source(cfg),
        Family::Laguerre => sample_wishart(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, MultiIndex};
    use crate::hermite::HermiteSpec;
    use crate::laguerre::LaguerreSpec;

    fn herm(a: &[i64], n: &[usize]) -> FamilySpec {
        HermiteSpec::new(a.iter().map(|&x| int(x)).collect(), MultiIndex::new(n.to_vec()).unwrap())
            .unwrap()
            .into()
    }

    fn lag(b: &[i64], n: &[usize], p: usize) -> FamilySpec {
        LaguerreSpec::new(b.iter().map(|&x| int(x)).collect(), MultiIndex::new(n.to_vec()).unwrap(), p)
            .unwrap()
            .into()
    }

    fn mean_var(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (m, v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
    }

    #[test]
    fn gue_moments() {
        let cfg = EnsembleConfig::new(herm(&[0], &[1]), 100_000, 1).unwrap();
        let b = sample_gue_source(&cfg).unwrap();
        let (m, v) = mean_var(&b.iter().map(|e| e[0]).collect::<Vec<_>>());
        assert!(m.abs() < 0.01 && (v - 1.0).abs() < 0.02, "{m} {v}");

        let cfg = EnsembleConfig::new(herm(&[1, -1], &[1, 1]), 100_000, 2).unwrap();
        let b = sample_gue_source(&cfg).unwrap();
        let (m, v) = mean_var(&b.iter().map(|e| e.iter().sum()).collect::<Vec<_>>());
        assert!(m.abs() < 0.02, "{m}");
        assert!((v - 2.0).abs() < 0.05, "{v}");
    }

    #[test]
    fn wishart_moments() {
        for (p, expect, tol) in [(0, 1.0, 0.01), (1, 2.0, 0.02)] {
            let cfg = EnsembleConfig::new(lag(&[1], &[1], p), 100_000, 3).unwrap();
            let b = sample_wishart(&cfg).unwrap();
            let (m, _) = mean_var(&b.iter().map(|e| e[0]).collect::<Vec<_>>());
            assert!((m - expect).abs() < tol, "p={p}: {m}");
        }
        let cfg = EnsembleConfig::new(lag(&[1, 2], &[2, 1], 1), 2_000, 4).unwrap();
        let b = sample_wishart(&cfg).unwrap();
        assert!(b.iter().flatten().all(|&x| x >= 0.0));
        assert!(b.iter().all(|e| e.len() == 3 && e.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn deterministic_by_seed() {
        let cfg = EnsembleConfig::new(herm(&[1, -1], &[1, 1]), 500, 9).unwrap();
        assert_eq!(sample(&cfg).unwrap(), sample(&cfg).unwrap());
        let other = EnsembleConfig { seed: 10, ..cfg.clone() };
        assert_ne!(sample(&cfg).unwrap(), sample(&other).unwrap());
        let cfg = EnsembleConfig::new(lag(&[1, 2], &[1, 1], 0), 500, 9).unwrap();
        assert_eq!(sample(&cfg).unwrap(), sample(&cfg).unwrap());
        assert!(sample_gue_source(&cfg).is_err());
    }

    #[test]
    fn bins() {
        let b = BinSpec::new(0.0, 1.0, 4).unwrap();
        assert_eq!(b.index(0.0), Some(0));
        assert_eq!(b.index(0.99), Some(3));
        assert_eq!(b.index(1.0), None);
        assert_eq!(b.index(-0.1), None);
        assert!((b.center(1) - 0.375).abs() < 1e-15);
        assert!(BinSpec::new(1.0, 1.0, 3).is_err());
        assert!(BinSpec::new(0.0, 1.0, 0).is_err());
    }
}
