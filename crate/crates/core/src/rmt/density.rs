use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::kernels::KernelModel;

use super::ensemble::{BinSpec, EnsembleConfig};

/// Bins with fewer expected counts are left out of the chi-square statistic.
pub const MIN_EXPECTED_COUNT: f64 = 10.0;
const MIN_BINS: usize = 3;
const SIMPSON_PANELS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bins: BinSpec,
    pub counts: Vec<u64>,
    /// Eigenvalues outside the bin range.
    pub outside: u64,
    pub total: u64,
}

pub fn histogram(batch: &[Vec<f64>], bins: BinSpec) -> Histogram {
    let mut counts = vec![0u64; bins.count];
    let mut outside = 0;
    let mut total = 0;
    for &x in batch.iter().flatten() {
        total += 1;
        match bins.index(x) {
            Some(i) => counts[i] += 1,
            None => outside += 1,
        }
    }
    Histogram { bins, counts, outside, total }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Reject,
    InsufficientSamples,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Reject => "reject",
            Verdict::InsufficientSamples => "insufficient-samples",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityComparison {
    pub centers: Vec<f64>,
    /// Histogram normalized to unit mass over the bin range.
    pub empirical: Vec<f64>,
    /// `K(x, x) / |n|` at the bin centers.
    pub predicted: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub observed: Vec<u64>,
    /// Predicted counts: total eigenvalue count times the predicted mass of each bin.
    pub expected: Vec<f64>,
    pub chi_square: f64,
    pub dof: usize,
    pub included_bins: usize,
    /// 99% quantile of the chi-square law with `dof` degrees of freedom.
    pub quantile_99: f64,
    pub verdict: Verdict,
}

fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let h = (hi - lo) / SIMPSON_PANELS as f64;
    let inner: f64 = (1..SIMPSON_PANELS)
        .map(|i| f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

/// Pearson statistic over the bins whose expected count is at least
/// [`MIN_EXPECTED_COUNT`], together with the number of such bins.
pub fn chi_square_statistic(observed: &[f64], expected: &[f64]) -> (f64, usize) {
    observed
        .iter()
        .zip(expected)
        .filter(|(_, &e)| e >= MIN_EXPECTED_COUNT)
        .fold((0.0, 0), |(chi, n), (&o, &e)| (chi + (o - e).powi(2) / e, n + 1))
}

/// Compares the eigenvalue histogram of `batch` with the one-point density
/// `K(x, x) / |n|` of `model`.
pub fn compare_density(batch: &[Vec<f64>], model: &KernelModel, cfg: &EnsembleConfig) -> Result<DensityComparison> {
    if model.family() != cfg.family() {
        return Err(Error::FamilyMismatch("kernel and ensemble families differ".into()));
    }
    let dim = cfg.dim();
    if model.spec().n().weight() != dim {
        return Err(Error::LengthMismatch { expected: dim, found: model.spec().n().weight() });
    }
    let hist = histogram(batch, cfg.bins);
    let bins = cfg.bins;
    let width = bins.width();
    let inside = (hist.total - hist.outside) as f64;
    let density = |x: f64| model.cd_unchecked(x, x) / dim as f64;

    let centers: Vec<f64> = (0..bins.count).map(|i| bins.center(i)).collect();
    let predicted = centers.iter().map(|&c| density(c)).collect();
    let norm = if inside > 0.0 { 1.0 / (inside * width) } else { 0.0 };
    let empirical = hist.counts.iter().map(|&c| c as f64 * norm).collect();
    let std_errors = hist.counts.iter().map(|&c| (c as f64).sqrt() * norm).collect();
    let expected: Vec<f64> = (0..bins.count)
        .map(|i| {
            let lo = bins.lo + i as f64 * width;
            let hi = lo + width;
            // The Laguerre density is only defined for x > 0.
            let lo = if cfg.family() == Family::Laguerre { lo.max(f64::MIN_POSITIVE) } else { lo };
            hist.total as f64 * simpson(density, lo, hi)
        })
        .collect();

    let observed: Vec<f64> = hist.counts.iter().map(|&c| c as f64).collect();
    let (chi_square, included) = chi_square_statistic(&observed, &expected);
    let (dof, quantile_99, verdict) = if included < MIN_BINS {
        (included.saturating_sub(1), f64::NAN, Verdict::InsufficientSamples)
    } else {
        let dof = included - 1;
        let q = ChiSquared::new(dof as f64)
            .map_err(|e| Error::Domain(e.to_string()))?
            .inverse_cdf(0.99);
        (dof, q, if chi_square <= q { Verdict::Pass } else { Verdict::Reject })
    };
    Ok(DensityComparison {
        centers,
        empirical,
        predicted,
        std_errors,
        observed: hist.counts,
        expected,
        chi_square,
        dof,
        included_bins: included,
        quantile_99,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, MultiIndex};
    use crate::family::FamilySpec;
    use crate::hermite::HermiteSpec;
    use crate::kernels::build_kernel;
    use crate::rmt::sample;

    fn herm(a: &[i64], n: &[usize]) -> FamilySpec {
        HermiteSpec::new(a.iter().map(|&x| int(x)).collect(), MultiIndex::new(n.to_vec()).unwrap())
            .unwrap()
            .into()
    }

    #[test]
    fn empirical_density_has_unit_mass() {
        let s = herm(&[1, -1], &[1, 1]);
        let cfg = EnsembleConfig::new(s.clone(), 5_000, 5).unwrap();
        let b = sample(&cfg).unwrap();
        let c = compare_density(&b, &build_kernel(&s).unwrap(), &cfg).unwrap();
        let mass: f64 = c.empirical.iter().sum::<f64>() * cfg.bins.width();
        assert!((mass - 1.0).abs() < 1e-12);
        let predicted_mass: f64 = c.expected.iter().sum::<f64>() / (2.0 * 5_000.0);
        assert!((predicted_mass - 1.0).abs() < 1e-6, "{predicted_mass}");
    }

    #[test]
    fn identical_vectors_give_zero_statistic() {
        let e = [12.0, 40.5, 3.0, 99.0];
        assert_eq!(chi_square_statistic(&e, &e), (0.0, 3));
        assert_eq!(chi_square_statistic(&[22.0], &[11.0]), (11.0, 1));
    }

    #[test]
    fn small_sample_is_insufficient() {
        let s = herm(&[1, -1], &[1, 1]);
        let cfg = EnsembleConfig::new(s.clone(), 10, 1).unwrap();
        let c = compare_density(&sample(&cfg).unwrap(), &build_kernel(&s).unwrap(), &cfg).unwrap();
        assert_eq!(c.verdict, Verdict::InsufficientSamples);
    }

    #[test]
    fn family_and_size_mismatch() {
        let s = herm(&[1, -1], &[1, 1]);
        let cfg = EnsembleConfig::new(s, 10, 1).unwrap();
        let k = build_kernel(&herm(&[1, -1], &[2, 1])).unwrap();
        assert!(compare_density(&[], &k, &cfg).is_err());
    }
}
