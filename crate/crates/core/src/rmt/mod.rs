//! Matrix-level Monte Carlo for the Gaussian ensemble with external source
//! and the Wishart ensemble, and the comparison of eigenvalue histograms
//! against the kernel's one-point function.

mod density;
mod ensemble;
mod matrix;

pub use density::{chi_square_statistic, compare_density, histogram, DensityComparison, Histogram, Verdict, MIN_EXPECTED_COUNT};
pub use ensemble::{sample, sample_gue_source, sample_wishart, BinSpec, EnsembleConfig};
pub use matrix::{hermitian_eigenvalues, HermitianMatrix, MAX_EIGEN_DIM};
