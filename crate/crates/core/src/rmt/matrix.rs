use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_EIGEN_DIM: usize = 64;

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    /// Wraps row-major entries. Hermitian symmetry is checked by
    /// [`hermitian_eigenvalues`], not here.
    pub fn from_rows(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Sets `M[i][j] = z` and `M[j][i] = conj(z)`.
    pub fn set_hermitian(&mut self, i: usize, j: usize, z: Complex64) {
        let n = self.n;
        if i == j {
            self.data[i * n + i] = Complex64::new(z.re, 0.0);
        } else {
            self.data[i * n + j] = z;
            self.data[j * n + i] = z.conj();
        }
    }

    pub fn add_to_diagonal(&mut self, i: usize, v: f64) {
        self.data[i * self.n + i].re += v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

fn off_diagonal_sq(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s
}

/// Eigenvalues in ascending order by cyclic complex Jacobi rotations.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n > MAX_EIGEN_DIM {
        return Err(Error::MatrixTooLarge(n));
    }
    let norm = m.frobenius_sq().sqrt();
    let defect = m.hermitian_defect();
    if defect > 1e-14 * norm.max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let mut a = m.data.clone();
    let target = (1e-12 * norm).powi(2);
    for _sweep in 0..100 {
        if off_diagonal_sq(&a, n) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, n, p, q);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Annihilates `a[p][q]` with `U = diag(1, e^{-i phi}) R(theta)` acting on
/// rows and columns `p`, `q`, where `phi = arg a[p][q]`.
fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq.conj() / g;
    let (app, aqq) = (a[p * n + p].re, a[q * n + q].re);
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let (upp, upq) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
    let (uqp, uqq) = (phase * -s, phase * c);
    for k in 0..n {
        let (xp, xq) = (a[k * n + p], a[k * n + q]);
        a[k * n + p] = xp * upp + xq * uqp;
        a[k * n + q] = xp * upq + xq * uqq;
    }
    for k in 0..n {
        let (xp, xq) = (a[p * n + k], a[q * n + k]);
        a[p * n + k] = upp.conj() * xp + uqp.conj() * xq;
        a[q * n + k] = upq.conj() * xp + uqq.conj() * xq;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_examples() {
        let m = HermitianMatrix::from_real_diagonal(&[3.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![2.0, 3.0]);
        let m = HermitianMatrix::from_rows(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
        let m = HermitianMatrix::from_rows(2, vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)]).unwrap();
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let m = HermitianMatrix::from_rows(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(hermitian_eigenvalues(&m), Err(Error::NotHermitian(_))));
        assert!(matches!(hermitian_eigenvalues(&HermitianMatrix::zeros(65)), Err(Error::MatrixTooLarge(65))));
        assert!(HermitianMatrix::from_rows(2, vec![c(0.0, 0.0)]).is_err());
    }

    fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
        proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n).prop_map(move |v| {
            let mut m = HermitianMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    let (re, im) = v[i * n + j];
                    m.set_hermitian(i, j, c(re, im));
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn trace_identities(m in (1usize..=16).prop_flat_map(hermitian)) {
            let e = hermitian_eigenvalues(&m).unwrap();
            let s1: f64 = e.iter().sum();
            let s2: f64 = e.iter().map(|x| x * x).sum();
            prop_assert!((s1 - m.trace()).abs() < 1e-10);
            prop_assert!((s2 - m.frobenius_sq()).abs() < 1e-10 * m.frobenius_sq().max(1.0));
            prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
