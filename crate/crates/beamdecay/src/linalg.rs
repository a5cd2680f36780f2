//! Banded symmetric storage and Cholesky factorization.
//!
//! The assembled beam operators couple only neighbouring nodes, so every
//! matrix in the time loop has half-bandwidth 3. Factoring and solving in
//! band form keeps the per-step cost linear in the number of unknowns.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Symmetric banded matrix, lower band stored row-wise:
/// `data[i * (hb + 1) + d]` holds `A[i, i - d]` for `d <= min(hb, i)`.
#[derive(Debug, Clone)]
pub struct SymBanded {
    n: usize,
    hb: usize,
    data: Vec<f64>,
}

impl SymBanded {
    /// Captures the band of a dense symmetric matrix.
    ///
    /// Entries outside the band are dropped; callers are expected to pass
    /// matrices that are banded by construction.
    pub fn from_dense(a: &DMatrix<f64>, hb: usize) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "matrix must be square");
        let mut data = vec![0.0; n * (hb + 1)];
        for i in 0..n {
            for d in 0..=hb.min(i) {
                data[i * (hb + 1) + d] = a[(i, i - d)];
            }
        }
        SymBanded { n, hb, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, d: usize) -> f64 {
        self.data[i * (self.hb + 1) + d]
    }

    /// `y = A x` using the symmetric band.
    pub fn mul_vec(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut y = DVector::zeros(self.n);
        for i in 0..self.n {
            let mut acc = self.at(i, 0) * x[i];
            for d in 1..=self.hb.min(i) {
                let a = self.at(i, d);
                acc += a * x[i - d];
                y[i - d] += a * x[i];
            }
            y[i] += acc;
        }
        y
    }

    /// Linear combination `a*A + b*B + c*C` of identically shaped bands.
    pub fn combine(a: f64, ma: &SymBanded, b: f64, mb: &SymBanded, c: f64, mc: &SymBanded) -> SymBanded {
        assert_eq!(ma.n, mb.n);
        assert_eq!(ma.n, mc.n);
        assert_eq!(ma.hb, mb.hb);
        assert_eq!(ma.hb, mc.hb);
        let data = ma
            .data
            .iter()
            .zip(mb.data.iter())
            .zip(mc.data.iter())
            .map(|((&x, &y), &z)| a * x + b * y + c * z)
            .collect();
        SymBanded {
            n: ma.n,
            hb: ma.hb,
            data,
        }
    }

    /// Banded Cholesky `A = L L^T`; fails if the matrix is not positive
    /// definite.
    pub fn cholesky(&self) -> Result<BandedCholesky> {
        let n = self.n;
        let hb = self.hb;
        let w = hb + 1;
        // l[i * w + d] holds L[i, i - d]
        let mut l = vec![0.0; n * w];
        for j in 0..n {
            let lo = j.saturating_sub(hb);
            let mut sum = self.at(j, 0);
            for k in lo..j {
                let v = l[j * w + (j - k)];
                sum -= v * v;
            }
            if !(sum > 0.0) || !sum.is_finite() {
                return Err(Error::Numerical(format!(
                    "banded Cholesky broke down at pivot {j} (value {sum:e})"
                )));
            }
            let diag = sum.sqrt();
            l[j * w] = diag;
            let hi = (j + hb).min(n - 1);
            for i in j + 1..=hi {
                let mut s = self.at(i, i - j);
                let klo = i.saturating_sub(hb).max(lo);
                for k in klo..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                l[i * w + (i - j)] = s / diag;
            }
        }
        Ok(BandedCholesky { n, hb, l })
    }
}

/// Lower-triangular banded Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandedCholesky {
    n: usize,
    hb: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    /// Solves `A x = b` via forward and back substitution.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let hb = self.hb;
        let w = hb + 1;
        let mut x = b.clone();
        for i in 0..n {
            let lo = i.saturating_sub(hb);
            let mut s = x[i];
            for k in lo..i {
                s -= self.l[i * w + (i - k)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
        for i in (0..n).rev() {
            let hi = (i + hb).min(n - 1);
            let mut s = x[i];
            for k in i + 1..=hi {
                s -= self.l[k * w + (k - i)] * x[k];
            }
            x[i] = s / self.l[i * w];
        }
        x
    }
}

/// Largest generalized eigenvalue of `(K, M)` by power iteration on
/// `M^{-1} K`, returned as a frequency `sqrt(lambda_max)`.
pub fn max_generalized_frequency(
    stiffness: &DMatrix<f64>,
    mass: &DMatrix<f64>,
    iterations: usize,
) -> Result<f64> {
    let n = stiffness.nrows();
    let chol = mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?;
    let mut z = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.7).sin());
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let kz = stiffness * &z;
        let mut next = chol.solve(&kz);
        let norm = next.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        next /= norm;
        let num = next.dot(&(stiffness * &next));
        let den = next.dot(&(mass * &next));
        lambda = num / den;
        z = next;
    }
    Ok(lambda.max(0.0).sqrt())
}

/// Smallest generalized eigenvalue of `(K, M)` via the Cholesky transform
/// and a dense symmetric eigensolve, returned as `sqrt(lambda_min)`.
pub fn min_generalized_frequency(stiffness: &DMatrix<f64>, mass: &DMatrix<f64>) -> Result<f64> {
    let chol = mass
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv_k = l
        .clone()
        .solve_lower_triangular(stiffness)
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    // (L^{-1} K) L^{-T} = (L^{-1} (L^{-1} K)^T)^T
    let tmp = l
        .solve_lower_triangular(&linv_k.transpose())
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let reduced = tmp.transpose();
    let sym = (&reduced + reduced.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let min = eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !min.is_finite() || min < -1e-6 {
        return Err(Error::Numerical(format!(
            "smallest generalized eigenvalue {min:e} is not usable"
        )));
    }
    Ok(min.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_banded_spd(n: usize, hb: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i.saturating_sub(hb)..=i {
                let v = rng.gen_range(-1.0..1.0);
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
            a[(i, i)] += hb as f64 * 2.0 + 1.0;
        }
        a
    }

    #[test]
    fn banded_solve_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [5usize, 17, 40] {
            let a = random_banded_spd(n, 3, &mut rng);
            let band = SymBanded::from_dense(&a, 3);
            let b = DVector::from_fn(n, |i, _| (i as f64 + 1.0).sin());
            let x_band = band.cholesky().unwrap().solve(&b);
            let x_dense = a.clone().cholesky().unwrap().solve(&b);
            for i in 0..n {
                assert_relative_eq!(x_band[i], x_dense[i], max_relative = 1e-10, epsilon = 1e-12);
            }
            let y = band.mul_vec(&x_band);
            for i in 0..n {
                assert_relative_eq!(y[i], b[i], max_relative = 1e-9, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = DMatrix::identity(4, 4);
        a[(2, 2)] = -1.0;
        let band = SymBanded::from_dense(&a, 1);
        assert!(band.cholesky().is_err());
    }

    #[test]
    fn generalized_frequencies_on_known_pair() {
        // K = diag(1, 4, 9), M = I -> frequencies 1..3
        let k = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 9.0]));
        let m = DMatrix::identity(3, 3);
        let top = max_generalized_frequency(&k, &m, 200).unwrap();
        let bottom = min_generalized_frequency(&k, &m).unwrap();
        assert_relative_eq!(top, 3.0, max_relative = 1e-8);
        assert_relative_eq!(bottom, 1.0, max_relative = 1e-10);
    }
}
