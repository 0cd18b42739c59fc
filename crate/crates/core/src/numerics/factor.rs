//! Cholesky factorization of symmetric positive-definite matrices,
//! log-determinant, and linear solves.

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

/// Relative tolerance on |M - M^T| before an SPD routine rejects its input.
pub const SYMMETRY_RTOL: f64 = 1e-10;

/// Lower-triangular Cholesky factor `L` with `L L^T = M`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: DenseMatrix,
}

impl CholeskyFactor {
    /// Factors a symmetric positive-definite matrix.
    ///
    /// The input is symmetrized as `(M + M^T)/2` to absorb round-off, but is
    /// rejected outright when the asymmetry exceeds `SYMMETRY_RTOL` relative
    /// to the largest entry.
    pub fn new(m: &DenseMatrix) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(Error::dim(format!("Cholesky needs a square matrix, got {}x{}", m.rows(), m.cols())));
        }
        let scale = m.max_abs().max(1.0);
        let dev = m.asymmetry();
        if dev > SYMMETRY_RTOL * scale {
            return Err(Error::NotSymmetric { deviation: dev / scale });
        }
        let a = m.symmetrized();
        let n = a.rows();
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut diag = a.get(j, j);
            for k in 0..j {
                diag -= l.get(j, k) * l.get(j, k);
            }
            if diag <= 0.0 {
                return Err(Error::NotSpd { index: j, pivot: diag });
            }
            let ljj = diag.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / ljj);
            }
        }
        Ok(CholeskyFactor { l })
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// `log det M = 2 sum_i log L_ii`.
    pub fn log_det(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.l.rows() {
            s += self.l.get(i, i).ln();
        }
        2.0 * s
    }

    /// Solves `M x = b` for one right-hand side, in place.
    pub fn solve_vec_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        assert_eq!(b.len(), n);
        // forward: L y = b
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l.get(i, k) * b[k];
            }
            b[i] = s / self.l.get(i, i);
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l.get(k, i) * b[k];
            }
            b[i] = s / self.l.get(i, i);
        }
    }

    /// Solves `M X = B` column by column.
    pub fn solve(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.rows() != self.dim() {
            return Err(Error::dim(format!(
                "solve expects {} rows in the right-hand side, got {}",
                self.dim(),
                b.rows()
            )));
        }
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        let mut col = vec![0.0; b.rows()];
        for j in 0..b.cols() {
            for i in 0..b.rows() {
                col[i] = b.get(i, j);
            }
            self.solve_vec_in_place(&mut col);
            out.set_col(j, &col);
        }
        Ok(out)
    }
}

/// Log-determinant of a symmetric positive-definite matrix via Cholesky.
pub fn logdet_spd(m: &DenseMatrix) -> Result<f64> {
    Ok(CholeskyFactor::new(m)?.log_det())
}

/// Solves `M X = B` with `M` symmetric positive definite.
pub fn spd_solve(m: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    CholeskyFactor::new(m)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigen::symmetric_eigen;
    use crate::test_util::{random_matrix, random_spd};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logdet_identity_is_zero() {
        assert_eq!(logdet_spd(&DenseMatrix::identity(3)).unwrap(), 0.0);
    }

    #[test]
    fn logdet_diagonal() {
        let m = DenseMatrix::from_vec(2, 2, vec![2.0, 0.0, 0.0, 3.0]).unwrap();
        assert_abs_diff_eq!(logdet_spd(&m).unwrap(), 6.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn logdet_matches_eigenvalue_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let m = random_spd(4, &mut rng);
        let (vals, _) = symmetric_eigen(&m).unwrap();
        let oracle: f64 = vals.iter().map(|v| v.ln()).sum();
        let got = logdet_spd(&m).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle.abs().max(1.0));
    }

    #[test]
    fn logdet_eigenvalue_oracle_up_to_32() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in [2, 5, 8, 16, 32] {
            let m = random_spd(n, &mut rng);
            let (vals, _) = symmetric_eigen(&m).unwrap();
            let oracle: f64 = vals.iter().map(|v| v.ln()).sum();
            let got = logdet_spd(&m).unwrap();
            assert!(
                (got - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
                "n={n}: {got} vs {oracle}"
            );
        }
    }

    #[test]
    fn non_spd_is_rejected() {
        let m = DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        match logdet_spd(&m) {
            Err(Error::NotSpd { .. }) => {}
            other => panic!("expected NotSpd, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_is_rejected() {
        let m = DenseMatrix::from_vec(2, 2, vec![1.0, 0.5, 0.0, 1.0]).unwrap();
        match logdet_spd(&m) {
            Err(Error::NotSymmetric { .. }) => {}
            other => panic!("expected NotSymmetric, got {other:?}"),
        }
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let b = random_matrix(3, 2, &mut rng);
        let x = spd_solve(&DenseMatrix::identity(3), &b).unwrap();
        assert!(x.max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn solve_diagonal() {
        let m = DenseMatrix::from_vec(2, 2, vec![2.0, 0.0, 0.0, 4.0]).unwrap();
        let b = DenseMatrix::from_vec(2, 1, vec![2.0, 4.0]).unwrap();
        let x = spd_solve(&m, &b).unwrap();
        assert_abs_diff_eq!(x.get(0, 0), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(x.get(1, 0), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn solve_residual_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_spd(5, &mut rng);
        let b = random_matrix(5, 3, &mut rng);
        let x = spd_solve(&m, &b).unwrap();
        let residual = m.matmul(&x).sub(&b).frobenius_norm();
        assert!(residual <= 1e-8 * b.frobenius_norm());
    }
}
