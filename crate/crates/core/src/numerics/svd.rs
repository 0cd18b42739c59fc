//! Singular values via one-sided Jacobi orthogonalization.

use crate::error::{Error, Result};
use crate::numerics::matrix::vec_norm;
use crate::numerics::DenseMatrix;

const MAX_SWEEPS: usize = 60;

/// Singular values in descending order; `min(rows, cols)` of them.
///
/// One-sided Jacobi rotations orthogonalize the columns of the tall
/// orientation of `w`; column norms are then the singular values. This route
/// never forms the Gram matrix, so it can serve alongside Gram-eigenvalue
/// cross-checks.
pub fn singular_values(w: &DenseMatrix) -> Result<Vec<f64>> {
    if !w.is_finite() {
        return Err(Error::dim("singular_values requires finite entries".to_string()));
    }
    // Work on the tall orientation so we orthogonalize min(rows, cols) columns.
    let mut a = if w.rows() >= w.cols() { w.clone() } else { w.transpose() };
    let m = a.rows();
    let n = a.cols();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let x = a.get(i, p);
                    let y = a.get(i, q);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= 1e-15 * (app * aqq).sqrt() || apq == 0.0 {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..m {
                    let x = a.get(i, p);
                    let y = a.get(i, q);
                    a.set(i, p, c * x - s * y);
                    a.set(i, q, s * x + c * y);
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure { what: "one-sided Jacobi SVD", sweeps: MAX_SWEEPS });
    }

    let mut sigma: Vec<f64> = (0..n).map(|j| vec_norm(&a.col(j))).collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(sigma)
}
