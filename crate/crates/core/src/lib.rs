//! Joint manifold linearizing and clustering.
//!
//! Learns a unit-sphere feature representation and a doubly stochastic
//! point-point membership at the same time by maximizing coding-rate
//! reduction. Features come from a small fully connected head, memberships
//! from a Gram similarity pushed through an entropic doubly stochastic
//! projection, and the final clustering from a spectral readout of the
//! learned membership.

pub mod datagen;
pub mod error;
pub mod evalmetrics;
pub mod model;
pub mod numerics;
pub mod pipeline;
pub mod rates;
pub mod rng;
pub mod transport;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod test_util {
    use crate::numerics::DenseMatrix;
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// Random matrix with i.i.d. standard normal entries.
    pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
    }

    /// Random symmetric positive-definite matrix `B B^T + 0.5 I`.
    pub fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        let b = random_matrix(n, n, rng);
        let mut m = b.gram_left();
        for i in 0..n {
            m.add_assign_at(i, i, 0.5);
        }
        m
    }

    /// Random matrix with unit-norm columns.
    pub fn random_unit_columns(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        let m = random_matrix(rows, cols, rng);
        crate::numerics::sphere_project_columns(&m, crate::numerics::SPHERE_FLOOR)
    }

    /// Random orthogonal matrix from Gram-Schmidt on a Gaussian draw.
    pub fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        loop {
            let a = random_matrix(n, n, rng);
            let mut q = DenseMatrix::zeros(n, n);
            let mut ok = true;
            for j in 0..n {
                let mut col = a.col(j);
                for prev in 0..j {
                    let p = q.col(prev);
                    let proj = crate::numerics::vec_dot(&col, &p);
                    for (c, pv) in col.iter_mut().zip(p.iter()) {
                        *c -= proj * pv;
                    }
                }
                let nrm = crate::numerics::vec_norm(&col);
                if nrm < 1e-8 {
                    ok = false;
                    break;
                }
                for c in col.iter_mut() {
                    *c /= nrm;
                }
                q.set_col(j, &col);
            }
            if ok {
                return q;
            }
        }
    }

    /// Max-norm relative deviation between an analytic gradient and a
    /// finite-difference estimate.
    pub fn grad_rel_err(analytic: &DenseMatrix, fd: &DenseMatrix) -> f64 {
        let scale = analytic.max_abs().max(fd.max_abs()).max(1e-10);
        analytic.max_abs_diff(fd) / scale
    }
}
