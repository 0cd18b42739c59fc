//! Gram similarity and entropic projection onto the doubly stochastic set,
//! with reverse-mode differentiation through the unrolled projection.

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

/// Marginal tolerance accepted when validating a membership matrix.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

/// Doubly stochastic membership: nonnegative with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    gamma: DenseMatrix,
}

impl MembershipMatrix {
    /// Validates nonnegativity and both marginals within `MEMBERSHIP_TOL`.
    pub fn new(gamma: DenseMatrix) -> Result<Self> {
        if gamma.rows() != gamma.cols() {
            return Err(Error::dim(format!(
                "membership must be square, got {}x{}",
                gamma.rows(),
                gamma.cols()
            )));
        }
        if let Some(v) = gamma.as_slice().iter().find(|v| **v < -1e-12) {
            return Err(Error::NotDoublyStochastic { deviation: -v });
        }
        let dev = marginal_deviation(&gamma);
        if dev > MEMBERSHIP_TOL {
            return Err(Error::NotDoublyStochastic { deviation: dev });
        }
        Ok(MembershipMatrix { gamma })
    }

    /// Wraps a matrix produced by the projection itself, whose marginals are
    /// only guaranteed up to the convergence report of that call.
    pub(crate) fn from_projection(gamma: DenseMatrix) -> Self {
        MembershipMatrix { gamma }
    }

    pub fn n(&self) -> usize {
        self.gamma.rows()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.gamma
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.gamma
    }

    /// Uniform membership `(1/n) 1 1^T`.
    pub fn uniform(n: usize) -> Self {
        let v = 1.0 / n as f64;
        MembershipMatrix { gamma: DenseMatrix::from_fn(n, n, |_, _| v) }
    }

    /// Entropy `-sum Gamma_ij log Gamma_ij` with `0 log 0 = 0`.
    pub fn entropy(&self) -> f64 {
        self.gamma
            .as_slice()
            .iter()
            .filter(|&&g| g > 0.0)
            .map(|&g| -g * g.ln())
            .sum()
    }
}

/// Largest deviation of any row or column sum from 1.
pub fn marginal_deviation(gamma: &DenseMatrix) -> f64 {
    let mut dev = 0.0_f64;
    for s in gamma.row_sums() {
        dev = dev.max((s - 1.0).abs());
    }
    for s in gamma.col_sums() {
        dev = dev.max((s - 1.0).abs());
    }
    dev
}

/// Settings for the entropic projection.
#[derive(Debug, Clone)]
pub struct SinkhornConfig {
    /// Entropy coefficient; larger values bias the output toward uniform.
    pub eta: f64,
    pub max_iters: usize,
    /// Stop once the largest marginal deviation falls below this.
    pub tol: f64,
}

impl Default for SinkhornConfig {
    fn default() -> Self {
        SinkhornConfig { eta: 0.175, max_iters: 200, tol: 1e-6 }
    }
}

impl SinkhornConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) {
            return Err(Error::InvalidConfig(format!("eta must be positive, got {}", self.eta)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".to_string()));
        }
        Ok(())
    }
}

/// Inner-product similarity `C^T C`, computed once and mirrored so the
/// result is exactly symmetric.
pub fn gram_similarity(c: &DenseMatrix) -> DenseMatrix {
    let n = c.cols();
    let mut s = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..c.rows() {
                acc += c.get(k, i) * c.get(k, j);
            }
            s.set(i, j, acc);
            s.set(j, i, acc);
        }
    }
    s
}

/// Everything the backward pass needs to replay the forward iterations:
/// the scaled similarity and the scaling vectors after every half step.
#[derive(Debug, Clone)]
pub struct SinkhornTrace {
    /// `S / eta`.
    a: DenseMatrix,
    eta: f64,
    /// `u` after the row step of iteration t (t = 1..=iters).
    us: Vec<Vec<f64>>,
    /// `v` after the column step of iteration t, with `vs[0]` the all-zero start.
    vs: Vec<Vec<f64>>,
}

/// Result of one projection call.
#[derive(Debug, Clone)]
pub struct SinkhornOutput {
    pub gamma: MembershipMatrix,
    pub iters: usize,
    /// False when `max_iters` was reached before the marginal tolerance.
    pub converged: bool,
    /// Largest marginal deviation of the returned matrix.
    pub marginal_err: f64,
    pub trace: SinkhornTrace,
}

// The kernel exp(S/eta) is cached in plain form whenever its log-range is
// modest, which covers unit-Gram similarities at any practical eta; the
// scaling vectors always live in log space. Beyond the threshold every
// log-sum-exp is max-shifted instead, so scalings cannot overflow for any
// eta, merely slower.
const PLAIN_KERNEL_LIMIT: f64 = 200.0;

fn lse_shifted(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = terms.map(|t| (t - m).exp()).sum();
    m + s.ln()
}

/// Entropic projection of a similarity matrix onto the doubly stochastic set.
///
/// Alternates log-domain row and column normalizations of `exp(S/eta)` until
/// the largest marginal deviation drops below `cfg.tol` or `cfg.max_iters`
/// full iterations have run. Every iteration ends with the column step, so
/// column sums of the output are exact to round-off even when unconverged;
/// non-convergence is reported, not raised.
pub fn sinkhorn_project(s: &DenseMatrix, cfg: &SinkhornConfig) -> Result<SinkhornOutput> {
    cfg.validate()?;
    if s.rows() != s.cols() {
        return Err(Error::dim(format!("similarity must be square, got {}x{}", s.rows(), s.cols())));
    }
    if !s.is_finite() {
        return Err(Error::dim("similarity must be finite".to_string()));
    }
    let n = s.rows();
    let a = s.scale(1.0 / cfg.eta);
    let plain = a.max_abs() <= PLAIN_KERNEL_LIMIT;
    let kernel = if plain {
        let mut k = a.clone();
        for v in k.as_mut_slice() {
            *v = v.exp();
        }
        Some(k)
    } else {
        None
    };

    let mut u = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut us: Vec<Vec<f64>> = Vec::new();
    let mut vs: Vec<Vec<f64>> = vec![v.clone()];
    let mut converged = false;
    let mut iters = 0;

    while iters < cfg.max_iters {
        // Row step: u_i = -log sum_j exp(a_ij + v_j).
        if let Some(k) = &kernel {
            let ev: Vec<f64> = v.iter().map(|x| x.exp()).collect();
            for i in 0..n {
                let row = k.row(i);
                let mut acc = 0.0;
                for (kij, evj) in row.iter().zip(ev.iter()) {
                    acc += kij * evj;
                }
                u[i] = -acc.ln();
            }
        } else {
            for i in 0..n {
                let ai = a.row(i).to_vec();
                u[i] = -lse_shifted(ai.iter().zip(v.iter()).map(|(x, y)| x + y));
            }
        }
        us.push(u.clone());

        // Column step: v_j = -log sum_i exp(a_ij + u_i).
        if let Some(k) = &kernel {
            let eu: Vec<f64> = u.iter().map(|x| x.exp()).collect();
            for (j, vj) in v.iter_mut().enumerate() {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += k.get(i, j) * eu[i];
                }
                *vj = -acc.ln();
            }
        } else {
            for j in 0..n {
                let col: Vec<f64> = (0..n).map(|i| a.get(i, j) + u[i]).collect();
                v[j] = -lse_shifted(col.iter().copied());
            }
        }
        vs.push(v.clone());
        iters += 1;

        // Column sums are exact after the column step; only rows can drift.
        let mut dev = 0.0_f64;
        if let Some(k) = &kernel {
            let ev: Vec<f64> = v.iter().map(|x| x.exp()).collect();
            for i in 0..n {
                let row = k.row(i);
                let mut acc = 0.0;
                for (kij, evj) in row.iter().zip(ev.iter()) {
                    acc += kij * evj;
                }
                dev = dev.max((u[i].exp() * acc - 1.0).abs());
            }
        } else {
            for i in 0..n {
                let r = lse_shifted((0..n).map(|j| a.get(i, j) + v[j]).collect::<Vec<_>>().iter().copied());
                dev = dev.max(((u[i] + r).exp() - 1.0).abs());
            }
        }
        if dev < cfg.tol {
            converged = true;
            break;
        }
    }

    let mut gamma = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gamma.set(i, j, (a.get(i, j) + u[i] + v[j]).exp());
        }
    }
    let marginal_err = marginal_deviation(&gamma);
    Ok(SinkhornOutput {
        gamma: MembershipMatrix::from_projection(gamma),
        iters,
        converged,
        marginal_err,
        trace: SinkhornTrace { a, eta: cfg.eta, us, vs },
    })
}

/// Vector-Jacobian product of the projection: maps a gradient with respect
/// to the output membership back to a gradient with respect to the input
/// similarity, by reverse-mode differentiation through exactly the
/// iterations the forward call executed.
pub fn sinkhorn_vjp(trace: &SinkhornTrace, upstream: &DenseMatrix) -> Result<DenseMatrix> {
    let n = trace.a.rows();
    if upstream.rows() != n || upstream.cols() != n {
        return Err(Error::TraceMismatch {
            context: format!("upstream is {}x{}, trace is for n={}", upstream.rows(), upstream.cols(), n),
        });
    }
    let iters = trace.us.len();
    let a = &trace.a;

    let mut grad_a = DenseMatrix::zeros(n, n);
    let mut gu = vec![0.0; n];
    let mut gv = vec![0.0; n];

    // Output layer: Gamma_ij = exp(a_ij + u_i + v_j) with the final scalings.
    {
        let u = &trace.us[iters - 1];
        let v = &trace.vs[iters];
        for i in 0..n {
            for j in 0..n {
                let g = upstream.get(i, j) * (a.get(i, j) + u[i] + v[j]).exp();
                grad_a.add_assign_at(i, j, g);
                gu[i] += g;
                gv[j] += g;
            }
        }
    }

    for t in (0..iters).rev() {
        let u = &trace.us[t]; // u after row step t+1
        let v_cur = &trace.vs[t + 1]; // v after column step t+1
        let v_prev = &trace.vs[t]; // v entering row step t+1

        // Column step: v_j = -log sum_i exp(a_ij + u_i).
        // d v_j / d a_ij = d v_j / d u_i = -q_ij with q column-stochastic.
        for j in 0..n {
            let g = gv[j];
            if g == 0.0 {
                continue;
            }
            for i in 0..n {
                let q = (a.get(i, j) + u[i] + v_cur[j]).exp();
                grad_a.add_assign_at(i, j, -g * q);
                gu[i] -= g * q;
            }
        }
        gv.iter_mut().for_each(|x| *x = 0.0);

        // Row step: u_i = -log sum_j exp(a_ij + v_prev_j).
        // d u_i / d a_ij = d u_i / d v_prev_j = -p_ij with p row-stochastic.
        for i in 0..n {
            let g = gu[i];
            if g == 0.0 {
                continue;
            }
            for j in 0..n {
                let p = (a.get(i, j) + u[i] + v_prev[j]).exp();
                grad_a.add_assign_at(i, j, -g * p);
                gv[j] -= g * p;
            }
        }
        gu.iter_mut().for_each(|x| *x = 0.0);
        // gv now holds the gradient wrt v entering this iteration; for t = 0
        // that is the constant zero start and is dropped after the loop.
    }

    Ok(grad_a.scale(1.0 / trace.eta))
}
