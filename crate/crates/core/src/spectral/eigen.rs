//! Second eigenvalue of the lazy walk via its symmetric conjugate
//! `S = D^{1/2} P D^{-1/2}`, which shares the spectrum of `P` and lives in
//! `[0, 1]`. Small operators go through a dense symmetric eigensolver;
//! large ones through Lanczos with full reorthogonalization and exact
//! deflation of the known top eigenvector `sqrt(d_i)`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WalkMatrix;
use crate::error::{Error, Result};

/// Default absolute accuracy for eigenvalue computations.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

const DENSE_LIMIT: usize = 400;
const MAX_APPLIES: usize = 1_000_000;
const BASIS_LIMIT: usize = 80;
const LANCZOS_SEED: u64 = 0x5eed_1a2c;

fn check_eigen_inputs(w: &WalkMatrix, tol: f64) -> Result<()> {
    if w.n() < 2 {
        return Err(Error::invalid(
            "second eigenvalue needs at least two vertices",
        ));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

/// Second-largest eigenvalue of the walk, to absolute accuracy `tol`.
/// Dispatches on size between the dense and the iterative solver.
pub fn second_eigenvalue(w: &WalkMatrix, tol: f64) -> Result<f64> {
    check_eigen_inputs(w, tol)?;
    if w.n() <= DENSE_LIMIT {
        second_eigenvalue_dense(w)
    } else {
        second_eigenvalue_iterative(w, tol)
    }
}

/// Dense-solver path, exact to machine precision. Quadratic memory.
pub fn second_eigenvalue_dense(w: &WalkMatrix) -> Result<f64> {
    check_eigen_inputs(w, 1.0)?;
    let g = w.graph();
    let n = g.n();
    let mut s = DMatrix::<f64>::zeros(n, n);
    let inv_sqrt: Vec<f64> = (0..n).map(|i| 1.0 / (g.degree(i) as f64).sqrt()).collect();
    for i in 0..n {
        s[(i, i)] = 0.5;
        for &j in g.neighbors(i) {
            s[(i, j)] = 0.5 * inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let mut eigs: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    eigs.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(eigs[1])
}

struct SymOperator<'w> {
    w: &'w WalkMatrix<'w>,
    inv_sqrt: Vec<f64>,
    applies: usize,
}

impl<'w> SymOperator<'w> {
    fn new(w: &'w WalkMatrix<'w>) -> Self {
        let g = w.graph();
        let inv_sqrt = (0..g.n())
            .map(|i| 1.0 / (g.degree(i) as f64).sqrt())
            .collect();
        Self {
            w,
            inv_sqrt,
            applies: 0,
        }
    }

    fn apply(&mut self, x: &[f64], out: &mut [f64]) {
        self.applies += 1;
        let g = self.w.graph();
        for i in 0..x.len() {
            let mut acc = 0.0;
            for &j in g.neighbors(i) {
                acc += x[j] * self.inv_sqrt[j];
            }
            out[i] = 0.5 * x[i] + 0.5 * self.inv_sqrt[i] * acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn scale(x: &mut [f64], s: f64) {
    for v in x.iter_mut() {
        *v *= s;
    }
}

/// Remove the components of `x` along `v1` and every basis vector.
fn orthogonalize(x: &mut [f64], v1: &[f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        let c = dot(x, v1);
        axpy(x, -c, v1);
        for q in basis {
            let c = dot(x, q);
            axpy(x, -c, q);
        }
    }
}

/// Largest eigenvalue and eigenvector of a symmetric tridiagonal matrix
/// given by `diag` and `off` (the latter one shorter).
fn top_ritz(diag: &[f64], off: &[f64]) -> (f64, Vec<f64>) {
    let m = diag.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = diag[i];
        if i + 1 < m {
            t[(i, i + 1)] = off[i];
            t[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut best = 0;
    for k in 1..m {
        if eig.eigenvalues[k] > eig.eigenvalues[best] {
            best = k;
        }
    }
    let vec = eig.eigenvectors.column(best).iter().copied().collect();
    (eig.eigenvalues[best], vec)
}

/// Lanczos path: works on the operator restricted to the orthogonal
/// complement of the top eigenvector, so its largest eigenvalue is mu2.
pub fn second_eigenvalue_iterative(w: &WalkMatrix, tol: f64) -> Result<f64> {
    check_eigen_inputs(w, tol)?;
    let g = w.graph();
    let n = g.n();
    let mut op = SymOperator::new(w);

    let mut v1: Vec<f64> = (0..n).map(|i| (g.degree(i) as f64).sqrt()).collect();
    let inv = 1.0 / norm(&v1);
    scale(&mut v1, inv);

    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    orthogonalize(&mut q, &v1, &[]);
    let qn = norm(&q);
    scale(&mut q, 1.0 / qn);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(BASIS_LIMIT);
    let mut diag: Vec<f64> = Vec::with_capacity(BASIS_LIMIT);
    let mut off: Vec<f64> = Vec::with_capacity(BASIS_LIMIT);
    let mut work = vec![0.0; n];
    let mut last_residual = f64::INFINITY;

    loop {
        if op.applies >= MAX_APPLIES {
            return Err(Error::ConvergenceFailure {
                residual: last_residual,
                applies: op.applies,
            });
        }
        op.apply(&q, &mut work);
        basis.push(q.clone());
        let alpha = dot(&q, &work);
        diag.push(alpha);
        orthogonalize(&mut work, &v1, &basis);
        let beta = norm(&work);

        let (theta, y) = top_ritz(&diag, &off);
        let residual = (beta * y[y.len() - 1]).abs();
        last_residual = residual;
        if residual <= tol {
            return Ok(theta.clamp(0.0, 1.0));
        }
        if beta < 1e-14 {
            // The Krylov subspace is exhausted; theta is exact within it.
            return Ok(theta.clamp(0.0, 1.0));
        }

        if basis.len() == BASIS_LIMIT {
            // Restart from the best Ritz vector.
            let mut restart = vec![0.0; n];
            for (coef, qv) in y.iter().zip(&basis) {
                axpy(&mut restart, *coef, qv);
            }
            orthogonalize(&mut restart, &v1, &[]);
            let rn = norm(&restart);
            if rn < 1e-14 {
                return Err(Error::ConvergenceFailure {
                    residual,
                    applies: op.applies,
                });
            }
            scale(&mut restart, 1.0 / rn);
            q = restart;
            basis.clear();
            diag.clear();
            off.clear();
            continue;
        }

        off.push(beta);
        q = work.clone();
        scale(&mut q, 1.0 / beta);
    }
}

/// Spectral gap `1 - mu2` at the default tolerance.
pub fn spectral_gap(w: &WalkMatrix) -> Result<f64> {
    Ok(1.0 - second_eigenvalue(w, DEFAULT_EIGEN_TOL)?)
}

/// Mixing-time bracket from the second eigenvalue:
/// `lower = mu2 ln(1/(2 eps)) / (2 (1 - mu2))`,
/// `upper = (ln n - ln eps) / (1 - mu2)`.
pub fn sinclair_bounds(mu2: f64, n: usize, eps: f64) -> Result<(f64, f64)> {
    if !(0.0..1.0).contains(&mu2) {
        return Err(Error::invalid(format!(
            "mu2 {mu2} must lie in [0, 1) for the bounds to be finite"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    if !eps.is_finite() || eps <= 0.0 || eps >= 1.0 {
        return Err(Error::invalid(format!("eps {eps} must lie in (0, 1)")));
    }
    let gap = 1.0 - mu2;
    let lower = mu2 * (1.0 / (2.0 * eps)).ln() / (2.0 * gap);
    let upper = ((n as f64).ln() - eps.ln()) / gap;
    Ok((lower, upper))
}
