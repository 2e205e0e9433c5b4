//! Hermitian Lanczos with full reorthogonalization.
//!
//! The operator spectrum of a grid Hamiltonian spans [λ0, a(k_max)], several
//! decades wider than the bound-state scale at the bottom, so convergence to
//! the lowest Ritz pairs is driven by the spectral content of the start
//! vector. Callers pass a low-pass-filtered random start for H (see
//! `eigen::lowest_eigenpairs`); correctness never depends on the filter since
//! residuals are measured explicitly.

use super::tridiag::tridiag_eigen;
use crate::error::Error;
use crate::util::par;
use num_complex::Complex64;

pub trait LinearOp: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>, Error>;
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    pub max_iter: usize,
    /// Residual tolerance on the wanted Ritz pairs.
    pub tol: f64,
    /// How many extreme pairs must converge.
    pub want: usize,
    /// Which end of the spectrum.
    pub largest: bool,
    /// Check convergence every this many steps.
    pub check_every: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { max_iter: 300, tol: 1e-10, want: 1, largest: false, check_every: 10 }
    }
}

#[derive(Debug)]
pub struct LanczosOutcome {
    /// The `want` extreme Ritz values, sorted ascending for smallest /
    /// descending for largest.
    pub values: Vec<f64>,
    /// Matching Ritz vectors (unit ℓ² norm).
    pub vectors: Vec<Vec<Complex64>>,
    /// Explicit residuals ‖Ax - θx‖ / ‖x‖.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// w -= Σ_u <u, w> u over the stored basis, coefficients computed in one
/// parallel pass. Two sweeps keep orthogonality at working precision.
fn reorthogonalize(basis: &[Vec<Complex64>], w: &mut [Complex64]) {
    for _ in 0..2 {
        let coeffs = par::map_batch(basis, |u| dot(u, w));
        for (u, c) in basis.iter().zip(&coeffs) {
            if c.norm() > 0.0 {
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= c * ui;
                }
            }
        }
    }
}

pub fn lanczos(
    op: &dyn LinearOp,
    start: &[Complex64],
    opts: &LanczosOptions,
) -> Result<LanczosOutcome, Error> {
    let n = op.dim();
    assert_eq!(start.len(), n);
    let nrm = norm(start);
    if nrm == 0.0 {
        return Err(Error::domain("lanczos", "zero start vector"));
    }

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut v: Vec<Complex64> = start.iter().map(|z| z / nrm).collect();
    let mut v_prev: Vec<Complex64> = vec![Complex64::default(); n];
    let mut beta_prev = 0.0;

    let max_iter = opts.max_iter.min(n);
    for j in 0..max_iter {
        basis.push(v.clone());
        let mut w = op.apply(&v)?;
        let alpha = dot(&v, &w).re;
        alphas.push(alpha);
        for ((wi, vi), pi) in w.iter_mut().zip(&v).zip(&v_prev) {
            *wi -= alpha * vi + beta_prev * pi;
        }
        reorthogonalize(&basis, &mut w);
        let beta = norm(&w);
        // Invariant subspace reached: the Krylov space is exact.
        if beta <= 1e-14 * alpha.abs().max(1.0) {
            break;
        }
        betas.push(beta);
        v_prev = std::mem::replace(&mut v, w.iter().map(|z| z / beta).collect());
        beta_prev = beta;

        let last = j + 1 == max_iter;
        if last || (j + 1) % opts.check_every == 0 {
            let m = alphas.len();
            let (vals, vecs) = tridiag_eigen(&alphas, &betas[..m - 1])?;
            if ritz_converged(&vals, &vecs, beta, opts) {
                return finish(op, &basis, &vals, &vecs, opts, m);
            }
        }
    }
    let m = alphas.len();
    let (vals, vecs) = tridiag_eigen(&alphas, &betas[..m.saturating_sub(1)])?;
    finish(op, &basis, &vals, &vecs, opts, m)
}

/// Cheap convergence estimate: |β_m · (last component of the Ritz vector)|.
fn ritz_converged(vals: &[f64], vecs: &[Vec<f64>], beta: f64, opts: &LanczosOptions) -> bool {
    let m = vals.len();
    if m < opts.want {
        return false;
    }
    let idx: Vec<usize> =
        if opts.largest { (m - opts.want..m).collect() } else { (0..opts.want).collect() };
    idx.iter().all(|&i| (beta * vecs[i][m - 1]).abs() <= 0.1 * opts.tol)
}

fn finish(
    op: &dyn LinearOp,
    basis: &[Vec<Complex64>],
    vals: &[f64],
    vecs: &[Vec<f64>],
    opts: &LanczosOptions,
    iterations: usize,
) -> Result<LanczosOutcome, Error> {
    let n = op.dim();
    let m = vals.len();
    let want = opts.want.min(m);
    let idx: Vec<usize> = if opts.largest {
        (0..m).rev().take(want).collect()
    } else {
        (0..m).take(want).collect()
    };
    let mut values = Vec::with_capacity(want);
    let mut vectors = Vec::with_capacity(want);
    let mut residuals = Vec::with_capacity(want);
    for &i in &idx {
        // Ritz vector x = Σ_j s_j v_j.
        let mut x = vec![Complex64::default(); n];
        for (j, b) in basis.iter().enumerate() {
            let s = vecs[i][j];
            if s != 0.0 {
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += s * bi;
                }
            }
        }
        let xn = norm(&x);
        for xi in x.iter_mut() {
            *xi /= xn;
        }
        let ax = op.apply(&x)?;
        let resid =
            norm(&ax.iter().zip(&x).map(|(a, b)| a - vals[i] * b).collect::<Vec<_>>());
        values.push(vals[i]);
        vectors.push(x);
        residuals.push(resid);
    }
    // Residuals are absolute; convergence is judged against the operator
    // scale seen by the Krylov space (the operator norm may span decades).
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let converged = residuals.iter().all(|&r| r <= opts.tol * scale);
    Ok(LanczosOutcome { values, vectors, residuals, iterations, converged })
}
