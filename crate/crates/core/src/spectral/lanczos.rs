//! Lanczos iteration with full reorthogonalisation for both ends of the
//! spectrum of a symmetric operator given only through its action.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{symmetric_eigenpairs, tridiagonal_ql};
use crate::math::{abs, sqrt};
use crate::{Error, Result};

/// Seed of the deterministic start vector.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Relative residual below which rounding dominates the Ritz residual.
pub const RESIDUAL_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Stopping rule and limits of [`lanczos_extremes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// A Ritz pair is accepted once its residual `‖Mx − θx‖` (with
    /// `‖x‖ = 1`) is at most `tol`, or at most [`RESIDUAL_FLOOR`]`·‖M‖` when
    /// that is larger (the attainable level in double precision), where
    /// `‖M‖` is estimated by the largest Ritz value in modulus.
    pub tol: f64,
    /// Largest Krylov dimension (also capped by the operator dimension).
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { tol: 1e-9, max_iterations: 600, seed: DEFAULT_SEED }
    }
}

/// One converged extreme Ritz pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RitzPair {
    pub value: f64,
    /// Explicitly recomputed `‖Mx − θx‖ / ‖x‖`.
    pub residual: f64,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosResult {
    pub min: RitzPair,
    pub max: RitzPair,
    pub iterations: usize,
    /// The Krylov space became invariant before the cap was reached.
    pub invariant: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n)
        .map(|_| (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) - 0.5)
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// Smallest and largest eigenvalue of the symmetric operator `apply`
/// (`y ← M x`) of dimension `n`, from a single Krylov sequence.
pub fn lanczos_extremes<F>(n: usize, mut apply: F, options: &LanczosOptions) -> Result<LanczosResult>
where
    F: FnMut(&[f64], &mut [f64]) -> Result<()>,
{
    if n == 0 {
        return Err(Error::EmptyDomain("operator of dimension 0"));
    }
    let cap = options.max_iterations.min(n).max(1);
    let mut basis: Vec<Vec<f64>> = vec![start_vector(n, options.seed)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut last_residual = f64::INFINITY;
    let invariant = loop {
        let j = alphas.len();
        apply(&basis[j], &mut w)?;
        let alpha = dot(&basis[j], &w);
        for (wi, qi) in w.iter_mut().zip(&basis[j]) {
            *wi -= alpha * qi;
        }
        if j > 0 {
            let beta = betas[j - 1];
            for (wi, qi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= beta * qi;
            }
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= c * qi;
                }
            }
        }
        alphas.push(alpha);
        let beta = norm(&w);
        let m = alphas.len();

        let check = m <= 24 || m.is_multiple_of(8) || m == cap;
        let scale = alphas.iter().map(|a| abs(*a)).fold(1.0, f64::max);
        let breakdown = beta <= 1e-13 * scale || m == n;
        if check || breakdown {
            let mut d = alphas.clone();
            let mut e = betas.clone();
            e.push(0.0);
            let mut last_row = vec![0.0; m];
            last_row[m - 1] = 1.0;
            tridiagonal_ql(&mut d, &mut e, &mut last_row, 1)?;
            let imin = (0..m).min_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
            let imax = (0..m).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
            let ritz_scale = abs(d[imin]).max(abs(d[imax])).max(1.0);
            let residual = if breakdown { 0.0 } else { beta * abs(last_row[imin]).max(abs(last_row[imax])) };
            last_residual = residual;
            if breakdown || residual <= options.tol.max(RESIDUAL_FLOOR * ritz_scale) {
                break breakdown;
            }
        }
        if m == cap {
            return Err(Error::NotConverged { iterations: m, residual: last_residual });
        }
        betas.push(beta);
        basis.push(w.iter().map(|x| x / beta).collect());
    };

    // full eigenvectors of the final tridiagonal for the two Ritz vectors
    let m = alphas.len();
    let mut t = vec![0.0; m * m];
    for i in 0..m {
        t[i * m + i] = alphas[i];
        if i + 1 < m {
            t[i * m + i + 1] = betas[i];
            t[(i + 1) * m + i] = betas[i];
        }
    }
    let (values, vectors) = symmetric_eigenpairs(&t, m)?;
    let mut pair = |k: usize| -> Result<RitzPair> {
        let mut x = vec![0.0; n];
        for (i, q) in basis.iter().enumerate().take(m) {
            let s = vectors[i * m + k];
            for (xi, qi) in x.iter_mut().zip(q) {
                *xi += s * qi;
            }
        }
        let len = norm(&x);
        x.iter_mut().for_each(|v| *v /= len);
        let theta = values[k];
        let mut y = vec![0.0; n];
        apply(&x, &mut y)?;
        let r: f64 = sqrt(y.iter().zip(&x).map(|(a, b)| (a - theta * b) * (a - theta * b)).sum());
        Ok(RitzPair { value: theta, residual: r, vector: x })
    };
    let min = pair(0)?;
    let max = pair(m - 1)?;
    Ok(LanczosResult { min, max, iterations: m, invariant })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag_apply(n: usize) -> impl FnMut(&[f64], &mut [f64]) -> Result<()> {
        move |x, y| {
            for i in 0..n {
                let mut v = 2.0 * x[i];
                if i > 0 {
                    v -= x[i - 1];
                }
                if i + 1 < n {
                    v -= x[i + 1];
                }
                y[i] = v;
            }
            Ok(())
        }
    }

    #[test]
    fn dirichlet_path_extremes() {
        let n = 200;
        let r = lanczos_extremes(n, tridiag_apply(n), &LanczosOptions::default()).unwrap();
        let h = core::f64::consts::PI / (n as f64 + 1.0);
        assert!((r.min.value - (2.0 - 2.0 * h.cos())).abs() < 1e-9);
        assert!((r.max.value - (2.0 + 2.0 * h.cos())).abs() < 1e-9);
        assert!(r.min.residual < 1e-8 && r.max.residual < 1e-8);
    }

    #[test]
    fn invariant_subspace_stops_early() {
        // diagonal operator with three distinct values: Krylov dimension 3
        let n = 30;
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..x.len() {
                y[i] = (i % 3) as f64 * x[i];
            }
            Ok(())
        };
        let r = lanczos_extremes(n, apply, &LanczosOptions::default()).unwrap();
        assert!(r.invariant);
        assert_eq!(r.iterations, 3);
        assert!(r.min.value.abs() < 1e-12 && (r.max.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let a = lanczos_extremes(50, tridiag_apply(50), &LanczosOptions::default()).unwrap();
        let b = lanczos_extremes(50, tridiag_apply(50), &LanczosOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reports_non_convergence() {
        let options = LanczosOptions { max_iterations: 5, ..Default::default() };
        let err = lanczos_extremes(400, tridiag_apply(400), &options).unwrap_err();
        assert!(matches!(err, Error::NotConverged { iterations: 5, .. }));
    }
}
