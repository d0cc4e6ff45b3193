//! Dense symmetric eigensolver: Householder tridiagonalisation followed by
//! the implicit QL iteration with Wilkinson-type shifts.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, sqrt};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 60;

fn hypot(a: f64, b: f64) -> f64 {
    let (a, b) = (abs(a), abs(b));
    if a > b {
        a * sqrt(1.0 + (b / a) * (b / a))
    } else if b > 0.0 {
        b * sqrt(1.0 + (a / b) * (a / b))
    } else {
        0.0
    }
}

/// Reduce the symmetric row-major `a` (`n×n`, overwritten) to tridiagonal
/// form by Householder reflections `H_k = I − β v vᵀ`.
///
/// Returns the diagonal `d`, the couplings `e` (`e[i]` between rows `i` and
/// `i+1`) and, with `vectors` set, `Qᵀ` row-major, where `A = Q T Qᵀ`. All
/// loops run along rows.
fn tridiagonalize(a: &mut [f64], n: usize, vectors: bool) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0; n];
    let mut reflectors: Vec<(usize, f64, Vec<f64>)> = Vec::new();
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let mut v: Vec<f64> = a[k * n + lo..k * n + n].to_vec();
        let tail: f64 = v[1..].iter().map(|x| x * x).sum();
        if tail == 0.0 {
            e[k] = v[0];
            continue;
        }
        let norm = sqrt(v[0] * v[0] + tail);
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let beta = 2.0 / (v[0] * v[0] + tail);
        e[k] = alpha;
        // p = β A₂₂ v, w = p − (β/2)(pᵀv) v, A₂₂ ← A₂₂ − v wᵀ − w vᵀ
        let m = n - lo;
        for (i, pi) in p[..m].iter_mut().enumerate() {
            let row = &a[(lo + i) * n + lo..(lo + i) * n + n];
            *pi = beta * row.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        }
        let half = 0.5 * beta * p[..m].iter().zip(&v).map(|(x, y)| x * y).sum::<f64>();
        for (pi, vi) in p[..m].iter_mut().zip(&v) {
            *pi -= half * vi;
        }
        for i in 0..m {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(lo + i) * n + lo..(lo + i) * n + n];
            for ((x, &vj), &wj) in row.iter_mut().zip(&v).zip(&p[..m]) {
                *x -= vi * wj + wi * vj;
            }
        }
        if vectors {
            reflectors.push((lo, beta, v));
        }
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    let d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut qt = Vec::new();
    if vectors {
        // Qᵀ = H_{n−3} ⋯ H_0, built by left multiplications
        qt = vec![0.0; n * n];
        for i in 0..n {
            qt[i * n + i] = 1.0;
        }
        let mut u = vec![0.0; n];
        for (lo, beta, v) in &reflectors {
            u.iter_mut().for_each(|x| *x = 0.0);
            for (r, &vr) in v.iter().enumerate() {
                let row = &qt[(lo + r) * n..(lo + r + 1) * n];
                for (x, y) in u.iter_mut().zip(row) {
                    *x += vr * y;
                }
            }
            for (r, &vr) in v.iter().enumerate() {
                let row = &mut qt[(lo + r) * n..(lo + r + 1) * n];
                for (x, y) in row.iter_mut().zip(&u) {
                    *x -= beta * vr * y;
                }
            }
        }
    }
    (d, e, qt)
}

/// Implicit QL on the tridiagonal `(d, e)`, `e[i]` coupling `i` and `i+1`.
///
/// `z` holds `rows` tracked rows of the accumulated rotation, stored column
/// by column (`z[j·rows + r]` is row `r`, column `j`): pass the identity for
/// full eigenvectors, or only selected rows (for instance the last one) to
/// obtain those eigenvector components in `O(n·rows)` per sweep. On return
/// column `j` belongs to `d[j]`. Eigenvalues are left unsorted in `d`.
pub fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64], rows: usize) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    // couplings below ε‖T‖ are dropped as well: a backward-stable
    // perturbation that keeps long chases through clustered eigenvalues
    // from stalling on rounding noise
    let floor = f64::EPSILON * (0..n).map(|i| abs(d[i]) + 2.0 * abs(e[i])).fold(0.0, f64::max);
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = abs(d[m]) + abs(d[m + 1]);
                if abs(e[m]) <= f64::EPSILON * dd || abs(e[m]) <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NotConverged { iterations: sweeps, residual: abs(e[l]) });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { abs(r) } else { -abs(r) });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m as isize - 1;
            let mut deflated = false;
            while i >= l as isize {
                let iu = i as usize;
                let f = s * e[iu];
                let b = c * e[iu];
                r = hypot(f, g);
                e[iu + 1] = r;
                if r == 0.0 {
                    d[iu + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[iu + 1] - p;
                r = (d[iu] - g) * s + 2.0 * c * b;
                p = s * r;
                d[iu + 1] = g + p;
                g = c * r - b;
                let (left, right) = z.split_at_mut((iu + 1) * rows);
                let here = &mut left[iu * rows..];
                for (x, y) in here.iter_mut().zip(&mut right[..rows]) {
                    let f = *y;
                    *y = s * *x + c * f;
                    *x = c * *x - s * f;
                }
                i -= 1;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Ascending eigenvalues of the symmetric row-major `a` (`n×n`).
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Result<Vec<f64>> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: a.len() });
    }
    let mut z = a.to_vec();
    let (mut d, mut e, _) = tridiagonalize(&mut z, n, false);
    tridiagonal_ql(&mut d, &mut e, &mut [], 0)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Ascending eigenvalues with orthonormal eigenvectors; vector `k` is
/// column `k` of the returned row-major matrix.
pub fn symmetric_eigenpairs(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if a.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, got: a.len() });
    }
    let mut work = a.to_vec();
    let (mut d, mut e, mut q) = tridiagonalize(&mut work, n, true);
    // Qᵀ row-major is Q stored column by column; the rotations turn Q into
    // the eigenvector matrix Q·Z, column j belonging to d[j]
    tridiagonal_ql(&mut d, &mut e, &mut q, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = q[k * n + i];
        }
    }
    Ok((values, vectors))
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples `i` and `i+1`), ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..off.len().min(n)].copy_from_slice(&off[..off.len().min(n)]);
    tridiagonal_ql(&mut d, &mut e, &mut [], 0)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_residual(a: &[f64], n: usize, lambda: f64, x: &[f64]) -> f64 {
        (0..n)
            .map(|i| {
                let r: f64 = (0..n).map(|j| a[i * n + j] * x[j]).sum::<f64>() - lambda * x[i];
                r * r
            })
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn small_known_spectra() {
        let a = [2.0, -1.0, -1.0, 1.0];
        let ev = symmetric_eigenvalues(&a, 2).unwrap();
        let s5 = 5f64.sqrt();
        assert!((ev[0] - (3.0 - s5) / 2.0).abs() < 1e-15);
        assert!((ev[1] - (3.0 + s5) / 2.0).abs() < 1e-15);
        assert_eq!(symmetric_eigenvalues(&[4.0], 1).unwrap(), [4.0]);
        assert!(symmetric_eigenvalues(&[], 0).unwrap().is_empty());
    }

    #[test]
    fn eigenpairs_have_small_residuals() {
        let n = 9;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = ((i * 7 + j * 3) % 11) as f64 - 5.0;
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let (values, vectors) = symmetric_eigenpairs(&a, n).unwrap();
        let plain = symmetric_eigenvalues(&a, n).unwrap();
        for k in 0..n {
            assert!((values[k] - plain[k]).abs() < 1e-12);
            let x: Vec<f64> = (0..n).map(|i| vectors[i * n + k]).collect();
            let norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            assert!(dense_residual(&a, n, values[k], &x) < 1e-12);
        }
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        assert!((values.iter().sum::<f64>() - trace).abs() < 1e-11);
    }

    #[test]
    fn path_tridiagonal() {
        // path Laplacian on 5 vertices with Dirichlet ends: 2 − 2cos(kπ/6)
        let ev = tridiagonal_eigenvalues(&[2.0; 5], &[-1.0; 4]).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let expect = 2.0 - 2.0 * (core::f64::consts::PI * (k + 1) as f64 / 6.0).cos();
            assert!((v - expect).abs() < 1e-14);
        }
    }
}
