//! Symmetric eigensolvers (dense for small, Lanczos for large) and the
//! spectral inequalities checked on Dirichlet restrictions.

pub mod checks;
pub mod dense;
pub mod lanczos;

pub use checks::{
    sandwich_check, shell_inequality_check, transition_norm_checks, SandwichCheck, ShellCheck,
    TransitionNormReport, CHECK_TOLERANCE,
};
pub use lanczos::{lanczos_extremes, LanczosOptions, LanczosResult, RitzPair};

use alloc::vec::Vec;

use crate::operators::{LaplacianMatrix, Variant};
use crate::{Error, Result};

/// Largest dimension handled by the dense solver by default.
pub const DENSE_THRESHOLD: usize = 2048;

/// Which solver produced a summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    Dense,
    Lanczos,
}

impl SolverMethod {
    pub fn name(self) -> &'static str {
        match self {
            SolverMethod::Dense => "dense",
            SolverMethod::Lanczos => "lanczos",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Dimensions up to this use the dense solver.
    pub dense_threshold: usize,
    pub lanczos: LanczosOptions,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { dense_threshold: DENSE_THRESHOLD, lanczos: LanczosOptions::default() }
    }
}

/// Extremal eigenvalues of one restricted operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub variant: Variant,
    pub dimension: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `‖Mx − λx‖ / ‖x‖` of the reported eigenvectors (of the symmetric
    /// form for `Δ̃`).
    pub residual_min: f64,
    pub residual_max: f64,
    /// All eigenvalues, ascending, when the dense solver was used.
    pub full_spectrum: Option<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
    pub method: SolverMethod,
}

fn apply_residual(m: &LaplacianMatrix, lambda: f64, x: &[f64]) -> Result<f64> {
    let y = m.apply(x)?;
    let r: f64 = y.iter().zip(x).map(|(a, b)| (a - lambda * b) * (a - lambda * b)).sum();
    let len: f64 = x.iter().map(|v| v * v).sum();
    Ok(crate::math::sqrt(r / len))
}

/// All eigenvalues, ascending, by the dense solver. `Δ̃` is solved through
/// its symmetric similar form `Δ̂`.
pub fn full_spectrum(m: &LaplacianMatrix) -> Result<Vec<f64>> {
    full_spectrum_with(m, DENSE_THRESHOLD)
}

pub fn full_spectrum_with(m: &LaplacianMatrix, threshold: usize) -> Result<Vec<f64>> {
    let n = m.dimension();
    if n > threshold {
        return Err(Error::DenseTooLarge { dim: n, threshold });
    }
    dense::symmetric_eigenvalues(&m.symmetric_form().to_dense(), n)
}

/// Dense summary with residuals from explicit eigenvectors.
pub fn dense_summary(m: &LaplacianMatrix, threshold: usize) -> Result<SpectralSummary> {
    let n = m.dimension();
    if n > threshold {
        return Err(Error::DenseTooLarge { dim: n, threshold });
    }
    let sym = m.symmetric_form();
    let (values, vectors) = dense::symmetric_eigenpairs(&sym.to_dense(), n)?;
    let column = |k: usize| -> Vec<f64> { (0..n).map(|i| vectors[i * n + k]).collect() };
    let residual_min = apply_residual(&sym, values[0], &column(0))?;
    let residual_max = apply_residual(&sym, values[n - 1], &column(n - 1))?;
    Ok(SpectralSummary {
        variant: m.variant(),
        dimension: n,
        lambda_min: values[0],
        lambda_max: values[n - 1],
        residual_min,
        residual_max,
        full_spectrum: Some(values),
        iterations: 0,
        converged: true,
        method: SolverMethod::Dense,
    })
}

/// Both extremes by Lanczos with the matrix-free product.
pub fn extremal_eigenvalues(m: &LaplacianMatrix, options: &LanczosOptions) -> Result<SpectralSummary> {
    let sym = m.symmetric_form();
    let n = sym.dimension();
    let r = lanczos_extremes(n, |x, y| sym.apply_into(x, y), options)?;
    Ok(SpectralSummary {
        variant: m.variant(),
        dimension: n,
        lambda_min: r.min.value,
        lambda_max: r.max.value,
        residual_min: r.min.residual,
        residual_max: r.max.residual,
        full_spectrum: None,
        iterations: r.iterations,
        converged: true,
        method: SolverMethod::Lanczos,
    })
}

/// Dense below the threshold, Lanczos above.
pub fn summarize(m: &LaplacianMatrix, options: &SpectralOptions) -> Result<SpectralSummary> {
    if m.dimension() <= options.dense_threshold {
        dense_summary(m, options.dense_threshold)
    } else {
        extremal_eigenvalues(m, &options.lanczos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_graph;
    use crate::graph::GraphBuilder;
    use crate::operators::assemble;

    #[test]
    fn complete_graph_spectra() {
        let k5 = complete_graph(5).unwrap();
        let ev = full_spectrum(&assemble(&k5, Variant::Delta, &[]).unwrap()).unwrap();
        assert!(ev[0].abs() < 1e-12);
        assert!(ev[1..].iter().all(|v| (v - 5.0).abs() < 1e-12));
        let hat = full_spectrum(&assemble(&k5, Variant::DeltaHat, &[]).unwrap()).unwrap();
        assert!(hat[0].abs() < 1e-12);
        assert!(hat[1..].iter().all(|v| (v - 1.25).abs() < 1e-12));
    }

    #[test]
    fn path_restriction() {
        let mut b = GraphBuilder::new(3);
        b.add_edge(0, 1).add_edge(1, 2);
        let g = b.build().unwrap();
        let ev = full_spectrum(&assemble(&g, Variant::Delta, &[0]).unwrap()).unwrap();
        let s5 = 5f64.sqrt();
        assert!((ev[0] - (3.0 - s5) / 2.0).abs() < 1e-14 && (ev[1] - (3.0 + s5) / 2.0).abs() < 1e-14);
        let s = summarize(&assemble(&g, Variant::DeltaTilde, &[0]).unwrap(), &SpectralOptions::default()).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((s.lambda_min - (1.0 - r)).abs() < 1e-14);
        assert!(s.residual_min < 1e-14);
    }

    #[test]
    fn dense_threshold_is_enforced() {
        let k5 = complete_graph(5).unwrap();
        let m = assemble(&k5, Variant::Delta, &[]).unwrap();
        assert_eq!(full_spectrum_with(&m, 4), Err(Error::DenseTooLarge { dim: 5, threshold: 4 }));
    }
}
